"""Coherent families of higher comultiplication maps and semifree lifting.

A coherent family phi = (phi_1, phi_2, ...) between chain coalgebras packages
a chain map together with chosen homotopies for all failures of phi_1 to
respect comultiplication.  Equivalently it is an algebra map between the
cobar constructions; the translation is pure suspension-sign bookkeeping,
kept in _tensor_to_word_sign and used identically in both directions so the
round trip is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chain import ChainComplex, Report
from .dg import tensor_differential
from .graded import (FreeGradedModule, GradedMap, split_factors, tensor,
                     tensor_elements, tensor_many, tensor_map_many,
                     _flatten_t, _make_t)
from .sparse import (SparseMatrix, _field_echelon, columns_matrix,
                     kernel_basis, solve)


def _tensor_to_word_sign(degrees):
    """Sign of inserting desuspensions into a k-fold tensor.

    Applying s^{-1} (x) ... (x) s^{-1} to e_1 (x) ... (x) e_k moves each
    odd-degree s^{-1} past the prefix, giving (-1)^{sum |e_l| (k-l)}.  The
    same sign converts a word back to a tensor (it is its own inverse).
    """
    k = len(degrees)
    tot = sum(d * (k - 1 - i) for i, d in enumerate(degrees))
    return -1 if tot % 2 else 1


class DCSHFamily:
    """Maps phi_k : C -> C'^{(x)k} of degree k-1, for 1 <= k <= K."""

    def __init__(self, source, target, maps, higher_zero=False):
        self.source = source
        self.target = target
        self.maps = dict(maps)
        self.K = max(self.maps)
        # True when every component above K is known to vanish, so the
        # family carries complete information (e.g. a strict coalgebra map).
        self.higher_zero = higher_zero
        self._powers = {}
        for k, f in self.maps.items():
            if f.degree != k - 1:
                raise ValueError("phi_%d must have degree %d" % (k, k - 1))

    def power(self, k):
        if k not in self._powers:
            if k == 1:
                self._powers[k] = self.target.module
            else:
                self._powers[k] = tensor_many([self.target.module] * k,
                                              self.target.max_degree)
        return self._powers[k]

    def phi(self, k):
        f = self.maps.get(k)
        if f is None:
            return GradedMap(self.source.module, self.power(k), k - 1)
        return f

    @staticmethod
    def strict(f, C, C2):
        """A chain coalgebra map as the family (f, 0, 0, ...)."""
        return DCSHFamily(C, C2, {1: f}, higher_zero=True)

    @staticmethod
    def identity(C):
        return DCSHFamily.strict(GradedMap.identity(C.module), C, C)


def check_dcsh(fam, max_k=None):
    """Degreewise verification of the family coherence equations.

    For each k up to the family length:
      d phi_k + (-1)^k phi_k d
        = sum_{i=1}^{k-1} (phi_i (x) phi_{k-i}) Delta-bar_C
        - sum_{i=0}^{k-2} (-1)^i (1^i (x) Delta-bar_C' (x) 1^{k-i-2}) phi_{k-1}
    restricted to source degrees where no truncation loss can occur.
    """
    C, C2 = fam.source, fam.target
    if max_k is None:
        max_k = fam.K
    N = C2.max_degree
    redC = C.reduced_comult()
    redC2 = C2.reduced_comult()
    one = GradedMap.identity(C2.module)
    bad = []
    for k in range(1, max_k + 1):
        Tk = fam.power(k)
        dTk = tensor_differential([C2.module] * k, [C2.d] * k, N, Tk, Tk) \
            if k > 1 else C2.d
        pk = fam.phi(k)
        sgn = -1 if k % 2 else 1
        lhs = dTk.compose(pk).plus(pk.compose(C.d).scaled(sgn))
        rhs = GradedMap(C.module, Tk, k - 2)
        for i in range(1, k):
            term = tensor_map_many([fam.phi(i), fam.phi(k - i)],
                                   C.square(), Tk)
            rhs = rhs.plus(term.compose(redC))
        if k >= 2:
            Tk1 = fam.power(k - 1)
            for i in range(k - 1):
                maps = [one] * i + [redC2] + [one] * (k - i - 2)
                term = tensor_map_many(maps, Tk1, Tk).compose(fam.phi(k - 1))
                rhs = rhs.plus(term.scaled(-1 if i % 2 else 1).scaled(-1))
        for n in C.module.degrees():
            if n + k - 1 > N:
                continue
            for g in C.module.basis_in(n):
                if lhs.gen_image(g) != rhs.gen_image(g):
                    bad.append(("k=%d" % k, g))
    return Report(not bad, bad)


# ---------------------------------------------------------------------------
# Translation to cobar algebra maps, and composition
# ---------------------------------------------------------------------------

def to_cobar(fam, Omega_src, Omega_tgt):
    """The algebra map Cobar C -> Cobar C' encoding a family.

    The letter s^{-1}c maps to the sum over k of the words obtained from
    phi_k(c) by desuspending every factor, with the insertion sign.
    """
    from .barcobar import algebra_map_from_letters, word
    C, C2 = fam.source, fam.target
    R = C.ring

    def letter_image(l):
        c = l[1]
        n = C.module.degree_of(c)
        acc = Omega_tgt.module.zero(n - 1)
        for k in range(1, fam.K + 1):
            img = fam.phi(k).gen_image(c)
            for term, coeff in img.terms.items():
                es = split_factors([C2.module] * k, _flatten_t(term)) \
                    if k > 1 else [term]
                degs = [C2.module.degree_of(e) for e in es]
                if min(degs) < 2:
                    continue
                sg = _tensor_to_word_sign(degs)
                w = word(tuple(("s-", e) for e in es))
                if w in Omega_tgt.module:
                    acc = acc + Omega_tgt.module.gen(w).scale(R.mul(R.coerce(sg), coeff))
        return acc

    return algebra_map_from_letters(Omega_src, Omega_tgt, letter_image)


def compose_dcsh(g, f):
    """(g o f)_n by letterwise substitution through the word picture.

    Each term of f_k(c) becomes a word of desuspended factors (insertion
    sign); each letter is expanded through g (its own insertion signs); the
    resulting length-n word is converted back to a tensor with the same
    sign convention.  Multiplication of words is unsigned concatenation, so
    those are the only signs.  Components that would need maps outside
    either family's truncation are dropped; the bound is recorded on the
    result as undetermined_above (None when both families are complete,
    i.e. carry higher_zero).
    """
    if f.target.module.basis != g.source.module.basis:
        raise ValueError("family composition mismatch")
    C, Cm, C2 = f.source, f.target, g.target
    R = C.ring
    limits = [h.K for h in (f, g) if not h.higher_zero]
    cutoff = min(limits) if limits else None
    powers = {}

    def power(n):
        if n not in powers:
            powers[n] = tensor_many([C2.module] * n, C2.max_degree) \
                if n > 1 else C2.module
        return powers[n]

    acc_maps = {1: GradedMap(C.module, power(1), 0)}
    for nc in C.module.degrees():
        for c in C.module.basis_in(nc):
            buckets = {}
            for k in range(1, f.K + 1):
                img = f.phi(k).gen_image(c)
                for term, coeff in img.terms.items():
                    cs = split_factors([Cm.module] * k, _flatten_t(term)) \
                        if k > 1 else [term]
                    sg = _tensor_to_word_sign(
                        [Cm.module.degree_of(x) for x in cs])
                    combos = [((), R.mul(R.coerce(sg), coeff))]
                    for cj in cs:
                        nxt = []
                        for pref, cc in combos:
                            for i in range(1, g.K + 1):
                                im2 = g.phi(i).gen_image(cj)
                                for t2, c2 in im2.terms.items():
                                    es = split_factors(
                                        [C2.module] * i, _flatten_t(t2)) \
                                        if i > 1 else [t2]
                                    sg2 = _tensor_to_word_sign(
                                        [C2.module.degree_of(e) for e in es])
                                    cval = R.mul(cc, R.mul(R.coerce(sg2), c2))
                                    nxt.append((pref + tuple(es), cval))
                        combos = nxt
                        if not combos:
                            break
                    for es, cc in combos:
                        n = len(es)
                        if cutoff is not None and n > cutoff:
                            continue
                        sg3 = _tensor_to_word_sign(
                            [C2.module.degree_of(e) for e in es])
                        gname = _make_t(sum((_flatten_t(e) for e in es), []))
                        b = buckets.setdefault(n, {})
                        b[gname] = R.add(b.get(gname, R.zero()),
                                         R.mul(R.coerce(sg3), cc))
            for n, terms in buckets.items():
                if n not in acc_maps:
                    acc_maps[n] = GradedMap(C.module, power(n), n - 1)
                deg = nc + n - 1
                el = power(n).element(deg, terms, strict=False)
                acc_maps[n].set_image(c, el)
    out = DCSHFamily(C, C2, acc_maps, higher_zero=cutoff is None)
    out.undetermined_above = cutoff
    return out


# ---------------------------------------------------------------------------
# Multiplicative and module-map identities
# ---------------------------------------------------------------------------

def _compositions(n, k):
    """All (i_1, ..., i_k) with i_j >= 1 summing to n."""
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def _componentwise_op(R, out_mod, xfac, yfac, op, x, y):
    """Pairwise op on n-fold tensors with the interleaving Koszul sign.

    x lives in X^{(x)n}, y in Y^{(x)n}; op : X (x) Y -> X is a degree-0 map
    (multiplication or an action).  The sign is (-1) per pair (y_i, x_j)
    with i < j of odd degrees, from shuffling the factors together.
    """
    n = len(xfac)
    out = out_mod.zero(x.degree + y.degree)
    for tx, cx in x.terms.items():
        xs = split_factors(xfac, _flatten_t(tx)) if n > 1 else [tx]
        xd = [xfac[i].degree_of(xs[i]) for i in range(n)]
        for ty, cy in y.terms.items():
            ys = split_factors(yfac, _flatten_t(ty)) if n > 1 else [ty]
            yd = [yfac[i].degree_of(ys[i]) for i in range(n)]
            inv = sum(yd[i] * xd[j] for i in range(n) for j in range(i + 1, n))
            sign = -1 if inv % 2 else 1
            pieces = []
            for i in range(n):
                pieces.append(op(tensor_elements(
                    R, op.source, [xfac[i].gen(xs[i]), yfac[i].gen(ys[i])])))
            coeff = R.mul(R.mul(cx, cy), R.coerce(sign))
            out = out + tensor_elements(R, out_mod, pieces).scale(coeff)
    return out


def check_multiplicative(theta, H, K, max_total=None):
    """theta_n(ab) against the composition-sum product identity.

    theta is a DCSHFamily between the underlying coalgebras of the Hopf
    algebras H and K.  For each n the right side sums over k and
    compositions (i_1..i_k) of n:
      +- (Delta^{(i_1)} (x) ... (x) Delta^{(i_k)}) theta_k(a)
         . (theta_{i_1} (x) ... (x) theta_{i_k}) Delta^{(k)}(b)
    with the operator block on b moved past a (sign (-1)^{(n-k)|a|}), the
    usual application signs inside the tensor of theta maps, and the
    interleaving signs of the product in K^{(x)n}.
    """
    R = H.ring
    C2 = theta.target
    N = C2.max_degree
    if max_total is None:
        max_total = N
    bad = []
    Kmod = K.module
    for n in range(1, theta.K + 1):
        Tn = theta.power(n)
        ops = []
        for k in range(1, n + 1):
            dk = H.coalgebra.iterated_comult(k)
            Hk = tensor_many([H.module] * k, H.max_degree) if k > 1 \
                else H.module
            for ivec in _compositions(n, k):
                dmaps = [K.coalgebra.iterated_comult(i) for i in ivec]
                left_op = tensor_map_many(dmaps, theta.power(k), Tn) \
                    .compose(theta.phi(k))
                tmaps = [theta.phi(i) for i in ivec]
                right_op = tensor_map_many(tmaps, Hk, Tn).compose(dk)
                ops.append((k, left_op, right_op))
        for da in H.module.degrees():
            for db in H.module.degrees():
                if da + db + n - 1 > min(N, max_total):
                    continue
                for a in H.module.basis_in(da):
                    for b in H.module.basis_in(db):
                        ab = H.algebra.multiply(H.module.gen(a),
                                                H.module.gen(b))
                        lhs = theta.phi(n)(ab)
                        rhs = Tn.zero(da + db + n - 1)
                        for k, left_op, right_op in ops:
                            left = left_op.gen_image(a)
                            if left.is_zero():
                                continue
                            right = right_op.gen_image(b)
                            if right.is_zero():
                                continue
                            gsign = -1 if ((n - k) % 2 and da % 2) else 1
                            rhs = rhs + _componentwise_op(
                                R, Tn, [Kmod] * n, [Kmod] * n,
                                K.mult, left, right).scale(gsign)
                        if lhs != rhs:
                            bad.append(("n=%d" % n, a, b))
    return Report(not bad, bad)


def check_module_map(fam, theta, M, NN, max_total=None):
    """phi_n(x . a) against the composition-sum action identity.

    M, NN are right module coalgebras over the Hopf algebras underlying
    theta; identical shape to the multiplicative identity with the product
    in K^{(x)n} replaced by the componentwise action of K^{(x)n} on
    N^{(x)n}.
    """
    R = M.ring
    H = M.hopf
    Kh = NN.hopf
    Nmod = NN.module
    Kmod = Kh.module
    N = fam.target.max_degree
    if max_total is None:
        max_total = N
    bad = []
    for n in range(1, fam.K + 1):
        Tn = fam.power(n)
        Kn = tensor_many([Kmod] * n, N) if n > 1 else Kmod
        ops = []
        for k in range(1, n + 1):
            dk = H.coalgebra.iterated_comult(k)
            Hk = tensor_many([H.module] * k, H.max_degree) if k > 1 \
                else H.module
            for ivec in _compositions(n, k):
                dmaps = [NN.coalgebra.iterated_comult(i) for i in ivec]
                left_op = tensor_map_many(dmaps, fam.power(k), Tn) \
                    .compose(fam.phi(k))
                tmaps = [theta.phi(i) for i in ivec]
                right_op = tensor_map_many(tmaps, Hk, Kn).compose(dk)
                ops.append((k, left_op, right_op))
        for dx in M.module.degrees():
            for da in H.module.degrees():
                if dx + da + n - 1 > min(N, max_total):
                    continue
                for x in M.module.basis_in(dx):
                    for a in H.module.basis_in(da):
                        xa = M.act(M.module.gen(x), H.module.gen(a))
                        lhs = fam.phi(n)(xa)
                        rhs = Tn.zero(dx + da + n - 1)
                        for k, left_op, right_op in ops:
                            left = left_op.gen_image(x)
                            if left.is_zero():
                                continue
                            right = right_op.gen_image(a)
                            if right.is_zero():
                                continue
                            gsign = -1 if ((n - k) % 2 and dx % 2) else 1
                            rhs = rhs + _componentwise_op(
                                R, Tn, [Nmod] * n, [Kmod] * n,
                                NN.action, left, right).scale(gsign)
                        if lhs != rhs:
                            bad.append(("n=%d" % n, x, a))
    return Report(not bad, bad)


# ---------------------------------------------------------------------------
# Solving for a coherence homotopy
# ---------------------------------------------------------------------------

def solve_phi2(C, C2, phi1, max_degree=None):
    """Solve d phi_2 + phi_2 d = (phi_1 (x) phi_1) Delta-bar - Delta-bar' phi_1.

    The equation couples degrees through phi_2(d g), so it is solved as one
    global linear system over all generators at once (greedy degreewise
    choices can create obstructions higher up even when a solution exists).
    Returns the GradedMap or None when the system is unsolvable.
    """
    if max_degree is None:
        max_degree = C2.max_degree
    R = C.ring
    sq = tensor(C2.module, C2.module, max_degree)
    dT = tensor_differential([C2.module, C2.module], [C2.d, C2.d],
                             max_degree, sq, sq)
    redC = C.reduced_comult()
    redC2 = C2.reduced_comult()
    rhs = tensor_map_many([phi1, phi1], C.square(), sq).compose(redC) \
        .plus(redC2.compose(phi1).scaled(-1))

    gens = [g for n in C.module.degrees() for g in C.module.basis_in(n)
            if n + 1 <= max_degree]
    # unknown block for g: the vector of phi_2(g) in sq at degree |g|+1
    col_off = {}
    total_cols = 0
    for g in gens:
        col_off[g] = total_cols
        total_cols += sq.dim(C.module.degree_of(g) + 1)
    row_off = {}
    total_rows = 0
    for g in gens:
        row_off[g] = total_rows
        total_rows += sq.dim(C.module.degree_of(g))
    M = SparseMatrix(R, total_rows, total_cols)
    b = [R.zero()] * total_rows
    for g in gens:
        n = C.module.degree_of(g)
        for i, v in enumerate(rhs.gen_image(g).to_vector()):
            b[row_off[g] + i] = v
        # d_T . phi_2(g)
        dm = dT.matrix(n + 1)
        for (i, j), v in dm.entries.items():
            M.add_to(row_off[g] + i, col_off[g] + j, v)
        # phi_2(d g): contributions of the blocks of lower generators
        for h, c in C.d(C.module.gen(g)).terms.items():
            if h not in col_off:
                continue
            dimh = sq.dim(C.module.degree_of(h) + 1)
            for j in range(dimh):
                M.add_to(row_off[g] + j, col_off[h] + j, c)
    x = solve(M, b)
    if x is None:
        return None
    phi2 = GradedMap(C.module, sq, 1)
    for g in gens:
        n = C.module.degree_of(g)
        dim = sq.dim(n + 1)
        vec = x[col_off[g]:col_off[g] + dim]
        phi2.set_image(g, sq.from_vector(n + 1, vec))
    return phi2


# ---------------------------------------------------------------------------
# Tensoring module coalgebras over a Hopf algebra
# ---------------------------------------------------------------------------

def tensor_quotient(M, rhoM, H, M2, lamM2, max_degree):
    """The coequalizer M (x)_H M' of rho (x) 1 and 1 (x) lambda.

    M, M2, H are ChainComplexes/DGAlgebra; rhoM : M (x) H -> M right action,
    lamM2 : H (x) M' -> M' left action.  Field coefficients only: the
    quotient basis is the set of non-pivot coordinates of the echelonized
    relation space, per degree.  Returns (quotient complex, pi, section).
    """
    R = M.ring
    if not R.is_field:
        raise ValueError("tensor quotients need field coefficients")
    T2 = tensor(M.module, M2.module, max_degree)
    T3 = tensor_many([M.module, H.module, M2.module], max_degree)
    idM = GradedMap.identity(M.module)
    idM2 = GradedMap.identity(M2.module)
    rel = tensor_map_many([rhoM, idM2], T3, T2).plus(
        tensor_map_many([idM, lamM2], T3, T2).scaled(-1))
    basis = {}
    pi_cols = {}     # degree -> dense matrix: T2 coords -> quotient coords
    keep = {}        # degree -> list of kept column indices
    for n in T2.degrees():
        rows = []
        for g in T3.basis_in(n):
            img = rel.gen_image(g)
            if not img.is_zero():
                rows.append(img.to_vector())
        dim = T2.dim(n)
        if rows:
            ech, pivots, _ = _field_echelon(
                SparseMatrix.from_dense(R, rows))
        else:
            ech, pivots = [], []
        free = [j for j in range(dim) if j not in pivots]
        keep[n] = free
        basis[n] = [("q", n, i) for i in range(len(free))]
        # pi on basis vectors: free column j -> q_j; pivot column p reduces
        # to minus the free part of its echelon row
        cols = []
        fidx = {j: i for i, j in enumerate(free)}
        for j in range(dim):
            v = [R.zero()] * len(free)
            if j in fidx:
                v[fidx[j]] = R.one()
            else:
                r = pivots.index(j)
                for jj in free:
                    v[fidx[jj]] = R.neg(ech[r][jj])
            cols.append(v)
        pi_cols[n] = cols
    Q = FreeGradedModule(R, basis)
    pi = GradedMap(T2, Q, 0)
    for n in T2.degrees():
        for j, g in enumerate(T2.basis_in(n)):
            pi.set_image(g, Q.element(n, dict(zip(Q.basis_in(n),
                                                  pi_cols[n][j]))))
    section = GradedMap(Q, T2, 0)
    for n in Q.degrees():
        gens2 = T2.basis_in(n)
        for i, q in enumerate(Q.basis_in(n)):
            section.set_image(q, T2.gen(gens2[keep[n][i]]))
    dT2 = tensor_differential([M.module, M2.module], [M.d, M2.d],
                              max_degree, T2, T2)
    dQ = pi.compose(dT2).compose(section)
    cx = ChainComplex(Q, dQ, max_degree)
    # well-definedness: pi must be a chain map to the quotient differential
    for n in T2.degrees():
        for g in T2.basis_in(n):
            if pi(dT2(T2.gen(g))) != dQ(pi(T2.gen(g))):
                raise ValueError("quotient differential ill-defined at %r" % (g,))
    cx.pi = pi
    cx.section = section
    cx.tensor_complex = ChainComplex(T2, dT2, max_degree, check=False)
    return cx


def tensor_over(M, rhoM, H, M2, lamM2, NN, rhoN, K, N2, lamN2,
                phi1, phi12, max_degree):
    """The induced map M (x)_H M' -> N (x)_K N' of level-one components.

    phi1 : M -> N and phi12 : M' -> N' must be equivariant over some
    theta_1 (not needed here beyond equivariance, which is what makes the
    induced map well-defined; ill-definedness is detected and reported).
    Returns (map, source quotient, target quotient, report).
    """
    QM = tensor_quotient(M, rhoM, H, M2, lamM2, max_degree)
    QN = tensor_quotient(NN, rhoN, K, N2, lamN2, max_degree)
    T2M = QM.tensor_complex.module
    T2N = QN.tensor_complex.module
    ff = tensor_map_many([phi1, phi12], T2M, T2N)
    induced = QN.pi.compose(ff).compose(QM.section)
    bad = []
    for n in T2M.degrees():
        for g in T2M.basis_in(n):
            x = T2M.gen(g)
            if QN.pi(ff(x)) != induced(QM.pi(x)):
                bad.append(g)
    rep = Report(not bad, bad)
    for n in QM.module.degrees():
        for q in QM.module.basis_in(n):
            x = QM.module.gen(q)
            if induced(QM.d(x)) != QN.d(induced(x)):
                rep = rep.merge(Report.fail([("chain", q)]))
    return induced, QM, QN, rep


# ---------------------------------------------------------------------------
# Semifree lifting
# ---------------------------------------------------------------------------

@dataclass
class SemifreeExtension:
    """M' = M + (free H-module on new generators), with bookkeeping.

    decompose maps every basis generator of the ambient module to either
    ("base", m) for a generator coming from M (with j(m) = that generator)
    or ("prod", v, h) for the product of a new generator v with a Hopf
    basis element h; ("prod", v, unit) is v itself.  new_generators lists
    the v in filtration order: d(v) only involves generators decomposable
    through strictly earlier data.
    """
    complex: object
    base: object
    j: object
    hopf: object
    action: object
    new_generators: list
    decompose: dict


def lift_semifree(ext, p, Ncx, phi, phi2, theta1, rhoN):
    """Lift phi2 : M' -> N' through a surjective quasi-isomorphism p : N -> N'.

    Produces the equivariant chain map omega : M' -> N with p omega = phi2
    and omega j = phi.  New generators are processed in filtration order:
    pick the deterministic preimage x of phi2(v) under p, then correct by a
    kernel element y with Dy = Dx - omega(Dv); solvability is exactly the
    degreewise acyclicity of ker p.  Products v.h go to omega(v).theta1(h).
    Returns (omega, report); report carries any postcondition failure.
    """
    Mp = ext.complex
    R = Mp.ring
    for nb in ext.base.module.degrees():
        for g in ext.base.module.basis_in(nb):
            x = ext.base.module.gen(g)
            if p(phi(x)) != phi2(ext.j(x)):
                raise ValueError("p phi != phi' j at %r" % (g,))
    omega = GradedMap(Mp.module, Ncx.module, 0)
    rep = Report.ok()

    for n in Mp.module.degrees():
        for g in Mp.module.basis_in(n):
            kind = ext.decompose[g]
            if kind[0] == "base":
                omega.set_image(g, phi(ext.base.module.gen(kind[1])))

    def act_target(x, hgen):
        th = theta1(ext.hopf.module.gen(hgen))
        return rhoN(tensor_elements(R, rhoN.source, [x, th]))

    for v in ext.new_generators:
        n = Mp.module.degree_of(v)
        Pm = p.matrix(n)
        target_vec = phi2(Mp.module.gen(v)).to_vector()
        xv = solve(Pm, target_vec)
        if xv is None:
            return omega, Report.fail([("p not surjective", v, n)])
        x = Ncx.module.from_vector(n, xv)
        r = Ncx.d(x) - omega(Mp.d(Mp.module.gen(v)))
        if not r.is_zero():
            ker = kernel_basis(p.matrix(n))
            if not ker:
                return omega, Report.fail([("kernel trivial, defect nonzero",
                                            v, n)])
            cols = []
            for kv in ker:
                cols.append(Ncx.d(Ncx.module.from_vector(n, kv)).to_vector())
            Dk = columns_matrix(R, cols, Ncx.module.dim(n - 1))
            sol = solve(Dk, r.to_vector())
            if sol is None:
                return omega, Report.fail([("kernel not acyclic", v, n)])
            y = Ncx.module.zero(n)
            for c, kv in zip(sol, ker):
                y = y + Ncx.module.from_vector(n, kv).scale(c)
            x = x - y
        omega.set_image(v, x)
        # propagate to the free H-module span of v
        for g, kind in ext.decompose.items():
            if kind[0] == "prod" and kind[1] == v:
                omega.set_image(g, act_target(x, kind[2]))

    # postconditions
    bad = []
    for nb in ext.base.module.degrees():
        for g in ext.base.module.basis_in(nb):
            x = ext.base.module.gen(g)
            if omega(ext.j(x)) != phi(x):
                bad.append(("omega j != phi", g))
    for n in Mp.module.degrees():
        for g in Mp.module.basis_in(n):
            x = Mp.module.gen(g)
            if p(omega(x)) != phi2(x):
                bad.append(("p omega != phi'", g))
            if omega(Mp.d(x)) != Ncx.d(omega(x)):
                bad.append(("omega not a chain map", g))
    # equivariance on generator (x) generator pairs within the truncation
    for n in Mp.module.degrees():
        for g in Mp.module.basis_in(n):
            for nh in ext.hopf.module.degrees():
                if n + nh > Mp.max_degree:
                    continue
                for h in ext.hopf.module.basis_in(nh):
                    xa = ext.action(tensor_elements(
                        R, ext.action.source,
                        [Mp.module.gen(g), ext.hopf.module.gen(h)]))
                    if omega(xa) != act_target(omega(Mp.module.gen(g)), h):
                        bad.append(("omega not equivariant", g, h))
    rep = rep.merge(Report(not bad, bad))
    return omega, rep
