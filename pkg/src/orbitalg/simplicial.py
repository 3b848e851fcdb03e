"""Finite simplicial sets, normalized chains, and the suspension orbit model.

Simplices are stored by name per dimension; faces of nondegenerate
simplices may be degenerate and are recorded as a formal degeneracy word
applied to a nondegenerate simplex.  The degeneracy calculus is carried
out symbolically in normal form, so the operator identities involving
degeneracies hold by construction and the loader only has to verify the
face-face identities against the supplied tables.
"""

from __future__ import annotations

from .barcobar import cobar, universal_cochain, word
from .chain import ChainComplex, Report, is_chain_map
from .dg import DGCoalgebra, check_coalgebra, tensor_differential
from .graded import (FreeGradedModule, GradedMap, split_factors, tensor,
                     tensor_elements, tensor_map_many, _flatten_t, _make_t)


# ---------------------------------------------------------------------------
# Formal simplices: (degeneracy word, nondegenerate base)
# ---------------------------------------------------------------------------

def _normalize_degens(ops):
    """Sort a degeneracy word to the canonical strictly decreasing form.

    Uses s_i s_j = s_{j+1} s_i for i <= j; the resulting outermost-first
    word is strictly decreasing, which is the unique normal form.
    """
    ops = list(ops)
    changed = True
    while changed:
        changed = False
        for k in range(len(ops) - 1):
            a, b = ops[k], ops[k + 1]
            if a <= b:
                ops[k], ops[k + 1] = b + 1, a
                changed = True
    return tuple(ops)


class SimplicialSet:
    """A finite simplicial set presented by its nondegenerate simplices.

    simplices: dict dimension -> list of names.
    faces: dict (name, i) -> (degeneracy word, name) giving d_i of each
    nondegenerate simplex of positive dimension as a formal simplex.
    """

    def __init__(self, simplices, faces, name=""):
        self.simplices = {n: list(xs) for n, xs in simplices.items() if xs}
        self.faces = {k: (_normalize_degens(w), b) for k, (w, b) in faces.items()}
        self.name = name
        self._dims = {}
        for n, xs in self.simplices.items():
            if n < 0:
                raise ValueError("negative dimension")
            for x in xs:
                if x in self._dims:
                    raise ValueError("duplicate simplex name %r" % (x,))
                self._dims[x] = n
        self._validate_tables()

    def dim_of(self, x):
        return self._dims[x]

    def top_dimension(self):
        return max(self.simplices) if self.simplices else 0

    def is_reduced(self):
        return len(self.simplices.get(0, [])) == 1

    def _validate_tables(self):
        for n, xs in self.simplices.items():
            if n == 0:
                continue
            for x in xs:
                for i in range(n + 1):
                    if (x, i) not in self.faces:
                        raise ValueError("missing face d_%d %r" % (i, x))
                    w, b = self.faces[(x, i)]
                    if b not in self._dims:
                        raise ValueError("face of %r names unknown simplex %r"
                                         % (x, b))
                    if self._dims[b] + len(w) != n - 1:
                        raise ValueError("face d_%d %r has wrong dimension"
                                         % (i, x))
                    for j in w:
                        if j < 0 or j > self._dims[b] + len(w) - 1:
                            raise ValueError("degeneracy index out of range"
                                             " in face of %r" % (x,))

    # -- the operator calculus on formal simplices ------------------------

    def face(self, formal, i):
        """d_i applied to (degeneracy word, base), in normal form."""
        w, b = formal
        if not w:
            n = self._dims[b]
            if n == 0:
                raise ValueError("vertices have no faces")
            return self.faces[(b, i)]
        j, rest = w[0], w[1:]
        if i == j or i == j + 1:
            return (rest, b)
        if i < j:
            inner = self.face((rest, b), i)
            return self.degeneracy(inner, j - 1)
        inner = self.face((rest, b), i - 1)
        return self.degeneracy(inner, j)

    def degeneracy(self, formal, j):
        w, b = formal
        return (_normalize_degens((j,) + w), b)

    def formal_dim(self, formal):
        w, b = formal
        return self._dims[b] + len(w)

    def verify_identities(self) -> Report:
        """The five operator identity families, on every formal generator.

        Degeneracy words are kept in normal form, so the pure-degeneracy
        identity and the face-past-degeneracy rules are definitionally
        satisfied by the calculus; they are exercised here on low words
        anyway, together with the face-face identities on the tables.
        """
        bad = []
        for n, xs in self.simplices.items():
            for x in xs:
                base = ((), x)
                # d_i d_j = d_{j-1} d_i for i < j
                if n >= 2:
                    for j in range(1, n + 1):
                        for i in range(j):
                            a = self.face(self.face(base, j), i)
                            bcd = self.face(self.face(base, i), j - 1)
                            if a != bcd:
                                bad.append(("dd", x, i, j))
                # s_i s_j = s_{j+1} s_i for i <= j
                for j in range(n + 1):
                    for i in range(j + 1):
                        a = self.degeneracy(self.degeneracy(base, j), i)
                        bcd = self.degeneracy(self.degeneracy(base, i), j + 1)
                        if a != bcd:
                            bad.append(("ss", x, i, j))
                # d_i s_j: three cases
                for j in range(n + 1):
                    sx = self.degeneracy(base, j)
                    for i in range(n + 2):
                        got = self.face(sx, i)
                        if i == j or i == j + 1:
                            want = base
                        elif i < j:
                            want = self.degeneracy(self.face(base, i), j - 1)
                        else:
                            want = self.degeneracy(self.face(base, i - 1), j)
                        if n == 0 and (i < j or i > j + 1):
                            continue    # vertex faces undefined
                        if got != want:
                            bad.append(("ds", x, i, j))
        return Report(not bad, bad)


# ---------------------------------------------------------------------------
# Normalized chains with the Alexander-Whitney diagonal
# ---------------------------------------------------------------------------

def normalized_chains(K: SimplicialSet, ring, max_degree=None,
                      check=True) -> DGCoalgebra:
    """Degenerate simplices are quotiented to zero; d is the alternating
    face sum; the diagonal is the front-face/back-face formula."""
    if check:
        rep = K.verify_identities()
        if not rep:
            raise ValueError("simplicial identities fail: %s"
                             % (rep.failures[:3],))
    if max_degree is None:
        max_degree = max(K.top_dimension(), 1)
    basis = {n: list(xs) for n, xs in K.simplices.items() if n <= max_degree}
    mod = FreeGradedModule(ring, basis)
    d = GradedMap(mod, mod, -1)
    for n, xs in basis.items():
        if n == 0:
            continue
        for x in xs:
            acc = mod.zero(n - 1)
            for i in range(n + 1):
                w, b = K.faces[(x, i)]
                if not w:
                    acc = acc + mod.gen(b).scale(ring.coerce(-1 if i % 2 else 1))
            d.set_image(x, acc)
    cx = ChainComplex(mod, d, max_degree, check=check)
    sq = tensor(mod, mod, max_degree)
    com = GradedMap(mod, sq, 0)
    for n, xs in basis.items():
        for x in xs:
            acc = sq.zero(n)
            for k in range(n + 1):
                front = ((), x)
                for t in range(n, k, -1):
                    front = K.face(front, t)
                back = ((), x)
                for _ in range(k):
                    back = K.face(back, 0)
                (fw, fb), (bw, bb) = front, back
                if fw or bw:
                    continue
                acc = acc + tensor_elements(ring, sq, [mod.gen(fb),
                                                       mod.gen(bb)])
            com.set_image(x, acc)
    counit = {v: ring.one() for v in basis.get(0, [])}
    coalg = DGCoalgebra(cx, com, basis[0][0], counit=counit,
                        name=K.name or "chains")
    if check:
        rep = check_coalgebra(coalg)
        if not rep:
            raise RuntimeError("chain coalgebra invalid: %s"
                               % (rep.failures[:3],))
    return coalg


# ---------------------------------------------------------------------------
# Chain-level suspension
# ---------------------------------------------------------------------------

def suspension_chains(C: DGCoalgebra, max_degree=None) -> DGCoalgebra:
    """Shift the reduced part of a connected coalgebra up one degree.

    Generators e(x) with |e(x)| = |x| + 1, differential d(e(x)) = -e(dx)
    (terms falling into the old degree 0 vanish in the reduced part), and
    the trivial reduced diagonal.  The source is kept on the result as
    `suspension_of`.
    """
    if not C.is_connected():
        raise ValueError("suspension needs a connected coalgebra")
    R = C.ring
    if max_degree is None:
        max_degree = C.max_degree + 1
    basis = {0: [("e",)]}
    for n in C.module.degrees():
        if n >= 1 and n + 1 <= max_degree:
            basis[n + 1] = [("e", x) for x in C.module.basis_in(n)]
    mod = FreeGradedModule(R, basis)
    d = GradedMap(mod, mod, -1)
    for n in C.module.degrees():
        if n < 1 or n + 1 > max_degree:
            continue
        for x in C.module.basis_in(n):
            img = C.d(C.module.gen(x))
            terms = {("e", g): R.neg(c) for g, c in img.terms.items()
                     if C.module.degree_of(g) >= 1}
            d.set_image(("e", x), mod.element(n, terms))
    cx = ChainComplex(mod, d, max_degree)
    sq = tensor(mod, mod, max_degree)
    com = GradedMap(mod, sq, 0)
    pt = mod.gen(("e",))
    for n in mod.degrees():
        for g in mod.basis_in(n):
            if n == 0:
                com.set_image(g, tensor_elements(R, sq, [pt, pt]))
            else:
                com.set_image(g, tensor_elements(R, sq, [mod.gen(g), pt])
                              + tensor_elements(R, sq, [pt, mod.gen(g)]))
    out = DGCoalgebra(cx, com, ("e",), name=(C.name + "^") if C.name else "")
    out.suspension_of = C
    return out


def is_suspension(C) -> bool:
    """True when the reduced diagonal vanishes in positive degrees."""
    sq = C.comult.target
    R = C.ring
    red = C.reduced_comult()
    return all(red(C.module.gen(g)).is_zero()
               for n in C.module.degrees() if n >= 1
               for g in C.module.basis_in(n))


# ---------------------------------------------------------------------------
# The homotopy-orbit model over a suspension
# ---------------------------------------------------------------------------

class SuspensionOrbitModel:
    """(C_*K (x) L, D) with the three-summand comultiplication."""

    def __init__(self, coalgebra, cochain, carrier, inclusion):
        self.coalgebra = coalgebra
        self.cochain = cochain
        self.carrier = carrier
        self.inclusion = inclusion

    @property
    def complex(self):
        return self.coalgebra.complex

    @property
    def module(self):
        return self.coalgebra.module


def simplicial_orbit_model(Kc: DGCoalgebra, tc, L: DGCoalgebra, lam,
                           max_degree=None, check=True):
    """The twisted complex C_*K (x)_t L with its coalgebra structure.

    D(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy - 1 (x) t(x).y, which is
    the mirrored twisted tensor differential when the reduced diagonal of
    C_*K is trivial.  The comultiplication needs K to be a suspension
    carrying its source coalgebra; its three summands are

      (x (x) y_j) (x) (1 (x) y^j)
      + (-1)^{|x||y_j|} (1 (x) y_j) (x) (x (x) y^j)
      + sign . (1 (x) t(e(x_i)).y_j) (x) (e(x^i) (x) y^j)

    with the Koszul sign (-1)^{|e(x^i)||y_j|} on the third summand and
    delta_{K'}(x') = x_i (x) x^i for x = e(x').  Coassociativity, the
    chain-map property and the restriction to 1 (x) L are all verified.
    """
    R = Kc.ring
    if max_degree is None:
        max_degree = min(Kc.max_degree, L.max_degree)
    if not is_suspension(Kc):
        raise ValueError("the comultiplication needs a suspension")
    src = getattr(Kc, "suspension_of", None)
    if src is None:
        raise ValueError("suspension source coalgebra not attached")
    A = tc.algebra
    mod = tensor(Kc.module, L.module, max_degree)
    D = GradedMap(mod, mod, -1)
    unit_k = Kc.module.gen(Kc.coaug_gen)
    for m in mod.degrees():
        for g in mod.basis_in(m):
            x, y = split_factors([Kc.module, L.module], _flatten_t(g))
            dx = Kc.d(Kc.module.gen(x))
            dy = L.d(L.module.gen(y))
            sm = -1 if Kc.module.degree_of(x) % 2 else 1
            acc = tensor_elements(R, mod, [dx, L.module.gen(y)])
            acc = acc + tensor_elements(
                R, mod, [Kc.module.gen(x), dy]).scale(R.coerce(sm))
            tv = tc(Kc.module.gen(x))
            if not tv.is_zero():
                acted = lam(tensor_elements(R, lam.source,
                                            [tv, L.module.gen(y)]))
                acc = acc - tensor_elements(R, mod, [unit_k, acted])
            D.set_image(g, acc)
    cx = ChainComplex(mod, D, max_degree, check=check)
    sq = tensor(mod, mod, max_degree)
    psi = GradedMap(mod, sq, 0)
    red = src.reduced_comult()
    for m in mod.degrees():
        for g in mod.basis_in(m):
            x, y = split_factors([Kc.module, L.module], _flatten_t(g))
            nx = Kc.module.degree_of(x)
            acc = sq.zero(m)
            for t, c in L.comult(L.module.gen(y)).terms.items():
                yj, yk = split_factors([L.module, L.module], _flatten_t(t))
                nyj = L.module.degree_of(yj)
                a1 = _pair(R, sq, Kc.module.gen(x), L.module.gen(yj),
                           unit_k, L.module.gen(yk))
                acc = acc + a1.scale(c)
                if x != Kc.coaug_gen:
                    # for the group-like coaugmentation the two Kunneth
                    # summands coincide; emit the second one only once
                    s2 = -1 if (nx * nyj) % 2 else 1
                    a2 = _pair(R, sq, unit_k, L.module.gen(yj),
                               Kc.module.gen(x), L.module.gen(yk)).scale(
                                   R.coerce(s2))
                    acc = acc + a2.scale(c)
                if nx >= 2 and x != Kc.coaug_gen:
                    xi_src = red(src.module.gen(x[1]))
                    for t2, c2 in xi_src.terms.items():
                        xi, xk = split_factors([src.module, src.module],
                                               _flatten_t(t2))
                        exi = ("e", xi)
                        exk = ("e", xk)
                        if exi not in Kc.module or exk not in Kc.module:
                            continue
                        tvi = tc(Kc.module.gen(exi))
                        if tvi.is_zero():
                            continue
                        acted = lam(tensor_elements(
                            R, lam.source, [tvi, L.module.gen(yj)]))
                        nek = Kc.module.degree_of(exk)
                        s3 = -1 if (nek * nyj) % 2 else 1
                        a3 = _pair(R, sq, unit_k, acted,
                                   Kc.module.gen(exk), L.module.gen(yk))
                        acc = acc + a3.scale(R.mul(R.coerce(s3),
                                                   R.mul(c, c2)))
            psi.set_image(g, acc)
    counit = {}
    for u in L.module.basis_in(0):
        counit[_make_t(_flatten_t(Kc.coaug_gen) + _flatten_t(u))] = \
            L.counit.get(u, R.zero())
    coaug = _make_t(_flatten_t(Kc.coaug_gen) + _flatten_t(L.coaug_gen))
    coalg = DGCoalgebra(cx, psi, coaug, counit=counit)
    incl = GradedMap(L.module, mod, 0)
    for n in L.module.degrees():
        if n > max_degree:
            continue
        for u in L.module.basis_in(n):
            incl.set_image(u, mod.gen(_make_t(_flatten_t(Kc.coaug_gen)
                                              + _flatten_t(u))))
    model = SuspensionOrbitModel(coalg, tc, L, incl)
    if check:
        rep = check_coalgebra(coalg)
        if not rep:
            raise RuntimeError("orbit comultiplication invalid: %s"
                               % (rep.failures[:3],))
        rep = Report.ok()
        for n in L.module.degrees():
            if n > max_degree:
                continue
            for u in L.module.basis_in(n):
                if incl(L.d(L.module.gen(u))) != cx.d(incl(L.module.gen(u))):
                    rep = rep.merge(Report.fail([("column chain map", u)]))
        for n in L.module.degrees():
            if n > max_degree:
                continue
            for u in L.module.basis_in(n):
                left = psi(incl(L.module.gen(u)))
                right = tensor_map_many([incl, incl], L.comult.target, sq)(
                    L.comult(L.module.gen(u)))
                if left != right:
                    rep = rep.merge(Report.fail([("column", u)]))
        if not rep:
            raise RuntimeError("carrier column mismatch: %s"
                               % (rep.failures[:3],))
    return model


def _pair(R, sq, a, b, c, d):
    """((a (x) b) (x) (c (x) d)) as an element of the fourfold tensor."""
    return tensor_elements(R, sq, [a, b, c, d])


def zero_cochain(C, A):
    """The zero twisting cochain C -> A (valid for any pair)."""
    from .twist import TwistingCochain
    return TwistingCochain(C, A, GradedMap(C.module, A.module, -1))
