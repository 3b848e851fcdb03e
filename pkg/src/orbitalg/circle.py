"""Chain-level circle actions and the homotopy-orbit model.

A circle action on a chain coalgebra C is encoded by a family of operators
kappa_n : C -> C of degree 2n+1 satisfying the quadratic relations

    d kappa_0 + kappa_0 d = 0
    d kappa_n + kappa_n d = sum_{k=0}^{n-1} kappa_k kappa_{n-k-1}   (n >= 1)

with every kappa_n a coderivation.  From such a family the orbit model
(Gamma v (x) C, D) is assembled, together with its coassociative
comultiplication, its cochain dual with the omega operators, cohomology
ring extraction over a field, and the induced degree -1 operator on the
cohomology of the carrier.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .barcobar import EMPTY_WORD, cobar_hopf_primitive, word
from .chain import ChainComplex, Report, UNDETERMINED, is_chain_map
from .dg import (DGAlgebra, DGCoalgebra, HopfAlgebra, check_coalgebra,
                 divided_powers, dual_algebra, tensor_differential)
from .graded import (Element, FreeGradedModule, GradedMap, dual_module,
                     dualize, split_factors, tensor, tensor_elements,
                     tensor_map_many, _flatten_t, _make_t)


# ---------------------------------------------------------------------------
# The T_n presentation
# ---------------------------------------------------------------------------

@dataclass
class TPresentation:
    """The free model of chains on the circle group.

    T_n is the length-one word on the desuspension of the degree-2(n+1)
    divided power, so deg T_n = 2n+1, and the differential satisfies
    dT_n = sum_{i=1}^{n} T_{i-1} T_{n-i}, with every T_n primitive.
    """
    hopf: HopfAlgebra
    N: int

    @property
    def algebra(self):
        return self.hopf.algebra

    @property
    def module(self):
        return self.hopf.module

    def t_gen(self, n):
        return word((("s-", ("v", n + 1)),))

    def t(self, n) -> Element:
        return self.module.gen(self.t_gen(n))


def t_presentation(N, ring, max_degree=None):
    """Build the T_n family inside the word algebra on divided powers.

    Verifies dT_0 = 0, the recursion dT_n = sum T_{i-1}T_{n-i}, and
    primitivity of every T_n under the primitively generated diagonal.
    """
    if N < 0:
        raise ValueError("need N >= 0")
    if max_degree is None:
        max_degree = 2 * N + 2
    Hv = divided_powers(ring, 1, N + 1)
    hopf = cobar_hopf_primitive(Hv.coalgebra, max_degree)
    tp = TPresentation(hopf, N)
    A = tp.algebra
    for n in range(N + 1):
        lhs = A.complex.d(tp.t(n))
        rhs = A.module.zero(2 * n)
        for i in range(1, n + 1):
            rhs = rhs + A.multiply(tp.t(i - 1), tp.t(n - i))
        if lhs != rhs:
            raise RuntimeError("T_%d differential recursion fails" % n)
        if 2 * n + 1 <= hopf.coalgebra.max_degree:
            sq = hopf.coalgebra.comult.target
            prim = tensor_elements(ring, sq, [tp.t(n), A.one()]) \
                + tensor_elements(ring, sq, [A.one(), tp.t(n)])
            if hopf.coalgebra.comult(tp.t(n)) != prim:
                raise RuntimeError("T_%d is not primitive" % n)
    return tp


# ---------------------------------------------------------------------------
# Circle actions
# ---------------------------------------------------------------------------

class CircleAction:
    """A chain coalgebra C with operators kappa_n : C -> C of degree 2n+1."""

    def __init__(self, carrier: DGCoalgebra, kappa, name=""):
        self.carrier = carrier
        self.kappa = list(kappa)
        self.name = name
        for n, k in enumerate(self.kappa):
            if k.degree != 2 * n + 1:
                raise ValueError("kappa_%d must have degree %d" % (n, 2 * n + 1))

    @property
    def ring(self):
        return self.carrier.ring

    @property
    def max_degree(self):
        return self.carrier.max_degree


def check_circle_action(a: CircleAction) -> Report:
    """Verify the kappa relations and that each kappa_n is a coderivation.

    Each identity is compared generator by generator, in the source degrees
    where no truncation loss is possible (m + 2n + 1 within range).
    """
    C = a.carrier
    rep = check_coalgebra(C)
    if not rep:
        return rep
    R = C.ring
    mod = C.module
    N = C.max_degree
    sq = C.comult.target
    bad = []
    for n, kn in enumerate(a.kappa):
        lhs = C.d.compose(kn).plus(kn.compose(C.d))
        for m in mod.degrees():
            if m + 2 * n + 1 > N:
                continue
            for g in mod.basis_in(m):
                x = mod.gen(g)
                want = mod.zero(m + 2 * n)
                for k in range(n):
                    want = want + a.kappa[k](a.kappa[n - 1 - k](x))
                if lhs(x) != want:
                    bad.append(("relation", n, g))
                # coderivation: Delta kappa_n = (kappa_n (x) 1 + 1 (x) kappa_n) Delta
                left = C.comult(kn(x))
                right = tensor_map_many([kn, GradedMap.identity(mod)], sq, sq)(
                    C.comult(x))
                right = right + tensor_map_many(
                    [GradedMap.identity(mod), kn], sq, sq)(C.comult(x))
                if left != right:
                    bad.append(("coderivation", n, g))
    return rep.merge(Report(not bad, bad))


def trivial_action(C: DGCoalgebra, operators=None) -> CircleAction:
    """All kappa_n = 0; valid for any carrier."""
    if operators is None:
        operators = max(0, (C.max_degree - 1) // 2) + 1
    mod = C.module
    return CircleAction(C, [GradedMap(mod, mod, 2 * n + 1)
                            for n in range(operators)], name="trivial")


def point_coalgebra(ring, max_degree) -> DGCoalgebra:
    """The coefficient ring as a one-point chain coalgebra."""
    mod = FreeGradedModule(ring, {0: ["pt"]})
    cx = ChainComplex(mod, GradedMap(mod, mod, -1), max_degree)
    sq = tensor(mod, mod, max_degree)
    com = GradedMap(mod, sq, 0)
    com.set_image("pt", tensor_elements(ring, sq, [mod.gen("pt"),
                                                   mod.gen("pt")]))
    return DGCoalgebra(cx, com, "pt", name="pt")


def regular_action(N, ring, max_degree=None) -> CircleAction:
    """The word algebra of the T_n acting on itself by left multiplication.

    The carrier is the primitively generated word coalgebra; kappa_n is
    w |-> T_n . w.  The relations reduce to the T_n recursion via the
    Leibniz rule, and coderivation-ness to primitivity.
    """
    tp = t_presentation(N, ring, max_degree)
    A = tp.algebra
    C = tp.hopf.coalgebra
    mod = A.module
    ops = []
    for n in range(N + 1):
        kn = GradedMap(mod, mod, 2 * n + 1)
        for m in mod.degrees():
            if m + 2 * n + 1 > A.max_degree:
                continue
            for g in mod.basis_in(m):
                kn.set_image(g, A.multiply(tp.t(n), mod.gen(g)))
        ops.append(kn)
    a = CircleAction(C, ops, name="regular")
    a.presentation = tp
    return a


# ---------------------------------------------------------------------------
# The homotopy-orbit chain model
# ---------------------------------------------------------------------------

@dataclass
class OrbitModel:
    """(Gamma v (x) C, D) with its coassociative comultiplication.

    The v(0)-column is the carrier on the nose; inclusion is the strict
    chain coalgebra map recorded in `inclusion`.
    """
    coalgebra: DGCoalgebra
    gamma: HopfAlgebra
    action: CircleAction
    inclusion: GradedMap

    @property
    def complex(self):
        return self.coalgebra.complex

    @property
    def module(self):
        return self.coalgebra.module


def orbit_model(a: CircleAction, max_degree=None, check=True) -> OrbitModel:
    """The twisted complex Gamma v (x) C for a circle action on C.

    D(v(n) (x) U) = v(n) (x) dU - sum_{k=0}^{n-1} v(k) (x) kappa_{n-k-1}(U)
    and the comultiplication distributes v(n) over the carrier diagonal
    without signs:
    psi(v(n) (x) U) = sum_{k} (v(k) (x) U_i) (x) (v(n-k) (x) U^i).
    """
    C = a.carrier
    R = a.ring
    if max_degree is None:
        max_degree = C.max_degree
    if check:
        rep = check_circle_action(a)
        if not rep:
            raise ValueError("invalid circle action: %s" % (rep.failures[:3],))
    top = max_degree // 2
    if len(a.kappa) < top:
        raise ValueError("need kappa_0..kappa_%d for degree %d"
                         % (top - 1, max_degree))
    Gv = divided_powers(R, 1, top, max_degree)
    mod = tensor(Gv.module, C.module, max_degree)
    D = GradedMap(mod, mod, -1)
    for m in mod.degrees():
        for g in mod.basis_in(m):
            vk, u = split_factors([Gv.module, C.module], _flatten_t(g))
            n = vk[1]
            U = C.module.gen(u)
            acc = tensor_elements(R, mod, [Gv.module.gen(vk), C.d(U)])
            for k in range(n):
                acc = acc - tensor_elements(
                    R, mod, [Gv.module.gen(("v", k)), a.kappa[n - k - 1](U)])
            D.set_image(g, acc)
    cx = ChainComplex(mod, D, max_degree, check=check)
    sq = tensor(mod, mod, max_degree)
    psi = GradedMap(mod, sq, 0)
    for m in mod.degrees():
        for g in mod.basis_in(m):
            vk, u = split_factors([Gv.module, C.module], _flatten_t(g))
            n = vk[1]
            terms = {}
            for t, c in C.comult(C.module.gen(u)).terms.items():
                ui, uj = split_factors([C.module, C.module], _flatten_t(t))
                for k in range(n + 1):
                    name = _make_t([("v", k)] + _flatten_t(ui)
                                   + [("v", n - k)] + _flatten_t(uj))
                    terms[name] = R.add(terms.get(name, R.zero()), c)
            psi.set_image(g, sq.element(m, terms))
    counit = {}
    for u in C.module.basis_in(0):
        name = _make_t([("v", 0)] + _flatten_t(u))
        counit[name] = C.counit.get(u, R.zero())
    coaug = _make_t([("v", 0)] + _flatten_t(C.coaug_gen))
    coalg = DGCoalgebra(cx, psi, coaug, counit=counit,
                        name="orbit(%s)" % (a.name or C.name))
    # the carrier may be stored beyond the requested truncation; the column
    # inclusion only exists for the degrees the model actually carries
    incl = GradedMap(C.module, mod, 0)
    for m in C.module.degrees():
        if m > max_degree:
            continue
        for u in C.module.basis_in(m):
            incl.set_image(u, mod.gen(_make_t([("v", 0)] + _flatten_t(u))))
    model = OrbitModel(coalg, Gv, a, incl)
    if check:
        rep = check_coalgebra(coalg)
        if not rep:
            raise RuntimeError("orbit comultiplication invalid: %s"
                               % (rep.failures[:3],))
        rep = Report.ok()
        for m in C.module.degrees():
            if m > max_degree:
                continue
            for u in C.module.basis_in(m):
                x = C.module.gen(u)
                if incl(C.d(x)) != cx.d(incl(x)):
                    rep = rep.merge(Report.fail([("chain", u)]))
                left = psi(incl(C.module.gen(u)))
                right = tensor_map_many([incl, incl], C.comult.target, sq)(
                    C.comult(C.module.gen(u)))
                if left != right:
                    rep = rep.merge(Report.fail([("column", u)]))
        if not rep:
            raise RuntimeError("carrier column mismatch: %s"
                               % (rep.failures[:3],))
    return model


# ---------------------------------------------------------------------------
# The cochain model
# ---------------------------------------------------------------------------

@dataclass
class CochainOrbitModel:
    """Dual of the orbit model: a cochain algebra with the omega operators."""
    algebra: DGAlgebra
    omega: list
    orbit: OrbitModel
    carrier_dual: DGAlgebra

    @property
    def complex(self):
        return self.algebra.complex


def cochain_orbit_model(a: CircleAction, max_degree=None,
                        check=True) -> CochainOrbitModel:
    """The degreewise dual of orbit_model, with omega_n = dual of kappa_n.

    The product obeys ((v#)^k (x) alpha)((v#)^l (x) beta)
    = (v#)^{k+l} (x) alpha.beta, verified on basis pairs in range.
    """
    om = orbit_model(a, max_degree, check=check)
    alg = dual_algebra(om.coalgebra)
    C = a.carrier
    dC = dual_module(C.module)
    omega = [dualize(kn, dual_source=dC, dual_target=dC) for kn in a.kappa]
    cdual = dual_algebra(C)
    model = CochainOrbitModel(alg, omega, om, cdual)
    if check:
        rep = _check_cochain_product(model)
        if not rep:
            raise RuntimeError("cochain product formula fails: %s"
                               % (rep.failures[:3],))
        # dual of the dual differential recovers D
        back = dualize(alg.complex.d,
                       dual_source=om.module, dual_target=om.module)
        for n in om.module.degrees():
            if back.matrix(n).entries != om.complex.d.matrix(n).entries:
                raise RuntimeError("double dual differential mismatch")
    return model


def _check_cochain_product(model: CochainOrbitModel) -> Report:
    alg, om = model.algebra, model.orbit
    R = alg.ring
    Gv = om.gamma.module
    Cm = om.action.carrier.module
    bad = []
    for n1 in alg.module.degrees():
        for g1 in alg.module.basis_in(n1):
            vk, u1 = split_factors([Gv, Cm], _flatten_t(g1[1]))
            for n2 in alg.module.degrees():
                if n1 + n2 > alg.max_degree:
                    continue
                for g2 in alg.module.basis_in(n2):
                    vl, u2 = split_factors([Gv, Cm], _flatten_t(g2[1]))
                    got = alg.multiply(alg.module.gen(g1), alg.module.gen(g2))
                    kl = vk[1] + vl[1]
                    want = alg.module.zero(n1 + n2)
                    prod = model.carrier_dual.multiply(
                        model.carrier_dual.module.gen(("#", u1)),
                        model.carrier_dual.module.gen(("#", u2)))
                    for t, c in prod.terms.items():
                        name = ("#", _make_t([("v", kl)] + _flatten_t(t[1])))
                        if name in alg.module:
                            want = want + alg.module.gen(name).scale(c)
                    if got != want:
                        bad.append((g1, g2))
    return Report(not bad, bad)


# ---------------------------------------------------------------------------
# Cohomology ring extraction and the degree -1 operator
# ---------------------------------------------------------------------------

@dataclass
class RingPresentation:
    """Graded basis of cohomology classes with a full multiplication table.

    reps[n] is the deterministic list of representing cocycles in degree n;
    products[(n1, i1, n2, i2)] is the coordinate dict {(n, j): coeff} of the
    product of class i1 in degree n1 with class i2 in degree n2.
    """
    ring: object
    top: int
    dims: dict
    reps: dict
    products: dict

    def dimensions(self):
        return [self.dims.get(n, 0) for n in range(self.top + 1)]

    def describe(self):
        lines = ["dims %s" % self.dimensions()]
        for key in sorted(self.products):
            n1, i1, n2, i2 = key
            lines.append("(%d,%d).(%d,%d) = %s"
                         % (n1, i1, n2, i2, sorted(self.products[key].items())))
        return "\n".join(lines)


def _cohomology_basis(cx, top):
    """Deterministic representatives per degree of a cochain complex."""
    res = cx.homology(range(top + 1), want_reps=True)
    dims, reps = {}, {}
    for n in range(top + 1):
        grp = res.groups.get(n)
        if grp is UNDETERMINED or grp is None:
            continue
        if grp.betti:
            dims[n] = grp.betti
            reps[n] = grp.representatives
    return dims, reps


def orbit_cohomology_ring(a: CircleAction, top, max_degree=None,
                          check=True) -> RingPresentation:
    """Cohomology of the cochain orbit model as a graded ring, over a field.

    Classes up to degree `top` with deterministic representatives; all
    products of representatives re-expressed in the chosen basis.
    """
    R = a.ring
    if not R.is_field:
        raise ValueError("ring presentations need field coefficients")
    if max_degree is None:
        max_degree = top + 2
    model = cochain_orbit_model(a, max_degree, check=check)
    cx = model.complex
    dims, reps = _cohomology_basis(cx, top)
    products = {}
    for n1 in sorted(dims):
        for n2 in sorted(dims):
            if n1 + n2 > top:
                continue
            for i1, x in enumerate(reps[n1]):
                for i2, y in enumerate(reps[n2]):
                    p = model.algebra.multiply(x, y)
                    vec = cx.class_vector(p, reps.get(n1 + n2, []))
                    if vec is None:
                        raise RuntimeError("product of cocycles not a cocycle")
                    products[(n1, i1, n2, i2)] = {
                        (n1 + n2, j): c for j, c in enumerate(vec)
                        if not R.is_zero(c)}
    return RingPresentation(R, top, dims, reps, products)


@dataclass
class BVOperator:
    """The operator induced by omega_0 on the cohomology of the carrier."""
    matrices: dict          # degree n -> dense matrix H^n -> H^{n-1}
    dims: dict
    reps: dict
    report: Report

    def apply(self, n, vec):
        M = self.matrices.get(n)
        if M is None:
            return [0] * self.dims.get(n - 1, 0)
        return [sum(M[i][j] * vec[j] for j in range(len(vec)))
                for i in range(len(M))]


def bv_operator(a: CircleAction, top, check=True) -> BVOperator:
    """omega_0 descended to cohomology of the carrier, over a field.

    Verified: the square vanishes, and the operator is a degree -1
    derivation for the cup product of the dual carrier algebra.
    """
    R = a.ring
    if not R.is_field:
        raise ValueError("the induced operator needs field coefficients")
    cdual = dual_algebra(a.carrier)
    cx = cdual.complex
    dC = cx.module
    w0 = dualize(a.kappa[0], dual_source=dC, dual_target=dC)
    dims, reps = _cohomology_basis(cx, top)
    matrices = {}
    classes = {}
    bad = []
    for n in sorted(dims):
        cols = []
        for x in reps[n]:
            img = w0(x)
            vec = cx.class_vector(img, reps.get(n - 1, []))
            if vec is None:
                bad.append(("not closed", n))
                vec = [R.zero()] * dims.get(n - 1, 0)
            cols.append(vec)
        matrices[n] = [[cols[j][i] for j in range(len(cols))]
                       for i in range(dims.get(n - 1, 0))]
    if check:
        # square zero on every class
        for n in sorted(dims):
            for j in range(dims[n]):
                vec = [R.one() if i == j else R.zero()
                       for i in range(dims[n])]
                once = _mat_apply(R, matrices.get(n), vec, dims.get(n - 1, 0))
                twice = _mat_apply(R, matrices.get(n - 1), once,
                                   dims.get(n - 2, 0))
                if any(not R.is_zero(c) for c in twice):
                    bad.append(("square", n, j))
        # derivation on representatives
        for n1 in sorted(dims):
            for n2 in sorted(dims):
                if n1 + n2 > top or n1 + n2 - 1 < 0:
                    continue
                for x in reps[n1]:
                    for y in reps[n2]:
                        lhs = w0(cdual.multiply(x, y))
                        sx = -1 if n1 % 2 else 1
                        rhs = cdual.multiply(w0(x), y) \
                            + cdual.multiply(x, w0(y)).scale(R.coerce(sx))
                        v1 = cx.class_vector(lhs, reps.get(n1 + n2 - 1, []))
                        v2 = cx.class_vector(rhs, reps.get(n1 + n2 - 1, []))
                        if v1 != v2:
                            bad.append(("derivation", n1, n2))
    return BVOperator(matrices, dims, reps, Report(not bad, bad))


def _mat_apply(R, M, vec, out_dim):
    if M is None or not vec:
        return [R.zero()] * out_dim
    out = []
    for i in range(len(M)):
        acc = R.zero()
        for j in range(len(vec)):
            acc = R.add(acc, R.mul(M[i][j], vec[j]))
        out.append(acc)
    return out
