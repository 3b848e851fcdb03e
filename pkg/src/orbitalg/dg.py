"""Differential graded algebras, coalgebras, Hopf algebras, module coalgebras.

Structure maps are GradedMaps on truncated tensor modules; every axiom
checker verifies the corresponding map identity degreewise up to the
truncation and reports the first offending generators as witnesses.
"""

from __future__ import annotations

from math import comb

from .chain import ChainComplex, Report
from .graded import (FreeGradedModule, GradedMap, dual_module, dualize,
                     permute_factors, split_factors, tensor, tensor_elements,
                     tensor_many, tensor_map_many, _flatten_t, _make_t)


def _tensor_power(C, k, max_degree):
    return tensor_many([C.module] * k, max_degree) if k > 1 else C.module


class DGAlgebra:
    """Chain algebra: complex + associative multiplication + unit."""

    def __init__(self, complex_, mult, unit_gen, name=""):
        self.complex = complex_
        self.mult = mult
        self.unit_gen = unit_gen
        self.name = name
        if unit_gen not in complex_.module or complex_.module.degree_of(unit_gen) != 0:
            raise ValueError("unit must be a degree-0 generator")

    @property
    def module(self):
        return self.complex.module

    @property
    def ring(self):
        return self.complex.ring

    @property
    def max_degree(self):
        return self.complex.max_degree

    @property
    def d(self):
        return self.complex.d

    def square(self, max_degree=None):
        if max_degree is None or max_degree == self.max_degree:
            return self.mult.source
        return tensor(self.module, self.module, max_degree)

    def multiply(self, x, y):
        sq = self.square()
        return self.mult(tensor_elements(self.ring, sq, [x, y]))

    def one(self):
        return self.module.gen(self.unit_gen)

    def is_connected(self):
        m = self.module
        return (not [n for n in m.degrees() if n < 0]) and m.dim(0) == 1

    def augmentation_coeff(self, el):
        """Coefficient on the unit; the augmentation of a connected algebra."""
        if el.degree != 0:
            return self.ring.zero()
        return el.coeff(self.unit_gen)


class DGCoalgebra:
    """Chain coalgebra: complex + coassociative comultiplication + coaugmentation."""

    def __init__(self, complex_, comult, coaug_gen, name="", counit=None):
        self.complex = complex_
        self.comult = comult
        self.coaug_gen = coaug_gen
        self.name = name
        if coaug_gen not in complex_.module or complex_.module.degree_of(coaug_gen) != 0:
            raise ValueError("coaugmentation must be a degree-0 generator")
        # counit as coefficients on degree-0 generators; the default is the
        # dual of the coaugmentation, which is right for connected coalgebras
        if counit is None:
            counit = {coaug_gen: complex_.module.ring.one()}
        self.counit = counit

    @property
    def module(self):
        return self.complex.module

    @property
    def ring(self):
        return self.complex.ring

    @property
    def max_degree(self):
        return self.complex.max_degree

    @property
    def d(self):
        return self.complex.d

    def square(self, max_degree=None):
        if max_degree is None or max_degree == self.max_degree:
            return self.comult.target
        return tensor(self.module, self.module, max_degree)

    def is_connected(self):
        m = self.module
        return (not [n for n in m.degrees() if n < 0]) and m.dim(0) == 1

    def is_one_connected(self):
        return self.is_connected() and self.module.dim(1) == 0

    def counit_coeff(self, el):
        if el.degree != 0:
            return self.ring.zero()
        R = self.ring
        acc = R.zero()
        for g, c in el.terms.items():
            acc = R.add(acc, R.mul(self.counit.get(g, R.zero()), c))
        return acc

    def reduced_comult(self):
        """Delta-bar: Delta minus the two primitive terms; zero on the unit."""
        sq = self.square()
        unit = self.module.gen(self.coaug_gen)
        out = GradedMap(self.module, sq, 0)
        for n in self.module.degrees():
            for g in self.module.basis_in(n):
                x = self.module.gen(g)
                full = self.comult(x)
                if n == 0:
                    out.set_image(g, sq.zero(0))
                    continue
                red = full - tensor_elements(self.ring, sq, [x, unit]) \
                           - tensor_elements(self.ring, sq, [unit, x])
                out.set_image(g, red)
        return out

    def iterated_comult(self, k, max_degree=None):
        """Delta^(k): C -> C^{(x)k}; Delta^(1) = id."""
        if k < 1:
            raise ValueError("k >= 1")
        if k == 1:
            return GradedMap.identity(self.module)
        if max_degree is None:
            max_degree = self.max_degree
        cache = getattr(self, "_itc", None)
        if cache is None:
            cache = self._itc = {}
        if (k, max_degree) in cache:
            return cache[(k, max_degree)]
        cur = self.comult
        for j in range(2, k):
            src = self.module
            tgt = _tensor_power(self, j + 1, max_degree)
            step = tensor_map_many([self.comult] + [GradedMap.identity(self.module)] * (j - 1),
                                   _tensor_power(self, j, max_degree), tgt)
            cur = step.compose(cur)
        cache[(k, max_degree)] = cur
        return cur

    def iterated_reduced_comult(self, k, max_degree=None):
        if k < 1:
            raise ValueError("k >= 1")
        if k == 1:
            return GradedMap.identity(self.module)
        if max_degree is None:
            max_degree = self.max_degree
        red = self.reduced_comult()
        cur = red
        for j in range(2, k):
            tgt = _tensor_power(self, j + 1, max_degree)
            step = tensor_map_many([red] + [GradedMap.identity(self.module)] * (j - 1),
                                   _tensor_power(self, j, max_degree), tgt)
            cur = step.compose(cur)
        return cur


class HopfAlgebra:
    """Simultaneous algebra and coalgebra on one complex; Delta an algebra map."""

    def __init__(self, algebra, coalgebra, name=""):
        if algebra.complex is not coalgebra.complex:
            raise ValueError("Hopf algebra needs a single underlying complex")
        self.algebra = algebra
        self.coalgebra = coalgebra
        self.name = name

    @property
    def complex(self):
        return self.algebra.complex

    @property
    def module(self):
        return self.algebra.module

    @property
    def ring(self):
        return self.algebra.ring

    @property
    def max_degree(self):
        return self.algebra.max_degree

    @property
    def mult(self):
        return self.algebra.mult

    @property
    def comult(self):
        return self.coalgebra.comult

    @property
    def unit_gen(self):
        return self.algebra.unit_gen


class ModuleCoalgebra:
    """Coalgebra M with a right Hopf-algebra action whose map is a coalgebra map."""

    def __init__(self, coalgebra, hopf, action, name=""):
        self.coalgebra = coalgebra
        self.hopf = hopf
        self.action = action   # M (x) H -> M
        self.name = name

    @property
    def module(self):
        return self.coalgebra.module

    @property
    def ring(self):
        return self.coalgebra.ring

    @property
    def max_degree(self):
        return self.coalgebra.max_degree

    def act(self, x, h):
        src = tensor(self.module, self.hopf.module, self.max_degree)
        return self.action(tensor_elements(self.ring, src, [x, h]))


# ---------------------------------------------------------------------------
# Axiom checkers
# ---------------------------------------------------------------------------

def tensor_differential(modules, ds, max_degree, source=None, target=None):
    """Differential of a tensor product: sum of 1 (x) .. d .. (x) 1."""
    if source is None:
        source = tensor_many(modules, max_degree)
    if target is None:
        target = source
    total = GradedMap(source, target, ds[0].degree)
    for i in range(len(modules)):
        maps = [GradedMap.identity(m) for m in modules]
        maps[i] = ds[i]
        total = total.plus(tensor_map_many(maps, source, target))
    return total


def _witnesses(f, g, limit=4):
    bad = []
    for gen in sorted(set(f.images) | set(g.images), key=repr):
        if f.gen_image(gen) != g.gen_image(gen):
            bad.append(gen)
            if len(bad) >= limit:
                break
    return bad


def _check_map_identity(label, lhs, rhs):
    if lhs.equals(rhs):
        return Report.ok()
    return Report.fail(["%s fails at %s" % (label, w) for w in _witnesses(lhs, rhs)])


def check_algebra(A):
    """Associativity, unitality and the Leibniz rule, degreewise."""
    N = A.max_degree
    mod = A.module
    sq = A.square()
    cube = _tensor_power(A, 3, N)
    one = GradedMap.identity(mod)
    m1 = tensor_map_many([A.mult, one], cube, sq)
    m2 = tensor_map_many([one, A.mult], cube, sq)
    rep = _check_map_identity("associativity", A.mult.compose(m1), A.mult.compose(m2))
    # unit law
    bad = []
    unit = A.one()
    for n in mod.degrees():
        for g in mod.basis_in(n):
            x = mod.gen(g)
            if A.multiply(unit, x) != x or A.multiply(x, unit) != x:
                bad.append("unit law fails at %s" % (g,))
    rep = rep.merge(Report(not bad, bad))
    dT = tensor_differential([mod, mod], [A.d, A.d], N, sq, sq)
    rep = rep.merge(_check_map_identity("Leibniz", A.mult.compose(dT),
                                        A.d.compose(A.mult)))
    return rep


def check_coalgebra(C):
    """Coassociativity, counit law, coderivation property."""
    N = C.max_degree
    mod = C.module
    sq = C.square()
    cube = _tensor_power(C, 3, N)
    one = GradedMap.identity(mod)
    c1 = tensor_map_many([C.comult, one], sq, cube).compose(C.comult)
    c2 = tensor_map_many([one, C.comult], sq, cube).compose(C.comult)
    rep = _check_map_identity("coassociativity", c1, c2)
    # counit law: contract either side of Delta with the counit
    bad = []
    R = C.ring
    eps = C.counit
    for n in mod.degrees():
        for g in mod.basis_in(n):
            full = C.comult(mod.gen(g))
            left = mod.zero(n)
            right = mod.zero(n)
            for t, c in full.terms.items():
                a, b = split_factors([mod, mod], _flatten_t(t))
                if mod.degree_of(a) == 0 and a in eps:
                    right = right + mod.gen(b).scale(R.mul(eps[a], c))
                if mod.degree_of(b) == 0 and b in eps:
                    left = left + mod.gen(a).scale(R.mul(eps[b], c))
            if left != mod.gen(g) or right != mod.gen(g):
                bad.append("counit law fails at %s" % (g,))
    rep = rep.merge(Report(not bad, bad))
    dT = tensor_differential([mod, mod], [C.d, C.d], N, sq, sq)
    rep = rep.merge(_check_map_identity("coderivation", dT.compose(C.comult),
                                        C.comult.compose(C.d)))
    return rep


def middle_four_interchange(mod1, mod2, max_degree, source=None, target=None):
    """1 (x) tau (x) 1 : swap the two middle factors of a four-fold tensor."""
    return permute_factors([mod1, mod2, mod1, mod2], [0, 2, 1, 3],
                           max_degree, source, target)


def check_hopf(H):
    """Algebra + coalgebra axioms, and Delta an algebra map."""
    rep = check_algebra(H.algebra).merge(check_coalgebra(H.coalgebra))
    N = H.max_degree
    mod = H.module
    sq = H.algebra.square()
    four = tensor_many([mod] * 4, N)
    dd = tensor_map_many([H.comult, H.comult], sq, four)
    swap = middle_four_interchange(mod, mod, N, four, four)
    mm = tensor_map_many([H.mult, H.mult], four, sq)
    lhs = H.comult.compose(H.mult)
    rhs = mm.compose(swap).compose(dd)
    rep = rep.merge(_check_map_identity("Delta algebra-map", lhs, rhs))
    # unit is grouplike
    unit = H.algebra.one()
    want = tensor_elements(H.ring, sq, [unit, unit])
    if H.comult(unit) != want:
        rep = rep.merge(Report.fail(["Delta(unit) != unit (x) unit"]))
    return rep


def check_module_coalgebra(M):
    """Action unital, associative, a chain map and a coalgebra map."""
    N = M.max_degree
    mod = M.module
    H = M.hopf
    mh = tensor(mod, H.module, N)
    rep = Report.ok()
    # unitality
    bad = []
    for n in mod.degrees():
        for g in mod.basis_in(n):
            x = mod.gen(g)
            if M.act(x, H.algebra.one()) != x:
                bad.append("action unit fails at %s" % (g,))
    rep = rep.merge(Report(not bad, bad))
    # associativity over the algebra
    mhh = tensor_many([mod, H.module, H.module], N)
    one_m = GradedMap.identity(mod)
    one_h = GradedMap.identity(H.module)
    via_action = M.action.compose(tensor_map_many([M.action, one_h], mhh, mh))
    via_mult = M.action.compose(tensor_map_many([one_m, H.mult], mhh, mh))
    rep = rep.merge(_check_map_identity("action associativity", via_action, via_mult))
    # chain map
    dT = tensor_differential([mod, H.module], [M.coalgebra.d, H.complex.d], N, mh, mh)
    rep = rep.merge(_check_map_identity("action chain-map",
                                        M.action.compose(dT),
                                        M.coalgebra.d.compose(M.action)))
    # coalgebra map: Delta(xh) = sum (x_i h_j) (x) (x^i h^j)
    four_src = tensor_many([mod, mod, H.module, H.module], N)
    four_tgt = tensor_many([mod, H.module, mod, H.module], N)
    dd = tensor_map_many([M.coalgebra.comult, H.comult], mh, four_src)
    swap = permute_factors([mod, mod, H.module, H.module], [0, 2, 1, 3],
                           N, four_src, four_tgt)
    rr = tensor_map_many([M.action, M.action], four_tgt, M.coalgebra.square())
    lhs = M.coalgebra.comult.compose(M.action)
    rhs = rr.compose(swap).compose(dd)
    rep = rep.merge(_check_map_identity("action coalgebra-map", lhs, rhs))
    return rep


def is_primitive(C, el):
    """Delta x = x (x) 1 + 1 (x) x."""
    sq = C.square()
    unit = C.module.gen(C.coaug_gen)
    want = tensor_elements(C.ring, sq, [el, unit]) + \
        tensor_elements(C.ring, sq, [unit, el])
    return C.comult(el) == want


# ---------------------------------------------------------------------------
# Divided powers
# ---------------------------------------------------------------------------

def divided_powers(ring, g=1, N=6, max_degree=None):
    """The divided powers Hopf algebra on one generator of degree 2g.

    Generators v(0)..v(N); v(k)v(l) = binom(k+l,k) v(k+l), Delta v(n) =
    sum v(k) (x) v(n-k); zero differential.  Products beyond v(N) are
    truncated to zero.
    """
    if g < 1 or N < 0:
        raise ValueError("need g >= 1, N >= 0")
    if max_degree is None:
        max_degree = 2 * g * N
    basis = {2 * g * n: [("v", n)] for n in range(N + 1) if 2 * g * n <= max_degree}
    mod = FreeGradedModule(ring, basis)
    cx = ChainComplex(mod, GradedMap(mod, mod, -1), max_degree)
    sq = tensor(mod, mod, max_degree)
    mult = GradedMap(sq, mod, 0)
    for n in sq.degrees():
        for t in sq.basis_in(n):
            k, l = t[1][1], t[2][1]
            if ("v", k + l) in mod:
                mult.set_image(t, mod.gen(("v", k + l)).scale(comb(k + l, k)))
            else:
                mult.set_image(t, mod.zero(n))
    comult = GradedMap(mod, sq, 0)
    for n in mod.degrees():
        for gen in mod.basis_in(n):
            m = gen[1]
            terms = {("t", ("v", k), ("v", m - k)): 1 for k in range(m + 1)}
            comult.set_image(gen, sq.element(n, terms, strict=False))
    alg = DGAlgebra(cx, mult, ("v", 0), name="Gamma[v]")
    coalg = DGCoalgebra(cx, comult, ("v", 0), name="Gamma[v]")
    return HopfAlgebra(alg, coalg, name="Gamma[v]")


# ---------------------------------------------------------------------------
# Dualization of a coalgebra into an algebra
# ---------------------------------------------------------------------------

def tensor_dual_iso(V, W, max_degree, source=None, target=None):
    """V# (x) W#  ->  (V (x) W)#  via <a# (x) b#, x (x) y> = (-1)^{|b||x|} ..."""
    dV, dW = dual_module(V), dual_module(W)
    if source is None:
        source = tensor(dV, dW, max_degree)
    if target is None:
        target = dual_module(tensor(V, W, max_degree))
    out = GradedMap(source, target, 0)
    for n in source.degrees():
        for g in source.basis_in(n):
            da, db = split_factors([dV, dW], _flatten_t(g))
            a, b = da[1], db[1]
            sign = -1 if (dW.degree_of(db) % 2 and V.degree_of(a) % 2) else 1
            name = ("#", _make_t(_flatten_t(a) + _flatten_t(b)))
            out.set_image(g, target.element(n, {name: sign}, strict=False))
    return out


def tensor_algebra(A, B, max_degree=None):
    """The chain algebra A (x) B with the Koszul interchange product."""
    if max_degree is None:
        max_degree = min(A.max_degree, B.max_degree)
    mod = tensor(A.module, B.module, max_degree)
    d = tensor_differential([A.module, B.module], [A.d, B.d], max_degree, mod, mod)
    cx = ChainComplex(mod, d, max_degree, check=False)
    sq = tensor(mod, mod, max_degree)
    swap = permute_factors([A.module, B.module, A.module, B.module],
                           [0, 2, 1, 3], max_degree,
                           sq, tensor_many([A.module, A.module,
                                            B.module, B.module], max_degree))
    mm = tensor_map_many([A.mult, B.mult], swap.target, mod)
    unit = _make_t(_flatten_t(A.unit_gen) + _flatten_t(B.unit_gen))
    return DGAlgebra(cx, mm.compose(swap), unit,
                     name="%s(x)%s" % (A.name, B.name))


def tensor_coalgebra(C, D, max_degree=None):
    """The chain coalgebra C (x) D with the interchange comultiplication."""
    if max_degree is None:
        max_degree = min(C.max_degree, D.max_degree)
    mod = tensor(C.module, D.module, max_degree)
    d = tensor_differential([C.module, D.module], [C.d, D.d], max_degree, mod, mod)
    cx = ChainComplex(mod, d, max_degree, check=False)
    sq = tensor(mod, mod, max_degree)
    four = tensor_many([C.module, C.module, D.module, D.module], max_degree)
    dd = tensor_map_many([C.comult, D.comult], mod, four)
    swap = permute_factors([C.module, C.module, D.module, D.module],
                           [0, 2, 1, 3], max_degree, four, sq)
    coaug = _make_t(_flatten_t(C.coaug_gen) + _flatten_t(D.coaug_gen))
    return DGCoalgebra(cx, swap.compose(dd), coaug,
                       name="%s(x)%s" % (C.name, D.name))


def dual_algebra(C):
    """The dual chain algebra of a finite-type coalgebra.

    Multiplication is Delta# through the canonical pairing iso; the
    differential is d#.  Degrees are kept positive (cochain complex,
    d of degree +1).
    """
    dcx = C.complex.dualize()
    N = C.max_degree
    iso = tensor_dual_iso(C.module, C.module, N)
    ddelta = dualize(C.comult, dual_source=iso.target, dual_target=dcx.module)
    mult = ddelta.compose(iso)
    # retarget mult's source to the tensor of the dual module
    return DGAlgebra(dcx, mult, ("#", C.coaug_gen),
                     name=(C.name + "#") if C.name else "dual")
