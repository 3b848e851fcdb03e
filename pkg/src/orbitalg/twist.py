"""Twisting cochains and twisted tensor products.

A twisting cochain t : C -> A is a degree -1 map with dt + td = m(t(x)t)Delta.
The two twisted tensor product shapes (module (x) comodule and its mirror)
are implemented independently, each with the cross-term sign written out,
and every constructed complex is validated by D^2 = 0 on its range.
"""

from __future__ import annotations

from .barcobar import algebra_map_from_letters, bar, cobar, couniversal_cochain, \
    letters_of, universal_cochain, word
from .chain import ChainComplex, Report
from .graded import (GradedMap, split_factors, tensor, tensor_elements,
                     _flatten_t, _make_t)


class TwistingCochain:
    """Degree -1 map from a chain coalgebra to a chain algebra."""

    def __init__(self, coalgebra, algebra, t, check=True):
        if t.degree != -1:
            raise ValueError("twisting cochain must have degree -1")
        self.coalgebra = coalgebra
        self.algebra = algebra
        self.t = t
        if check:
            rep = check_twisting_cochain(self)
            if not rep:
                raise ValueError("twisting condition fails at %s"
                                 % (rep.failures[:3],))

    def __call__(self, el):
        return self.t(el)


def check_twisting_cochain(tc):
    """Degreewise verification of dt + td = m(t (x) t)Delta."""
    C, A, t = tc.coalgebra, tc.algebra, tc.t
    R = A.ring
    bad = []
    for n in C.module.degrees():
        for g in C.module.basis_in(n):
            x = C.module.gen(g)
            lhs = A.d(t(x)) + t(C.d(x))
            rhs = A.module.zero(n - 2)
            for term, c in C.comult(x).terms.items():
                a, b = split_factors([C.module, C.module], _flatten_t(term))
                ta = t(C.module.gen(a))
                tb = t(C.module.gen(b))
                if ta.is_zero() or tb.is_zero():
                    continue
                # (t (x) t)(a (x) b) carries (-1)^{|a|} from moving t past a
                sign = -1 if C.module.degree_of(a) % 2 else 1
                rhs = rhs + A.multiply(ta, tb).scale(R.mul(R.coerce(sign), c))
            if lhs != rhs:
                bad.append(g)
    return Report(not bad, bad)


# ---------------------------------------------------------------------------
# Twisted tensor products
# ---------------------------------------------------------------------------

def twisted_tensor(M, rho, tc, N, lam, max_degree=None, check=True):
    """(M (x) N, D_t) for a right A-module M and left C-comodule N.

    rho : M (x) A -> M, lam : N -> C (x) N.  The differential is
    D_t(m (x) n) = dm (x) n + (-1)^{|m|} m (x) dn
                 + sum_i (-1)^{|m|} rho(m (x) t(c_i)) (x) n_i
    with lam(n) = sum_i c_i (x) n_i.
    """
    C, A = tc.coalgebra, tc.algebra
    if max_degree is None:
        max_degree = min(M.max_degree, N.max_degree)
    R = M.ring
    mod = tensor(M.module, N.module, max_degree)
    D = GradedMap(mod, mod, -1)
    for n in mod.degrees():
        for g in mod.basis_in(n):
            m, nn = split_factors([M.module, N.module], _flatten_t(g))
            dm_deg = M.module.degree_of(m)
            sm = -1 if dm_deg % 2 else 1
            acc = tensor_elements(R, mod, [M.d(M.module.gen(m)), N.module.gen(nn)])
            acc = acc + tensor_elements(
                R, mod, [M.module.gen(m), N.d(N.module.gen(nn))]).scale(sm)
            for term, c in lam(N.module.gen(nn)).terms.items():
                ci, ni = split_factors([C.module, N.module], _flatten_t(term))
                tv = tc(C.module.gen(ci))
                if tv.is_zero():
                    continue
                moved = rho(tensor_elements(R, rho.source,
                                            [M.module.gen(m), tv]))
                acc = acc + tensor_elements(
                    R, mod, [moved, N.module.gen(ni)]).scale(R.mul(R.coerce(sm), c))
            D.set_image(g, acc)
    return ChainComplex(mod, D, max_degree, check=check)


def twisted_tensor_mirrored(N, lam, tc, M, rho, max_degree=None, check=True):
    """(N (x) M, D_t) for a right C-comodule N and left A-module M.

    lam : N -> N (x) C, rho : A (x) M -> M.  The differential is
    D_t(n (x) m) = dn (x) m + (-1)^{|n|} n (x) dm
                 - sum_i (-1)^{|n_i|} n_i (x) t(c_i) m
    with lam(n) = sum_i n_i (x) c_i.  The relative minus sign against the
    unmirrored form is deliberate and load-bearing.
    """
    C, A = tc.coalgebra, tc.algebra
    if max_degree is None:
        max_degree = min(N.max_degree, M.max_degree)
    R = N.ring
    mod = tensor(N.module, M.module, max_degree)
    D = GradedMap(mod, mod, -1)
    for n in mod.degrees():
        for g in mod.basis_in(n):
            nn, m = split_factors([N.module, M.module], _flatten_t(g))
            sn = -1 if N.module.degree_of(nn) % 2 else 1
            acc = tensor_elements(R, mod, [N.d(N.module.gen(nn)), M.module.gen(m)])
            acc = acc + tensor_elements(
                R, mod, [N.module.gen(nn), M.d(M.module.gen(m))]).scale(sn)
            for term, c in lam(N.module.gen(nn)).terms.items():
                ni, ci = split_factors([N.module, C.module], _flatten_t(term))
                tv = tc(C.module.gen(ci))
                if tv.is_zero():
                    continue
                moved = rho(tensor_elements(R, rho.source,
                                            [tv, M.module.gen(m)]))
                si = -1 if N.module.degree_of(ni) % 2 else 1
                acc = acc - tensor_elements(
                    R, mod, [N.module.gen(ni), moved]).scale(R.mul(R.coerce(si), c))
            D.set_image(g, acc)
    return ChainComplex(mod, D, max_degree, check=check)


# ---------------------------------------------------------------------------
# Acyclic constructions
# ---------------------------------------------------------------------------

def acyclic_cobar(C, max_degree=None):
    """C (x)_{t} Cobar C over the universal cochain; contractible."""
    if max_degree is None:
        max_degree = C.max_degree
    Omega = cobar(C, max_degree)
    tc = universal_cochain(C, Omega)
    # C is a right comodule over itself, Cobar C a left module over itself
    cx = twisted_tensor_mirrored(C.complex, C.comult, tc,
                                 Omega.complex, Omega.mult, max_degree)
    cx.cochain = tc
    cx.cobar_algebra = Omega
    return cx


def acyclic_bar(A, max_degree=None):
    """A (x)_{t} Bar A over the couniversal cochain; contractible."""
    if max_degree is None:
        max_degree = A.max_degree
    B = bar(A, max_degree)
    tc = couniversal_cochain(A, B)
    cx = twisted_tensor(A.complex, A.mult, tc, B.complex, B.comult, max_degree)
    cx.cochain = tc
    cx.bar_coalgebra = B
    return cx


# ---------------------------------------------------------------------------
# Induced maps and pushforward
# ---------------------------------------------------------------------------

def push_cochain(f, tc, g, coalgebra=None, algebra=None, check=True):
    """f o t o g for an algebra map f : A -> A' and coalgebra map g : C' -> C."""
    t2 = f.compose(tc.t).compose(g) if isinstance(f, GradedMap) else None
    if t2 is None:
        raise TypeError("f must be a GradedMap")
    return TwistingCochain(coalgebra or tc.coalgebra, algebra or tc.algebra,
                           t2, check=check)


def alpha_t(tc, Omega=None):
    """The algebra map Cobar C -> A with s^{-1}c |-> t(c)."""
    C, A = tc.coalgebra, tc.algebra
    if Omega is None:
        Omega = cobar(C)
    return algebra_map_from_letters(Omega, A, lambda l: tc(C.module.gen(l[1])))


def beta_t(tc, B=None):
    """The coalgebra map C -> Bar A induced by a twisting cochain.

    c maps to the sum over k of the words (s t (x) ... (x) s t) applied to
    the k-fold reduced comultiplication of c.  Every letter st has degree 0,
    so no Koszul signs arise.
    """
    C, A = tc.coalgebra, tc.algebra
    if B is None:
        B = bar(A)
    R = A.ring
    f = GradedMap(C.module, B.module, 0)
    top = max(C.module.degrees() or [0])
    iterates = {}
    for n in C.module.degrees():
        for g in C.module.basis_in(n):
            if n == 0:
                f.set_image(g, B.module.gen(word(())))
                continue
            acc = B.module.zero(n)
            for k in range(1, n + 1):
                if k not in iterates:
                    iterates[k] = C.iterated_reduced_comult(k)
                img = iterates[k](C.module.gen(g))
                if img.is_zero():
                    if k > 1:
                        break
                    continue
                for term, c in img.terms.items():
                    groups = split_factors([C.module] * k, _flatten_t(term)) \
                        if k > 1 else [term]
                    # multilinear expansion of the letters s(t(c_i))
                    combos = [((), c)]
                    for ci in groups:
                        tv = tc(C.module.gen(ci))
                        nxt = []
                        for a, ca in tv.terms.items():
                            if A.module.degree_of(a) < 1:
                                continue
                            for pref, cc in combos:
                                nxt.append((pref + (("s", a),), R.mul(cc, ca)))
                        combos = nxt
                        if not combos:
                            break
                    for ls, cc in combos:
                        w = word(ls)
                        if w in B.module:
                            acc = acc + B.module.gen(w).scale(cc)
            f.set_image(g, acc)
    return f
