"""Cobar and bar constructions, truncated by total degree.

Words are ("w", letter, ...) generators; ("w",) is the empty word (unit).
Cobar letters are desuspended coalgebra generators ("s-", g), bar letters
suspended algebra generators ("s", g).  All differential signs come out of
the Koszul rule for moving d past (de)suspensions and earlier letters, and
every constructed instance is validated by d^2 = 0 on its range.
"""

from __future__ import annotations

from .chain import ChainComplex
from .dg import DGAlgebra, DGCoalgebra, HopfAlgebra, tensor_algebra
from .graded import (FreeGradedModule, GradedMap, split_factors, tensor,
                     _flatten_t)


EMPTY_WORD = ("w",)


def word(letters):
    return ("w",) + tuple(letters)


def letters_of(w):
    return w[1:]


def _enumerate_words(letter_degrees, max_degree):
    """All words with total degree <= max_degree, DFS in letter order."""
    letters = [(g, n) for n, gens in sorted(letter_degrees.items())
               for g in gens]
    basis = {0: [EMPTY_WORD]}

    def rec(prefix, deg):
        for g, n in letters:
            if deg + n > max_degree:
                continue
            w = prefix + (g,)
            basis.setdefault(deg + n, []).append(word(w))
            rec(w, deg + n)

    rec((), 0)
    return basis


def _word_module(ring, letter_degrees, max_degree):
    basis = _enumerate_words(letter_degrees, max_degree)
    # deterministic order: by length then generation order
    for n in basis:
        basis[n].sort(key=len)
    return FreeGradedModule(ring, basis)


def _derivation_image(mod, letter_deg, w, local_images, degree_shift):
    """Extend letter-local images over a word with the prefix Koszul sign.

    local_images maps a letter to a list of (coeff, replacement letter
    tuple) pairs; the result is the sum over positions of
    (-1)^{prefix degree} prefix . image . suffix.  Terms whose word falls
    outside the module are dropped (truncation).
    """
    ls = letters_of(w)
    n = mod.degree_of(w)
    R = mod.ring
    terms = {}
    pre = 0
    for i, l in enumerate(ls):
        sign = -1 if pre % 2 else 1
        for coeff, repl in local_images(i, ls):
            g = word(ls[:i] + tuple(repl) + ls[i + 1:])
            c = R.mul(R.coerce(sign), coeff)
            if g in mod:
                terms[g] = R.add(terms.get(g, R.zero()), c)
        pre += letter_deg(l)
    return mod.element(n + degree_shift, terms, strict=False)


# ---------------------------------------------------------------------------
# Cobar
# ---------------------------------------------------------------------------

def cobar(C, max_degree=None):
    """The cobar construction of a 1-connected chain coalgebra.

    Free algebra on the desuspended positive part, with the two-sum
    differential: internal (-s^{-1} d) plus the reduced-comultiplication
    splitting with the Koszul sign of the left factor.
    """
    if not C.is_one_connected():
        raise ValueError("cobar needs a 1-connected coalgebra")
    if max_degree is None:
        max_degree = C.max_degree
    R = C.ring
    letter_degrees = {}
    for n in C.module.degrees():
        if n >= 2:
            letter_degrees[n - 1] = [("s-", g) for g in C.module.basis_in(n)]
    mod = _word_module(R, letter_degrees, max_degree)

    red = C.reduced_comult()

    def letter_deg(l):
        return C.module.degree_of(l[1]) - 1

    # local differential on one letter, as (coeff, letters) replacements
    local = {}
    for n, ls in letter_degrees.items():
        for l in ls:
            g = l[1]
            out = []
            for h, c in C.d(C.module.gen(g)).terms.items():
                if C.module.degree_of(h) >= 2:
                    out.append((R.neg(c), (("s-", h),)))
            for t, c in red(C.module.gen(g)).terms.items():
                a, b = split_factors([C.module, C.module], _flatten_t(t))
                if C.module.degree_of(a) < 2 or C.module.degree_of(b) < 2:
                    continue
                sign = -1 if C.module.degree_of(a) % 2 else 1
                out.append((R.mul(R.coerce(sign), c), (("s-", a), ("s-", b))))
            local[l] = out

    d = GradedMap(mod, mod, -1)
    for n in mod.degrees():
        for w in mod.basis_in(n):
            d.set_image(w, _derivation_image(
                mod, letter_deg, w,
                lambda i, ls: local[ls[i]], -1))
    cx = ChainComplex(mod, d, max_degree)

    sq = tensor(mod, mod, max_degree)
    mult = GradedMap(sq, mod, 0)
    for n in sq.degrees():
        for t in sq.basis_in(n):
            w1, w2 = split_factors([mod, mod], _flatten_t(t))
            cat = word(letters_of(w1) + letters_of(w2))
            img = mod.gen(cat) if cat in mod else mod.zero(n)
            mult.set_image(t, img)
    alg = DGAlgebra(cx, mult, EMPTY_WORD,
                    name="Cobar(%s)" % (C.name or "C",))
    alg.input_coalgebra = C
    return alg


def algebra_map_from_letters(Omega, B, letter_image):
    """The unique algebra map out of a free (cobar) algebra.

    letter_image sends each word letter to an element of B; words go to the
    ordered product of letter images.  No extra signs: multiplicativity on a
    free algebra fixes everything.
    """
    f = GradedMap(Omega.module, B.module, 0)
    for n in Omega.module.degrees():
        for w in Omega.module.basis_in(n):
            acc = B.one()
            for l in letters_of(w):
                acc = B.multiply(acc, letter_image(l))
            f.set_image(w, acc)
    return f


def cobar_hopf_primitive(C, max_degree=None):
    """Cobar with the primitively generated diagonal, as a Hopf algebra.

    Each letter x = s^{-1}c is sent to x (x) 1 + 1 (x) x, extended as an
    algebra map into the tensor-square algebra.
    """
    Omega = cobar(C, max_degree)
    sq_alg = tensor_algebra(Omega, Omega)
    mod = Omega.module
    sq = sq_alg.module
    R = Omega.ring

    from .graded import tensor_elements
    one = Omega.one()

    def letter_image(l):
        x = mod.gen(word((l,)))
        return tensor_elements(R, sq, [x, one]) + tensor_elements(R, sq, [one, x])

    comult = algebra_map_from_letters(Omega, sq_alg, letter_image)
    coalg = DGCoalgebra(Omega.complex, comult, EMPTY_WORD, name=Omega.name)
    return HopfAlgebra(Omega, coalg, name=Omega.name)


# ---------------------------------------------------------------------------
# Bar
# ---------------------------------------------------------------------------

def bar(A, max_degree=None):
    """The bar construction of a connected augmented chain algebra.

    Cofree coalgebra on the suspended positive part.  The differential has
    the letterwise internal part s a |-> -s(da) and the adjacent-pair part
    (sa, sb) |-> (-1)^{|a|+1} s(ab), both pushed past earlier letters with
    the prefix Koszul sign.
    """
    if not A.is_connected():
        raise ValueError("bar needs a connected algebra")
    if max_degree is None:
        max_degree = A.max_degree
    R = A.ring
    letter_degrees = {}
    for n in A.module.degrees():
        if n >= 1:
            letter_degrees[n + 1] = [("s", g) for g in A.module.basis_in(n)]
    mod = _word_module(R, letter_degrees, max_degree)

    def letter_deg(l):
        return A.module.degree_of(l[1]) + 1

    d = GradedMap(mod, mod, -1)
    for n in mod.degrees():
        for w in mod.basis_in(n):
            ls = letters_of(w)
            R0 = R
            terms = {}
            pre = 0
            for i, l in enumerate(ls):
                sign = R0.coerce(-1 if pre % 2 else 1)
                a = l[1]
                # internal: -s(da)
                for h, c in A.d(A.module.gen(a)).terms.items():
                    if A.module.degree_of(h) < 1:
                        continue
                    g = word(ls[:i] + (("s", h),) + ls[i + 1:])
                    if g in mod:
                        c2 = R0.mul(sign, R0.neg(c))
                        terms[g] = R0.add(terms.get(g, R0.zero()), c2)
                # adjacent pair: (-1)^{|a|+1} s(ab)
                if i + 1 < len(ls):
                    b = ls[i + 1][1]
                    psign = -1 if (A.module.degree_of(a) + 1) % 2 else 1
                    prod = A.multiply(A.module.gen(a), A.module.gen(b))
                    for h, c in prod.terms.items():
                        if A.module.degree_of(h) < 1:
                            continue
                        g = word(ls[:i] + (("s", h),) + ls[i + 2:])
                        if g in mod:
                            c2 = R0.mul(sign, R0.mul(R0.coerce(psign), c))
                            terms[g] = R0.add(terms.get(g, R0.zero()), c2)
                pre += letter_deg(l)
            d.set_image(w, mod.element(n - 1, terms, strict=False))
    cx = ChainComplex(mod, d, max_degree)

    sq = tensor(mod, mod, max_degree)
    comult = GradedMap(mod, sq, 0)
    for n in mod.degrees():
        for w in mod.basis_in(n):
            ls = letters_of(w)
            terms = {}
            for i in range(len(ls) + 1):
                g = ("t",) + (word(ls[:i]), word(ls[i:]))
                terms[g] = 1
            comult.set_image(w, sq.element(n, terms, strict=False))
    coalg = DGCoalgebra(cx, comult, EMPTY_WORD,
                        name="Bar(%s)" % (A.name or "A",))
    coalg.input_algebra = A
    return coalg


# ---------------------------------------------------------------------------
# Universal twisting cochains and the adjunction unit
# ---------------------------------------------------------------------------

def universal_cochain(C, Omega=None):
    """t : C -> Cobar C, c |-> s^{-1}c (zero in degrees <= 1)."""
    from .twist import TwistingCochain
    if Omega is None:
        Omega = cobar(C)
    t = GradedMap(C.module, Omega.module, -1)
    for n in C.module.degrees():
        for g in C.module.basis_in(n):
            if n >= 2 and word((("s-", g),)) in Omega.module:
                t.set_image(g, Omega.module.gen(word((("s-", g),))))
    return TwistingCochain(C, Omega, t)


def couniversal_cochain(A, B=None):
    """t : Bar A -> A, sa |-> a on length-1 words, zero otherwise."""
    from .twist import TwistingCochain
    if B is None:
        B = bar(A)
    t = GradedMap(B.module, A.module, -1)
    for n in B.module.degrees():
        for w in B.module.basis_in(n):
            ls = letters_of(w)
            if len(ls) == 1:
                t.set_image(w, A.module.gen(ls[0][1]))
    return TwistingCochain(B, A, t)


def unit_bar_cobar(C, max_degree=None):
    """The adjunction unit C -> Bar(Cobar C).

    Realized as the coalgebra map induced by the universal cochain; returns
    (map, bar-of-cobar coalgebra).
    """
    from .twist import beta_t
    if max_degree is None:
        max_degree = C.max_degree
    Omega = cobar(C, max_degree)
    B = bar(Omega, max_degree)
    t = universal_cochain(C, Omega)
    return beta_t(t, B), B


# ---------------------------------------------------------------------------
# Milgram's map
# ---------------------------------------------------------------------------

def milgram_q(C, C2, max_degree=None):
    """q : Cobar(C (x) C2) -> Cobar C (x) Cobar C2.

    On letters: s^{-1}(w (x) 1) -> s^{-1}w (x) 1, s^{-1}(1 (x) w') ->
    1 (x) s^{-1}w', and zero when both factors are non-unit; extended as an
    algebra map.  Returns (map, source algebra, target algebra).
    """
    from .dg import tensor_coalgebra
    from .graded import tensor_elements
    if max_degree is None:
        max_degree = min(C.max_degree, C2.max_degree)
    CC = tensor_coalgebra(C, C2, max_degree)
    Omega = cobar(CC, max_degree)
    O1 = cobar(C, max_degree)
    O2 = cobar(C2, max_degree)
    T = tensor_algebra(O1, O2, max_degree)
    R = T.ring
    sq = T.module

    def letter_image(l):
        g = l[1]  # a generator of C (x) C2
        a, b = split_factors([C.module, C2.module], _flatten_t(g))
        if b == C2.coaug_gen and C.module.degree_of(a) >= 2:
            x = O1.module.gen(word((("s-", a),)))
            return tensor_elements(R, sq, [x, O2.one()])
        if a == C.coaug_gen and C2.module.degree_of(b) >= 2:
            y = O2.module.gen(word((("s-", b),)))
            return tensor_elements(R, sq, [O1.one(), y])
        n = CC.module.degree_of(g) - 1
        return sq.zero(n)

    q = algebra_map_from_letters(Omega, T, letter_image)
    return q, Omega, T
