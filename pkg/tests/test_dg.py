from math import comb

import pytest

from orbitalg.dg import (check_algebra, check_coalgebra, check_hopf,
                         check_module_coalgebra, divided_powers, dual_algebra,
                         is_primitive, ModuleCoalgebra, tensor_algebra,
                         tensor_coalgebra)
from orbitalg.graded import tensor_elements
from orbitalg.rings import CoeffRing, QQ, ZZ

from conftest import free_algebra, sphere_coalgebra

F2 = CoeffRing.prime_field(2)


def test_divided_powers_structure():
    H = divided_powers(ZZ, 1, 5, 10)
    assert check_hopf(H).passed
    m = H.module
    assert [m.dim(n) for n in range(0, 11)] == [1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1]
    # v(k) v(l) = binom(k+l, k) v(k+l)
    for k in range(1, 4):
        for l in range(1, 4):
            if k + l > 5:
                continue        # beyond the stored generators
            prod = H.algebra.multiply(m.gen(("v", k)), m.gen(("v", l)))
            assert prod.coeff(("v", k + l)) == comb(k + l, k)
    assert is_primitive(H.coalgebra, m.gen(("v", 1)))
    assert not is_primitive(H.coalgebra, m.gen(("v", 2)))


def test_divided_powers_mod_p():
    H = divided_powers(F2, 1, 4, 8)
    assert check_hopf(H).passed
    m = H.module
    # v(1)^2 = 2 v(2) = 0 in characteristic 2
    sq = H.algebra.multiply(m.gen(("v", 1)), m.gen(("v", 1)))
    assert sq.is_zero()


def test_sphere_coalgebra_valid():
    C = sphere_coalgebra()
    assert check_coalgebra(C).passed
    assert C.is_connected() and C.is_one_connected()
    assert is_primitive(C, C.module.gen("s"))
    assert C.reduced_comult()(C.module.gen("s")).is_zero()


def test_free_algebra_valid():
    A = free_algebra()
    assert check_algebra(A).passed
    assert A.is_connected()
    assert A.augmentation_coeff(A.one()) == 1
    x = A.module.gen("x1")
    assert A.multiply(x, x) == A.module.gen("x2")


def test_checkers_catch_broken_structures():
    A = free_algebra()
    # break associativity on one entry
    key = None
    for g, img in A.mult.images.items():
        if not img.is_zero() and img.degree == 2:
            key = g
            break
    A.mult.images[key] = A.mult.images[key].scale(2)
    assert not check_algebra(A).passed

    C = sphere_coalgebra()
    sq = C.square()
    C.comult.images["s"] = tensor_elements(ZZ, sq, [C.module.gen("s"),
                                                    C.module.gen("b")])
    assert not check_coalgebra(C).passed   # counit axiom fails one-sidedly


def test_tensor_structures():
    C = sphere_coalgebra(max_degree=6)
    CC = tensor_coalgebra(C, C, 6)
    assert check_coalgebra(CC).passed
    A = free_algebra(max_degree=4)
    AA = tensor_algebra(A, A, 4)
    assert check_algebra(AA).passed


def test_dual_algebra_products():
    C = sphere_coalgebra(QQ, 6)
    A = dual_algebra(C)
    assert check_algebra(A).passed
    m = A.module
    # dual of a primitive squares to zero; the counit dual is the unit
    s = m.gen(("#", "s"))
    assert A.multiply(s, s).is_zero()
    assert A.multiply(A.one(), s) == s


def test_module_coalgebra_over_self():
    H = divided_powers(QQ, 1, 4, 8)
    M = ModuleCoalgebra(H.coalgebra, H, H.mult)
    assert check_module_coalgebra(M).passed
    v1 = H.module.gen(("v", 1))
    assert M.act(v1, v1).coeff(("v", 2)) == 2
