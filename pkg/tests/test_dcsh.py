from fractions import Fraction

import pytest

from orbitalg.barcobar import cobar
from orbitalg.chain import ChainComplex, is_chain_map
from orbitalg.dcsh import (DCSHFamily, check_dcsh, check_module_map,
                           check_multiplicative, compose_dcsh, lift_semifree,
                           SemifreeExtension, solve_phi2, tensor_over,
                           tensor_quotient, to_cobar)
from orbitalg.dg import DGCoalgebra, ModuleCoalgebra, divided_powers
from orbitalg.graded import (FreeGradedModule, GradedMap, split_factors,
                             tensor, tensor_elements)
from orbitalg.rings import QQ, ZZ


def _coalgebra(ring, gens, comult_bar, diffs, max_degree=8):
    """Connected coalgebra from reduced-diagonal and differential data."""
    mod = FreeGradedModule(ring, gens)
    d = GradedMap(mod, mod, -1)
    for g, img in diffs.items():
        d.set_image(g, mod.gen(img))
    cx = ChainComplex(mod, d, max_degree)
    sq = tensor(mod, mod, max_degree)
    com = GradedMap(mod, sq, 0)
    one = mod.gen("1")
    for n in mod.degrees():
        for g in mod.basis_in(n):
            if g == "1":
                com.set_image(g, tensor_elements(ring, sq, [one, one]))
                continue
            acc = tensor_elements(ring, sq, [mod.gen(g), one]) + \
                tensor_elements(ring, sq, [one, mod.gen(g)])
            for a, b in comult_bar.get(g, []):
                acc = acc + tensor_elements(ring, sq, [mod.gen(a), mod.gen(b)])
            com.set_image(g, acc)
    return DGCoalgebra(cx, com, "1")


def homotopy_pair(ring=QQ):
    """Two coalgebras whose inclusion is a chain map but only a coalgebra
    map up to a coherent homotopy: the diagonals of z disagree by a
    boundary."""
    C = _coalgebra(ring, {0: ["1"], 2: ["x"], 3: ["y"], 5: ["z"]},
                   {"z": [("x", "y")]}, {})
    C2 = _coalgebra(ring, {0: ["1"], 2: ["x"], 3: ["y", "m"], 5: ["z"]},
                    {"z": [("y", "x")]}, {"m": "x"})
    phi1 = GradedMap(C.module, C2.module, 0)
    for n in C.module.degrees():
        for g in C.module.basis_in(n):
            phi1.set_image(g, C2.module.gen(g))
    return C, C2, phi1


def test_solve_phi2_produces_coherent_family():
    C, C2, phi1 = homotopy_pair()
    # the strict family is a chain map but fails the k=2 equation
    strict = DCSHFamily.strict(phi1, C, C2)
    assert check_dcsh(strict, max_k=1).passed
    assert not check_dcsh(strict, max_k=2).passed
    phi2 = solve_phi2(C, C2, phi1)
    assert phi2 is not None
    fam = DCSHFamily(C, C2, {1: phi1, 2: phi2}, higher_zero=True)
    assert check_dcsh(fam).passed
    assert phi2.gen_image("z").degree == 6


def test_solve_phi2_detects_unsolvable():
    # without the bounding class m there is no homotopy to find
    C, _, _ = homotopy_pair()
    C2 = _coalgebra(QQ, {0: ["1"], 2: ["x"], 3: ["y"], 5: ["z"]},
                    {"z": [("y", "x")]}, {})
    phi1 = GradedMap(C.module, C2.module, 0)
    for n in C.module.degrees():
        for g in C.module.basis_in(n):
            phi1.set_image(g, C2.module.gen(g))
    assert solve_phi2(C, C2, phi1) is None


def test_family_degree_validation():
    C, C2, phi1 = homotopy_pair()
    with pytest.raises(ValueError):
        DCSHFamily(C, C2, {2: phi1})     # phi_2 must have degree 1


def test_identity_and_composition():
    C, C2, phi1 = homotopy_pair()
    phi2 = solve_phi2(C, C2, phi1)
    fam = DCSHFamily(C, C2, {1: phi1, 2: phi2}, higher_zero=True)
    ident = DCSHFamily.identity(C)
    assert check_dcsh(ident).passed
    left = compose_dcsh(fam, DCSHFamily.identity(C))
    right = compose_dcsh(DCSHFamily.identity(C2), fam)
    for comp in (left, right):
        assert comp.undetermined_above is None
        for k in range(1, fam.K + 1):
            for n in C.module.degrees():
                for g in C.module.basis_in(n):
                    assert comp.phi(k).gen_image(g) == fam.phi(k).gen_image(g)


def test_composition_cutoff_semantics():
    C, C2, phi1 = homotopy_pair()
    phi2 = solve_phi2(C, C2, phi1)
    fam = DCSHFamily(C, C2, {1: phi1, 2: phi2})     # not known complete
    comp = compose_dcsh(DCSHFamily.identity(C2), fam)
    assert comp.undetermined_above == 2 and not comp.higher_zero
    strict_comp = compose_dcsh(DCSHFamily.identity(C), DCSHFamily.identity(C))
    assert strict_comp.higher_zero and strict_comp.undetermined_above is None


def test_to_cobar_is_chain_algebra_map():
    C, C2, phi1 = homotopy_pair()
    phi2 = solve_phi2(C, C2, phi1)
    fam = DCSHFamily(C, C2, {1: phi1, 2: phi2}, higher_zero=True)
    Om1 = cobar(C, 8)
    Om2 = cobar(C2, 8)
    F = to_cobar(fam, Om1, Om2)
    assert is_chain_map(F, Om1.complex, Om2.complex).passed
    for n in Om1.module.degrees():
        for a in Om1.module.basis_in(n):
            for m in Om1.module.degrees():
                if n + m > 8:
                    continue
                for b in Om1.module.basis_in(m):
                    x, y = Om1.module.gen(a), Om1.module.gen(b)
                    assert F(Om1.multiply(x, y)) == \
                        Om2.multiply(F(x), F(y))


def test_multiplicative_identity_and_mutation():
    H = divided_powers(QQ, 1, 4, 8)
    theta = DCSHFamily.identity(H.coalgebra)
    assert check_multiplicative(theta, H, H).passed
    bad = GradedMap.identity(H.module)
    bad.set_image(("v", 1), H.module.gen(("v", 1)).scale(2))
    theta_bad = DCSHFamily.strict(bad, H.coalgebra, H.coalgebra)
    rep = check_multiplicative(theta_bad, H, H)
    assert not rep.passed


def test_module_map_identity_and_mutation():
    H = divided_powers(QQ, 1, 4, 8)
    M = ModuleCoalgebra(H.coalgebra, H, H.mult)
    theta = DCSHFamily.identity(H.coalgebra)
    fam = DCSHFamily.identity(H.coalgebra)
    assert check_module_map(fam, theta, M, M).passed
    bad = GradedMap.identity(H.module)
    bad.set_image(("v", 2), H.module.gen(("v", 2)).scale(3))
    fam_bad = DCSHFamily.strict(bad, H.coalgebra, H.coalgebra)
    assert not check_module_map(fam_bad, theta, M, M).passed


def _point_action(H, max_degree):
    ring = H.ring
    pt = FreeGradedModule(ring, {0: ["*"]})
    ptcx = ChainComplex(pt, GradedMap(pt, pt, -1), max_degree)
    T = tensor(H.module, pt, max_degree)
    lam = GradedMap(T, pt, 0)
    unit = tensor_elements(ring, T, [H.module.gen(("v", 0)), pt.gen("*")])
    (gname, _), = unit.terms.items()
    lam.set_image(gname, pt.gen("*"))
    return ptcx, lam


def test_tensor_quotient_over_self_and_point():
    H = divided_powers(QQ, 1, 4, 8)
    Q = tensor_quotient(H.complex, H.mult, H, H.complex, H.mult, 8)
    assert [Q.module.dim(n) for n in range(9)] == [1, 0, 1, 0, 1, 0, 1, 0, 1]
    ptcx, lam = _point_action(H, 8)
    Qpt = tensor_quotient(H.complex, H.mult, H, ptcx, lam, 8)
    assert Qpt.module.dim(0) == 1
    assert all(Qpt.module.dim(n) == 0 for n in range(1, 9))


def test_tensor_quotient_needs_field():
    H = divided_powers(ZZ, 1, 4, 8)
    with pytest.raises(ValueError):
        tensor_quotient(H.complex, H.mult, H, H.complex, H.mult, 8)


def test_tensor_over_identity():
    H = divided_powers(QQ, 1, 3, 6)
    ident = GradedMap.identity(H.module)
    induced, QM, QN, rep = tensor_over(
        H.complex, H.mult, H, H.complex, H.mult,
        H.complex, H.mult, H, H.complex, H.mult,
        ident, ident, 6)
    assert rep.passed
    for n in QM.module.degrees():
        assert QM.module.dim(n) == QN.module.dim(n)
        m = induced.matrix(n)
        assert m.to_dense() == [[1 if i == j else 0
                                 for j in range(QM.module.dim(n))]
                                for i in range(QM.module.dim(n))]


def test_lift_through_scaled_quasi_iso():
    # M' is the cone on a point, semifree over the trivial Hopf algebra;
    # p multiplies by 3, so the lift must divide by 3
    Htriv = divided_powers(QQ, 1, 0, 4)
    mp = FreeGradedModule(QQ, {0: ["a"], 1: ["v"]})
    dmp = GradedMap(mp, mp, -1)
    dmp.set_image("v", mp.gen("a"))
    Mp = ChainComplex(mp, dmp, 4)
    base_mod = FreeGradedModule(QQ, {0: ["a"]})
    base = ChainComplex(base_mod, GradedMap(base_mod, base_mod, -1), 4)
    j = GradedMap(base_mod, mp, 0)
    j.set_image("a", mp.gen("a"))
    Tact = tensor(mp, Htriv.module, 4)
    action = GradedMap(Tact, mp, 0)
    for n in Tact.degrees():
        for g in Tact.basis_in(n):
            m, _ = split_factors([mp, Htriv.module], list(g[1:]))
            action.set_image(g, mp.gen(m))
    ext = SemifreeExtension(
        complex=Mp, base=base, j=j, hopf=Htriv, action=action,
        new_generators=["v"],
        decompose={"a": ("base", "a"), "v": ("prod", "v", ("v", 0))})

    nm = FreeGradedModule(QQ, {0: ["A"], 1: ["V"]})
    dn = GradedMap(nm, nm, -1)
    dn.set_image("V", nm.gen("A"))
    Ncx = ChainComplex(nm, dn, 4)
    p = GradedMap(nm, mp, 0)
    p.set_image("A", mp.gen("a").scale(3))
    p.set_image("V", mp.gen("v").scale(3))
    phi = GradedMap(base_mod, nm, 0)
    phi.set_image("a", nm.gen("A").scale(Fraction(1, 3)))
    phi2 = GradedMap.identity(mp)
    theta1 = GradedMap.identity(Htriv.module)
    TactN = tensor(nm, Htriv.module, 4)
    rhoN = GradedMap(TactN, nm, 0)
    for n in TactN.degrees():
        for g in TactN.basis_in(n):
            m, _ = split_factors([nm, Htriv.module], list(g[1:]))
            rhoN.set_image(g, nm.gen(m))

    omega, rep = lift_semifree(ext, p, Ncx, phi, phi2, theta1, rhoN)
    assert rep.passed
    assert omega(mp.gen("v")) == nm.gen("V").scale(Fraction(1, 3))
    assert is_chain_map(omega, Mp, Ncx).passed


def test_lift_precondition_checked():
    # p phi != phi' j is rejected before any lifting happens
    Htriv = divided_powers(QQ, 1, 0, 4)
    mp = FreeGradedModule(QQ, {0: ["a"]})
    Mp = ChainComplex(mp, GradedMap(mp, mp, -1), 4)
    j = GradedMap.identity(mp)
    Tact = tensor(mp, Htriv.module, 4)
    action = GradedMap(Tact, mp, 0)
    ext = SemifreeExtension(
        complex=Mp, base=Mp, j=j, hopf=Htriv, action=action,
        new_generators=[], decompose={"a": ("base", "a")})
    p = GradedMap.identity(mp)
    phi = GradedMap(mp, mp, 0)
    phi.set_image("a", mp.gen("a").scale(2))
    with pytest.raises(ValueError):
        lift_semifree(ext, p, Mp, phi, GradedMap.identity(mp),
                      GradedMap.identity(Htriv.module), action)
