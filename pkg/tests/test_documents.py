import json
from fractions import Fraction

import pytest

import orbitalg.documents as docs
from orbitalg.circle import regular_action, trivial_action
from orbitalg.dg import check_hopf, divided_powers
from orbitalg.rings import CoeffRing, QQ, ZZ

from conftest import fixture_path, free_algebra, sphere_coalgebra


def test_parse_and_spec_ring():
    assert docs.parse_ring("z") is ZZ
    assert docs.parse_ring("q") is QQ
    F7 = docs.parse_ring("fp:7")
    assert F7.p == 7
    assert docs.ring_spec(F7) == "fp:7"
    assert docs.ring_spec(ZZ) == "z" and docs.ring_spec(QQ) == "q"
    for bad in ("r", "fp:4", "fp:x", 3):
        with pytest.raises(docs.DocumentError):
            docs.parse_ring(bad)


def test_coeff_roundtrip():
    assert docs.encode_coeff(5) == 5
    assert docs.encode_coeff(Fraction(1, 2)) == "1/2"
    assert docs.decode_coeff(QQ, "1/2") == Fraction(1, 2)
    assert docs.decode_coeff(ZZ, 5) == 5
    with pytest.raises(docs.DocumentError):
        docs.decode_coeff(ZZ, True)        # bool is not an integer here
    with pytest.raises(docs.DocumentError):
        docs.decode_coeff(ZZ, "1/2")


def test_name_roundtrip():
    for g in ("s", ("v", 3), ("t", ("v", 0), ("w",)), ("#", ("v", 1))):
        assert docs.decode_name(docs.encode_name(g)) == g
    assert docs.encode_name(("v", 3)) == ["v", 3]


def test_validate_document():
    with pytest.raises(docs.DocumentError):
        docs.validate_document({"kind": "chain_complex"})      # no schema
    with pytest.raises(docs.DocumentError):
        docs.validate_document({"schema": 2, "kind": "chain_complex"})
    with pytest.raises(docs.DocumentError):
        docs.validate_document({"schema": 1, "kind": "mystery"})


def test_dump_is_canonical():
    doc = docs.hopf_to_document(divided_powers(ZZ, 1, 3, 6))
    text = docs.dump_document(doc)
    assert text == json.dumps(doc, sort_keys=True, indent=2) + "\n"
    assert docs.dump_document(json.loads(text)) == text


def test_hopf_roundtrip():
    H = divided_powers(ZZ, 1, 4, 8)
    doc = docs.hopf_to_document(H, name="gamma")
    H2 = docs.build_hopf(doc)
    assert check_hopf(H2).passed
    assert docs.dump_document(docs.hopf_to_document(H2, name="gamma")) == \
        docs.dump_document(doc)


def test_coalgebra_and_algebra_roundtrip():
    C = sphere_coalgebra(max_degree=8)
    doc = docs.coalgebra_to_document(C, name="sphere2")
    C2 = docs.build_coalgebra(doc)
    assert docs.coalgebra_to_document(C2, name="sphere2") == doc
    A = free_algebra(max_degree=6)
    doc2 = docs.algebra_to_document(A, name="free-x")
    A2 = docs.build_algebra(doc2)
    assert docs.algebra_to_document(A2, name="free-x") == doc2


def test_circle_action_roundtrip():
    a = regular_action(2, ZZ, 6)
    doc = docs.circle_action_to_document(a, name="regular")
    a2 = docs.build_circle_action(doc)
    assert docs.circle_action_to_document(a2, name="regular") == doc
    assert len(a2.kappa) == len(a.kappa)


def test_coefficient_override():
    doc = docs.coalgebra_to_document(sphere_coalgebra(max_degree=6))
    F3 = CoeffRing.prime_field(3)
    C3 = docs.build_coalgebra(doc, ring=F3)
    assert C3.ring is F3


def test_module_validation_errors():
    base = {"schema": 1, "kind": "graded_module", "coefficients": "z",
            "max_degree": 4,
            "generators": [{"name": "a", "degree": 0}]}
    docs.build_module(base)
    bad = dict(base, generators=[{"name": "a", "degree": 9}])
    with pytest.raises(docs.DocumentError):
        docs.build_module(bad)             # degree beyond the truncation
    dup = dict(base, generators=[{"name": "a", "degree": 0},
                                 {"name": "a", "degree": 0}])
    with pytest.raises(docs.DocumentError):
        docs.build_module(dup)


def test_fixture_files_load():
    doc = docs.load_path(fixture_path("gamma_v.json"))
    assert doc["kind"] == "hopf_algebra"
    H = docs.build_hopf(doc)
    assert check_hopf(H).passed
    bad = docs.build_hopf(docs.load_path(fixture_path("gamma_v_corrupt.json")))
    assert not check_hopf(bad).passed
    with pytest.raises(docs.DocumentError):
        docs.load_path(fixture_path("no_schema.json"))


def test_simplicial_roundtrip():
    doc = docs.load_path(fixture_path("delta2_simplicial.json"))
    K = docs.build_simplicial_set(doc)
    assert K.verify_identities().passed
    assert docs.simplicial_to_document(K, name=doc.get("name", "")) == doc


def test_dcsh_fixture_builds():
    fam, src, tgt = docs.build_dcsh_family(
        docs.load_path(fixture_path("dcsh_identity_gamma_v.json")))
    assert fam.K == 1
    assert fam.source.module.basis == fam.target.module.basis
