"""Regenerate the committed fixture documents in fixtures/.

Every fixture is produced deterministically from the library itself, so the
files double as regression goldens for the document emitters.  Run from the
repository root:  python3 tools/make_fixtures.py
"""

from __future__ import annotations

import copy
import json
import os
import sys

from orbitalg import documents as docs
from orbitalg.barcobar import cobar, universal_cochain
from orbitalg.chain import ChainComplex
from orbitalg.circle import point_coalgebra, regular_action, trivial_action
from orbitalg.dcsh import DCSHFamily
from orbitalg.dg import DGAlgebra, DGCoalgebra, divided_powers
from orbitalg.graded import (FreeGradedModule, GradedMap, tensor,
                             tensor_elements)
from orbitalg.rings import ZZ

OUT = os.path.join(os.path.dirname(__file__), "..", "fixtures")


def write(name, doc):
    path = os.path.join(OUT, name)
    with open(path, "w", encoding="utf-8") as fh:
        if isinstance(doc, str):
            fh.write(doc)
        else:
            fh.write(docs.dump_document(doc))
    print("wrote", name)


def sphere2_coalgebra(max_degree=12):
    """H of the 2-sphere as a chain coalgebra: a point and a primitive s."""
    mod = FreeGradedModule(ZZ, {0: ["b"], 2: ["s"]})
    cx = ChainComplex(mod, GradedMap(mod, mod, -1), max_degree)
    sq = tensor(mod, mod, max_degree)
    com = GradedMap(mod, sq, 0)
    b, s = mod.gen("b"), mod.gen("s")
    com.set_image("b", tensor_elements(ZZ, sq, [b, b]))
    com.set_image("s", tensor_elements(ZZ, sq, [s, b]) +
                  tensor_elements(ZZ, sq, [b, s]))
    return DGCoalgebra(cx, com, "b", name="sphere2")


def free_algebra(max_degree=12):
    """The free algebra on one degree-1 generator: words x^k, zero d."""
    basis = {k: ["x%d" % k] for k in range(max_degree + 1)}
    mod = FreeGradedModule(ZZ, basis)
    cx = ChainComplex(mod, GradedMap(mod, mod, -1), max_degree)
    sq = tensor(mod, mod, max_degree)
    mult = GradedMap(sq, mod, 0)
    for a in range(max_degree + 1):
        for b in range(max_degree + 1 - a):
            src = tensor_elements(ZZ, sq, [mod.gen("x%d" % a),
                                           mod.gen("x%d" % b)])
            (g, c), = src.terms.items()
            mult.set_image(g, mod.gen("x%d" % (a + b)).scale(c))
    return DGAlgebra(cx, mult, "x0", name="free-x")


def main():
    os.makedirs(OUT, exist_ok=True)

    Hv = divided_powers(ZZ, 1, 6, 12)
    gamma = docs.hopf_to_document(Hv, name="gamma-v")
    write("gamma_v.json", gamma)

    corrupt = copy.deepcopy(gamma)
    for entry in corrupt["multiplication"]:
        if entry["on"] == [["v", 1], ["v", 1]]:
            entry["terms"] = [[3, ["v", 2]]]
            break
    else:
        raise SystemExit("v(1)*v(1) entry not found")
    write("gamma_v_corrupt.json", corrupt)

    S = sphere2_coalgebra()
    write("sphere2_coalgebra.json", docs.coalgebra_to_document(S, "sphere2"))

    A = free_algebra()
    write("free_algebra.json", docs.algebra_to_document(A, "free-x"))

    # simplicial sets: minimal circle, minimal 2-sphere, the full 2-simplex
    write("circle_simplicial.json", docs.simplicial_to_document(
        _simplicial({0: ["*"], 1: ["s"]},
                    {("s", 0): ((), "*"), ("s", 1): ((), "*")}), "circle"))
    write("sphere2_simplicial.json", docs.simplicial_to_document(
        _simplicial({0: ["*"], 2: ["s"]},
                    {("s", 0): ((0,), "*"), ("s", 1): ((0,), "*"),
                     ("s", 2): ((0,), "*")}), "sphere2"))
    write("delta2_simplicial.json", docs.simplicial_to_document(
        _simplicial({0: ["a", "b", "c"],
                     1: ["ab", "ac", "bc"],
                     2: ["abc"]},
                    {("ab", 0): ((), "b"), ("ab", 1): ((), "a"),
                     ("ac", 0): ((), "c"), ("ac", 1): ((), "a"),
                     ("bc", 0): ((), "c"), ("bc", 1): ((), "b"),
                     ("abc", 0): ((), "bc"), ("abc", 1): ((), "ac"),
                     ("abc", 2): ((), "ab")}), "delta2"))

    pt = trivial_action(point_coalgebra(ZZ, 22), operators=12)
    write("point_action.json", docs.circle_action_to_document(pt, "point"))

    Ssmall = sphere2_coalgebra(8)
    write("trivial_sphere_action.json", docs.circle_action_to_document(
        trivial_action(Ssmall, operators=6), "trivial-sphere2"))

    reg = regular_action(4, ZZ, 10)
    write("regular_action.json", docs.circle_action_to_document(reg, "regular"))

    S8 = sphere2_coalgebra(8)
    Om = cobar(S8, 8)
    tc = universal_cochain(S8, Om)
    write("universal_cochain_sphere2.json",
          docs.twisting_to_document(tc, "t-omega-sphere2"))

    write("dcsh_identity_sphere2.json",
          docs.dcsh_to_document(DCSHFamily.identity(S8), "identity-sphere2"))

    gamma_small = docs.hopf_to_document(divided_powers(ZZ, 1, 4, 8), "gamma-v")
    ident = docs.dcsh_to_document(
        DCSHFamily.identity(docs.build_hopf(gamma_small).coalgebra),
        "identity-gamma-v", source_doc=gamma_small, target_doc=gamma_small)
    write("dcsh_identity_gamma_v.json", ident)

    # Gamma v as a module coalgebra over itself, with the identity family
    Hs = docs.build_hopf(gamma_small)
    mm = {"schema": docs.SCHEMA_VERSION, "kind": "module_map",
          "name": "identity-gamma-v-module",
          "theta": ident,
          "source_module": {
              "coalgebra": docs.coalgebra_to_document(Hs.coalgebra),
              "action": docs._pair_sourced_entries(Hs.mult,
                                                   [Hs.module, Hs.module])},
          "target_module": {
              "coalgebra": docs.coalgebra_to_document(Hs.coalgebra),
              "action": docs._pair_sourced_entries(Hs.mult,
                                                   [Hs.module, Hs.module])},
          "maps": {"1": docs._map_entries(GradedMap.identity(Hs.module),
                                          Hs.module)},
          "higher_zero": True}
    write("module_map_gamma_v.json", mm)

    circle_doc = docs.simplicial_to_document(
        _simplicial({0: ["*"], 1: ["s"]},
                    {("s", 0): ((), "*"), ("s", 1): ((), "*")}), "circle")
    write("simplicial_orbit_circle.json",
          docs.dump_document({"schema": docs.SCHEMA_VERSION,
                              "kind": "simplicial_orbit",
                              "name": "orbit-suspension-circle",
                              "max_degree": 8,
                              "base": circle_doc}))

    write("no_schema.json", json.dumps(
        {"kind": "dg_coalgebra", "generators": []}, indent=2) + "\n")


def _simplicial(simplices, faces):
    from orbitalg.simplicial import SimplicialSet
    return SimplicialSet(simplices, faces)


if __name__ == "__main__":
    sys.exit(main())
