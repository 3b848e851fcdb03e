"""Batch command line interface.

Subcommands load a document, run a construction or a checker, and print a
deterministic report: fixed basis orders, sorted keys, no timestamps, so two
runs on the same input are byte-identical.

Exit codes: 0 when everything passes, 1 when a mathematical check fails
(an axiom, a differential, a precondition of a construction), 2 for usage
errors and malformed documents.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import documents as docs
from .barcobar import bar, cobar, cobar_hopf_primitive, universal_cochain
from .chain import UNDETERMINED
from .circle import (bv_operator, check_circle_action, orbit_cohomology_ring,
                     orbit_model)
from .dcsh import check_dcsh, check_module_map, check_multiplicative
from .dg import HopfAlgebra, check_algebra, check_coalgebra, check_hopf
from .graded import gen_str
from .simplicial import (normalized_chains, simplicial_orbit_model,
                         suspension_chains)
from .twist import (acyclic_bar, acyclic_cobar, check_twisting_cochain,
                    twisted_tensor_mirrored)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULT_MAX_DEGREE = 10


class UsageError(Exception):
    pass


def _fmt_witness(w):
    if isinstance(w, str):
        return w
    if isinstance(w, tuple):
        return gen_str(w)
    return repr(w)


def _resolve_max_degree(args, doc=None):
    """Flag, then the environment, then the document, then the default."""
    if getattr(args, "max_degree", None) is not None:
        if args.max_degree < 0:
            raise UsageError("--max-degree must be nonnegative")
        return args.max_degree
    env = os.environ.get("ORBITALG_MAX_DEGREE")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError("ORBITALG_MAX_DEGREE=%r is not an integer" % env)
    if doc is not None and isinstance(doc.get("max_degree"), int):
        return doc["max_degree"]
    return DEFAULT_MAX_DEGREE


def _emit(args, payload, out=None):
    """One report in the selected format; payload keys are already sorted."""
    out = out or sys.stdout
    if getattr(args, "output", "text") == "json":
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        return
    for line in payload.get("lines", []):
        out.write(line + "\n")


def _report_payload(command, rep, extra=None):
    payload = {"command": command,
               "status": "pass" if rep.passed else "fail",
               "failures": [_fmt_witness(w) for w in rep.failures]}
    lines = ["%s: %s" % (command, payload["status"])]
    for w in payload["failures"][:10]:
        lines.append("  witness: %s" % w)
    payload["lines"] = lines
    if extra:
        payload.update(extra)
    return payload


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

CHECKERS = ("coalgebra", "algebra", "hopf", "twisting", "dcsh",
            "multiplicative", "module-map", "circle-action", "simplicial")


def _want_kind(doc, *kinds):
    if doc["kind"] not in kinds:
        raise UsageError("checker needs a %s document, got %s"
                         % (" or ".join(kinds), doc["kind"]))


def cmd_check(args) -> int:
    doc = docs.load_path(args.document)
    ring = docs.parse_ring(args.coefficients) if args.coefficients else None
    which = args.which
    if which == "coalgebra":
        _want_kind(doc, "dg_coalgebra", "hopf_algebra")
        obj = docs.build_coalgebra(doc, ring) if doc["kind"] == "dg_coalgebra" \
            else docs.build_hopf(doc, ring).coalgebra
        rep = obj.complex.verify_differential().merge(check_coalgebra(obj))
    elif which == "algebra":
        _want_kind(doc, "dg_algebra", "hopf_algebra")
        obj = docs.build_algebra(doc, ring) if doc["kind"] == "dg_algebra" \
            else docs.build_hopf(doc, ring).algebra
        rep = obj.complex.verify_differential().merge(check_algebra(obj))
    elif which == "hopf":
        _want_kind(doc, "hopf_algebra")
        H = docs.build_hopf(doc, ring)
        rep = H.complex.verify_differential().merge(check_hopf(H))
    elif which == "twisting":
        _want_kind(doc, "twisting_cochain")
        tc = docs.build_twisting_cochain(doc, ring)
        rep = tc.coalgebra.complex.verify_differential()
        rep = rep.merge(tc.algebra.complex.verify_differential())
        rep = rep.merge(check_twisting_cochain(tc))
    elif which == "dcsh":
        _want_kind(doc, "dcsh_family")
        fam, _, _ = docs.build_dcsh_family(doc, ring)
        rep = check_dcsh(fam)
    elif which == "multiplicative":
        _want_kind(doc, "dcsh_family")
        fam, H, K = docs.build_dcsh_family(doc, ring)
        if not isinstance(H, HopfAlgebra):
            raise UsageError("multiplicative checker needs Hopf-algebra ends")
        rep = check_dcsh(fam).merge(check_multiplicative(fam, H, K))
    elif which == "module-map":
        _want_kind(doc, "module_map")
        fam, theta, M, N = docs.build_module_map(doc, ring)
        rep = check_module_map(fam, theta, M, N)
    elif which == "circle-action":
        _want_kind(doc, "circle_action")
        a = docs.build_circle_action(doc, ring)
        rep = a.carrier.complex.verify_differential()
        rep = rep.merge(check_coalgebra(a.carrier))
        rep = rep.merge(check_circle_action(a))
    elif which == "simplicial":
        _want_kind(doc, "simplicial_set")
        rep = docs.build_simplicial_set(doc).verify_identities()
    else:
        raise UsageError("unknown checker %r" % which)
    _emit(args, _report_payload("check %s" % which, rep))
    return EXIT_PASS if rep.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# homology
# ---------------------------------------------------------------------------

def _complex_from_document(doc, ring, max_degree):
    kind = doc["kind"]
    if kind == "chain_complex":
        return docs.build_complex(doc, ring)
    if kind == "dg_algebra":
        return docs.build_algebra(doc, ring).complex
    if kind == "dg_coalgebra":
        return docs.build_coalgebra(doc, ring).complex
    if kind == "hopf_algebra":
        return docs.build_hopf(doc, ring).complex
    if kind == "simplicial_set":
        K = docs.build_simplicial_set(doc)
        R = ring if ring is not None else docs.document_ring(doc)
        return normalized_chains(K, R, max_degree).complex
    raise UsageError("cannot take homology of a %s document" % kind)


def cmd_homology(args) -> int:
    doc = docs.load_path(args.document)
    max_degree = _resolve_max_degree(args, doc)
    ring = docs.parse_ring(args.coefficients) if args.coefficients else None
    cx = _complex_from_document(doc, ring, max_degree)
    rep = cx.verify_differential()
    if not rep.passed:
        _emit(args, _report_payload("homology", rep))
        return EXIT_FAIL
    if args.cohomology:
        cx = cx.dualize()
    H = cx.homology(range(0, max_degree + 1))
    sym = "H^%d" if args.cohomology else "H%d"
    lines, groups = [], {}
    for n in range(0, max_degree + 1):
        g = H.groups[n]
        if g == UNDETERMINED:
            groups[str(n)] = "undetermined"
            lines.append((sym % n) + " = undetermined (truncation)")
        else:
            groups[str(n)] = g.describe(cx.ring)
            lines.append((sym % n) + " = " + g.describe(cx.ring))
    _emit(args, {"command": "homology", "status": "pass",
                 "coefficients": docs.ring_spec(cx.ring),
                 "max_degree": max_degree, "groups": groups, "lines": lines})
    return EXIT_PASS


# ---------------------------------------------------------------------------
# orbit
# ---------------------------------------------------------------------------

def _simplicial_orbit_complex(doc, ring, max_degree):
    base = docs.build_simplicial_set(doc["base"])
    C = normalized_chains(base, ring, max_degree)
    Kc = suspension_chains(C, max_degree)
    Om = cobar_hopf_primitive(Kc, max_degree)
    tc = universal_cochain(Kc, Om.algebra)
    model = simplicial_orbit_model(Kc, tc, Om.coalgebra, Om.mult, max_degree)
    return model.complex


def cmd_orbit(args) -> int:
    doc = docs.load_path(args.document)
    max_degree = _resolve_max_degree(args, doc)
    ring = docs.parse_ring(args.field) if args.field else docs.document_ring(doc)
    if (args.ring or args.bv) and not ring.is_field:
        raise UsageError("--%s needs field coefficients (use --field q or fp:p)"
                         % ("ring" if args.ring else "bv"))
    lines, payload = [], {"command": "orbit", "status": "pass",
                          "coefficients": docs.ring_spec(ring),
                          "max_degree": max_degree}

    if doc["kind"] == "simplicial_orbit":
        if args.ring or args.bv:
            raise UsageError("--ring/--bv apply to circle-action documents")
        if "base" not in doc:
            raise docs.DocumentError("simplicial_orbit document needs a base")
        try:
            cx = _simplicial_orbit_complex(doc, ring, max_degree)
        except (ValueError, RuntimeError) as e:
            _emit(args, {"command": "orbit", "status": "fail",
                         "failures": [str(e)], "lines": ["orbit: fail", str(e)]})
            return EXIT_FAIL
    elif doc["kind"] == "circle_action":
        a = docs.build_circle_action(doc, ring)
        rep = a.carrier.complex.verify_differential() \
            .merge(check_coalgebra(a.carrier)).merge(check_circle_action(a))
        if not rep.passed:
            _emit(args, _report_payload("orbit", rep))
            return EXIT_FAIL
        try:
            model = orbit_model(a, max_degree)
        except (ValueError, RuntimeError) as e:
            _emit(args, {"command": "orbit", "status": "fail",
                         "failures": [str(e)], "lines": ["orbit: fail", str(e)]})
            return EXIT_FAIL
        cx = model.complex
        if args.ring:
            pres = orbit_cohomology_ring(a, max_degree)
            dims = pres.dimensions()
            payload["ring_dimensions"] = dims
            lines.append("cohomology dimensions: " +
                         " ".join(str(x) for x in dims))
            prods = {}
            for key in sorted(pres.products):
                n1, i1, n2, i2 = key
                val = pres.products[key]
                rhs = " + ".join("%s*c%d_%d" % (docs.encode_coeff(c), n, j)
                                 for (n, j), c in sorted(val.items())) or "0"
                prods["c%d_%d*c%d_%d" % (n1, i1, n2, i2)] = rhs
            payload["products"] = prods
            for k in sorted(prods):
                lines.append("  %s = %s" % (k, prods[k]))
        if args.bv:
            bv = bv_operator(a, max_degree)
            payload["bv_status"] = "pass" if bv.report.passed else "fail"
            mats = {}
            for n in sorted(bv.matrices):
                mats[str(n)] = [[docs.encode_coeff(c) for c in row]
                                for row in bv.matrices[n]]
            payload["bv_matrices"] = mats
            lines.append("bv operator: %s" % payload["bv_status"])
            for n in sorted(bv.matrices):
                lines.append("  degree %d: %s" % (n, mats[str(n)]))
            if not bv.report.passed:
                payload["status"] = "fail"
    else:
        raise UsageError("orbit needs a circle_action or simplicial_orbit "
                         "document, got %s" % doc["kind"])

    H = cx.homology(range(0, max_degree + 1))
    groups = {}
    hlines = []
    for n in range(0, max_degree + 1):
        g = H.groups[n]
        desc = "undetermined" if g == UNDETERMINED else g.describe(cx.ring)
        groups[str(n)] = desc
        hlines.append("H%d = %s" % (n, desc))
    payload["groups"] = groups
    payload["lines"] = ["orbit: %s" % payload["status"]] + hlines + lines
    _emit(args, payload)
    return EXIT_PASS if payload["status"] == "pass" else EXIT_FAIL


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------

CONSTRUCTIONS = ("cobar", "bar", "acyclic-cobar", "acyclic-bar",
                 "twisted-tensor", "orbit-model")


def _math_fail(args, msg) -> int:
    _emit(args, {"command": "construct", "status": "fail", "failures": [msg],
                 "lines": ["construct: fail", "  " + msg]})
    return EXIT_FAIL


def cmd_construct(args) -> int:
    doc = docs.load_path(args.document)
    max_degree = _resolve_max_degree(args, doc)
    ring = docs.parse_ring(args.coefficients) if args.coefficients else None
    what = args.what
    try:
        if what == "cobar":
            _want_kind(doc, "dg_coalgebra", "hopf_algebra")
            C = docs.build_coalgebra(doc, ring) if doc["kind"] == "dg_coalgebra" \
                else docs.build_hopf(doc, ring).coalgebra
            if not C.is_one_connected():
                return _math_fail(args, "cobar requires a 1-connected coalgebra")
            out = docs.algebra_to_document(cobar(C, max_degree), name="cobar")
        elif what == "bar":
            _want_kind(doc, "dg_algebra", "hopf_algebra")
            A = docs.build_algebra(doc, ring) if doc["kind"] == "dg_algebra" \
                else docs.build_hopf(doc, ring).algebra
            if not A.is_connected():
                return _math_fail(args, "bar requires a connected algebra")
            out = docs.coalgebra_to_document(bar(A, max_degree), name="bar")
        elif what == "acyclic-cobar":
            _want_kind(doc, "dg_coalgebra", "hopf_algebra")
            C = docs.build_coalgebra(doc, ring) if doc["kind"] == "dg_coalgebra" \
                else docs.build_hopf(doc, ring).coalgebra
            if not C.is_one_connected():
                return _math_fail(args, "cobar requires a 1-connected coalgebra")
            out = docs.complex_to_document(acyclic_cobar(C, max_degree),
                                           name="acyclic-cobar")
        elif what == "acyclic-bar":
            _want_kind(doc, "dg_algebra", "hopf_algebra")
            A = docs.build_algebra(doc, ring) if doc["kind"] == "dg_algebra" \
                else docs.build_hopf(doc, ring).algebra
            if not A.is_connected():
                return _math_fail(args, "bar requires a connected algebra")
            out = docs.complex_to_document(acyclic_bar(A, max_degree),
                                           name="acyclic-bar")
        elif what == "twisted-tensor":
            _want_kind(doc, "twisting_cochain")
            tc = docs.build_twisting_cochain(doc, ring)
            rep = check_twisting_cochain(tc)
            if not rep.passed:
                return _math_fail(args, "twisting condition fails at %s"
                                  % ", ".join(_fmt_witness(w)
                                              for w in rep.failures[:3]))
            C, A = tc.coalgebra, tc.algebra
            cx = twisted_tensor_mirrored(C.complex, C.comult, tc,
                                         A.complex, A.mult, max_degree)
            out = docs.complex_to_document(cx, name="twisted-tensor")
        elif what == "orbit-model":
            _want_kind(doc, "circle_action")
            a = docs.build_circle_action(doc, ring)
            rep = check_circle_action(a)
            if not rep.passed:
                return _math_fail(args, "circle action relations fail at %s"
                                  % ", ".join(_fmt_witness(w)
                                              for w in rep.failures[:3]))
            out = docs.coalgebra_to_document(orbit_model(a, max_degree).coalgebra,
                                             name="orbit-model")
        else:
            raise UsageError("unknown construction %r" % what)
    except (ValueError, RuntimeError) as e:
        return _math_fail(args, str(e))
    sys.stdout.write(docs.dump_document(out))
    return EXIT_PASS


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orbitalg",
        description="exact chain-level computations from structured documents")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0,
                        help="seed for any randomized subroutine")
    common.add_argument("--output", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common],
                       help="run a structure checker on a document")
    p.add_argument("document")
    p.add_argument("--which", required=True, choices=CHECKERS)
    p.add_argument("--coefficients", default=None,
                   help="override ring: z, q or fp:p")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("homology", parents=[common], help="homology of the loaded complex")
    p.add_argument("document")
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--coefficients", default=None,
                   help="ring: z (default), q or fp:p")
    p.add_argument("--cohomology", action="store_true")
    p.set_defaults(func=cmd_homology)

    p = sub.add_parser("orbit", parents=[common], help="homotopy-orbit model of an action")
    p.add_argument("document")
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--field", default=None, help="q or fp:p")
    p.add_argument("--ring", action="store_true",
                   help="orbit cohomology ring with its product table")
    p.add_argument("--bv", action="store_true",
                   help="degree -1 operator on carrier cohomology")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("construct", parents=[common], help="run a construction, emit a document")
    p.add_argument("document")
    p.add_argument("--what", required=True, choices=CONSTRUCTIONS)
    p.add_argument("--max-degree", type=int, default=None)
    p.add_argument("--coefficients", default=None)
    p.set_defaults(func=cmd_construct)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    random.seed(args.seed)
    try:
        return args.func(args)
    except (docs.DocumentError, UsageError) as e:
        sys.stderr.write("error: %s\n" % e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
