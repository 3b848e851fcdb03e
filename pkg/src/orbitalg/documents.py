"""Versioned document format for the batch interface.

A document is a JSON object with a mandatory integer ``schema`` field and a
``kind`` discriminator.  Every structure the command line can load or emit
has a kind: graded modules, chain complexes, DG (co)algebras, Hopf algebras,
twisting cochains, coherent comultiplicative families, circle actions and
simplicial sets.  The format is sparse and explicit: each generator carries
its degree annotation, and each structure map is a list of entries mapping a
source generator to its list of (coefficient, target) pairs.  Zero images
are simply omitted.

Structured generator names (nested tuples in memory) are serialized as
nested JSON arrays; strings and integers pass through.  Rational
coefficients with nontrivial denominator are serialized as "p/q" strings so
the format stays exact.

Format violations raise DocumentError; mathematical failures (a loaded
differential that does not square to zero, say) are left to the callers'
checkers so they can be reported with witnesses.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .chain import ChainComplex
from .circle import CircleAction
from .dcsh import DCSHFamily
from .dg import DGAlgebra, DGCoalgebra, HopfAlgebra, ModuleCoalgebra
from .graded import (FreeGradedModule, GradedMap, gen_str, split_factors,
                     tensor, tensor_elements, tensor_many, _flatten_t)
from .rings import CoeffRing, QQ, ZZ
from .simplicial import SimplicialSet
from .twist import TwistingCochain

SCHEMA_VERSION = 1

KINDS = ("graded_module", "chain_complex", "dg_algebra", "dg_coalgebra",
         "hopf_algebra", "twisting_cochain", "dcsh_family", "module_map",
         "circle_action", "simplicial_set", "simplicial_orbit")


class DocumentError(Exception):
    """Malformed document: bad schema, unresolved name, degree out of range."""


def _require(cond, msg, *args):
    if not cond:
        raise DocumentError(msg % args if args else msg)


# ---------------------------------------------------------------------------
# Scalars and names
# ---------------------------------------------------------------------------

def parse_ring(spec) -> CoeffRing:
    """Coefficient spec: "z", "q" or "fp:<prime>"."""
    _require(isinstance(spec, str), "coefficient spec must be a string, got %r", spec)
    s = spec.lower()
    if s == "z":
        return ZZ
    if s == "q":
        return QQ
    if s.startswith("fp:"):
        try:
            p = int(s[3:])
        except ValueError:
            raise DocumentError("bad prime in %r" % spec)
        try:
            return CoeffRing.prime_field(p)
        except ValueError as e:
            raise DocumentError(str(e))
    raise DocumentError("unknown coefficients %r (want z, q or fp:p)" % spec)


def ring_spec(ring) -> str:
    if ring.kind == "Z":
        return "z"
    if ring.kind == "Q":
        return "q"
    return "fp:%d" % ring.p


def encode_coeff(c):
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return int(c)
        return "%d/%d" % (c.numerator, c.denominator)
    return int(c)


def decode_coeff(ring, v):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise DocumentError("bad coefficient %r" % (v,))
    try:
        return ring.coerce(Fraction(v))
    except (ValueError, ZeroDivisionError) as e:
        raise DocumentError("coefficient %r: %s" % (v, e))


def encode_name(g):
    """Structured generator name -> JSON value (tuples become arrays)."""
    if isinstance(g, tuple):
        return [encode_name(x) for x in g]
    if isinstance(g, (str, int)):
        return g
    raise DocumentError("unserializable generator name %r" % (g,))


def decode_name(v):
    if isinstance(v, list):
        return tuple(decode_name(x) for x in v)
    if isinstance(v, bool) or not isinstance(v, (str, int)):
        raise DocumentError("bad generator name %r" % (v,))
    return v


# ---------------------------------------------------------------------------
# Loading and top-level validation
# ---------------------------------------------------------------------------

def load_path(path) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as e:
        raise DocumentError("cannot read %s: %s" % (path, e))
    except json.JSONDecodeError as e:
        raise DocumentError("not valid JSON (%s): %s" % (path, e))
    validate_document(doc)
    return doc


def validate_document(doc):
    _require(isinstance(doc, dict), "document must be a JSON object")
    _require("schema" in doc, "missing mandatory schema version field")
    _require(doc["schema"] == SCHEMA_VERSION,
             "unsupported schema version %r (this build reads %d)",
             doc.get("schema"), SCHEMA_VERSION)
    _require("kind" in doc, "missing kind field")
    _require(doc["kind"] in KINDS, "unknown kind %r", doc["kind"])
    return doc


def dump_document(doc) -> str:
    """Canonical serialization: sorted keys, two-space indent, one newline."""
    validate_document(doc)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def document_ring(doc, ring=None) -> CoeffRing:
    """The coefficient ring a document should be built over."""
    if ring is not None:
        return ring
    return parse_ring(doc.get("coefficients", "z"))


# ---------------------------------------------------------------------------
# Builders: documents -> live objects
# ---------------------------------------------------------------------------

def _get(doc, key, kind):
    _require(key in doc, "%s document needs a %r field", kind, key)
    return doc[key]


def build_module(doc, ring=None) -> FreeGradedModule:
    R = document_ring(doc, ring)
    gens = _get(doc, "generators", doc.get("kind", "graded_module"))
    _require(isinstance(gens, list), "generators must be a list")
    max_degree = doc.get("max_degree")
    basis = {}
    for entry in gens:
        _require(isinstance(entry, dict) and "name" in entry and "degree" in entry,
                 "each generator needs name and degree, got %r", entry)
        deg = entry["degree"]
        _require(isinstance(deg, int) and deg >= 0, "bad degree %r", deg)
        if max_degree is not None:
            _require(deg <= max_degree,
                     "generator %r exceeds declared max_degree %d",
                     entry["name"], max_degree)
        g = decode_name(entry["name"])
        _require(g not in basis.get(deg, []), "duplicate generator %r", entry["name"])
        basis.setdefault(deg, []).append(g)
    return FreeGradedModule(R, basis)


def _build_linear_map(entries, source, target, degree, *, label,
                      target_arity=1):
    """Sparse entry list -> GradedMap; targets of arity k are k-element lists."""
    R = target.ring
    f = GradedMap(source, target, degree)
    if entries is None:
        return f
    _require(isinstance(entries, list), "%s must be a list of entries", label)
    seen = set()
    for entry in entries:
        _require(isinstance(entry, dict) and "on" in entry and "terms" in entry,
                 "%s entry needs on and terms, got %r", label, entry)
        g = decode_name(entry["on"])
        _require(g in source, "%s: unknown source generator %r", label, entry["on"])
        _require(g not in seen, "%s: duplicate entry for %r", label, entry["on"])
        seen.add(g)
        n = source.degree_of(g)
        img = target.zero(n + degree)
        for pair in entry["terms"]:
            _require(isinstance(pair, list) and len(pair) == 2,
                     "%s: term must be [coefficient, target], got %r", label, pair)
            c = decode_coeff(R, pair[0])
            if target_arity == 1:
                h = decode_name(pair[1])
                _require(h in target, "%s: unknown target generator %r",
                         label, pair[1])
                img = img + target.gen(h).scale(c)
            else:
                _require(isinstance(pair[1], list) and len(pair[1]) == target_arity,
                         "%s: target must list %d factors, got %r",
                         label, target_arity, pair[1])
                raise AssertionError("tensor targets handled by caller")
        f.set_image(g, img)
    return f


def _build_tensor_valued_map(entries, source, factors, target, degree, *, label):
    """Entries whose targets are lists of factor generators."""
    R = target.ring
    f = GradedMap(source, target, degree)
    if entries is None:
        return f
    _require(isinstance(entries, list), "%s must be a list of entries", label)
    seen = set()
    k = len(factors)
    for entry in entries:
        _require(isinstance(entry, dict) and "on" in entry and "terms" in entry,
                 "%s entry needs on and terms, got %r", label, entry)
        g = decode_name(entry["on"])
        _require(g in source, "%s: unknown source generator %r", label, entry["on"])
        _require(g not in seen, "%s: duplicate entry for %r", label, entry["on"])
        seen.add(g)
        n = source.degree_of(g)
        img = target.zero(n + degree)
        for pair in entry["terms"]:
            _require(isinstance(pair, list) and len(pair) == 2
                     and isinstance(pair[1], list) and len(pair[1]) == k,
                     "%s: term must be [coefficient, [%d factors]], got %r",
                     label, k, pair)
            c = decode_coeff(R, pair[0])
            els = []
            for fac, nm in zip(factors, pair[1]):
                h = decode_name(nm)
                _require(h in fac, "%s: unknown factor generator %r", label, nm)
                els.append(fac.gen(h))
            img = img + tensor_elements(R, target, els).scale(c)
        f.set_image(g, img)
    return f


def _build_pair_sourced_map(entries, factors, source, target, degree, *, label):
    """Entries keyed by a pair of factor generators (products, actions)."""
    R = target.ring
    f = GradedMap(source, target, degree)
    if entries is None:
        return f
    _require(isinstance(entries, list), "%s must be a list of entries", label)
    seen = set()
    for entry in entries:
        _require(isinstance(entry, dict) and "on" in entry and "terms" in entry,
                 "%s entry needs on and terms, got %r", label, entry)
        on = entry["on"]
        _require(isinstance(on, list) and len(on) == len(factors),
                 "%s: on must list %d factors, got %r", label, len(factors), on)
        pair = tuple(decode_name(nm) for nm in on)
        for fac, g, nm in zip(factors, pair, on):
            _require(g in fac, "%s: unknown factor generator %r", label, nm)
        _require(pair not in seen, "%s: duplicate entry for %r", label, on)
        seen.add(pair)
        n = sum(fac.degree_of(g) for fac, g in zip(factors, pair))
        img = target.zero(n + degree)
        for term in entry["terms"]:
            _require(isinstance(term, list) and len(term) == 2,
                     "%s: term must be [coefficient, target], got %r", label, term)
            c = decode_coeff(R, term[0])
            h = decode_name(term[1])
            _require(h in target, "%s: unknown target generator %r", label, term[1])
            img = img + target.gen(h).scale(c)
        src_gen = tensor_elements(R, source,
                                  [fac.gen(g) for fac, g in zip(factors, pair)])
        terms = list(src_gen.terms.items())
        _require(len(terms) == 1 and terms[0][1] == R.one(),
                 "%s: pair %r outside the tensor truncation", label, on)
        f.set_image(terms[0][0], img)
    return f


def build_complex(doc, ring=None) -> ChainComplex:
    mod = build_module(doc, ring)
    d_degree = doc.get("d_degree", -1)
    _require(d_degree in (-1, 1), "d_degree must be -1 or +1, got %r", d_degree)
    max_degree = doc.get("max_degree")
    if max_degree is None:
        max_degree = max(mod.degrees() or [0])
    d = _build_linear_map(doc.get("differential"), mod, mod, d_degree,
                          label="differential")
    return ChainComplex(mod, d, max_degree, d_degree=d_degree, check=False)


def build_algebra(doc, ring=None) -> DGAlgebra:
    cx = build_complex(doc, ring)
    unit = decode_name(_get(doc, "unit", "dg_algebra"))
    _require(unit in cx.module, "unit %r is not a generator", doc["unit"])
    sq = tensor(cx.module, cx.module, cx.max_degree)
    mult = _build_pair_sourced_map(doc.get("multiplication"),
                                   [cx.module, cx.module], sq, cx.module, 0,
                                   label="multiplication")
    return DGAlgebra(cx, mult, unit, name=doc.get("name", ""))


def build_coalgebra(doc, ring=None, complex_=None) -> DGCoalgebra:
    cx = complex_ if complex_ is not None else build_complex(doc, ring)
    coaug = decode_name(_get(doc, "coaugmentation", "dg_coalgebra"))
    _require(coaug in cx.module, "coaugmentation %r is not a generator",
             doc["coaugmentation"])
    sq = tensor(cx.module, cx.module, cx.max_degree)
    comult = _build_tensor_valued_map(doc.get("comultiplication"), cx.module,
                                      [cx.module, cx.module], sq, 0,
                                      label="comultiplication")
    counit = None
    if "counit" in doc:
        counit = {}
        _require(isinstance(doc["counit"], list), "counit must be a list")
        for pair in doc["counit"]:
            _require(isinstance(pair, list) and len(pair) == 2,
                     "counit entry must be [generator, value], got %r", pair)
            g = decode_name(pair[0])
            _require(g in cx.module and cx.module.degree_of(g) == 0,
                     "counit is supported on degree-0 generators, got %r", pair[0])
            counit[g] = decode_coeff(cx.ring, pair[1])
    return DGCoalgebra(cx, comult, coaug, name=doc.get("name", ""),
                       counit=counit)


def build_hopf(doc, ring=None) -> HopfAlgebra:
    A = build_algebra(doc, ring)
    # both structures live on the algebra's complex, not a parallel copy
    C = build_coalgebra(doc, ring, complex_=A.complex)
    return HopfAlgebra(A, C, name=doc.get("name", ""))


def build_twisting_cochain(doc, ring=None) -> TwistingCochain:
    C = build_coalgebra(_get(doc, "coalgebra", "twisting_cochain"), ring)
    A = build_algebra(_get(doc, "algebra", "twisting_cochain"), ring)
    t = _build_linear_map(doc.get("map"), C.module, A.module, -1, label="map")
    return TwistingCochain(C, A, t, check=False)


def _build_dcsh_maps(doc, source_mod, target_mod, max_degree):
    maps_doc = _get(doc, "maps", "dcsh_family")
    _require(isinstance(maps_doc, dict) and maps_doc,
             "maps must be a nonempty object keyed by arity")
    maps = {}
    for key, entries in maps_doc.items():
        try:
            k = int(key)
        except ValueError:
            raise DocumentError("map arity key %r is not an integer" % key)
        _require(k >= 1, "map arity must be at least 1, got %d", k)
        if k == 1:
            maps[1] = _build_linear_map(entries, source_mod, target_mod, 0,
                                        label="maps[1]")
        else:
            power = tensor_many([target_mod] * k, max_degree + k - 1)
            maps[k] = _build_tensor_valued_map(entries, source_mod,
                                               [target_mod] * k, power, k - 1,
                                               label="maps[%d]" % k)
    _require(1 in maps, "a coherent family needs its arity-1 map")
    return maps


def build_dcsh_family(doc, ring=None):
    """Returns (family, source, target); the ends may be Hopf algebras."""
    src_doc = _get(doc, "source", "dcsh_family")
    tgt_doc = _get(doc, "target", "dcsh_family")
    hopf_ends = (src_doc.get("kind") == "hopf_algebra")
    if hopf_ends:
        _require(tgt_doc.get("kind") == "hopf_algebra",
                 "source and target must both be Hopf algebras or both coalgebras")
        src, tgt = build_hopf(src_doc, ring), build_hopf(tgt_doc, ring)
    else:
        src, tgt = build_coalgebra(src_doc, ring), build_coalgebra(tgt_doc, ring)
    maps = _build_dcsh_maps(doc, src.module, tgt.module,
                            min(src.max_degree, tgt.max_degree))
    fam = DCSHFamily(src.coalgebra if hopf_ends else src,
                     tgt.coalgebra if hopf_ends else tgt,
                     maps, higher_zero=bool(doc.get("higher_zero", False)))
    return fam, src, tgt


def build_module_map(doc, ring=None):
    """Returns (family, theta, M, N): the data check_module_map consumes."""
    theta_doc = _get(doc, "theta", "module_map")
    theta, H, K = build_dcsh_family(theta_doc, ring)
    _require(isinstance(H, HopfAlgebra), "theta must run between Hopf algebras")

    def side(key, hopf):
        sub = _get(doc, key, "module_map")
        C = build_coalgebra(_get(sub, "coalgebra", key), ring)
        sq = tensor(C.module, hopf.module, C.max_degree)
        act = _build_pair_sourced_map(sub.get("action"), [C.module, hopf.module],
                                      sq, C.module, 0, label=key + ".action")
        return ModuleCoalgebra(C, hopf, act)

    M = side("source_module", H)
    N = side("target_module", K)
    maps = _build_dcsh_maps(doc, M.module, N.module,
                            min(M.max_degree, N.max_degree))
    fam = DCSHFamily(M.coalgebra, N.coalgebra, maps,
                     higher_zero=bool(doc.get("higher_zero", False)))
    return fam, theta, M, N


def build_circle_action(doc, ring=None) -> CircleAction:
    C = build_coalgebra(_get(doc, "carrier", "circle_action"), ring)
    ops = _get(doc, "operators", "circle_action")
    _require(isinstance(ops, list) and ops, "operators must be a nonempty list")
    kappa = []
    for n, entries in enumerate(ops):
        kappa.append(_build_linear_map(entries, C.module, C.module, 2 * n + 1,
                                       label="operators[%d]" % n))
    return CircleAction(C, kappa, name=doc.get("name", ""))


def build_simplicial_set(doc) -> SimplicialSet:
    simp_doc = _get(doc, "simplices", "simplicial_set")
    _require(isinstance(simp_doc, dict), "simplices must map dimension to names")
    simplices = {}
    for key, names in simp_doc.items():
        try:
            n = int(key)
        except ValueError:
            raise DocumentError("dimension key %r is not an integer" % key)
        _require(n >= 0 and isinstance(names, list), "bad simplex list at %r", key)
        for nm in names:
            _require(isinstance(nm, str), "simplex names must be strings, got %r", nm)
        simplices[n] = list(names)
    faces = {}
    for entry in _get(doc, "faces", "simplicial_set"):
        _require(isinstance(entry, dict)
                 and {"of", "index", "degeneracies", "base"} <= set(entry),
                 "face entry needs of/index/degeneracies/base, got %r", entry)
        key = (entry["of"], entry["index"])
        _require(key not in faces, "duplicate face entry for %r", key)
        degens = entry["degeneracies"]
        _require(isinstance(degens, list)
                 and all(isinstance(i, int) and i >= 0 for i in degens),
                 "degeneracy word must be a list of nonnegative integers")
        faces[key] = (tuple(degens), entry["base"])
    try:
        return SimplicialSet(simplices, faces, name=doc.get("name", ""))
    except ValueError as e:
        raise DocumentError("inconsistent simplex tables: %s" % e)


# ---------------------------------------------------------------------------
# Emitters: live objects -> documents
# ---------------------------------------------------------------------------

def _module_fields(mod, max_degree):
    gens = []
    for n in sorted(mod.degrees()):
        for g in mod.basis_in(n):
            gens.append({"name": encode_name(g), "degree": n})
    return {"generators": gens, "max_degree": max_degree,
            "coefficients": ring_spec(mod.ring)}


def _map_entries(f, source):
    out = []
    for n in sorted(source.degrees()):
        for g in source.basis_in(n):
            img = f.gen_image(g)
            if img is None or img.is_zero():
                continue
            terms = [[encode_coeff(c), encode_name(h)]
                     for h, c in sorted(img.terms.items(),
                                        key=lambda it: repr(it[0]))]
            out.append({"on": encode_name(g), "terms": terms})
    return out


def _tensor_valued_entries(f, source, factors):
    out = []
    for n in sorted(source.degrees()):
        for g in source.basis_in(n):
            img = f.gen_image(g)
            if img is None or img.is_zero():
                continue
            terms = []
            for h, c in sorted(img.terms.items(), key=lambda it: repr(it[0])):
                parts = split_factors(factors, _flatten_t(h))
                terms.append([encode_coeff(c), [encode_name(p) for p in parts]])
            out.append({"on": encode_name(g), "terms": terms})
    return out


def _pair_sourced_entries(f, factors):
    out = []
    sq = f.source
    for n in sorted(sq.degrees()):
        for g in sq.basis_in(n):
            img = f.gen_image(g)
            if img is None or img.is_zero():
                continue
            a, b = split_factors(factors, _flatten_t(g))
            terms = [[encode_coeff(c), encode_name(h)]
                     for h, c in sorted(img.terms.items(),
                                        key=lambda it: repr(it[0]))]
            out.append({"on": [encode_name(a), encode_name(b)], "terms": terms})
    return out


def complex_to_document(cx, name="") -> dict:
    doc = {"schema": SCHEMA_VERSION, "kind": "chain_complex", "name": name}
    doc.update(_module_fields(cx.module, cx.max_degree))
    if cx.d_degree != -1:
        doc["d_degree"] = cx.d_degree
    doc["differential"] = _map_entries(cx.d, cx.module)
    return doc


def algebra_to_document(A, name="") -> dict:
    doc = complex_to_document(A.complex, name or A.name)
    doc["kind"] = "dg_algebra"
    doc["unit"] = encode_name(A.unit_gen)
    doc["multiplication"] = _pair_sourced_entries(A.mult, [A.module, A.module])
    return doc


def coalgebra_to_document(C, name="") -> dict:
    doc = complex_to_document(C.complex, name or C.name)
    doc["kind"] = "dg_coalgebra"
    doc["coaugmentation"] = encode_name(C.coaug_gen)
    doc["comultiplication"] = _tensor_valued_entries(C.comult, C.module,
                                                     [C.module, C.module])
    doc["counit"] = [[encode_name(g), encode_coeff(c)]
                     for g, c in sorted(C.counit.items(),
                                        key=lambda it: repr(it[0]))
                     if not C.ring.is_zero(c)]
    return doc


def hopf_to_document(H, name="") -> dict:
    doc = algebra_to_document(H.algebra, name or H.name)
    cdoc = coalgebra_to_document(H.coalgebra)
    doc["kind"] = "hopf_algebra"
    for key in ("coaugmentation", "comultiplication", "counit"):
        doc[key] = cdoc[key]
    return doc


def twisting_to_document(tc, name="") -> dict:
    return {"schema": SCHEMA_VERSION, "kind": "twisting_cochain", "name": name,
            "coalgebra": coalgebra_to_document(tc.coalgebra),
            "algebra": algebra_to_document(tc.algebra),
            "map": _map_entries(tc.t, tc.coalgebra.module)}


def dcsh_to_document(fam, name="", source_doc=None, target_doc=None) -> dict:
    src = source_doc or coalgebra_to_document(fam.source)
    tgt = target_doc or coalgebra_to_document(fam.target)
    maps = {}
    for k in sorted(fam.maps):
        f = fam.maps[k]
        if k == 1:
            maps["1"] = _map_entries(f, fam.source.module)
        else:
            maps[str(k)] = _tensor_valued_entries(f, fam.source.module,
                                                  [fam.target.module] * k)
    return {"schema": SCHEMA_VERSION, "kind": "dcsh_family", "name": name,
            "source": src, "target": tgt, "maps": maps,
            "higher_zero": fam.higher_zero}


def circle_action_to_document(a, name="") -> dict:
    return {"schema": SCHEMA_VERSION, "kind": "circle_action",
            "name": name or a.name,
            "carrier": coalgebra_to_document(a.carrier),
            "operators": [_map_entries(k, a.carrier.module) for k in a.kappa]}


def simplicial_to_document(K, name="") -> dict:
    faces = []
    for (x, i) in sorted(K.faces):
        degens, base = K.faces[(x, i)]
        faces.append({"of": x, "index": i, "degeneracies": list(degens),
                      "base": base})
    return {"schema": SCHEMA_VERSION, "kind": "simplicial_set",
            "name": name or K.name,
            "simplices": {str(n): list(K.simplices[n])
                          for n in sorted(K.simplices)},
            "faces": faces}
