"""Corpus location and JSON loading for complexes, bundles and two-strata spaces.

A complex may be given inline ({"vertices", "facets"}), by corpus name ("cp2_9"),
or as a small expression:
    {"simplex": n}, {"simplex_boundary": n}, {"point": true},
    {"product": [A, B]}, {"delete_facet": {"of": A, "facet": [...]}}
"""
from __future__ import annotations

import json
import os
from pathlib import Path

from . import simp


class InputError(ValueError):
    """Malformed input file or schema violation (CLI exit code 1)."""


def corpus_dir() -> Path:
    env = os.environ.get("STRATATOP_CORPUS")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "corpus"


def corpus_files() -> list:
    return sorted(p.name for p in corpus_dir().glob("*.json"))


def read_json(path) -> dict:
    p = Path(path)
    if not p.exists():
        # "corpus/x.json", "x.json" or plain "x" fall back to the corpus directory
        for alt in (corpus_dir() / p.name, corpus_dir() / (p.name + ".json")):
            if alt.is_file():
                p = alt
                break
    try:
        with open(p) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError("no such file: %s" % path) from None
    except json.JSONDecodeError as e:
        raise InputError("%s: invalid JSON at line %d column %d: %s" % (path, e.lineno, e.colno, e.msg)) from None


_cache: dict = {}


def load_named(name: str) -> simp.SimplicialComplex:
    key = (str(corpus_dir()), name)
    if key not in _cache:
        obj = read_json(corpus_dir() / (name if name.endswith(".json") else name + ".json"))
        _cache[key] = resolve_complex(obj, where=name)
    return _cache[key]


def resolve_complex(spec, where: str = "complex") -> simp.SimplicialComplex:
    try:
        if isinstance(spec, str):
            return load_named(spec)
        if not isinstance(spec, dict):
            raise InputError("%s: expected a complex, got %r" % (where, type(spec).__name__))
        if "facets" in spec:
            return simp.SimplicialComplex.from_json(spec)
        if "simplex" in spec:
            return simp.simplex(int(spec["simplex"]))
        if "simplex_boundary" in spec:
            return simp.simplex_boundary(int(spec["simplex_boundary"]))
        if spec.get("point"):
            return simp.point()
        if "product" in spec:
            a, b = spec["product"]
            return simp.product(resolve_complex(a, where + ".product[0]"), resolve_complex(b, where + ".product[1]"))[0]
        if "delete_facet" in spec:
            d = spec["delete_facet"]
            return simp.delete_open_star(resolve_complex(d["of"], where + ".of"), [simp._label(v) for v in d["facet"]])
    except simp.SimplicialError as e:
        raise InputError("%s: %s" % (where, e)) from None
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError("%s: malformed complex (%s)" % (where, e)) from None
    raise InputError("%s: unrecognised complex expression with keys %s" % (where, sorted(spec)))


def load_complex_file(path) -> simp.SimplicialComplex:
    obj = read_json(path)
    if obj.get("kind", "complex") != "complex":
        raise InputError("%s: expected kind 'complex', found %r" % (path, obj.get("kind")))
    return resolve_complex(obj, where=str(path))


def load_bundle(obj: dict, where: str = "bundle"):
    from .bundle import BundleError, bundle_from_json
    try:
        return bundle_from_json(obj, resolver=lambda s: resolve_complex(s, where))
    except BundleError as e:
        raise InputError("%s: %s" % (where, e)) from None


def load_bundle_file(path):
    obj = read_json(path)
    if obj.get("kind") != "bundle":
        raise InputError("%s: expected kind 'bundle', found %r" % (path, obj.get("kind")))
    return load_bundle(obj, where=str(path))


def load_space(obj: dict, where: str = "space"):
    from .strat import TwoStrataSpace, StratError
    for key in ("M", "bundle"):
        if key not in obj:
            raise InputError("%s: missing field %r" % (where, key))
    M = resolve_complex(obj["M"], where + ".M")
    bobj = obj["bundle"]
    if isinstance(bobj, str):
        bobj = read_json(corpus_dir() / (bobj if bobj.endswith(".json") else bobj + ".json"))
    bm = load_bundle(bobj, where + ".bundle")
    orient = obj.get("orientation", 1)
    if orient not in (1, -1):
        raise InputError("%s: orientation must be 1 or -1" % where)
    try:
        return TwoStrataSpace(M, bm, obj.get("identification", "identity"), orientation=orient,
                              name=obj.get("name", ""), perversity=obj.get("perversity"))
    except (StratError, simp.SimplicialError) as e:
        raise InputError("%s: %s" % (where, e)) from None


def load_space_file(path):
    obj = read_json(path)
    if obj.get("kind") != "space":
        raise InputError("%s: expected kind 'space', found %r" % (path, obj.get("kind")))
    return load_space(obj, where=str(path))


def load_polytope_file(path):
    from .toric import DelzantPolytope, PolytopeError
    obj = read_json(path)
    if obj.get("kind", "polytope") != "polytope":
        raise InputError("%s: expected kind 'polytope', found %r" % (path, obj.get("kind")))
    try:
        return DelzantPolytope.from_json(obj), obj.get("direction")
    except (PolytopeError, TypeError, ValueError, ZeroDivisionError) as e:
        raise InputError("%s: %s" % (path, e)) from None


def load_any(path):
    """(kind, object) for any corpus JSON file."""
    obj = read_json(path)
    kind = obj.get("kind", "complex")
    if kind == "complex":
        return kind, resolve_complex(obj, where=str(path))
    if kind == "bundle":
        return kind, load_bundle(obj, where=str(path))
    if kind == "space":
        return kind, load_space(obj, where=str(path))
    if kind == "polytope":
        return kind, load_polytope_file(path)[0]
    if kind == "chain_complex":
        from .chain import ChainComplex, ChainComplexError
        try:
            return kind, ChainComplex.from_json(obj)
        except (ChainComplexError, KeyError, TypeError, ValueError) as e:
            raise InputError("%s: %s" % (path, e)) from None
    raise InputError("%s: unknown kind %r" % (path, kind))
