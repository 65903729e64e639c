"""Quick built-in checks over the shipped corpus, run by `stratatop selftest`."""
from __future__ import annotations

import random

from . import simp
from .bundle import HypothesisFailure, fiberwise_truncation, flat_cohomology, ob
from .chain import homotopy_pushout, mayer_vietoris, truncate, truncation_contract
from .corpus import corpus_files, load_any, load_polytope_file
from .qla import RationalMatrix, signature
from .randgen import random_chain_map, random_complex
from .strat import duality_check, intersection_form_IX, sigma_ih
from .toric import find_generic_direction, morse_indices, verify_delzant


def _qla_signature():
    a = signature(RationalMatrix([[0, 1], [1, 0]])).sigma
    b = signature(RationalMatrix([[1]])).sigma
    return a == 0 and b == 1, "sigma(H) = %d, sigma([1]) = %d" % (a, b)


def _chain_truncation():
    rng = random.Random(7)
    for _ in range(20):
        C = random_complex(rng, 4, 6).complex
        for k in range(C.top_degree + 2):
            if truncation_contract(C, truncate(C, k)):
                return False, "contract fails at k = %d" % k
    return True, "20 random complexes"


def _chain_mv():
    rng = random.Random(11)
    for _ in range(20):
        X, A, B = (random_complex(rng, 3, 5) for _ in range(3))
        if not sum(X.complex.dims):
            continue
        po = homotopy_pushout(random_chain_map(rng, X, A), random_chain_map(rng, X, B))
        if not mayer_vietoris(po).exact:
            return False, "sequence not exact"
    return True, "20 random pushouts"


def _simp_duality():
    for name in ("sphere2", "sphere3", "torus7", "cp2_9"):
        _, k = load_any(name)
        if not all(simp.duality_is_iso(k).values()):
            return False, name
    return True, "cap with the fundamental class is an isomorphism"


def _bundle_splitting():
    for name in ("product_s2_s2", "flat_z3_torus", "hopf_suspension_ring"):
        _, bm = load_any(name)
        for k in range(0, bm.c + 2):
            try:
                td = fiberwise_truncation(bm, k)
            except HypothesisFailure:
                continue
            if not td.exact():
                return False, "%s k=%d" % (name, k)
    return True, "rank additivity holds"


def _bundle_ob_product():
    _, bm = load_any("product_s2_s2")
    dims = [ob(bm, 1, 2, i).dim for i in range(bm.n)]
    return not any(dims), "ob dims %s" % dims


def _bundle_ob_ring():
    _, bm = load_any("hopf_suspension_ring")
    d = ob(bm, 2, 1, 2).dim
    return d == 1, "ob_2(2,1) has dim %d" % d


def _bundle_flat():
    _, bm = load_any("flat_z3_torus")
    fc = flat_cohomology(bm)
    return fc["agree"] and tuple(fc["coinvariants"]) == (1, 2, 1), "coinvariant Betti %s" % (fc["coinvariants"],)


def _strat_signature():
    want = {"cp2_isolated": 1, "d4": 0, "product_double": 0}
    for name, s in want.items():
        _, xs = load_any(name)
        r = intersection_form_IX(xs)
        if not (r.sigma_IX == r.sigma_M == s and r.block_form and sigma_ih(xs)["sigma_IH"] == s):
            return False, "%s: sigma(IX) = %d" % (name, r.sigma_IX)
    return True, "sigma(IX) = sigma(M,dM) on %d spaces" % len(want)


def _strat_duality():
    for name in ("cp2_isolated", "circle_in_s4"):
        _, xs = load_any(name)
        d = duality_check(xs)
        if not (d.dims_match and d.diagram_commutes):
            return False, name
    return True, "dimensions symmetric and diagram commutes"


def _strat_hopf():
    _, xs = load_any("hopf_control")
    try:
        duality_check(xs)
    except HypothesisFailure as e:
        return "degree-1" in str(e), str(e)
    return False, "no failure reported"


def _toric():
    for name in corpus_files():
        if not name.startswith("polygon_"):
            continue
        p, _ = load_polytope_file(name)
        if not verify_delzant(p).valid:
            return False, name + " not Delzant"
        sr = find_generic_direction(p, 3)
        if sr.found is None or not sr.all_generic_satisfy_C:
            return False, name
        rep = morse_indices(p, sr.found)
        if sum(rep.betti) != len(p.vertices) or rep.betti[1::2] != (0,) * p.n:
            return False, name + " Betti"
    return True, "all corpus polygons"


def _corpus_load():
    for name in corpus_files():
        load_any(name)
    return True, "%d files" % len(corpus_files())


CHECKS = [
    ("qla.signature", _qla_signature),
    ("chain.truncation", _chain_truncation),
    ("chain.mayer_vietoris", _chain_mv),
    ("simp.duality", _simp_duality),
    ("bundle.splitting", _bundle_splitting),
    ("bundle.ob_product", _bundle_ob_product),
    ("bundle.ob_ring", _bundle_ob_ring),
    ("bundle.flat_transfer", _bundle_flat),
    ("strat.signature", _strat_signature),
    ("strat.duality", _strat_duality),
    ("strat.hopf_control", _strat_hopf),
    ("toric.polygons", _toric),
    ("corpus.load", _corpus_load),
]


def run_checks(filter_: str | None = None) -> list:
    out = []
    for name, fn in CHECKS:
        if filter_ and filter_ not in name:
            continue
        try:
            ok, detail = fn()
        except Exception as e:  # a broken corpus file should show up as a failed check
            ok, detail = False, "%s: %s" % (type(e).__name__, e)
        out.append({"name": name, "ok": bool(ok), "detail": detail})
    return out
