import json

import pytest

from conftest import oracle_betti_complex
from stratatop.bundle import (BundleError, HypothesisFailure, ProductBundle, bundle_from_json,
                              duality_iso_D, fiberwise_truncation, flat_cohomology, ob, ob_all)
from stratatop.chain import betti, betti_convolution
from stratatop.corpus import corpus_dir
from stratatop import simp

BUNDLES = ["product_s2_s2", "product_t2_s2", "product_s2_s3", "flat_z3_torus", "flat_z2_rp3", "hopf_explicit",
           "hopf_suspension_ring"]


def _ring_json():
    return json.loads((corpus_dir() / "hopf_suspension_ring.json").read_text())


@pytest.mark.parametrize("name", ["product_s2_s2", "product_t2_s2"])
def test_product_total_betti_is_kunneth(corpus, name):
    bm = corpus(name)
    want = betti_convolution(oracle_betti_complex(bm.base), oracle_betti_complex(bm.fiber))
    assert betti(bm.total_chain()) == want


@pytest.mark.parametrize("name", BUNDLES)
def test_rank_additivity(corpus, name):
    bm = corpus(name)
    for k in range(bm.c + 2):
        try:
            td = fiberwise_truncation(bm, k)
        except HypothesisFailure:
            assert name == "hopf_explicit" and k == 1
            continue
        assert td.exact()
        for r, (a, b, q) in td.dims().items():
            assert a + q == b


def test_hopf_degree_one_truncation_fails(corpus):
    with pytest.raises(HypothesisFailure, match="degree-1"):
        fiberwise_truncation(corpus("hopf_explicit"), 1)


def test_ob_product_s2_s2_vanishes(corpus):
    assert [o.dim for o in ob_all(corpus("product_s2_s2"), 1, 2)] == [0] * 5


def test_ob_ring_values(corpus):
    # hand computation: C* for Q_{>=2} hits the class e1 with e1 u e1 = 1 in H^4
    bm = corpus("hopf_suspension_ring")
    assert [o.dim for o in ob_all(bm, 2, 1)] == [0, 0, 1, 0, 0]
    assert [o.dim for o in ob_all(bm, 1, 2)] == [0, 0, 1, 0, 0]
    assert ob(bm, 2, 1, 2).route == "ring"


def test_duality_iso_when_ob_vanishes(corpus):
    bm = corpus("product_s2_s2")
    for k in range(4):
        for r in range(bm.total_dim + 1):
            d = duality_iso_D(bm, k, max(3 - k, 0), r)
            assert not d.mismatch and d.is_iso


def test_duality_mismatch_on_ring(corpus):
    d = duality_iso_D(corpus("hopf_suspension_ring"), 2, 1, 2)
    assert d.mismatch and d.obstruction.dim == 1


def test_flat_z3_torus_transfer(corpus):
    fc = flat_cohomology(corpus("flat_z3_torus"))
    assert fc["agree"] and fc["coinvariants"] == (1, 2, 1)


def test_flat_z2_rp3_transfer(corpus):
    # antipodal map: degree +1 on S^3, degree -1 on S^2, so only H^0 and H^3 survive
    fc = flat_cohomology(corpus("flat_z2_rp3"))
    assert fc["agree"] and fc["coinvariants"] == (1, 0, 0, 1, 0, 0)


def test_ring_rejects_non_commutative():
    d = _ring_json()
    d["products"]["2,2"][0][1] = ["1"]
    with pytest.raises(BundleError, match="graded commutative"):
        bundle_from_json(d)


def test_ring_rejects_bad_shape():
    d = _ring_json()
    d["top_eval"] = ["1", "0"]
    with pytest.raises(BundleError):
        bundle_from_json(d)


def test_ring_rejects_non_injective_C():
    d = _ring_json()
    d["cotruncations"]["1"]["C_star"]["2"] = [["0"], ["0"]]
    with pytest.raises(BundleError, match="injective"):
        bundle_from_json(d)


def test_ring_pairing_nondegenerate(corpus):
    assert corpus("hopf_suspension_ring").nondegenerate()


def test_product_bundle_from_builders():
    bm = ProductBundle(simp.polygon(3), simp.simplex_boundary(2))
    assert bm.c == 1 and bm.total_dim == 2
    assert betti(bm.total_chain()) == (1, 2, 1)
    assert fiberwise_truncation(bm, 1).exact()
