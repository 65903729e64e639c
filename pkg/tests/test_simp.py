import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import oracle_betti_complex
from stratatop import simp
from stratatop.chain import betti, homology, induced_map, mapping_cone
from stratatop.qla import RationalMatrix, rank, signature

NAMED = {
    "sphere2": (1, 0, 1),
    "sphere3": (1, 0, 0, 1),
    "torus7": (1, 2, 1),
    "rp2_6": (1, 0, 0),
    "cp2_9": (1, 0, 1, 0, 1),
    "circle9": (1, 1),
}


@pytest.mark.parametrize("name", sorted(NAMED))
def test_corpus_betti(corpus, name):
    k = corpus(name)
    assert betti(simp.chain_complex(k)) == NAMED[name] == oracle_betti_complex(k)


def test_builders():
    assert betti(simp.chain_complex(simp.simplex_boundary(4))) == (1, 0, 0, 1)
    assert betti(simp.chain_complex(simp.simplex(3))) == (1, 0, 0, 0)
    assert betti(simp.chain_complex(simp.polygon(5))) == (1, 1)
    assert simp.cross_polytope(3).f_vector() == (6, 12, 8)
    assert simp.torus7().f_vector() == (7, 21, 14)


def test_json_roundtrip():
    k = simp.torus7()
    k2 = simp.SimplicialComplex.from_json(k.to_json())
    assert k2.f_vector() == k.f_vector()
    assert k2.facets() == k.facets()


def test_cone_is_contractible():
    c = simp.cone(simp.torus7())
    assert betti(simp.chain_complex(c)) == (1, 0, 0, 0)
    with pytest.raises(simp.SimplicialError):
        simp.cone(simp.point(), apex=0)


def test_product_and_shuffle_map():
    a, b = simp.polygon(3), simp.polygon(4)
    P, pk, pl = simp.product(a, b)
    assert betti(simp.chain_complex(P)) == (1, 2, 1)
    ez = simp.eilenberg_zilber(a, b, P)
    for r in range(3):
        m = induced_map(ez, r)
        assert rank(m) == m.rows == m.cols


def test_boundary_and_relative():
    d = simp.simplex(3)
    bd = simp.boundary_subcomplex(d)
    assert bd.dims() == [4, 6, 4]
    rel = simp.relative_complex(d, bd)
    assert betti(rel.complex) == (0, 0, 0, 1)


def test_delete_open_star():
    k = simp.simplex_boundary(3)
    out = simp.delete_open_star(k, [0, 1, 2])
    assert betti(simp.chain_complex(out)) == (1, 0, 0)
    with pytest.raises(simp.SimplicialError):
        simp.delete_open_star(k, [0, 1])


def test_non_simplicial_vertex_map():
    with pytest.raises(simp.SimplicialError):
        simp.simplicial_chain_map(simp.polygon(4), simp.polygon(4), [0, 2, 1, 3])


def test_rp2_not_orientable():
    with pytest.raises(simp.OrientationError):
        simp.orientation_signs(simp.rp2_6())


@pytest.mark.parametrize("name", ["sphere2", "sphere3", "torus7", "cp2_9"])
def test_cap_duality_iso(corpus, name):
    assert all(simp.duality_is_iso(corpus(name)).values())


def test_cp2_intersection_form(corpus):
    # the stored orientation makes the generator square to +1
    assert simp.cup_pairing(corpus("cp2_9"), 2) == RationalMatrix([[1]])


def test_torus_cup_form_hyperbolic():
    m = simp.cup_pairing(simp.torus7(), 1)
    assert m.T == -m
    assert rank(m) == 2


@given(st.integers(0, 10 ** 9))
@settings(max_examples=30, deadline=None)
def test_cup_is_graded_commutative_on_classes(seed):
    # a cup b + b cup a evaluates to zero on the fundamental class
    k = simp.torus7()
    C = simp.chain_complex(k)
    rng = random.Random(seed)
    reps = simp._cohomology_reps(C, 1)
    a = simp.Cochain(1, tuple(reps @ [rng.randint(-3, 3) for _ in range(reps.cols)]))
    b = simp.Cochain(1, tuple(reps @ [rng.randint(-3, 3) for _ in range(reps.cols)]))
    ab, ba = simp.cup(k, a, b), simp.cup(k, b, a)
    fc = simp.fundamental_class(k)
    total = sum(x * (p + q) for x, p, q in zip(fc.chain, ab.values, ba.values))
    assert total == 0


def test_lefschetz_on_disk():
    d = simp.simplex(4)
    lef = simp.lefschetz_duals(d)
    assert lef.n == 4
    m = lef.D(0)
    assert m.shape == (1, 1) and rank(m) == 1


def test_simplicial_action_antipodal(corpus):
    k = corpus("octahedron")
    a = simp.SimplicialAction.from_labels(k, [{v: -v for v in k.vertices}])
    info = simp.verify_action(k, a)
    assert info["order"] == 2 and info["free"]
    assert simp.cohomology_action_invariant_dims(k, a) == (1, 0, 0)


def test_action_must_be_simplicial():
    k = simp.polygon(4)
    a = simp.SimplicialAction(k, [[0, 2, 1, 3]])
    with pytest.raises(simp.SimplicialError):
        simp.verify_action(k, a)


def test_relative_cone_les(corpus):
    k = corpus("torus7")
    sub = simp.subcomplex_from(k, [k.simplices(1)[0]])
    assert mapping_cone(sub.inclusion()).les().exact
    assert homology(sub.complex(), 0).dim == 1


def test_novikov_signature_cp2(corpus):
    assert signature(simp.cup_pairing(corpus("cp2_9"), 2)).sigma == 1
