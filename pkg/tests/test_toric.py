import itertools
import random
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from stratatop.corpus import corpus_files, load_polytope_file
from stratatop.toric import (DelzantPolytope, PolytopeError, analyze, box, chop_corner, condition_C,
                             find_generic_direction, hirzebruch, is_generic, morse_indices, primitive,
                             random_delzant_polygon, simplex2, square, verify_delzant)


def h_vector_betti(f):
    """Even Betti numbers of a simple polytope from its face numbers f_0..f_n via h(t) = sum f_i (t-1)^i."""
    n = len(f) - 1
    h = [0] * (n + 1)
    for i, fi in enumerate(f):
        for j in range(i + 1):
            # coefficient of t^j in (t-1)^i
            h[j] += fi * comb(i, j) * (-1) ** (i - j)
    out = []
    for x in h:
        out += [x, 0]
    return tuple(out[:-1])


def test_primitive():
    assert primitive([4, -6]) == (2, -3)
    assert primitive(["1/2", "1/3"]) == (3, 2)
    with pytest.raises(PolytopeError):
        primitive([0, 0])


@pytest.mark.parametrize("p", [simplex2(1), simplex2(3), square(2), hirzebruch(1), hirzebruch(2, 1, 2)],
                         ids=lambda p: p.name)
def test_standard_polygons_are_delzant(p):
    assert verify_delzant(p).valid
    sr = find_generic_direction(p, 3)
    assert sr.found is not None and sr.all_generic_satisfy_C
    assert morse_indices(p, sr.found).betti == h_vector_betti([len(p.vertices), len(p.vertices), 1])


def test_simplex_and_square_betti():
    assert morse_indices(simplex2(), (1, 2)).betti == (1, 0, 1, 0, 1)
    assert morse_indices(square(), (1, 2)).betti == (1, 0, 2, 0, 1)


def test_non_unimodular_corner():
    rep = verify_delzant(DelzantPolytope.polygon([(0, 0), (2, 0), (0, 1)]))
    assert not rep.valid
    assert any(v["vertex"] == 2 and "determinant 2" in v["reason"] for v in rep.violations)


def test_non_simple_vertex():
    # square pyramid: the apex has four edges
    vs = [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 1)]
    es = [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (1, 4), (2, 4), (3, 4)]
    rep = verify_delzant(DelzantPolytope(vs, es))
    assert any(v["vertex"] == 4 and "4 edges" in v["reason"] for v in rep.violations)


def test_non_convex_vertex_order():
    rep = verify_delzant(DelzantPolytope.polygon([(0, 0), (1, 1), (1, 0), (0, 1)]))
    assert not rep.valid


def test_supplied_directions_checked():
    p = simplex2()
    q = DelzantPolytope(p.vertices, p.edges, directions={0: [[1, 0], [1, 1]]})
    assert not verify_delzant(q).valid


def test_bad_inputs():
    with pytest.raises(PolytopeError):
        DelzantPolytope([], [])
    with pytest.raises(PolytopeError):
        DelzantPolytope([(0, 0), (0, 0)], [(0, 1)])
    with pytest.raises(PolytopeError):
        DelzantPolytope([(0, 0), (1, 0)], [(0, 5)])
    with pytest.raises(PolytopeError):
        DelzantPolytope.from_json({"vertices": [[0, 0, 0]]})


def test_genericity():
    assert not is_generic(square(), (1, 0))
    assert not is_generic(square(), (1, 1))
    assert is_generic(square(), (1, 2))
    with pytest.raises(PolytopeError):
        condition_C(square(), (1, 1))


def test_box_violates_condition_C():
    p = box(10, 1, 1)
    assert verify_delzant(p).valid
    ok, wit = condition_C(p, (1, 2, 3))
    assert not ok and wit == (3, 4)
    rep = morse_indices(p, (1, 2, 3))
    assert rep.betti == h_vector_betti([8, 12, 6, 1]) == (1, 0, 3, 0, 3, 0, 1)
    assert rep.moore == {"all": False, "degrees": "k <= 0 or k > 6"}


def test_box_search():
    # the long edge needs a small first coordinate: nothing of max-norm <= 2 works
    sr = find_generic_direction(box(10, 1, 1), 2, exhaustive=True)
    assert sr.found is None and sr.generic == 32
    assert not sr.all_generic_satisfy_C
    assert condition_C(box(10, 1, 1), (1, 11, 12)) == (True, None)


def test_empty_search():
    sr = find_generic_direction(square(), 0)
    assert (sr.found, sr.tested) == (None, 0)
    assert "morse" not in analyze(square(), None, 0)


def test_analyze_invalid_stops_early():
    out = analyze(DelzantPolytope.polygon([(0, 0), (2, 0), (0, 1)]))
    assert not out["delzant"]["valid"] and "morse" not in out


def test_chop_too_deep():
    with pytest.raises(PolytopeError):
        chop_corner(simplex2(2), 0, 2)


def test_json_roundtrip():
    p = hirzebruch(2)
    q = DelzantPolytope.from_json(p.to_json())
    assert q.vertices == p.vertices and q.edges == p.edges


@pytest.mark.parametrize("name", [n for n in corpus_files() if n.startswith("polygon_")])
def test_corpus_polygons(name):
    p, _ = load_polytope_file(name)
    assert verify_delzant(p).valid
    sr = find_generic_direction(p, 3)
    assert sr.all_generic_satisfy_C


@given(st.integers(0, 10 ** 9))
@settings(max_examples=40, deadline=None)
def test_random_chopped_polygons(seed):
    p = random_delzant_polygon(random.Random(seed))
    assert verify_delzant(p).valid
    want = h_vector_betti([len(p.vertices), len(p.vertices), 1])
    for x in itertools.product(range(-3, 4), repeat=2):
        if is_generic(p, x):
            assert condition_C(p, x)[0]
            assert morse_indices(p, x).betti == want
