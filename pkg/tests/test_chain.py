import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import oracle_betti_chain
from stratatop.chain import (ChainComplex, ChainComplexError, ChainMap, betti, circle_complex, cohomology,
                             cotruncate_Q, direct_sum, dualize, ez_check, homotopy_pushout, identity_map,
                             induced_map, invariants, coinvariants, mapping_cone, mayer_vietoris, point_complex,
                             short_exact_report, tensor, transfer_report, truncate, truncation_contract)
from stratatop.qla import RationalMatrix
from stratatop.randgen import (random_augmented_complex, random_augmented_map, random_chain_map, random_complex,
                               random_cyclic_action)

seeds = st.integers(0, 10 ** 9)


def test_circle_and_point():
    assert betti(circle_complex()) == (1, 1)
    assert betti(point_complex()) == (1,)
    assert betti(circle_complex(), reduced=True) == (0, 1)


def test_rejects_non_complex():
    with pytest.raises(ChainComplexError):
        ChainComplex([1, 1, 1], {1: RationalMatrix([[1]]), 2: RationalMatrix([[1]])})


def test_json_roundtrip():
    c = random_complex(random.Random(3), 3, 5).complex
    d = ChainComplex.from_json(c.to_json())
    assert d.dims == c.dims
    assert all(d.boundary(r) == c.boundary(r) for r in range(1, c.top_degree + 1))


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_betti_matches_oracle_and_construction(seed):
    rc = random_complex(random.Random(seed), 4, 7)
    b = betti(rc.complex)
    assert b == oracle_betti_chain(rc.complex)
    assert b[:len(rc.expected_betti)] == rc.expected_betti[:len(b)]


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_euler_characteristic(seed):
    c = random_complex(random.Random(seed), 4, 7).complex
    assert c.euler_characteristic() == sum((-1) ** r * h for r, h in enumerate(betti(c)))


@given(seeds, st.integers(-1, 6))
@settings(max_examples=60, deadline=None)
def test_truncation_contract(seed, k):
    c = random_complex(random.Random(seed), 4, 7).complex
    assert truncation_contract(c, truncate(c, k)) == []


@given(seeds, st.integers(0, 5))
@settings(max_examples=30, deadline=None)
def test_cotruncation_short_exact(seed, k):
    c = random_complex(random.Random(seed), 4, 6).complex
    ct = cotruncate_Q(c, k)
    rep = short_exact_report(ct.truncation.incl, ct.C_map)
    assert all(v["exact"] for v in rep.values())


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_cone_long_exact_sequence(seed):
    rng = random.Random(seed)
    X, Y = random_complex(rng, 3, 5), random_complex(rng, 3, 5)
    assert mapping_cone(random_chain_map(rng, X, Y)).les().exact


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_induced_maps_compose(seed):
    rng = random.Random(seed)
    X, Y, Z = (random_complex(rng, 3, 5) for _ in range(3))
    f, g = random_chain_map(rng, X, Y), random_chain_map(rng, Y, Z)
    gf = g.compose(f)
    for r in range(4):
        assert induced_map(gf, r) == induced_map(g, r) @ induced_map(f, r)


def test_identity_induces_identity():
    c = random_complex(random.Random(5), 3, 6).complex
    for r in c.degrees():
        assert induced_map(identity_map(c), r) == RationalMatrix.identity(betti(c)[r])


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_mayer_vietoris(seed):
    rng = random.Random(seed)
    X, A, B = (random_complex(rng, 3, 5) for _ in range(3))
    if not sum(X.complex.dims):
        return
    po = homotopy_pushout(random_chain_map(rng, X, A), random_chain_map(rng, X, B))
    assert mayer_vietoris(po).exact


@given(seeds)
@settings(max_examples=20, deadline=None)
def test_reduced_mayer_vietoris(seed):
    rng = random.Random(seed)
    X, A, B = (random_augmented_complex(rng, 3, 5) for _ in range(3))
    po = homotopy_pushout(random_augmented_map(rng, X, A), random_augmented_map(rng, X, B))
    assert mayer_vietoris(po, reduced=True).exact


def test_pushout_needs_common_nonempty_source():
    e = ChainComplex([0])
    f = ChainMap(e, point_complex(), {0: RationalMatrix.zeros(1, 0)})
    with pytest.raises(ChainComplexError):
        homotopy_pushout(f, f)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_kunneth(seed):
    rng = random.Random(seed)
    c, d = random_complex(rng, 2, 4).complex, random_complex(rng, 2, 4).complex
    assert ez_check(c, d)["agree"]


def test_tensor_of_circles():
    assert betti(tensor(circle_complex(), circle_complex())) == (1, 2, 1)


def test_direct_sum_adds_betti():
    a, b = circle_complex(), point_complex()
    assert betti(direct_sum([a, b])) == (2, 1)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_cohomology_dims(seed):
    c = random_complex(random.Random(seed), 3, 5).complex
    cc = dualize(c)
    assert tuple(cohomology(cc, r).dim for r in c.degrees()) == betti(c)


@given(seeds)
@settings(max_examples=25, deadline=None)
def test_transfer(seed):
    a = random_cyclic_action(random.Random(seed))
    rep = transfer_report(a.complex, a)
    assert rep["agree"]
    inv, incl = invariants(a.complex, a)
    q, quot = coinvariants(a.complex, a)
    assert betti(inv) == betti(q) == tuple(rep["homology_invariants"])[:len(betti(q))]


@given(seeds, st.integers(0, 3))
@settings(max_examples=20, deadline=None)
def test_equivariant_truncation(seed, k):
    a = random_cyclic_action(random.Random(seed))
    tr = truncate(a.complex, k, a)
    assert truncation_contract(a.complex, tr) == []
    assert tr.action is not None
