import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from vbcm import band, chain, linalg
from vbcm.band import BandDatum, CurveType, DualGraph
from vbcm.errors import Disconnected, InvalidBandDatum, LengthNotMultiple, ValidationError
from vbcm.field import GF, QQ


def test_nonperiodic_examples():
    assert not band.is_nonperiodic((1, 2, 1, 2), 2)
    assert band.is_nonperiodic((1, 2, 1, 3), 2)
    assert band.is_nonperiodic((0,), 1)
    with pytest.raises(LengthNotMultiple):
        band.is_nonperiodic((1, 2, 3), 2)


def test_band_datum_validation():
    with pytest.raises(InvalidBandDatum):
        BandDatum(1, (1, 1), 1, 1)
    with pytest.raises(InvalidBandDatum):
        BandDatum(1, (1,), 1, 0)
    with pytest.raises(InvalidBandDatum):
        BandDatum(2, (1, 2, 3), 1, 1)
    with pytest.raises(InvalidBandDatum):
        BandDatum(1, (1,), 0, 1)
    with pytest.raises(InvalidBandDatum):
        BandDatum(1, (1,), 1, 7, GF(7))


def test_canonical_form_examples():
    assert band.canonical_form(BandDatum(1, (2, 0), 1, 1)).d == (0, 2)
    assert band.canonical_form(BandDatum(2, (1, 0, 0, 1), 1, 1)).d == (0, 1, 1, 0)


def test_isomorphism_examples():
    assert band.are_isomorphic(BandDatum(1, (1, 2), 1, 3), BandDatum(1, (2, 1), 1, 3))
    assert not band.are_isomorphic(BandDatum(1, (1, 2), 1, 3), BandDatum(1, (1, 2), 1, 4))
    assert not band.are_isomorphic(BandDatum(1, (1, 2), 1, 3), BandDatum(1, (1, 2), 2, 3))
    with pytest.raises(InvalidBandDatum):
        band.are_isomorphic(BandDatum(1, (1, 2), 1, 3), BandDatum(2, (1, 2), 1, 3))


def test_rank_degree_examples():
    assert band.rank_degree(BandDatum(2, (2, 0, 1, 1), 3, 5)) == (6, (3, 1))
    assert band.rank_degree(BandDatum(1, (0,), 1, 1)) == (1, (0,))


def test_jordan_block_shapes():
    assert band.build_gluing(BandDatum(1, (4, 1), 1, 3)).pair_blocks[-1] == ((3,),)
    assert band.jordan_block(2, 5, QQ) == [[5, 0], [1, 5]]


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=12))
def test_booth_matches_brute_force(blocks):
    k = band.least_rotation(blocks)
    assert blocks[k:] + blocks[:k] == min(blocks[i:] + blocks[:i] for i in range(len(blocks)))


def _random_datum(rng, field=QQ):
    while True:
        s = rng.randint(1, 3)
        r = rng.randint(1, 3)
        d = tuple(rng.randint(-2, 2) for _ in range(r * s))
        if band.is_nonperiodic(d, s):
            return BandDatum(s, d, rng.randint(1, 3), field.random_nonzero(rng), field)


def test_gluing_node_matrices_invertible():
    rng = random.Random(31)
    for field in (QQ, GF(3)):
        for _ in range(50):
            b = _random_datum(rng, field)
            g = band.build_gluing(b)
            for M in g.node_matrices():
                assert len(M) == b.m * b.r
                assert linalg.det(M, field) != 0
            assert all(linalg.is_identity(B) for B in g.pair_blocks[:-1])


def test_enumerate_nonneg_examples_and_properties():
    assert band.enumerate_nonneg(1, 1, (2,)) == [(2,)]
    assert band.enumerate_nonneg(1, 2, (2,)) == [(0, 2)]
    assert band.enumerate_nonneg(2, 1, (1, 0)) == [(1, 0)]
    assert band.nu_count(1, 1, (0,)) == 1
    for s, r, delta in [(1, 4, (3,)), (2, 2, (2, 1)), (2, 3, (1, 2)), (3, 2, (1, 0, 2))]:
        out = band.enumerate_nonneg(s, r, delta)
        for d in out:
            assert band.is_nonperiodic(d, s)
            assert band.rank_degree(BandDatum(s, d, 1, 1)) == (r, delta)
        for a, b in itertools.combinations(out, 2):
            assert band.canonical_sequence(a, s) != band.canonical_sequence(b, s)


def test_nu_counts_on_the_diagonal():
    # the number of aperiodic necklaces of r beads summing to r
    counts = [band.nu_count(1, r, (r,)) for r in range(1, 8)]
    assert counts == [1, 1, 3, 8, 25, 75, 245]
    assert all(a < b for a, b in zip(counts[1:], counts[2:]))


def test_cut_cycle():
    data = band.cut_cycle(BandDatum(1, (2,), 1, 1))
    assert data.s == 1 and data.weights == ((2,),)
    b = BandDatum(2, (1, -1, 0, 3), 2, 5)
    data = band.cut_cycle(b)
    assert data.ranks == (2, 2, 2, 2)
    pieces = chain.decompose_torsion_free(data)
    assert all(p.start == 1 and p.end == 4 for p in pieces)
    assert sorted(p.degrees for p in pieces) == [(1, -1, 0, 3)] * 2


GRAPH_CASES = [
    ((0,), [], CurveType.FINITE),
    ((1,), [], CurveType.TAME_BOUNDED),
    ((0,), [(0, 0)], CurveType.TAME_UNBOUNDED),
    ((0, 0, 0, 0), [(0, 1), (1, 2), (2, 3), (3, 0)], CurveType.TAME_UNBOUNDED),
    ((0, 0, 0), [(0, 1), (1, 2), (0, 2), (0, 0)], CurveType.WILD),
    ((0,), [(0, 0), (0, 0)], CurveType.WILD),
    ((3,), [], CurveType.WILD),
]


@pytest.mark.parametrize("genera,edges,want", GRAPH_CASES)
def test_curve_type(genera, edges, want):
    assert band.curve_vb_type(DualGraph(genera, edges)) is want


def test_curve_type_errors():
    with pytest.raises(Disconnected):
        band.curve_vb_type(DualGraph((0, 0), []))
    with pytest.raises(ValidationError):
        DualGraph((0,), [(0, 1)])


def test_json_round_trips():
    b = BandDatum(2, (1, 0, 0, 1), 2, 3, GF(5))
    assert BandDatum.from_json(b.to_json(), GF(5)) == b
    g = DualGraph((0, 1), [(0, 1)])
    assert DualGraph.from_json(g.to_json()) == g
    with pytest.raises(ValidationError):
        BandDatum.from_json({"s": 1})
