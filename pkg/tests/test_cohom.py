import itertools
from math import gcd

import pytest

from vbcm import band, cohom
from vbcm.band import BandDatum
from vbcm.cohom import CohomDims
from vbcm.errors import NotCoprime
from vbcm.field import GF, QQ


def test_pos_neg_parts():
    assert (cohom.pos_part(3), cohom.neg_part(3)) == (3, 0)
    assert (cohom.pos_part(0), cohom.neg_part(0)) == (0, 0)
    assert (cohom.pos_part(-2), cohom.neg_part(-2)) == (0, 2)


def test_positive_parts():
    parts = cohom.positive_parts((1, -1, 2, 0, -1))
    assert [(p.start, p.entries) for p in parts] == [(0, (1,)), (2, (2, 0))]
    assert [p.length for p in cohom.positive_parts((0, 3, 1))] == [3]
    assert cohom.positive_parts((-1, -2)) == []
    # a run that wraps around the end of the sequence
    parts = cohom.positive_parts((2, -1, -1, 0))
    assert [(p.start, p.entries) for p in parts] == [(3, (0, 2))]


def test_theta_examples():
    assert cohom.theta((0, 0, 0)) == 3
    assert cohom.theta((1, -1)) == 2
    assert cohom.theta((-1, -3)) == 0
    for n in range(1, 6):
        assert cohom.theta((0,) * n) == n


def test_theta_bound():
    for d in itertools.product(range(-1, 2), repeat=4):
        parts = cohom.positive_parts(d)
        assert cohom.theta(d) <= len(parts) + sum(p.length for p in parts)


@pytest.mark.parametrize(
    "b,want",
    [
        (BandDatum(1, (0,), 1, 1), (1, 1)),
        (BandDatum(1, (2,), 1, 5), (2, 0)),
        (BandDatum(1, (-1,), 1, 2), (0, 1)),
        (BandDatum(1, (0,), 2, 1), (1, 1)),
        (BandDatum(1, (0,), 2, 3), (0, 0)),
    ],
)
def test_cohomology_examples(b, want):
    assert cohom.cohomology(b) == CohomDims(*want)
    assert cohom.cech_oracle(band.build_gluing(b)) == CohomDims(*want)


def test_cech_euler_characteristic():
    g = band.build_gluing(BandDatum(2, (1, 1), 1, 4))
    h = cohom.cech_oracle(g)
    assert h.h0 - h.h1 == 2


def test_euler_characteristic_and_oracle_small():
    for field in (QQ, GF(7)):
        for n in range(1, 4):
            for d in itertools.product(range(-2, 3), repeat=n):
                if not band.is_nonperiodic(d, 1):
                    continue
                for m in (1, 2):
                    for lam in (1, 2):
                        b = BandDatum(1, d, m, lam, field)
                        h = cohom.cohomology(b)
                        assert h.h0 - h.h1 == m * sum(d)
                        assert cohom.cech_oracle(band.build_gluing(b)) == h


def test_suitability_examples():
    assert cohom.is_suitable((2, 3))
    assert not cohom.is_suitable((0, 1, 1, 0, 2))
    assert not cohom.is_suitable((1, 1, 0))
    assert not cohom.is_suitable((0, 0, 2))
    assert not cohom.is_suitable((0, 0))
    assert not cohom.is_suitable((1, -1, 3))
    assert cohom.is_suitable((0, 2, 1))


def test_generic_spanning_examples():
    assert cohom.is_generically_spanned(BandDatum(1, (0,), 1, 1))
    assert not cohom.is_generically_spanned(BandDatum(1, (0,), 2, 1))
    assert not cohom.is_generically_spanned(BandDatum(1, (0,), 1, 3))
    for m, lam in [(1, 1), (3, 7)]:
        assert cohom.is_generically_spanned(BandDatum(1, (2, 3), m, lam))


def test_suitable_sequences_have_no_h1():
    for n in range(1, 6):
        for d in itertools.product(range(0, 3), repeat=n):
            if not cohom.is_suitable(d):
                continue
            for s in (x for x in range(1, n + 1) if n % x == 0):
                if not band.is_nonperiodic(d, s):
                    continue
                for m in (1, 2):
                    assert cohom.cohomology(BandDatum(s, d, m, 3)).h1 == 0


def test_atiyah_examples():
    assert cohom.atiyah_cohom(2, 3, 1) == CohomDims(3, 0)
    assert cohom.atiyah_cohom(1, 0, 1, at_origin=True) == CohomDims(1, 1)
    assert cohom.atiyah_cohom(1, 0, 1) == CohomDims(0, 0)
    assert cohom.atiyah_cohom(3, -2, 2) == CohomDims(0, 4)
    with pytest.raises(NotCoprime):
        cohom.atiyah_cohom(2, 4, 1)


def test_atiyah_riemann_roch():
    for r in range(1, 5):
        for d in range(-6, 7):
            if gcd(r, d) != 1:
                continue
            for n in (1, 2, 3):
                for origin in (False, True):
                    h = cohom.atiyah_cohom(r, d, n, origin)
                    assert h.h0 - h.h1 == n * d
