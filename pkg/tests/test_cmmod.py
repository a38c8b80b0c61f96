import itertools
import warnings
from math import gcd

import pytest

from vbcm import band, cmmod, cohom
from vbcm.cmmod import CMModuleDescriptor, CuspAdvisoryWarning, CuspSingularity, QCuspData, SimpleEllipticSingularity
from vbcm.errors import LengthNotMultiple, NotCoprime, PreconditionError, RangeViolation, ValidationError, ZeroLambda
from vbcm.field import GF, QQ


def cusp(s, b):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CuspAdvisoryWarning)
        return CuspSingularity(s, b)


def _nd_direct(d, b):
    r = len(d) // len(b)
    diff = tuple(x - y for x, y in zip(d, b * r))
    return sum(max(x + 1, 0) for x in diff) - cohom.theta(diff)


def test_advisory_warning():
    with pytest.warns(CuspAdvisoryWarning):
        CuspSingularity(2, (2, 2))
    with pytest.warns(CuspAdvisoryWarning):
        CuspSingularity(1, (1,))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        CuspSingularity(2, (3, 2))
    with pytest.raises(ValidationError):
        CuspSingularity(2, (3,))
    with pytest.raises(ValidationError):
        CuspSingularity(1, (0,))


def test_nd_examples():
    sing = cusp(1, (3,))
    assert cmmod.n_d((3,), sing) == 0
    assert cmmod.n_d((4,), sing) == 1
    assert cmmod.n_d((1,), sing) == 0
    with pytest.raises(LengthNotMultiple):
        cmmod.n_d((1, 2, 3), cusp(2, (3, 3)))


def test_nd_vanishes_on_b():
    for s in range(1, 5):
        for b in itertools.product(range(1, 6), repeat=s):
            assert cmmod.n_d(b, cusp(s, b)) == 0


def test_cusp_rank_one_example():
    out = cmmod.enumerate_cm_cusp(cusp(1, (3,)), 1)
    assert [x.variant for x in out] == ["ring", "band", "band", "band"]
    bands = {x.d: x.lambda_excluded for x in out if x.variant == "band"}
    assert bands == {(1,): ("0/1",), (2,): ("0/1",), (3,): ("0/1", "1/1")}
    assert cmmod.enumerate_cm_cusp(cusp(1, (3,)), 0) == []


def test_cusp_special_module():
    out = cmmod.enumerate_cm_cusp(cusp(1, (3,)), 2)
    special = [x for x in out if x.variant == "special"]
    assert len(special) == 1 and special[0].m == 1 and special[0].rank == special[0].m + 1
    assert not any(x.variant == "ring" for x in out)


@pytest.mark.parametrize("s,b,rank", [(1, (3,), 3), (2, (2, 3), 2), (2, (3, 3), 3), (3, (2, 3, 2), 2)])
def test_cusp_band_invariants(s, b, rank):
    sing = cusp(s, b)
    out = cmmod.enumerate_cm_cusp(sing, rank)
    assert out == cmmod.enumerate_cm_cusp(sing, rank)
    assert len(set(out)) == len(out)
    seen = set()
    for x in out:
        if x.variant != "band":
            continue
        r = len(x.d) // s
        assert cohom.is_suitable(x.d)
        assert band.is_nonperiodic(x.d, s)
        assert x.rank == rank == x.m * (r + _nd_direct(x.d, b))
        key = band.canonical_sequence(x.d, s)
        assert key not in seen
        seen.add(key)


def test_cusp_sampled_lambda_avoids_exclusions():
    for field in (QQ, GF(5)):
        for x in cmmod.enumerate_cm_cusp(cusp(1, (2,)), 2, sample_lambda=True, field=field):
            if x.variant == "band":
                assert x.lam is not None and x.lam not in x.lambda_excluded


def test_descriptor_json_round_trip():
    for x in cmmod.enumerate_cm_cusp(cusp(1, (3,)), 2) + cmmod.enumerate_cm_elliptic(SimpleEllipticSingularity(2), 3):
        assert CMModuleDescriptor.from_json(x.to_json()) == x


def test_rank_simple_elliptic():
    assert cmmod.rank_simple_elliptic(1, 1, 1, SimpleEllipticSingularity(1)) == 1
    for b in (1, 2, 5):
        assert cmmod.rank_simple_elliptic(1, b + 1, 2, SimpleEllipticSingularity(b)) == 4
    with pytest.raises(NotCoprime):
        cmmod.rank_simple_elliptic(2, 4, 1, SimpleEllipticSingularity(1))
    with pytest.raises(RangeViolation):
        cmmod.rank_simple_elliptic(3, 2, 1, SimpleEllipticSingularity(1))


def test_elliptic_enumeration():
    sing = SimpleEllipticSingularity(1)
    out = cmmod.enumerate_cm_elliptic(sing, 1)
    assert [x.variant for x in out] == ["ring", "elliptic_family"]
    assert dict(out[1].params) == {"degree": 1, "n": 1, "r": 1}
    assert out[1].lambda_excluded == ("o",)
    assert cmmod.enumerate_cm_elliptic(sing, 0) == []
    for b in (1, 2, 3):
        sing = SimpleEllipticSingularity(b)
        for rank in range(1, 7):
            out = cmmod.enumerate_cm_elliptic(sing, rank)
            assert sum(x.variant == "special" for x in out) == (rank >= 2)
            for x in out:
                if x.variant == "elliptic_family":
                    p = dict(x.params)
                    assert cmmod.rank_simple_elliptic(p["r"], p["degree"], p["n"], sing) == rank


def _phi(m):
    return sum(1 for k in range(1, m + 1) if gcd(k, m) == 1)


def test_elliptic_family_count_bound():
    for b in (1, 2, 3):
        for m in range(1, 10):
            assert cmmod.elliptic_family_count(SimpleEllipticSingularity(b), m) <= b * _phi(m) + 1


def test_sigma_action():
    assert cmmod.sigma_act((4,), 2, 3, 1) == ((4,), 2, QQ(1) / 3)
    assert cmmod.sigma_act((1, 2, 3), 1, 2, 3)[0] == (1, 3, 2)
    d, m, lam = cmmod.sigma_act((1, 2, 3, 4), 2, 5, 2)
    assert cmmod.sigma_act(d, m, lam, 2) == ((1, 2, 3, 4), 2, 5)
    with pytest.raises(ZeroLambda):
        cmmod.sigma_act((1,), 1, 0, 1)
    with pytest.raises(LengthNotMultiple):
        cmmod.sigma_act((1, 2, 3), 1, 1, 2)


def test_sigma_shift_symmetry():
    assert not cmmod.is_sigma_shift_symmetric((1, 2, 3, 4), 2)
    assert cmmod.is_sigma_shift_symmetric((3, 2, 2), 3)
    assert cmmod.is_sigma_shift_symmetric((5, 1, 2, 1), 4)
    for d in itertools.product(range(3), repeat=4):
        for t in (1, 2, 4):
            ds = cmmod.sigma_sequence(d)
            assert cmmod.is_sigma_shift_symmetric(d, t) == cmmod.is_sigma_shift_symmetric(ds, t)


def test_qcusp_data_validation():
    QCuspData(3, (3, 2, 2))
    with pytest.raises(ValidationError):
        QCuspData(3, (3, 2, 4))


def test_qcusp_enumeration():
    data = QCuspData(1, (3,))
    out = cmmod.enumerate_cm_qcusp(data, 2)
    assert out == cmmod.enumerate_cm_qcusp(data, 2)
    assert len(set(out)) == len(out)
    labels = {x.label for x in out if x.variant == "ring"}
    assert labels == {"A", "B^-"}
    for x in out:
        if x.variant == "band":
            sym = cmmod.is_sigma_shift_symmetric(x.d, 1)
            want = ("0/1", "1/1", "-1/1") if sym else ("0/1",)
            assert x.lambda_excluded == want
    split = [x for x in out if x.variant == "split"]
    assert split
    for x in split:
        assert cmmod.is_sigma_shift_symmetric(x.d, 1)
        assert x.lam in ("1/1", "-1/1")


def test_qcusp_nonsymmetric_bands_have_no_split():
    out = cmmod.enumerate_cm_qcusp(QCuspData(2, (3, 3)), 2)
    nonsym = {x.d for x in out if x.variant == "band" and not cmmod.is_sigma_shift_symmetric(x.d, 2)}
    assert nonsym
    assert not any(x.variant == "split" and x.d in nonsym for x in out)
    assert any(x.label == "A" for x in out)


def test_qcusp_rejects_characteristic_two():
    with pytest.raises(PreconditionError):
        cmmod.enumerate_cm_qcusp(QCuspData(1, (3,)), 1, field=GF(2))
