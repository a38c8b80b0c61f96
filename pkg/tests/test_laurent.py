import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from vbcm import laurent
from vbcm.errors import NotInvertible, NotSquare, ValidationError
from vbcm.field import GF, QQ
from vbcm.laurent import LaurentMatrix, LaurentPoly

t = sympy.Symbol("t")


def mono(c, e, field=QQ):
    return LaurentPoly.monomial(c, e, field)


def to_sympy(p):
    return sum((sympy.Rational(c.numerator, c.denominator) * t**e for e, c in p.terms), sympy.Integer(0))


def test_is_unit_examples():
    assert laurent.is_unit(mono(3, -2))
    assert not laurent.is_unit(LaurentPoly({0: 1, 1: 1}))
    assert not laurent.is_unit(LaurentPoly.zero())


def test_zero_coefficients_are_dropped():
    p = LaurentPoly({0: 1, 3: 0})
    assert p.terms == ((0, 1),)
    assert (p - p).terms == ()


def test_diagonalization_examples():
    res = laurent.diagonalize(LaurentMatrix.identity(2))
    assert res.degrees == (0, 0)
    assert res.S == LaurentMatrix.identity(2) and res.T == LaurentMatrix.identity(2)
    assert laurent.splitting_type(LaurentMatrix([[mono(1, 4)]])) == (4,)
    z = LaurentPoly.zero()
    assert laurent.splitting_type(LaurentMatrix([[z, mono(1, 1)], [mono(1, -1), z]])) == (1, -1)


def test_section_oracle_examples():
    z = LaurentPoly.zero()
    assert laurent.section_dim_oracle(LaurentMatrix.identity(3), 0) == 3
    assert laurent.section_dim_oracle(LaurentMatrix([[mono(1, 2)]]), 0) == 3
    assert laurent.section_dim_oracle(LaurentMatrix([[z, mono(1, 1)], [mono(1, -1), z]]), 0) == 2


def test_not_invertible_and_not_square():
    with pytest.raises(NotInvertible):
        laurent.diagonalize(LaurentMatrix([[LaurentPoly({0: 1, 1: 1})]]))
    with pytest.raises(NotSquare):
        laurent.diagonalize(LaurentMatrix([[1, 0]]))
    with pytest.raises(NotInvertible):
        laurent.section_dim_oracle(LaurentMatrix([[0]]), 0)


def _exponents(M):
    return [e for row in M.entries for p in row for e, _ in p.terms]


@pytest.mark.parametrize("field", [QQ, GF(2), GF(7)])
def test_diagonalization_invariants(field):
    rng = random.Random(11)
    for _ in range(40):
        r = rng.randint(1, 4)
        A = laurent.random_invertible_laurent(r, field, rng)
        res = laurent.diagonalize(A)
        assert res.S * A * res.T == LaurentMatrix.diagonal_monomials(res.degrees, field)
        assert list(res.degrees) == sorted(res.degrees, reverse=True)
        assert all(e >= 0 for e in _exponents(res.S))
        assert all(e <= 0 for e in _exponents(res.T))
        for M in (res.S, res.T):
            d = M.det()
            assert len(d.terms) == 1 and d.terms[0][0] == 0
        assert sum(res.degrees) == A.det().lo


def test_oracle_agreement_all_twists():
    rng = random.Random(12)
    for _ in range(15):
        A = laurent.random_invertible_laurent(3, QQ, rng)
        degs = laurent.splitting_type(A)
        for n in range(-5, 6):
            assert laurent.section_dim_oracle(A, n) == laurent.sections_from_degrees(degs, n)


def test_splitting_type_from_oracle_matches():
    rng = random.Random(13)
    for _ in range(20):
        A = laurent.random_invertible_laurent(rng.randint(1, 3), GF(5), rng)
        assert laurent.splitting_type_from_oracle(A) == laurent.splitting_type(A)


def _random_unimodular(r, field, rng, sign):
    """Product of elementary matrices over k[t] (sign=1) or k[t^-1] (sign=-1)."""
    M = LaurentMatrix.identity(r, field)
    for _ in range(3 * r):
        i, j = rng.sample(range(r), 2)
        E = [[LaurentPoly.const(1 if a == b else 0, field) for b in range(r)] for a in range(r)]
        E[i][j] = LaurentPoly({sign * rng.randint(0, 2): field.random_nonzero(rng)}, field)
        M = M * LaurentMatrix(E, field)
    return M


def test_splitting_type_stable_under_change_of_trivialization():
    rng = random.Random(14)
    for _ in range(20):
        A = laurent.random_invertible_laurent(3, QQ, rng)
        P = _random_unimodular(3, QQ, rng, 1)
        Q = _random_unimodular(3, QQ, rng, -1)
        assert laurent.splitting_type(P * A * Q) == laurent.splitting_type(A)


def test_cramer_bound_is_not_smaller_than_tight_bound():
    rng = random.Random(15)
    for _ in range(20):
        A = laurent.random_invertible_laurent(2, QQ, rng)
        for n in (-2, 0, 3):
            assert laurent.cramer_bound(A, n) >= laurent._oracle_bound(A, n)
            assert laurent.section_dim_oracle(A, n, laurent.cramer_bound(A, n)) == laurent.section_dim_oracle(A, n)


def test_det_matches_sympy():
    rng = random.Random(16)
    for _ in range(15):
        n = rng.randint(1, 4)
        A = LaurentMatrix(
            [[LaurentPoly({rng.randint(-2, 2): rng.randint(-3, 3) for _ in range(2)}) for _ in range(n)] for _ in range(n)]
        )
        S = sympy.Matrix([[to_sympy(p) for p in row] for row in A.entries])
        assert sympy.simplify(S.det() - to_sympy(A.det())) == 0


def test_adjugate_identity():
    rng = random.Random(17)
    A = laurent.random_invertible_laurent(3, QQ, rng)
    assert A * laurent.laurent_inverse(A) == LaurentMatrix.identity(3)


polys = st.dictionaries(st.integers(-4, 4), st.integers(-5, 5), max_size=4)


@settings(max_examples=100, deadline=None)
@given(polys, polys)
def test_poly_ring_laws(a, b):
    p, q = LaurentPoly(a), LaurentPoly(b)
    assert p * q == q * p
    assert (p + q) - q == p
    assert to_sympy(p * q).expand() == (to_sympy(p) * to_sympy(q)).expand()


@settings(max_examples=100, deadline=None)
@given(polys)
def test_poly_json_round_trip(a):
    p = LaurentPoly(a)
    assert LaurentPoly.from_json(p.to_json()) == p


def test_matrix_json_round_trip_and_validation():
    rng = random.Random(18)
    A = laurent.random_invertible_laurent(3, GF(7), rng)
    assert LaurentMatrix.from_json(A.to_json(), GF(7)) == A
    with pytest.raises(ValidationError):
        LaurentPoly.from_json([[0.5, "1"]])
    with pytest.raises(ValidationError):
        LaurentMatrix.from_json({"rows": 3, "entries": [[[[0, "1"]]]]})
