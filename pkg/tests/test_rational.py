from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from hedgebr.rational import (
    RationalMatrix,
    SingularMatrixError,
    determinant,
    format_rational,
    inverse,
    lcm_of_denominators,
    parse_rational,
    rat_arith,
    solve_linear_system,
)

F = Fraction
fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def leibniz_det(rows):
    """Determinant by the permutation expansion; independent of elimination."""
    n = len(rows)
    total = F(0)
    for p in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if p[i] > p[j]:
                    sign = -sign
        term = F(sign)
        for i in range(n):
            term *= rows[i][p[i]]
        total += term
    return total


def square(n):
    return st.lists(st.lists(fractions, min_size=n, max_size=n), min_size=n, max_size=n)


def test_arith_examples():
    assert rat_arith(F(1, 3), F(1, 6), "+") == F(1, 2)
    assert rat_arith(F(3, 8), F(0), "*") == F(0)
    assert rat_arith(F(11, 24), F(11, 24), "/") == F(1)
    assert rat_arith(F(1, 2), F(1, 3), "−") == F(1, 6)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        rat_arith(F(1), F(0), "/")


def test_unknown_operator():
    with pytest.raises(ValueError):
        rat_arith(F(1), F(1), "^")


@pytest.mark.parametrize("tok,val", [("3", F(3)), ("-7/24", F(-7, 24)), ("6/8", F(3, 4)), ("0", F(0))])
def test_parse(tok, val):
    assert parse_rational(tok) == val


@pytest.mark.parametrize("tok", ["1.5", "x", "1/0", "", "2/-3", "1e3"])
def test_parse_rejects(tok):
    with pytest.raises((ValueError, ZeroDivisionError)):
        parse_rational(tok)


@given(fractions)
def test_format_parse_roundtrip(q):
    assert parse_rational(format_rational(q)) == q


def test_lcm_of_denominators():
    assert lcm_of_denominators([F(1, 4), F(1, 6), F(2)]) == 12


def test_solve_examples():
    b = (F(3, 8), F(1, 24), F(7, 12))
    assert solve_linear_system(RationalMatrix.identity(3), b) == b
    M = RationalMatrix(((1, 1), (1, -1)))
    assert solve_linear_system(M, (1, 0)) == (F(1, 2), F(1, 2))
    with pytest.raises(SingularMatrixError):
        solve_linear_system(RationalMatrix(((1, 2), (1, 2))), (1, 1))


def test_determinant_examples():
    assert determinant(RationalMatrix.identity(3)) == 1
    assert determinant(RationalMatrix(((1, 2, 3), (0, 0, 0), (4, 5, 6)))) == 0
    # A_1 of the interior game: columns 2 and 3 as rows, then ones
    A1 = RationalMatrix(((1, 2, 0), (3, -2, -1), (1, 1, 1)))
    assert determinant(A1) == leibniz_det(A1.rows) != 0


def test_shape_mismatch():
    with pytest.raises(ValueError):
        solve_linear_system(RationalMatrix.identity(2), (1, 2, 3))
    with pytest.raises(ValueError):
        RationalMatrix(((1, 2), (3,)))


@given(st.integers(1, 4).flatmap(square))
def test_determinant_matches_leibniz(rows):
    assert determinant(RationalMatrix(rows)) == leibniz_det(rows)


@given(st.integers(1, 4).flatmap(lambda n: st.tuples(square(n), st.lists(fractions, min_size=n, max_size=n))))
def test_solve_is_exact(data):
    rows, b = data
    M = RationalMatrix(rows)
    if leibniz_det(rows) == 0:
        with pytest.raises(SingularMatrixError):
            solve_linear_system(M, b)
        return
    x = solve_linear_system(M, b)
    assert M @ x == tuple(b)


@given(st.integers(1, 4).flatmap(square))
def test_inverse_roundtrip(rows):
    assume(leibniz_det(rows) != 0)
    M = RationalMatrix(rows)
    assert M @ inverse(M) == RationalMatrix.identity(len(rows))


@given(st.integers(1, 3).flatmap(square), st.integers(1, 3).flatmap(square))
def test_determinant_multiplicative(a, b):
    assume(len(a) == len(b))
    A, B = RationalMatrix(a), RationalMatrix(b)
    assert determinant(A @ B) == determinant(A) * determinant(B)
