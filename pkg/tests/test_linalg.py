from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arcclass import linalg
from arcclass.series import TruncatedSeries

F = Fraction


def leibniz_det(A):
    """Permutation-sum determinant, used as an independent check."""
    n = len(A)
    total = 0
    for perm in permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = (-1) ** inversions
        for i in range(n):
            term *= A[i][perm[i]]
        total += term
    return total


def test_solve_small():
    assert linalg.solve_linear([[1, 1], [1, 2]], [1, 0]) == [2, -1]


def test_solve_identity():
    b = [F(3, 4), F(-2), F(7)]
    eye = [[int(i == j) for j in range(3)] for i in range(3)]
    assert linalg.solve_linear(eye, b) == b


def test_solve_over_series():
    one = TruncatedSeries.constant(1, 1, 3)
    u = TruncatedSeries.variable(0, 1, 3)
    x = linalg.solve_linear([[one + u, 0], [0, one]], [one, one])
    assert x == [TruncatedSeries.from_coefficients([1, -1, 1], 3), one]


def test_singular_series_determinant():
    u = TruncatedSeries.variable(0, 1, 3)
    with pytest.raises(linalg.SingularMatrixError):
        linalg.solve_linear([[u]], [u + 1])


def test_singular_rational():
    with pytest.raises(linalg.SingularMatrixError):
        linalg.solve_linear([[1, 2], [2, 4]], [1, 1])


@pytest.mark.parametrize(
    "A, row, expected",
    [
        ([[1, 1], [1, 2]], 0, [2, 1]),
        ([[1, 1, 1], [1, 2, 3], [1, 4, 9]], 0, [6, 6, 2]),
        ([[5]], 0, [1]),
    ],
)
def test_row_deleted_minors(A, row, expected):
    assert linalg.row_deleted_minors([[F(v) for v in r] for r in A], row) == expected


matrices = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-6, 6), min_size=n, max_size=n), min_size=n, max_size=n)
)


@given(matrices)
def test_det_matches_permutation_sum(A):
    assert linalg.det([[F(v) for v in r] for r in A]) == leibniz_det(A)


@given(matrices, st.data())
def test_solution_substitutes_back(A, data):
    A = [[F(v) for v in r] for r in A]
    b = [F(data.draw(st.integers(-9, 9))) for _ in A]
    if linalg.det(A) == 0:
        return
    x = linalg.solve_linear(A, b)
    assert linalg.mat_vec(A, x) == b


def test_series_inverse():
    one = TruncatedSeries.constant(1, 2, 4)
    s = TruncatedSeries.variable(1, 2, 4)
    u = TruncatedSeries.variable(0, 2, 4)
    A = [[one + u * s, 2 * one], [s, one - u]]
    inv = linalg.inverse(A)
    prod = [[sum((A[i][k] * inv[k][j] for k in range(2)), TruncatedSeries.zero(2, 4)) for j in range(2)] for i in range(2)]
    assert prod == [[one, 0 * one], [0 * one, one]]


def test_rank_and_consistency():
    rows = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    assert linalg.rank(rows) == 2
    assert linalg.solve_consistent(rows, [1, 2, 0]) is not None
    assert linalg.solve_consistent(rows, [1, 3, 0]) is None
