"""Exact linear algebra over the rationals and over truncated series rings.

Matrices are plain nested lists (row-major).  Entries are either Fractions or
:class:`~arcclass.series.TruncatedSeries` of a common ring; the generic routines
(``det``, ``minor``, ``adjugate``) only use ring operations, so they work for
both.  Routines that need a field (``rref``, ``rank``, ``nullspace``) are
rational-only.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .series import NonUnitError, RingMismatchError, TruncatedSeries, invert_unit, to_fraction


class SingularMatrixError(ArithmeticError):
    """Determinant is not a unit of the coefficient ring."""


def _is_series(x) -> bool:
    return isinstance(x, TruncatedSeries)


def _zero_like(x):
    return TruncatedSeries.zero(x.nvars, x.order) if _is_series(x) else Fraction(0)


def _one_like(x):
    return TruncatedSeries.constant(1, x.nvars, x.order) if _is_series(x) else Fraction(1)


def _check_square(A: Sequence[Sequence]) -> int:
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("matrix is not square")
    return n


def det(A: Sequence[Sequence]):
    """Determinant by first-row Laplace expansion, memoized on column subsets.

    Division free, hence valid over any commutative ring; cost is
    ``O(n 2^n)`` which is fine for the small matrices used here.
    """
    n = _check_square(A)
    if n == 0:
        return Fraction(1)
    cache: dict[tuple[int, ...], object] = {}

    def sub(row: int, cols: tuple[int, ...]):
        if row == n:
            return _one_like(A[0][0])
        hit = cache.get(cols)
        if hit is not None:
            return hit
        total = _zero_like(A[0][0])
        for pos, c in enumerate(cols):
            entry = A[row][c]
            if _is_series(entry) and entry.is_zero():
                continue
            if not _is_series(entry) and entry == 0:
                continue
            term = entry * sub(row + 1, cols[:pos] + cols[pos + 1:])
            total = total + term if pos % 2 == 0 else total - term
        cache[cols] = total
        return total

    return sub(0, tuple(range(n)))


def minor(A: Sequence[Sequence], row: int, col: int):
    """Determinant of ``A`` with ``row`` and ``col`` removed (0-based)."""
    n = _check_square(A)
    if n == 1:
        return _one_like(A[0][0])
    return det([[A[i][j] for j in range(n) if j != col] for i in range(n) if i != row])


def row_deleted_minors(A: Sequence[Sequence], row: int) -> list:
    """Unsigned minors deleting ``row`` and each column in turn.

    For a 1x1 matrix the single (empty) minor is 1.
    """
    n = _check_square(A)
    if not 0 <= row < n:
        raise IndexError(f"row {row} out of range for {n}x{n} matrix")
    return [minor(A, row, c) for c in range(n)]


def adjugate(A: Sequence[Sequence]) -> list[list]:
    n = _check_square(A)
    return [[minor(A, j, i) * (1 if (i + j) % 2 == 0 else -1) for j in range(n)] for i in range(n)]


def _unit_inverse(d):
    if _is_series(d):
        try:
            return invert_unit(d)
        except NonUnitError as exc:
            raise SingularMatrixError(f"determinant {d} is not a unit") from exc
    if d == 0:
        raise SingularMatrixError("matrix is singular")
    return Fraction(1) / d


def inverse(A: Sequence[Sequence]) -> list[list]:
    """Inverse via adjugate over the determinant (which must be a unit)."""
    d_inv = _unit_inverse(det(A))
    return [[entry * d_inv for entry in row] for row in adjugate(A)]


def mat_vec(A: Sequence[Sequence], x: Sequence) -> list:
    out = []
    for row in A:
        acc = None
        for a, v in zip(row, x):
            acc = a * v if acc is None else acc + a * v
        out.append(acc)
    return out


def solve_linear(A: Sequence[Sequence], b: Sequence) -> list:
    """Solve ``A x = b`` exactly.

    Rational systems use Gaussian elimination; series systems use the adjugate
    divided by the (unit) determinant.
    """
    n = _check_square(A)
    if len(b) != n:
        raise ValueError("right-hand side has wrong length")
    if any(_is_series(e) for row in A for e in row) or any(_is_series(v) for v in b):
        ring = next(e for e in [*(e for row in A for e in row), *b] if _is_series(e))
        A = [[_as_series(e, ring) for e in row] for row in A]
        b = [_as_series(v, ring) for v in b]
        return mat_vec(inverse(A), b)
    M = [[to_fraction(e) for e in row] + [to_fraction(v)] for row, v in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [v * inv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * p for a, p in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def _as_series(x, ring: TruncatedSeries) -> TruncatedSeries:
    if _is_series(x):
        if (x.nvars, x.order) != (ring.nvars, ring.order):
            raise RingMismatchError("mixed rings in linear system")
        return x
    return TruncatedSeries.constant(to_fraction(x), ring.nvars, ring.order)


# field-only routines -------------------------------------------------------


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; pivots are chosen left to right."""
    M = [[to_fraction(v) for v in row] for row in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * p for a, p in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1])


def solve_consistent(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction] | None:
    """One solution of a possibly rectangular system, or None if inconsistent."""
    ncols = len(A[0]) if A else 0
    aug = [list(row) + [to_fraction(v)] for row, v in zip(A, b)]
    R, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, c in zip(R, pivots):
        x[c] = row[ncols]
    return x


@dataclass(frozen=True)
class SeriesMatrix:
    """Rectangular matrix of series sharing one ring."""

    entries: tuple[tuple[TruncatedSeries, ...], ...]

    def __post_init__(self):
        if not self.entries or not self.entries[0]:
            raise ValueError("empty matrix")
        width = len(self.entries[0])
        ring = (self.entries[0][0].nvars, self.entries[0][0].order)
        for row in self.entries:
            if len(row) != width:
                raise ValueError("ragged matrix")
            for e in row:
                if (e.nvars, e.order) != ring:
                    raise RingMismatchError("matrix entries from different rings")

    @classmethod
    def of(cls, rows: Sequence[Sequence[TruncatedSeries]]) -> SeriesMatrix:
        return cls(tuple(tuple(r) for r in rows))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.entries[0])

    @property
    def nvars(self) -> int:
        return self.entries[0][0].nvars

    @property
    def order(self) -> int:
        return self.entries[0][0].order

    def rows(self) -> list[list[TruncatedSeries]]:
        return [list(r) for r in self.entries]

    def constant(self) -> list[list[Fraction]]:
        """Reduction modulo the maximal ideal."""
        return [[e.constant_term() for e in row] for row in self.entries]

    def map(self, fn) -> SeriesMatrix:
        return SeriesMatrix.of([[fn(e) for e in row] for row in self.entries])
