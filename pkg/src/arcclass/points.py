"""Choosing evaluation sites with a nondegenerate evaluation matrix.

Given ``g`` functions and a stream of candidate sites, find ``g`` sites whose
matrix ``(f_j(p_k))`` is invertible and whose row-deleted minors are all
nonzero for each requested row.  The search extends partial selections while
they stay linearly independent, considering candidates in stream order, and
gives up after a fixed number of candidates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice
from typing import Any, Callable, Iterable, Sequence

from . import linalg


class SelectionExhausted(RuntimeError):
    def __init__(self, message: str, best_rank: int, consumed: int):
        super().__init__(f"{message} (best rank {best_rank}, {consumed} candidates consumed)")
        self.best_rank = best_rank
        self.consumed = consumed


@dataclass(frozen=True)
class PointSelection:
    sites: tuple[Any, ...]
    matrix: tuple[tuple[Fraction, ...], ...]
    determinant: Fraction
    minors: dict[int, tuple[Fraction, ...]] = field(default_factory=dict)
    candidates_consumed: int = 0

    @property
    def size(self) -> int:
        return len(self.sites)

    def verify(self, evaluate: Callable[[Any], Sequence] | None = None) -> bool:
        """Recompute determinant and minors from scratch (optionally re-evaluating sites)."""
        if evaluate is not None:
            cols = [[Fraction(v) for v in evaluate(s)] for s in self.sites]
            matrix = [[cols[k][j] for k in range(len(cols))] for j in range(len(cols))]
            if tuple(map(tuple, matrix)) != self.matrix:
                return False
        else:
            matrix = [list(r) for r in self.matrix]
        if linalg.det(matrix) == 0:
            return False
        for r in self.minors:
            if any(m == 0 for m in linalg.row_deleted_minors(matrix, r)):
                return False
        return True

    def to_json(self, site_to_json: Callable[[Any], Any] | None = None) -> dict:
        encode = site_to_json or _default_site_json
        return {
            "sites": [encode(s) for s in self.sites],
            "matrix": [[str(v) for v in row] for row in self.matrix],
            "determinant": str(self.determinant),
            "minors": {str(r): [str(m) for m in ms] for r, ms in sorted(self.minors.items())},
            "candidates_consumed": self.candidates_consumed,
        }


def _default_site_json(site):
    if hasattr(site, "to_json"):
        return site.to_json()
    if isinstance(site, Fraction):
        return str(site)
    return site


def _independent(columns: list[list[Fraction]]) -> bool:
    return linalg.rank(columns) == len(columns)


def choose_points(
    candidates: Iterable[Any],
    evaluate: Callable[[Any], Sequence],
    required_rows: Iterable[int] = (),
    max_candidates: int | None = None,
) -> PointSelection:
    """Select sites so that the evaluation matrix and required minors are nonzero.

    ``evaluate(site)`` returns the column ``(f_1(site), ..., f_g(site))``.
    Rows in ``required_rows`` are 0-based.  The default budget is ``64·g``
    candidates.
    """
    required = sorted(set(required_rows))
    stream = iter(candidates)
    first = next(stream, None)
    if first is None:
        raise SelectionExhausted("no candidates", 0, 0)
    first_col = [Fraction(v) for v in evaluate(first)]
    g = len(first_col)
    if any(not 0 <= r < g for r in required):
        raise IndexError(f"required rows {required} out of range for g={g}")
    budget = max_candidates if max_candidates is not None else 64 * g

    sites: list[Any] = []
    cols: list[list[Fraction]] = []
    best_rank = 0
    consumed = 0

    def accept(chosen: list[int]) -> PointSelection | None:
        matrix = [[cols[k][j] for k in chosen] for j in range(g)]
        det = linalg.det(matrix)
        if det == 0:
            return None
        minors = {}
        for r in required:
            ms = linalg.row_deleted_minors(matrix, r)
            if any(m == 0 for m in ms):
                return None
            minors[r] = tuple(ms)
        return PointSelection(
            tuple(sites[k] for k in chosen),
            tuple(tuple(row) for row in matrix),
            det,
            minors,
            consumed,
        )

    def extend(prefix: list[int], last: int) -> PointSelection | None:
        if len(prefix) == g - 1:
            return accept(prefix + [last])
        start = prefix[-1] + 1 if prefix else 0
        for k in range(start, last):
            trial = prefix + [k]
            if _independent([cols[i] for i in trial] + [cols[last]]):
                found = extend(trial, last)
                if found is not None:
                    return found
        return None

    for site in (first, *islice(stream, max(budget - 1, 0))):
        col = first_col if consumed == 0 else [Fraction(v) for v in evaluate(site)]
        consumed += 1
        if len(col) != g:
            raise ValueError("evaluate returned columns of inconsistent length")
        if any(site == s for s in sites) or not any(col):
            continue
        sites.append(site)
        cols.append(col)
        best_rank = max(best_rank, linalg.rank(cols))
        if len(sites) < g:
            continue
        found = extend([], len(sites) - 1)
        if found is not None:
            return found
    raise SelectionExhausted("candidate stream exhausted before a valid selection", best_rank, consumed)
