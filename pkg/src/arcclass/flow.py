"""Formal flow solver.

Given a square matrix ``F = (f_il)`` of series in a distinguished variable
``t_0`` with coefficients in ``R`` (the remaining variables), and a right-hand
side ``b`` over ``R``, find the unique ``φ_l ∈ t_0 R[[t_0]]`` with

    Σ_l f_il(φ_l) · ∂φ_l/∂t_0 = b_i        for every row i.

Only ``F(t_0 = 0)`` needs to be invertible over ``R``.  Coefficients of ``φ`` are
found one power of ``t_0`` at a time: the ``t_0^j`` coefficient of the
left-hand side is ``(j+1)·F(0)·φ_{j+1}`` plus terms in already known
coefficients, so each step is one multiplication by the fixed inverse of
``F(0)``.

Everything lives in ``A_M = Q[t_0..t_{N-1}]/m^M``.  Differentiation loses one
degree, so the identity is only asserted modulo ``m^{M-1}``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .linalg import SeriesMatrix, SingularMatrixError
from .series import RingMismatchError, TruncatedSeries, substitute_variable


@dataclass(frozen=True)
class FlowProblem:
    matrix: SeriesMatrix
    rhs: tuple[TruncatedSeries, ...]

    def __post_init__(self):
        g, cols = self.matrix.shape
        if g != cols:
            raise ValueError(f"flow matrix must be square, got {g}x{cols}")
        if len(self.rhs) != g:
            raise ValueError(f"right-hand side has length {len(self.rhs)}, expected {g}")
        ring = (self.matrix.nvars, self.matrix.order)
        for b in self.rhs:
            if (b.nvars, b.order) != ring:
                raise RingMismatchError("right-hand side and matrix use different rings")
            if b.degree_in(0) > 0:
                raise ValueError("right-hand side must not depend on the flow variable t_0")
        if ring[0] < 1:
            raise ValueError("flow problems need at least the flow variable")

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    @property
    def nvars(self) -> int:
        return self.matrix.nvars

    @property
    def order(self) -> int:
        return self.matrix.order

    def leading_matrix(self) -> list[list[TruncatedSeries]]:
        """``F`` at ``t_0 = 0``: a matrix over the base ring ``R``."""
        return [[e.coefficient_in(0, 0) for e in row] for row in self.matrix.entries]

    def check_unit(self) -> TruncatedSeries:
        det = linalg.det(self.leading_matrix())
        if det.constant_term() == 0:
            raise SingularMatrixError("leading matrix F(0) is not invertible over the base ring")
        return det

    def truncate(self, order: int) -> FlowProblem:
        return FlowProblem(self.matrix.map(lambda e: e.truncate(order)), tuple(b.truncate(order) for b in self.rhs))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[TruncatedSeries]], rhs: Sequence) -> FlowProblem:
        ring = next(e for row in rows for e in row if isinstance(e, TruncatedSeries))
        nvars, order = ring.nvars, ring.order
        matrix = SeriesMatrix.of(
            [[e if isinstance(e, TruncatedSeries) else TruncatedSeries.constant(e, nvars, order) for e in row] for row in rows]
        )
        rhs = tuple(
            b if isinstance(b, TruncatedSeries) else TruncatedSeries.constant(b, nvars, order) for b in rhs
        )
        return cls(matrix, rhs)

    @classmethod
    def univariate(cls, rows: Sequence[Sequence[Sequence]], rhs: Sequence, order: int) -> FlowProblem:
        """Constant-coefficient problem; ``rows[i][l]`` is the coefficient list of ``f_il(u)``."""
        return cls.from_rows(
            [[TruncatedSeries.from_coefficients(c, order) for c in row] for row in rows], rhs
        )

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "order": self.order,
            "matrix": [[e.to_records() for e in row] for row in self.matrix.entries],
            "rhs": [b.to_records() for b in self.rhs],
        }

    @classmethod
    def from_json(cls, data) -> FlowProblem:
        nvars, order = int(data["nvars"]), int(data["order"])
        rows = [[TruncatedSeries.from_records(e, nvars, order) for e in row] for row in data["matrix"]]
        rhs = [TruncatedSeries.from_records(b, nvars, order) for b in data["rhs"]]
        return cls.from_rows(rows, rhs)


@dataclass(frozen=True)
class FlowSolution:
    phi: tuple[TruncatedSeries, ...]
    order: int

    @property
    def valid_order(self) -> int:
        """The flow identity holds modulo ``m`` to this power."""
        return self.order - 1

    def truncate(self, order: int) -> FlowSolution:
        return FlowSolution(tuple(p.truncate(order) for p in self.phi), order)

    def to_json(self) -> dict:
        nvars = self.phi[0].nvars if self.phi else 1
        return {
            "nvars": nvars,
            "order": self.order,
            "max_valid_order": self.valid_order,
            "phi": [p.to_records() for p in self.phi],
        }


@dataclass(frozen=True)
class FlowResidual:
    components: tuple[TruncatedSeries, ...]
    max_valid_order: int

    @property
    def vanishes(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def to_json(self) -> dict:
        return {
            "max_valid_order": self.max_valid_order,
            "vanishes": self.vanishes,
            "residual_terms": [c.to_records() for c in self.components],
        }


def _raw_residual(problem: FlowProblem, phi: Sequence[TruncatedSeries]) -> list[TruncatedSeries]:
    velocities = [p.derivative(0) for p in phi]
    out = []
    for row, b in zip(problem.matrix.entries, problem.rhs):
        acc = -b
        for f, p, v in zip(row, phi, velocities):
            if v.is_zero():
                continue
            acc = acc + substitute_variable(f, 0, p) * v
        out.append(acc)
    return out


def solve_flow(problem: FlowProblem) -> FlowSolution:
    """Unique solution of the flow problem, modulo ``m^M``."""
    problem.check_unit()
    g, nvars, order = problem.size, problem.nvars, problem.order
    lead_inv = linalg.inverse(problem.leading_matrix())
    t0 = TruncatedSeries.variable(0, nvars, order)
    phi = [TruncatedSeries.zero(nvars, order) for _ in range(g)]
    power = TruncatedSeries.constant(1, nvars, order)
    for j in range(order - 1):
        power = power * t0  # t0 ** (j + 1)
        residual = _raw_residual(problem, phi)
        slice_j = [r.coefficient_in(0, j) for r in residual]
        step = linalg.mat_vec(lead_inv, slice_j)
        phi = [p - s * power * Fraction(1, j + 1) for p, s in zip(phi, step)]
    return FlowSolution(tuple(phi), order)


def verify_flow(problem: FlowProblem, solution: FlowSolution) -> FlowResidual:
    """Recompute ``Σ_l f_il(φ_l)φ_l' - b_i`` and keep the part of degree ``< M-1``."""
    if len(solution.phi) != problem.size:
        raise ValueError("solution and problem sizes differ")
    valid = problem.order - 1
    raw = _raw_residual(problem, solution.phi)
    trimmed = tuple(
        TruncatedSeries(r.nvars, r.order, {e: c for e, c in r.items() if sum(e) < valid}) for r in raw
    )
    return FlowResidual(trimmed, valid)


def initial_velocities(problem: FlowProblem) -> list[TruncatedSeries]:
    """``F(0)^{-1} b``: the ``t_0``-linear coefficients of the solution, over ``R``."""
    problem.check_unit()
    return linalg.mat_vec(linalg.inverse(problem.leading_matrix()), list(problem.rhs))
