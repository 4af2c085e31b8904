"""Infinitesimal Abel-Jacobi classes of 0-cycles built from formal arcs.

A :class:`ZeroCycle` is ``Σ n_l ([γ_l] - [center_l])`` for arcs ``γ_l`` over
``A_M``.  Its class pairs the cycle with each regular differential:
component ``j`` is ``Σ n_l γ_l^* ω_j`` in ``Ω^1_{A_M}``, i.e. the coordinates of
an element of ``H^1(X, O_X) ⊗ d(A_M)`` in the basis dual to ``ω_0..ω_{g-1}``.

:func:`construct_cycle` goes the other way.  For each target potential
``h_j`` it solves the flow problem with the curve's ratio matrix and right-hand
side ``e_j``, then reparametrizes the flow by ``s -> h_j``.  The resulting arcs
have class ``(dh_0, ..., dh_{g-1})``, which :func:`verify_surjectivity`
recomputes from the arcs alone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .curve import (
    AffinePoint,
    FormalArc,
    HyperellipticCurve,
    evaluation_column,
    find_rational_points,
    pullback,
    ratio_matrix,
)
from .flow import FlowProblem, FlowSolution, initial_velocities, solve_flow
from .forms import DifferentialForm
from .points import PointSelection, choose_points
from .series import RingMismatchError, TruncatedSeries, substitute, substitute_variable


class InsufficientPointsError(RuntimeError):
    pass


@dataclass(frozen=True)
class ZeroCycle:
    curve: HyperellipticCurve
    nvars: int
    order: int
    terms: tuple[tuple[FormalArc, int], ...] = ()

    def __post_init__(self):
        for arc, n in self.terms:
            if arc.curve != self.curve:
                raise ValueError("cycle mixes arcs from different curves")
            if (arc.nvars, arc.order) != (self.nvars, self.order):
                raise RingMismatchError("cycle mixes arcs over different rings")
            if not isinstance(n, int):
                raise TypeError("multiplicities must be integers")

    @classmethod
    def empty(cls, curve: HyperellipticCurve, nvars: int, order: int) -> ZeroCycle:
        return cls(curve, nvars, order, ())

    @property
    def arcs(self) -> list[FormalArc]:
        return [a for a, _ in self.terms]

    def __len__(self) -> int:
        return len(self.terms)

    def __add__(self, other: ZeroCycle) -> ZeroCycle:
        if (self.curve, self.nvars, self.order) != (other.curve, other.nvars, other.order):
            raise RingMismatchError("cannot add cycles over different curves or rings")
        return ZeroCycle(self.curve, self.nvars, self.order, self.terms + other.terms)

    def __neg__(self) -> ZeroCycle:
        return ZeroCycle(self.curve, self.nvars, self.order, tuple((a, -n) for a, n in self.terms))

    def __sub__(self, other: ZeroCycle) -> ZeroCycle:
        return self + (-other)

    def truncate(self, order: int) -> ZeroCycle:
        return ZeroCycle(self.curve, self.nvars, order, tuple((a.truncate(order), n) for a, n in self.terms))

    def to_json(self) -> dict:
        return {
            "curve": self.curve.to_json(),
            "nvars": self.nvars,
            "order": self.order,
            "arcs": [{**a.to_json(), "multiplicity": n} for a, n in self.terms],
        }

    @classmethod
    def from_json(cls, data: Mapping, curve: HyperellipticCurve | None = None) -> ZeroCycle:
        curve = curve or HyperellipticCurve.from_json(data["curve"])
        terms = tuple((FormalArc.from_json(curve, rec), int(rec.get("multiplicity", 1))) for rec in data["arcs"])
        return cls(curve, int(data["nvars"]), int(data["order"]), terms)


@dataclass(frozen=True)
class AbelJacobiClass:
    components: tuple[DifferentialForm, ...]

    def __add__(self, other: AbelJacobiClass) -> AbelJacobiClass:
        if len(self.components) != len(other.components):
            raise ValueError("classes of different genus")
        return AbelJacobiClass(tuple(a + b for a, b in zip(self.components, other.components)))

    def __neg__(self) -> AbelJacobiClass:
        return AbelJacobiClass(tuple(-a for a in self.components))

    def __sub__(self, other: AbelJacobiClass) -> AbelJacobiClass:
        return self + (-other)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def truncate(self, order: int) -> AbelJacobiClass:
        return AbelJacobiClass(tuple(c.truncate(order) for c in self.components))

    def to_json(self) -> dict:
        return {"components": [c.to_json() for c in self.components]}


def class_of_cycle(curve: HyperellipticCurve, cycle: ZeroCycle) -> AbelJacobiClass:
    """Pair the cycle with every regular differential."""
    if cycle.curve != curve:
        raise ValueError("cycle lives on a different curve")
    comps = []
    for j in range(curve.genus):
        acc = DifferentialForm.zero(cycle.nvars, cycle.order, 1)
        for arc, n in cycle.terms:
            if n and not arc.is_constant():
                acc = acc + pullback(curve, j, arc) * n
        comps.append(acc)
    return AbelJacobiClass(tuple(comps))


def target_class(targets: Sequence[TruncatedSeries]) -> AbelJacobiClass:
    """The class ``(dh_0, ..., dh_{g-1})`` a construction must hit."""
    return AbelJacobiClass(tuple(DifferentialForm.function(h).d() for h in targets))


@dataclass(frozen=True)
class DirectionData:
    """The flow solved for one target direction ``j``."""

    index: int
    solution: FlowSolution
    velocities: tuple[TruncatedSeries, ...]
    arcs: tuple[FormalArc, ...]


@dataclass(frozen=True)
class Construction:
    cycle: ZeroCycle
    selection: PointSelection | None
    directions: tuple[DirectionData, ...] = field(default_factory=tuple)


def _check_targets(curve: HyperellipticCurve, targets: Sequence[TruncatedSeries]) -> tuple[int, int]:
    if len(targets) != curve.genus:
        raise ValueError(f"need {curve.genus} target potentials, got {len(targets)}")
    rings = {(h.nvars, h.order) for h in targets}
    if len(rings) != 1:
        raise RingMismatchError("target potentials live in different rings")
    for h in targets:
        if h.constant_term() != 0:
            raise ValueError("target potentials must lie in the maximal ideal")
    return rings.pop()


def candidate_points(
    curve: HyperellipticCurve,
    bound: int = 10,
    candidates: Iterable[AffinePoint] | None = None,
    seed: int | None = None,
) -> list[AffinePoint]:
    """Rational arc centers, listed ones first, then a height search; optionally shuffled."""
    pts: list[AffinePoint] = []
    for p in list(candidates or []) + find_rational_points(curve, bound):
        if p.y != 0 and p not in pts and curve.contains(p.x, p.y):
            pts.append(p)
    if seed is not None:
        random.Random(seed).shuffle(pts)
    return pts


def construct(
    curve: HyperellipticCurve,
    targets: Sequence[TruncatedSeries],
    bound: int = 10,
    candidates: Iterable[AffinePoint] | None = None,
    seed: int | None = None,
    max_candidates: int | None = None,
) -> Construction:
    """Build a cycle with class ``(dh_j)_j``, keeping the intermediate data."""
    nvars, order = _check_targets(curve, targets)
    g = curve.genus
    required = [j for j, h in enumerate(targets) if not DifferentialForm.function(h).d().is_zero()]
    if not required:
        return Construction(ZeroCycle.empty(curve, nvars, order), None)

    pts = candidate_points(curve, bound, candidates, seed)
    if len(pts) < g:
        raise InsufficientPointsError(f"found {len(pts)} rational non-Weierstrass points, need {g}")
    selection = choose_points(
        pts, lambda p: evaluation_column(curve, p), required_rows=required, max_candidates=max_candidates
    )
    centers: Sequence[AffinePoint] = selection.sites
    matrix = ratio_matrix(curve, centers, order)
    one = TruncatedSeries.constant(1, 1, order)
    zero = TruncatedSeries.zero(1, order)

    terms: list[tuple[FormalArc, int]] = []
    directions = []
    for j in required:
        problem = FlowProblem(matrix, tuple(one if i == j else zero for i in range(g)))
        solution = solve_flow(problem)
        arcs = tuple(
            FormalArc(curve, p, substitute(phi, targets[j])) for p, phi in zip(centers, solution.phi)
        )
        terms.extend((a, 1) for a in arcs)
        directions.append(DirectionData(j, solution, tuple(initial_velocities(problem)), arcs))
    return Construction(ZeroCycle(curve, nvars, order, tuple(terms)), selection, tuple(directions))


def construct_cycle(curve: HyperellipticCurve, targets: Sequence[TruncatedSeries], **kwargs) -> ZeroCycle:
    return construct(curve, targets, **kwargs).cycle


@dataclass(frozen=True)
class SurjectivityReport:
    curve: HyperellipticCurve
    targets: tuple[TruncatedSeries, ...]
    construction: Construction
    cls: AbelJacobiClass
    expected: AbelJacobiClass
    flags: tuple[bool, ...]

    @property
    def passed(self) -> bool:
        return all(self.flags)

    def to_json(self) -> dict:
        c = self.construction
        return {
            "pass": self.passed,
            "flags": list(self.flags),
            "curve": self.curve.to_json(),
            "targets": {"h": [h.to_records() for h in self.targets]},
            "nvars": self.cycle.nvars,
            "order": self.cycle.order,
            "cycle": self.cycle.to_json(),
            "class": self.cls.to_json(),
            "expected": self.expected.to_json(),
            "certificate": c.selection.to_json() if c.selection else None,
            "initial_velocities": {
                str(d.index): [v.to_records() for v in d.velocities] for d in c.directions
            },
        }

    @property
    def cycle(self) -> ZeroCycle:
        return self.construction.cycle


def compare_classes(actual: AbelJacobiClass, expected: AbelJacobiClass) -> tuple[bool, ...]:
    return tuple(a == e for a, e in zip(actual.components, expected.components))


def verify_cycle(curve: HyperellipticCurve, cycle: ZeroCycle, targets: Sequence[TruncatedSeries]) -> tuple[bool, ...]:
    """Recompute the class of ``cycle`` from its arcs and compare with ``(dh_j)``."""
    return compare_classes(class_of_cycle(curve, cycle), target_class(targets))


def verify_surjectivity(
    curve: HyperellipticCurve, targets: Sequence[TruncatedSeries], **kwargs
) -> SurjectivityReport:
    construction = construct(curve, targets, **kwargs)
    actual = class_of_cycle(curve, construction.cycle)
    expected = target_class(targets)
    return SurjectivityReport(
        curve,
        tuple(targets),
        construction,
        actual,
        expected,
        compare_classes(actual, expected),
    )


def wedge_identity_defects(problem: FlowProblem, solution: FlowSolution) -> list[DifferentialForm]:
    """``Σ_l f_il(φ_l, t_1..)·dφ_l ∧ dt_1 ∧ ... ∧ dt_{N-1} - b_i·dt_0 ∧ ... ∧ dt_{N-1}``.

    Computed in ``Ω^N_{A_M}``, where forms with coefficients of degree ``M-1``
    already vanish, so no precision bookkeeping is needed here.
    """
    nvars, order = problem.nvars, problem.order
    tail = DifferentialForm.function(TruncatedSeries.constant(1, nvars, order))
    for k in range(1, nvars):
        tail = tail.wedge(DifferentialForm.dt(k, nvars, order))
    volume = DifferentialForm.volume(nvars, order)
    out = []
    for row, b in zip(problem.matrix.entries, problem.rhs):
        acc = DifferentialForm.function(b).wedge(volume) * -1
        for f, phi in zip(row, solution.phi):
            dphi = DifferentialForm.function(phi).d()
            coeff = DifferentialForm.function(substitute_variable(f, 0, phi))
            acc = acc + coeff.wedge(dphi).wedge(tail)
        out.append(acc)
    return out
