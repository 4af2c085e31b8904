"""Seeded random inputs shared by the self-test and the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from . import linalg
from .curve import AffinePoint, FormalArc, HyperellipticCurve, curve_through_points
from .flow import FlowProblem
from .series import TruncatedSeries, monomials


def random_rational(rng: random.Random, height: int = 10, allow_zero: bool = True) -> Fraction:
    while True:
        q = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if q or allow_zero:
            return q


def random_series(
    rng: random.Random,
    nvars: int,
    order: int,
    height: int = 10,
    density: float = 0.6,
    min_degree: int = 0,
    free_of: tuple[int, ...] = (),
) -> TruncatedSeries:
    terms = {}
    for e in monomials(nvars, order - 1):
        if sum(e) < min_degree or any(e[k] for k in free_of):
            continue
        if rng.random() < density:
            terms[e] = random_rational(rng, height)
    return TruncatedSeries(nvars, order, terms)


def random_target(rng: random.Random, genus: int, nvars: int, order: int, height: int = 10) -> list[TruncatedSeries]:
    """Potentials in the maximal ideal; occasionally a component is zero."""
    out = []
    for _ in range(genus):
        if rng.random() < 0.15:
            out.append(TruncatedSeries.zero(nvars, order))
        else:
            out.append(random_series(rng, nvars, order, height, min_degree=1))
    return out


def fixture_curve(rng: random.Random, genus: int) -> tuple[HyperellipticCurve, list[AffinePoint]]:
    """A curve through ``genus`` points with distinct positive x-values.

    Positive distinct x-values keep every row-deleted minor of the
    (column-scaled) Vandermonde evaluation matrix nonzero.
    """
    xs = rng.sample(range(1, 9), genus)
    pts = [(x, rng.choice([-1, 1]) * rng.randint(1, 9)) for x in xs]
    curve = curve_through_points(pts, genus)
    return curve, [AffinePoint(Fraction(x), Fraction(y)) for x, y in pts]


def random_arc(rng: random.Random, curve: HyperellipticCurve, centers: list[AffinePoint], nvars: int, order: int) -> FormalArc:
    center = rng.choice(centers)
    xi = random_series(rng, nvars, order, min_degree=1)
    return FormalArc(curve, center, xi)


def random_flow_problem(rng: random.Random, size: int, extra_vars: int, order: int, height: int = 5) -> FlowProblem:
    """Random entries; the leading matrix gets an integer constant part with nonzero determinant."""
    nvars = 1 + extra_vars
    while True:
        const = [[rng.randint(-height, height) for _ in range(size)] for _ in range(size)]
        if linalg.det([[Fraction(v) for v in row] for row in const]) != 0:
            break
    rows = []
    for i in range(size):
        row = []
        for l in range(size):
            f = random_series(rng, nvars, order, height, density=0.4, min_degree=1)
            row.append(f + const[i][l])
        rows.append(row)
    rhs = [random_series(rng, nvars, order, height, density=0.5, free_of=(0,)) for _ in range(size)]
    return FlowProblem.from_rows(rows, rhs)

