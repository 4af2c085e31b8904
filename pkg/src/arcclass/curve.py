"""Odd-degree hyperelliptic curves ``y^2 = s(x)`` over the rationals.

Regular differentials are taken in the standard basis
``ω_j = x^j dx / (2y)``, ``j = 0..g-1``.  Formal arcs ``Spec A_M -> X`` are
given by a rational non-Weierstrass center ``(x_p, y_p)`` and a displacement
``ξ`` in the maximal ideal of ``A_M``; ``y`` along the arc is the square root of
``s(x_p + ξ)`` with constant term ``y_p``.  Pulling ``ω_j`` back along an arc
only ever divides by units of ``A_M``.

Polynomials are coefficient tuples in ascending degree order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence

from . import linalg
from .forms import DifferentialForm
from .linalg import SeriesMatrix
from .series import (
    TruncatedSeries,
    invert_unit,
    rational_sqrt,
    sqrt_unit,
    to_fraction,
)


class CurveError(ValueError):
    pass


class WeierstrassCenterError(CurveError):
    """Arc or expansion requested at a point with ``y = 0``."""


# univariate polynomial helpers (ascending coefficients) ---------------------


def _trim(p: Sequence[Fraction]) -> list[Fraction]:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_eval(p: Sequence[Fraction], x):
    acc = 0 * x if isinstance(x, TruncatedSeries) else Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def poly_derivative(p: Sequence[Fraction]) -> list[Fraction]:
    return [k * c for k, c in enumerate(p)][1:]


def poly_gcd(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    """Monic gcd by Euclid's algorithm over Q."""
    a, b = _trim(a), _trim(b)
    while b:
        r = list(a)
        while len(r) >= len(b) and r:
            q = r[-1] / b[-1]
            shift = len(r) - len(b)
            for i, c in enumerate(b):
                r[i + shift] -= q * c
            r = _trim(r)
        a, b = b, r
    return [c / a[-1] for c in a] if a else []


def is_squarefree(p: Sequence[Fraction]) -> bool:
    return len(poly_gcd(p, poly_derivative(p))) == 1


# domain types ----------------------------------------------------------------


@dataclass(frozen=True)
class AffinePoint:
    x: Fraction
    y: Fraction

    def to_json(self) -> dict:
        return {"x": str(self.x), "y": str(self.y)}

    @classmethod
    def from_json(cls, data: Mapping) -> AffinePoint:
        return cls(to_fraction(str(data["x"])), to_fraction(str(data["y"])))


@dataclass(frozen=True)
class HyperellipticCurve:
    s: tuple[Fraction, ...]

    @property
    def genus(self) -> int:
        return (len(self.s) - 2) // 2

    def __str__(self) -> str:
        terms = [f"{c}*x^{k}" for k, c in enumerate(self.s) if c]
        return "y^2 = " + " + ".join(reversed(terms))

    def rhs(self, x):
        return poly_eval(self.s, x)

    def contains(self, x, y) -> bool:
        return to_fraction(y) ** 2 == self.rhs(to_fraction(x))

    def point(self, x, y) -> AffinePoint:
        x, y = to_fraction(x), to_fraction(y)
        if y * y != self.rhs(x):
            raise CurveError(f"({x}, {y}) is not on {self}")
        return AffinePoint(x, y)

    def to_json(self) -> dict:
        return {"s_coeffs": [str(c) for c in self.s]}

    @classmethod
    def from_json(cls, data: Mapping) -> HyperellipticCurve:
        return make_curve([to_fraction(str(c)) for c in data["s_coeffs"]])


@dataclass(frozen=True)
class FormalArc:
    """Arc ``x = x_p + ξ`` on a curve; ``y`` is expanded on construction."""

    curve: HyperellipticCurve
    center: AffinePoint
    displacement: TruncatedSeries
    y: TruncatedSeries = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if self.center.y == 0:
            raise WeierstrassCenterError(f"arc centered at Weierstrass point {self.center}")
        if self.displacement.constant_term() != 0:
            raise CurveError("arc displacement must lie in the maximal ideal")
        if not self.curve.contains(self.center.x, self.center.y):
            raise CurveError(f"{self.center} is not on {self.curve}")
        x = self.x
        object.__setattr__(self, "y", sqrt_unit(self.curve.rhs(x), self.center.y))

    @property
    def nvars(self) -> int:
        return self.displacement.nvars

    @property
    def order(self) -> int:
        return self.displacement.order

    @property
    def x(self) -> TruncatedSeries:
        return self.displacement + self.center.x

    def is_constant(self) -> bool:
        return self.displacement.is_zero()

    def truncate(self, order: int) -> FormalArc:
        return FormalArc(self.curve, self.center, self.displacement.truncate(order))

    def to_json(self) -> dict:
        return {"center": self.center.to_json(), "displacement": self.displacement.to_json()}

    @classmethod
    def from_json(cls, curve: HyperellipticCurve, data: Mapping) -> FormalArc:
        center = AffinePoint.from_json(data["center"])
        return cls(curve, center, TruncatedSeries.from_json(data["displacement"]))


# operations --------------------------------------------------------------------


def make_curve(s_coefficients: Iterable) -> HyperellipticCurve:
    """Validate ``s`` (ascending coefficients): odd degree at least 3 and squarefree."""
    s = _trim([to_fraction(c) for c in s_coefficients])
    degree = len(s) - 1
    if degree < 3 or degree % 2 == 0:
        raise CurveError(f"s must have odd degree >= 3, got degree {degree}")
    if not is_squarefree(s):
        raise CurveError("s is not squarefree")
    return HyperellipticCurve(tuple(s))


def curve_through_points(points: Sequence, genus: int, max_tries: int = 64) -> HyperellipticCurve:
    """A curve of the given genus passing through the given points.

    ``s = x^(2g+1) + c_{2g} x^(2g) + ... + c_0``; with ``k`` points the
    coefficients ``c_0..c_{k-1}`` are solved for by interpolation and the rest
    start at zero, then are perturbed deterministically if ``s`` turns out not
    to be squarefree.
    """
    if genus < 1:
        raise CurveError("genus must be at least 1")
    pts = [(to_fraction(x), to_fraction(y)) for x, y in points]
    k = len(pts)
    top = 2 * genus + 1
    if not 1 <= k <= top:
        raise CurveError(f"need between 1 and {top} points for genus {genus}, got {k}")
    if len({x for x, _ in pts}) != k:
        raise CurveError("points must have distinct x-values")
    if any(y == 0 for _, y in pts):
        raise CurveError("points must have nonzero y")
    vandermonde = [[x ** i for i in range(k)] for x, _ in pts]
    rng = random.Random(0)
    for attempt in range(max_tries):
        free = [Fraction(0)] * (top - k) if attempt == 0 else [Fraction(rng.randint(-5, 5)) for _ in range(top - k)]
        rhs = [
            y * y - x ** top - sum(c * x ** (k + i) for i, c in enumerate(free))
            for x, y in pts
        ]
        low = linalg.solve_linear(vandermonde, rhs)
        s = list(low) + free + [Fraction(1)]
        if is_squarefree(s):
            return HyperellipticCurve(tuple(s))
        if top == k:
            break
    raise CurveError("no squarefree curve found through the given points")


def local_expansion(curve: HyperellipticCurve, point: AffinePoint, order: int) -> TruncatedSeries:
    """``y(u)`` with ``y(u)^2 = s(x_p + u)`` in ``Q[u]/u^M`` and ``y(0) = y_p``."""
    if point.y == 0:
        raise WeierstrassCenterError(f"no local expansion in x at Weierstrass point {point}")
    u = TruncatedSeries.variable(0, 1, order)
    return sqrt_unit(curve.rhs(u + point.x), point.y)


def regular_differential_coefficient(curve: HyperellipticCurve, j: int, x: TruncatedSeries, y: TruncatedSeries) -> TruncatedSeries:
    """The function ``x^j / (2y)`` multiplying ``dx`` in ``ω_j``."""
    if not 0 <= j < curve.genus:
        raise IndexError(f"differential index {j} out of range for genus {curve.genus}")
    return x ** j * invert_unit(y * 2)


def pullback(curve: HyperellipticCurve, j: int, arc: FormalArc) -> DifferentialForm:
    """``ω_j`` pulled back along the arc, as a 1-form in ``Ω^1_{A_M}``."""
    if arc.curve != curve:
        raise CurveError("arc lives on a different curve")
    coeff = regular_differential_coefficient(curve, j, arc.x, arc.y)
    return DifferentialForm.function(coeff).wedge(DifferentialForm.function(arc.displacement).d())


def ratio_matrix(curve: HyperellipticCurve, points: Sequence[AffinePoint], order: int) -> SeriesMatrix:
    """Entry ``(i, l)`` is ``(x_l + u)^i / (2 y_l(u))`` as a series in ``u``."""
    u = TruncatedSeries.variable(0, 1, order)
    cols = []
    for p in points:
        y = local_expansion(curve, p, order)
        cols.append([regular_differential_coefficient(curve, i, u + p.x, y) for i in range(curve.genus)])
    return SeriesMatrix.of([[cols[l][i] for l in range(len(points))] for i in range(curve.genus)])


def evaluation_column(curve: HyperellipticCurve, point: AffinePoint) -> list[Fraction]:
    """``(x^i / (2y))_i`` at a point: a column of the ratio matrix at ``u = 0``."""
    return [point.x ** i / (2 * point.y) for i in range(curve.genus)]


def _rationals_by_height(bound: int):
    yield Fraction(0)
    seen = {Fraction(0)}
    for h in range(1, bound + 1):
        batch = []
        for b in range(1, h + 1):
            for a in range(0, h + 1):
                if max(a, b) != h or gcd(a, b) != 1:
                    continue
                for x in (Fraction(a, b), Fraction(-a, b)):
                    if x not in seen:
                        seen.add(x)
                        batch.append((b, a, x < 0, x))
        for *_, x in sorted(batch):
            yield x


def find_rational_points(curve: HyperellipticCurve, bound: int) -> list[AffinePoint]:
    """Non-Weierstrass points with ``x = a/b``, ``|a|, b <= bound``, small height first."""
    out = []
    for x in _rationals_by_height(bound):
        y = rational_sqrt(curve.rhs(x))
        if y:
            out.append(AffinePoint(x, y))
            out.append(AffinePoint(x, -y))
    return out
