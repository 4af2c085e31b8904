"""Truncated multivariate power series with exact rational coefficients.

A :class:`TruncatedSeries` is an element of ``A_M = Q[t_0..t_{N-1}]/m^M`` where
``m`` is the ideal generated by the variables.  Truncation is by total degree,
so every stored monomial has degree ``< M``.  Terms are kept in a canonical
form (sorted exponent vectors, no zero coefficients) and equality is
structural.

Variables are indexed from 0.  Rings with a distinguished variable (the
``R[[t]]`` of the flow solver) are the same type with variable 0 singled out.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, isqrt
from typing import Iterable, Mapping, Union

Rational = Union[int, Fraction]


class RingMismatchError(ValueError):
    """Operands live in different truncated rings."""


class NonUnitError(ArithmeticError):
    """Inversion requested for an element with zero constant term."""


def to_fraction(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction; floats are refused."""
    if isinstance(value, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


def monomials(nvars: int, max_degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree ``<= max_degree``, graded-lex order."""
    out: list[tuple[int, ...]] = []
    for d in range(max_degree + 1):
        out.extend(monomials_of_degree(nvars, d))
    return out


def monomials_of_degree(nvars: int, degree: int) -> list[tuple[int, ...]]:
    if nvars == 0:
        return [()] if degree == 0 else []
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out


def ring_dimension(nvars: int, order: int) -> int:
    return comb(nvars + order - 1, nvars)


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if it is not a square."""
    q = Fraction(q)
    if q < 0:
        return None
    a, b = q.numerator, q.denominator
    ra, rb = isqrt(a), isqrt(b)
    if ra * ra == a and rb * rb == b:
        return Fraction(ra, rb)
    return None


class TruncatedSeries:
    """Immutable element of ``Q[t_0..t_{N-1}]/m^M``."""

    __slots__ = ("nvars", "order", "_terms", "_hash")

    def __init__(self, nvars: int, order: int, terms: Mapping[tuple[int, ...], Rational] | None = None):
        if nvars < 0 or order < 1:
            raise ValueError(f"invalid ring parameters N={nvars}, M={order}")
        clean: dict[tuple[int, ...], Fraction] = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or any(e < 0 for e in exp):
                raise ValueError(f"bad exponent vector {exp} for N={nvars}")
            if sum(exp) >= order:
                continue
            c = to_fraction(c)
            if c:
                clean[exp] = clean.get(exp, Fraction(0)) + c
        self.nvars = nvars
        self.order = order
        self._terms = {e: clean[e] for e in sorted(clean) if clean[e]}
        self._hash = None

    # constructors -----------------------------------------------------

    @classmethod
    def zero(cls, nvars: int, order: int) -> TruncatedSeries:
        return cls(nvars, order)

    @classmethod
    def constant(cls, value: Rational, nvars: int, order: int) -> TruncatedSeries:
        return cls(nvars, order, {(0,) * nvars: value})

    @classmethod
    def variable(cls, index: int, nvars: int, order: int) -> TruncatedSeries:
        if not 0 <= index < nvars:
            raise IndexError(f"variable t_{index} not in ring with N={nvars}")
        exp = tuple(1 if k == index else 0 for k in range(nvars))
        return cls(nvars, order, {exp: 1})

    @classmethod
    def from_coefficients(cls, coeffs: Iterable[Rational], order: int) -> TruncatedSeries:
        """Univariate series ``c_0 + c_1 u + ...`` from a coefficient list."""
        return cls(1, order, {(k,): c for k, c in enumerate(coeffs)})

    # basic protocol ---------------------------------------------------

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, exp: tuple[int, ...]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def valuation(self) -> int | None:
        """Lowest total degree present, None for zero."""
        if not self._terms:
            return None
        return min(sum(e) for e in self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncatedSeries):
            return (self.nvars, self.order, self._terms) == (other.nvars, other.order, other._terms)
        if isinstance(other, (int, Fraction)):
            return self == self._lift(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, self.order, tuple(self._terms.items())))
        return self._hash

    def __repr__(self) -> str:
        return f"TruncatedSeries(N={self.nvars}, M={self.order}, {self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exp, c in self._terms.items():
            mono = "*".join(
                f"t{k}" if e == 1 else f"t{k}^{e}" for k, e in enumerate(exp) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # arithmetic ---------------------------------------------------------

    def _lift(self, other) -> TruncatedSeries:
        if isinstance(other, TruncatedSeries):
            if (other.nvars, other.order) != (self.nvars, self.order):
                raise RingMismatchError(
                    f"ring (N={self.nvars}, M={self.order}) vs (N={other.nvars}, M={other.order})"
                )
            return other
        return TruncatedSeries.constant(to_fraction(other), self.nvars, self.order)

    def __add__(self, other) -> TruncatedSeries:
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return TruncatedSeries(self.nvars, self.order, out)

    __radd__ = __add__

    def __neg__(self) -> TruncatedSeries:
        return TruncatedSeries(self.nvars, self.order, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> TruncatedSeries:
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> TruncatedSeries:
        return (-self) + other

    def __mul__(self, other) -> TruncatedSeries:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            c = Fraction(other)
            return TruncatedSeries(self.nvars, self.order, {e: c * v for e, v in self._terms.items()})
        try:
            other = self._lift(other)
        except TypeError:
            return NotImplemented
        M = self.order
        out: dict[tuple[int, ...], Fraction] = {}
        b_items = [(e, sum(e), c) for e, c in other._terms.items()]
        for ea, ca in self._terms.items():
            da = sum(ea)
            for eb, db, cb in b_items:
                if da + db >= M:
                    continue
                e = tuple(x + y for x, y in zip(ea, eb))
                out[e] = out.get(e, Fraction(0)) + ca * cb
        return TruncatedSeries(self.nvars, M, out)

    __rmul__ = __mul__

    def __truediv__(self, other) -> TruncatedSeries:
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * (Fraction(1) / Fraction(other))
        return self * invert_unit(self._lift(other))

    def __pow__(self, n: int) -> TruncatedSeries:
        if n < 0:
            return invert_unit(self) ** (-n)
        result = TruncatedSeries.constant(1, self.nvars, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # structure maps -----------------------------------------------------

    def truncate(self, order: int) -> TruncatedSeries:
        """Image under ``A_M -> A_{M'}`` for ``M' <= M``."""
        if order > self.order:
            raise ValueError(f"cannot raise precision from {self.order} to {order}")
        return TruncatedSeries(self.nvars, order, self._terms)

    def with_order(self, order: int) -> TruncatedSeries:
        """Same polynomial data placed in another order (lifting pads with zeros)."""
        return TruncatedSeries(self.nvars, order, self._terms)

    def embed(self, nvars: int, positions: Iterable[int]) -> TruncatedSeries:
        """Rename variable ``k`` to ``positions[k]`` in a ring with ``nvars`` variables."""
        positions = list(positions)
        out = {}
        for e, c in self._terms.items():
            new = [0] * nvars
            for k, p in enumerate(positions):
                new[p] += e[k]
            out[tuple(new)] = c
        return TruncatedSeries(nvars, self.order, out)

    def derivative(self, index: int) -> TruncatedSeries:
        """Formal partial derivative in ``t_index``.

        Only the terms of degree ``< M - 1`` of the result are meaningful: the
        degree ``M - 1`` part would need input terms that were truncated away.
        """
        if not 0 <= index < self.nvars:
            raise IndexError(f"variable t_{index} not in ring with N={self.nvars}")
        out = {}
        for e, c in self._terms.items():
            if e[index]:
                new = list(e)
                new[index] -= 1
                out[tuple(new)] = c * e[index]
        return TruncatedSeries(self.nvars, self.order, out)

    def coefficient_in(self, index: int, power: int) -> TruncatedSeries:
        """Coefficient of ``t_index**power``, returned in the same ring (free of ``t_index``)."""
        out = {}
        for e, c in self._terms.items():
            if e[index] == power:
                new = list(e)
                new[index] = 0
                out[tuple(new)] = c
        return TruncatedSeries(self.nvars, self.order, out)

    def degree_in(self, index: int) -> int:
        return max((e[index] for e in self._terms), default=-1)

    def evaluate(self, point: Iterable[Rational]) -> Fraction:
        """Value of the underlying polynomial at a rational point."""
        point = [to_fraction(p) for p in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= x ** k
            total += v
        return total

    # serialization ------------------------------------------------------

    def to_records(self) -> list[dict]:
        return [
            {"exponents": list(e), "numerator": str(c.numerator), "denominator": str(c.denominator)}
            for e, c in self._terms.items()
        ]

    def to_json(self) -> dict:
        return {"nvars": self.nvars, "order": self.order, "terms": self.to_records()}

    @classmethod
    def from_records(cls, records: Iterable[Mapping], nvars: int, order: int) -> TruncatedSeries:
        terms: dict[tuple[int, ...], Fraction] = {}
        for rec in records:
            e = tuple(rec["exponents"])
            terms[e] = terms.get(e, Fraction(0)) + parse_coefficient(rec)
        return cls(nvars, order, terms)

    @classmethod
    def from_json(cls, data: Mapping) -> TruncatedSeries:
        return cls.from_records(data["terms"], int(data["nvars"]), int(data["order"]))


def parse_coefficient(rec: Mapping) -> Fraction:
    """Read a coefficient given as numerator/denominator strings or a single ``coeff``."""
    if "coeff" in rec:
        return to_fraction(str(rec["coeff"]))
    num = int(str(rec["numerator"]))
    den = int(str(rec.get("denominator", "1")))
    if den == 0:
        raise ZeroDivisionError("zero denominator in serialized coefficient")
    return Fraction(num, den)


def add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a + b


def mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def derivative(f: TruncatedSeries, index: int) -> TruncatedSeries:
    return f.derivative(index)


def substitute(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Compose a univariate series ``f(u)`` with ``g`` (no constant term).

    The result lives in the ring of ``g``.  Horner evaluation; since ``g`` is in
    the maximal ideal only powers below the order of ``g``'s ring contribute.
    """
    if f.nvars != 1:
        raise ValueError("substitute expects a univariate outer series")
    return substitute_variable(f, 0, g, keep=False)


def substitute_variable(f: TruncatedSeries, index: int, g: TruncatedSeries, keep: bool = True) -> TruncatedSeries:
    """Replace ``t_index`` in ``f`` by ``g`` (which must lie in the maximal ideal).

    With ``keep=True`` the other variables of ``f`` are kept and ``f`` must live
    in the ring of ``g``.  With ``keep=False``, ``f`` must be univariate in
    ``t_index`` only and the result is placed in ``g``'s ring.
    """
    if g.constant_term() != 0:
        raise ValueError("substituted series must have zero constant term")
    if keep and (f.nvars, f.order) != (g.nvars, g.order):
        raise RingMismatchError("substitute_variable with keep=True needs a common ring")
    top = g.order - 1
    # group f by the power of t_index
    by_power: dict[int, TruncatedSeries] = {}
    for e, c in f.items():
        p = e[index]
        if p > top:
            continue
        if keep:
            rest = list(e)
            rest[index] = 0
            mono = TruncatedSeries(g.nvars, g.order, {tuple(rest): c})
        else:
            if any(v for k, v in enumerate(e) if k != index):
                raise ValueError("outer series depends on variables other than the substituted one")
            mono = TruncatedSeries.constant(c, g.nvars, g.order)
        by_power[p] = by_power.get(p, TruncatedSeries.zero(g.nvars, g.order)) + mono
    result = TruncatedSeries.zero(g.nvars, g.order)
    for p in range(max(by_power, default=-1), -1, -1):
        result = result * g
        if p in by_power:
            result = result + by_power[p]
    return result


def invert_unit(f: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse of a unit by Newton iteration ``g <- g(2 - f g)``."""
    c0 = f.constant_term()
    if c0 == 0:
        raise NonUnitError(f"series {f} is not a unit (zero constant term)")
    g = TruncatedSeries.constant(1 / c0, f.nvars, f.order)
    precision = 1
    while precision < f.order:
        g = g * (2 - f * g)
        precision *= 2
    return g


def sqrt_unit(f: TruncatedSeries, root: Rational) -> TruncatedSeries:
    """Square root of ``f`` with prescribed constant term ``root``.

    Newton iteration ``g <- (g + f/g)/2``; precision doubles each step.
    """
    root = to_fraction(root)
    c0 = f.constant_term()
    if c0 == 0 or rational_sqrt(c0) is None:
        raise ValueError(f"constant term {c0} is not the square of a nonzero rational")
    if root * root != c0:
        raise ValueError(f"supplied root {root} does not square to {c0}")
    g = TruncatedSeries.constant(root, f.nvars, f.order)
    precision = 1
    while precision < f.order:
        g = (g + f * invert_unit(g)) * Fraction(1, 2)
        precision *= 2
    return g
