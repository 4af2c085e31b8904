"""Kähler differential forms on the truncated algebra ``A_M``.

``Ω^p_{A_M/Q}`` is the free module on ``dt_J`` (``|J| = p``) over ``A_M`` modulo the
relations ``d(μ) ∧ dt_K`` for monomials ``μ`` of total degree exactly ``M``.
Those relations only involve coefficients of degree ``M - 1``, so the quotient is
computed once per ``(N, M, p)`` by row reducing a small rational matrix; forms
are then stored in normal form and compared structurally.

A free basis element is a pair ``(exponents, J)`` standing for
``t^exponents dt_{J[0]} ∧ ... ∧ dt_{J[-1]}`` with ``J`` strictly increasing.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Mapping

from . import linalg
from .series import (
    RingMismatchError,
    TruncatedSeries,
    monomials,
    monomials_of_degree,
    Rational,
    parse_coefficient,
    to_fraction,
)

Key = tuple[tuple[int, ...], tuple[int, ...]]


def _sort_indices(indices: Iterable[int]) -> tuple[int, tuple[int, ...]] | None:
    """Sign and sorted tuple of ``dt_{i_1} ∧ ... ∧ dt_{i_k}``, None if it vanishes."""
    idx = list(indices)
    if len(set(idx)) != len(idx):
        return None
    sign = 1
    for a in range(len(idx)):
        for b in range(a + 1, len(idx)):
            if idx[a] > idx[b]:
                sign = -sign
    return sign, tuple(sorted(idx))


def _free_d(terms: Mapping[Key, Fraction], nvars: int) -> dict[Key, Fraction]:
    out: dict[Key, Fraction] = {}
    for (exp, J), c in terms.items():
        for i in range(nvars):
            if not exp[i]:
                continue
            placed = _sort_indices((i,) + J)
            if placed is None:
                continue
            sign, K = placed
            new = list(exp)
            new[i] -= 1
            key = (tuple(new), K)
            out[key] = out.get(key, Fraction(0)) + sign * exp[i] * c
    return out


def _free_wedge(a: Mapping[Key, Fraction], b: Mapping[Key, Fraction], order: int) -> dict[Key, Fraction]:
    out: dict[Key, Fraction] = {}
    for (ea, Ja), ca in a.items():
        da = sum(ea)
        for (eb, Jb), cb in b.items():
            if da + sum(eb) >= order:
                continue
            placed = _sort_indices(Ja + Jb)
            if placed is None:
                continue
            sign, K = placed
            key = (tuple(x + y for x, y in zip(ea, eb)), K)
            out[key] = out.get(key, Fraction(0)) + sign * ca * cb
    return out


class DeRhamSpace:
    """Normal-form data for ``Ω^p_{A_M/Q}`` with ``N`` variables.

    Build through :func:`omega_space`, which caches one instance per triple.
    """

    def __init__(self, nvars: int, order: int, degree: int):
        if nvars < 1 or order < 1 or degree < 0:
            raise ValueError(f"invalid de Rham parameters N={nvars}, M={order}, p={degree}")
        self.nvars = nvars
        self.order = order
        self.degree = degree
        self.index_sets = list(combinations(range(nvars), degree)) if degree <= nvars else []

        top = order - 1
        # pivot preference: index set first, then lex-largest exponent
        top_keys = sorted(
            ((e, J) for J in self.index_sets for e in monomials_of_degree(nvars, top)),
            key=lambda k: (k[1], tuple(-x for x in k[0])),
        )
        column = {k: n for n, k in enumerate(top_keys)}
        rows = []
        if degree >= 1:
            for mu in monomials_of_degree(nvars, order):
                for K in combinations(range(nvars), degree - 1):
                    rel = _free_d({(mu, ()): Fraction(1)}, nvars)
                    rel = _free_wedge(rel, {((0,) * nvars, K): Fraction(1)}, order)
                    vec = [Fraction(0)] * len(top_keys)
                    for key, c in rel.items():
                        vec[column[key]] += c
                    if any(vec):
                        rows.append(vec)
        reduced, pivots = linalg.rref(rows) if rows else ([], [])
        self._reducer: dict[Key, dict[Key, Fraction]] = {}
        for row, pc in zip(reduced, pivots):
            self._reducer[top_keys[pc]] = {
                top_keys[c]: -v for c, v in enumerate(row) if v and c != pc
            }
        self.basis: list[Key] = sorted(
            (
                (e, J)
                for J in self.index_sets
                for e in monomials(nvars, order - 1)
                if (e, J) not in self._reducer
            ),
            key=lambda k: (sum(k[0]), tuple(-x for x in k[0]), k[1]),
        )
        self._position = {k: n for n, k in enumerate(self.basis)}
        self._dims: dict[str, int] | None = None

    def __repr__(self) -> str:
        return f"DeRhamSpace(N={self.nvars}, M={self.order}, p={self.degree}, dim={self.dim})"

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def relation_count(self) -> int:
        return len(self._reducer)

    def normal_form(self, terms: Mapping[Key, Fraction]) -> dict[Key, Fraction]:
        """Linear, idempotent reduction of a free-module element to basis terms."""
        out: dict[Key, Fraction] = {}
        for (exp, J), c in terms.items():
            if not c or sum(exp) >= self.order or len(J) != self.degree:
                continue
            key = (tuple(exp), tuple(J))
            replacement = self._reducer.get(key)
            if replacement is None:
                out[key] = out.get(key, Fraction(0)) + c
            else:
                for k2, v in replacement.items():
                    out[k2] = out.get(k2, Fraction(0)) + c * v
        return {k: v for k, v in out.items() if v}

    def coordinates(self, form: DifferentialForm) -> list[Fraction]:
        self._check(form)
        vec = [Fraction(0)] * self.dim
        for key, c in form.items():
            vec[self._position[key]] = c
        return vec

    def element(self, coords: Iterable[Fraction]) -> DifferentialForm:
        terms = {k: c for k, c in zip(self.basis, coords) if c}
        return DifferentialForm._trusted(self.nvars, self.order, self.degree, terms)

    def basis_forms(self) -> list[DifferentialForm]:
        return [DifferentialForm._trusted(self.nvars, self.order, self.degree, {k: Fraction(1)}) for k in self.basis]

    def _check(self, form: DifferentialForm) -> None:
        if (form.nvars, form.order, form.degree) != (self.nvars, self.order, self.degree):
            raise RingMismatchError("form does not belong to this space")

    def d_matrix(self) -> list[list[Fraction]]:
        """Matrix of ``d: Ω^p -> Ω^{p+1}``; column k is d of basis element k."""
        target = omega_space(self.nvars, self.order, self.degree + 1)
        cols = [target.coordinates(f.d()) for f in self.basis_forms()]
        return [[cols[k][r] for k in range(len(cols))] for r in range(target.dim)]

    def dimensions(self) -> dict[str, int]:
        if self._dims is None:
            if self.dim:
                closed = self.dim - linalg.rank(self.d_matrix())
            else:
                closed = 0
            if self.degree == 0:
                exact = 0
            else:
                lower = omega_space(self.nvars, self.order, self.degree - 1)
                exact = linalg.rank(lower.d_matrix()) if lower.dim else 0
            self._dims = {"dim_total": self.dim, "dim_closed": closed, "dim_exact": exact}
        return dict(self._dims)

    @property
    def dim_closed(self) -> int:
        return self.dimensions()["dim_closed"]

    @property
    def dim_exact(self) -> int:
        return self.dimensions()["dim_exact"]

    def describe(self) -> dict:
        return {
            "nvars": self.nvars,
            "order": self.order,
            "degree": self.degree,
            **self.dimensions(),
            "basis": [{"exponents": list(e), "index_set": list(J)} for e, J in self.basis],
        }


@lru_cache(maxsize=None)
def omega_space(nvars: int, order: int, degree: int) -> DeRhamSpace:
    return DeRhamSpace(nvars, order, degree)


class DifferentialForm:
    """Immutable element of ``Ω^p_{A_M/Q}``, kept in normal form."""

    __slots__ = ("nvars", "order", "degree", "_terms")

    def __init__(self, nvars: int, order: int, degree: int, terms: Mapping[Key, Rational] | None = None):
        raw: dict[Key, Fraction] = {}
        for (exp, J), c in (terms or {}).items():
            exp = tuple(int(x) for x in exp)
            if len(exp) != nvars:
                raise ValueError(f"exponent vector {exp} does not match N={nvars}")
            if len(J) != degree:
                raise ValueError(f"index set {J} does not have size {degree}")
            placed = _sort_indices(J)
            if placed is None:
                continue
            sign, K = placed
            if K and not 0 <= K[0] <= K[-1] < nvars:
                raise ValueError(f"index set {J} out of range for N={nvars}")
            key = (exp, K)
            raw[key] = raw.get(key, Fraction(0)) + sign * to_fraction(c)
        space = omega_space(nvars, order, degree)
        self.nvars = nvars
        self.order = order
        self.degree = degree
        self._terms = dict(sorted(space.normal_form(raw).items()))

    @classmethod
    def _trusted(cls, nvars, order, degree, terms) -> DifferentialForm:
        self = object.__new__(cls)
        self.nvars, self.order, self.degree = nvars, order, degree
        self._terms = dict(sorted((k, v) for k, v in terms.items() if v))
        return self

    @classmethod
    def zero(cls, nvars: int, order: int, degree: int) -> DifferentialForm:
        return cls._trusted(nvars, order, degree, {})

    @classmethod
    def function(cls, f: TruncatedSeries) -> DifferentialForm:
        """A series viewed as a 0-form."""
        return cls._trusted(f.nvars, f.order, 0, {(e, ()): c for e, c in f.items()})

    @classmethod
    def dt(cls, index: int, nvars: int, order: int) -> DifferentialForm:
        return cls(nvars, order, 1, {((0,) * nvars, (index,)): 1})

    @classmethod
    def volume(cls, nvars: int, order: int) -> DifferentialForm:
        return cls(nvars, order, nvars, {((0,) * nvars, tuple(range(nvars))): 1})

    # protocol -----------------------------------------------------------

    @property
    def space(self) -> DeRhamSpace:
        return omega_space(self.nvars, self.order, self.degree)

    @property
    def terms(self) -> dict[Key, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        return (self.nvars, self.order, self.degree, self._terms) == (
            other.nvars,
            other.order,
            other.degree,
            other._terms,
        )

    def __hash__(self) -> int:
        return hash((self.nvars, self.order, self.degree, tuple(self._terms.items())))

    def __repr__(self) -> str:
        return f"DifferentialForm(N={self.nvars}, M={self.order}, p={self.degree}, {self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for (exp, J), c in self._terms.items():
            mono = "*".join(f"t{k}" if e == 1 else f"t{k}^{e}" for k, e in enumerate(exp) if e)
            wedge = "^".join(f"dt{j}" for j in J)
            factors = [x for x in (mono, wedge) if x]
            body = "*".join(factors) if factors else "1"
            parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)

    def _same_space(self, other: DifferentialForm) -> None:
        if (self.nvars, self.order, self.degree) != (other.nvars, other.order, other.degree):
            raise RingMismatchError("forms live in different spaces")

    def __add__(self, other: DifferentialForm) -> DifferentialForm:
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        self._same_space(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return DifferentialForm._trusted(self.nvars, self.order, self.degree, out)

    def __neg__(self) -> DifferentialForm:
        return DifferentialForm._trusted(self.nvars, self.order, self.degree, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other: DifferentialForm) -> DifferentialForm:
        return self + (-other)

    def __mul__(self, other) -> DifferentialForm:
        if isinstance(other, TruncatedSeries):
            return DifferentialForm.function(other).wedge(self)
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            c = Fraction(other)
            return DifferentialForm._trusted(self.nvars, self.order, self.degree, {k: c * v for k, v in self._terms.items()})
        return NotImplemented

    __rmul__ = __mul__

    # operations -----------------------------------------------------------

    def d(self) -> DifferentialForm:
        """Exterior derivative; ``d`` maps relations to relations so this is well defined."""
        if self.degree >= self.nvars:
            return DifferentialForm.zero(self.nvars, self.order, self.degree + 1)
        return DifferentialForm(self.nvars, self.order, self.degree + 1, _free_d(self._terms, self.nvars))

    def wedge(self, other: DifferentialForm) -> DifferentialForm:
        if (self.nvars, self.order) != (other.nvars, other.order):
            raise RingMismatchError("wedge of forms over different rings")
        degree = self.degree + other.degree
        if degree > self.nvars:
            return DifferentialForm.zero(self.nvars, self.order, degree)
        return DifferentialForm(self.nvars, self.order, degree, _free_wedge(self._terms, other._terms, self.order))

    def __xor__(self, other: DifferentialForm) -> DifferentialForm:
        return self.wedge(other)

    def is_closed(self) -> bool:
        return self.d().is_zero()

    def exact_witness(self) -> DifferentialForm | None:
        """A ``η`` with ``dη = self``, or None when the form is not exact."""
        if self.is_zero():
            return DifferentialForm.zero(self.nvars, self.order, max(self.degree - 1, 0))
        if self.degree == 0:
            return None
        lower = omega_space(self.nvars, self.order, self.degree - 1)
        coords = self.space.coordinates(self)
        x = linalg.solve_consistent(lower.d_matrix(), coords)
        if x is None:
            return None
        return lower.element(x)

    def is_exact(self) -> tuple[bool, DifferentialForm | None]:
        witness = self.exact_witness()
        return witness is not None, witness

    def truncate(self, order: int) -> DifferentialForm:
        """Image under ``Ω^p_{A_M} -> Ω^p_{A_{M'}}`` for ``M' <= M``."""
        if order > self.order:
            raise ValueError(f"cannot raise precision from {self.order} to {order}")
        return DifferentialForm(self.nvars, order, self.degree, self._terms)

    def function_part(self) -> TruncatedSeries:
        """The coefficient series of a 0-form."""
        if self.degree != 0:
            raise ValueError("only 0-forms are functions")
        return TruncatedSeries(self.nvars, self.order, {e: c for (e, _), c in self._terms.items()})

    def top_coefficient(self) -> TruncatedSeries:
        """For an ``N``-form ``c·dt_0∧...∧dt_{N-1}``, the series ``c`` (in normal form)."""
        if self.degree != self.nvars:
            raise ValueError("only top-degree forms have a single coefficient")
        return TruncatedSeries(self.nvars, self.order, {e: c for (e, _), c in self._terms.items()})

    # serialization ------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "nvars": self.nvars,
            "order": self.order,
            "degree": self.degree,
            "terms": [
                {
                    "exponents": list(e),
                    "index_set": list(J),
                    "numerator": str(c.numerator),
                    "denominator": str(c.denominator),
                }
                for (e, J), c in self._terms.items()
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> DifferentialForm:
        terms: dict[Key, Fraction] = {}
        degree = int(data["degree"])
        for rec in data["terms"]:
            key = (tuple(rec["exponents"]), tuple(rec["index_set"]))
            terms[key] = terms.get(key, Fraction(0)) + parse_coefficient(rec)
        return cls(int(data["nvars"]), int(data["order"]), degree, terms)



def d(form: DifferentialForm | TruncatedSeries) -> DifferentialForm:
    if isinstance(form, TruncatedSeries):
        form = DifferentialForm.function(form)
    return form.d()


def wedge(alpha: DifferentialForm, beta: DifferentialForm) -> DifferentialForm:
    return alpha.wedge(beta)


def is_closed(form: DifferentialForm) -> bool:
    return form.is_closed()


def is_exact(form: DifferentialForm) -> tuple[bool, DifferentialForm | None]:
    return form.is_exact()


def truncate_form(form: DifferentialForm, order: int) -> DifferentialForm:
    return form.truncate(order)
