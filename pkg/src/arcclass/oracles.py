"""Slow, independent reference computations built on sympy.

These deliberately avoid the package's own arithmetic:

* :func:`flow_by_undetermined_coefficients` writes every coefficient of every
  ``φ_l`` as a generator of a sympy polynomial ring, expands the whole system
  there and solves it one total degree at a time (the fast solver works one
  power of ``t_0`` at a time with its own series type).
* :func:`omega_dimension_by_enumeration` counts ``dim Ω^p_{A_M}`` from the
  presentation ``Ω^p_{Q[t]} / (I Ω^p + dI ∧ Ω^{p-1})``, ``I = m^M``, by listing
  generators in the free module up to coefficient degree ``M`` and taking a
  sympy rank.
* :func:`sqrt_by_undetermined_coefficients` solves ``g^2 = f`` term by term.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import sympy as sp
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import ring

from .flow import FlowProblem
from .series import TruncatedSeries, monomials, monomials_of_degree


def flow_by_undetermined_coefficients(problem: FlowProblem) -> tuple[TruncatedSeries, ...]:
    """Solve the flow system with every coefficient of ``φ`` as an unknown."""
    N, M, g = problem.nvars, problem.order, problem.size
    keys = [(l, e) for l in range(g) for e in monomials(N, M - 1) if e[0] >= 1]
    names = [f"c_{l}_{'_'.join(map(str, e))}" for l, e in keys] + [f"t{k}" for k in range(N)]
    R, *gens = ring(",".join(names), QQ)
    U = len(keys)
    unknowns = dict(zip(keys, gens[:U]))
    ts = gens[U:]

    def truncate(p):
        # keep total t-degree below M; the unknowns are coefficients
        return R.from_dict({m: c for m, c in p.terms() if sum(m[U:]) < M})

    def lift(f: TruncatedSeries):
        return R.from_dict({(0,) * U + e: QQ(c.numerator, c.denominator) for e, c in f.items()})

    phis = []
    for l in range(g):
        phi = R.zero
        for (ll, e), c in unknowns.items():
            if ll == l:
                mono = R.one
                for t, k in zip(ts, e):
                    mono *= t ** k
                phi += c * mono
        phis.append(phi)

    residual_terms = []
    for i in range(g):
        lhs = -lift(problem.rhs[i])
        for l in range(g):
            f = problem.matrix.entries[i][l]
            powers = [R.one]
            composed = R.zero
            for e, c in f.items():
                while len(powers) <= e[0]:
                    powers.append(truncate(powers[-1] * phis[l]))
                rest = R.one
                for t, k in zip(ts[1:], e[1:]):
                    rest *= t ** k
                composed += QQ(c.numerator, c.denominator) * truncate(powers[e[0]] * rest)
            lhs += truncate(truncate(composed) * phis[l].diff(ts[0]))
        grouped: dict[tuple[int, ...], dict] = {}
        for m, c in lhs.terms():
            if sum(m[U:]) < M - 1:
                grouped.setdefault(m[U:], {})[m[:U] + (0,) * N] = c
        residual_terms.append({m: R.from_dict(d) for m, d in grouped.items()})

    solved: dict = {}
    for degree in range(M - 1):
        eqs = []
        for terms in residual_terms:
            for m, c in terms.items():
                if sum(m) == degree:
                    eqs.append(c.subs(list(solved.items())).as_expr() if solved else c.as_expr())
        new = [s for (l, e), s in unknowns.items() if sum(e) == degree + 1]
        if not new:
            continue
        symbols = [s.as_expr() for s in new]
        solutions = sp.linsolve(eqs, symbols)
        if not solutions:
            raise ArithmeticError(f"no solution at degree {degree + 1}")
        (values,) = list(solutions)
        for s, v in zip(new, values):
            if v.free_symbols:
                raise ArithmeticError("solution is not unique")
            solved[s] = QQ(int(sp.Rational(v).p), int(sp.Rational(v).q))

    out = []
    for l in range(g):
        coeffs = {e: solved[s] for (ll, e), s in unknowns.items() if ll == l}
        out.append(TruncatedSeries(N, M, {e: Fraction(int(v.numerator), int(v.denominator)) for e, v in coeffs.items()}))
    return tuple(out)


def omega_dimension_by_enumeration(nvars: int, order: int, degree: int) -> int:
    """``dim Ω^p_{A_M}`` from a full enumeration of generators and relations."""
    if degree > nvars:
        return 0
    index_sets = list(combinations(range(nvars), degree))
    basis = [(e, J) for e in monomials(nvars, order) for J in index_sets]
    position = {k: n for n, k in enumerate(basis)}
    gens = []

    def vector(terms):
        v = [QQ(0)] * len(basis)
        for key, c in terms.items():
            v[position[key]] += QQ(c)
        return v

    # I·Ω^p, inside the enumerated window
    for e in monomials_of_degree(nvars, order):
        for J in index_sets:
            gens.append(vector({(e, J): 1}))
    # dμ ∧ dt_K for μ in I; larger μ or nonconstant multipliers land in I·Ω^p
    if degree >= 1:
        for mu in monomials_of_degree(nvars, order):
            for K in combinations(range(nvars), degree - 1):
                terms = {}
                for i in range(nvars):
                    if not mu[i] or i in K:
                        continue
                    idx = (i,) + K
                    sign = (-1) ** sum(1 for k in K if k < i)
                    new = list(mu)
                    new[i] -= 1
                    key = (tuple(new), tuple(sorted(idx)))
                    terms[key] = terms.get(key, 0) + sign * mu[i]
                gens.append(vector(terms))
    if not gens:
        return len(basis)
    rank = DomainMatrix(gens, (len(gens), len(basis)), QQ).rank()
    return len(basis) - rank


def sqrt_by_undetermined_coefficients(f: TruncatedSeries, root) -> TruncatedSeries:
    """Univariate ``g`` with ``g^2 = f`` and ``g(0) = root`` from ``2·root·g_k = f_k - Σ g_i g_{k-i}``."""
    if f.nvars != 1:
        raise ValueError("univariate only")
    M = f.order
    root = Fraction(root)
    g = [root]
    for k in range(1, M):
        cross = sum(g[i] * g[k - i] for i in range(1, k))
        g.append((f.coefficient((k,)) - cross) / (2 * root))
    return TruncatedSeries.from_coefficients(g, M)
