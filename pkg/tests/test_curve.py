import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arcclass.curve import (
    AffinePoint,
    CurveError,
    FormalArc,
    HyperellipticCurve,
    WeierstrassCenterError,
    curve_through_points,
    find_rational_points,
    local_expansion,
    make_curve,
    pullback,
    ratio_matrix,
)
from arcclass.fixtures import fixture_curve, random_series
from arcclass.forms import DifferentialForm
from arcclass.series import TruncatedSeries

F = Fraction
E = make_curve([1, 0, 0, 1])


def uni(coeffs, order):
    return TruncatedSeries.from_coefficients(coeffs, order)


class TestConstruction:
    def test_genus(self):
        assert E.genus == 1
        assert make_curve([29, -26, 0, 0, 0, 1]).genus == 2

    @pytest.mark.parametrize("coeffs", [[0, 0, 0, 1], [1, 0, 1], [1, 0, 0, 0, 1], [1]])
    def test_rejected(self, coeffs):
        with pytest.raises(CurveError):
            make_curve(coeffs)

    def test_through_two_points(self):
        assert curve_through_points([(1, 2), (2, 3)], 2).s == tuple(map(F, [29, -26, 0, 0, 0, 1]))

    def test_through_origin(self):
        assert curve_through_points([(0, 1)], 1) == E

    @pytest.mark.parametrize("pts", [[(1, 2), (1, -2)], [(1, 0)], []])
    def test_bad_points(self, pts):
        with pytest.raises(CurveError):
            curve_through_points(pts, 1)

    def test_perturbs_when_not_squarefree(self):
        # with the free coefficients at zero the fit through (1, 1) is x^3
        c = curve_through_points([(1, 1)], 1)
        assert c.contains(1, 1) and c.s != (0, 0, 0, 1)

    @given(st.integers(0, 10 ** 6), st.integers(1, 3))
    def test_fixtures_contain_their_points(self, seed, g):
        c, pts = fixture_curve(random.Random(seed), g)
        assert c.genus == g and all(c.contains(p.x, p.y) for p in pts)

    def test_json(self):
        assert HyperellipticCurve.from_json(E.to_json()) == E
        assert E.to_json() == {"s_coeffs": ["1", "0", "0", "1"]}


class TestPoints:
    def test_search(self):
        pts = find_rational_points(E, 2)
        for x, y in [(0, 1), (0, -1), (2, 3), (2, -3)]:
            assert AffinePoint(F(x), F(y)) in pts

    def test_only_weierstrass(self):
        assert find_rational_points(make_curve([0, -1, 0, 1]), 1) == []

    def test_bound_zero(self):
        assert {p.x for p in find_rational_points(E, 0)} == {0}

    def test_off_curve(self):
        with pytest.raises(CurveError):
            E.point(1, 1)


class TestLocalExpansion:
    def test_origin(self):
        assert local_expansion(E, E.point(0, 1), 7) == uni([1, 0, 0, F(1, 2), 0, 0, F(-1, 8)], 7)

    def test_first_order(self):
        y = local_expansion(E, E.point(2, 3), 4)
        assert y.coefficient((0,)) == 3 and y.coefficient((1,)) == 2

    def test_weierstrass(self):
        with pytest.raises(WeierstrassCenterError):
            local_expansion(E, E.point(-1, 0), 3)

    @given(st.integers(0, 10 ** 6), st.integers(1, 3), st.integers(1, 3), st.integers(1, 5))
    def test_arc_on_curve(self, seed, g, n, m):
        rng = random.Random(seed)
        c, pts = fixture_curve(rng, g)
        arc = FormalArc(c, rng.choice(pts), random_series(rng, n, m, min_degree=1))
        assert arc.y * arc.y == c.rhs(arc.x)
        assert arc.y.constant_term() == arc.center.y


class TestPullback:
    def test_elliptic(self):
        arc = FormalArc(E, E.point(0, 1), TruncatedSeries.variable(0, 1, 3))
        assert pullback(E, 0, arc) == DifferentialForm.dt(0, 1, 3) * F(1, 2)

    def test_constant_arc(self):
        arc = FormalArc(E, E.point(0, 1), TruncatedSeries.zero(2, 3))
        assert pullback(E, 0, arc).is_zero()

    def test_genus_two(self):
        c = make_curve([1, 0, 0, 0, 0, 1])
        t = TruncatedSeries.variable(0, 1, 3)
        expected = DifferentialForm.function(t * F(1, 2)).wedge(DifferentialForm.dt(0, 1, 3))
        assert pullback(c, 1, FormalArc(c, c.point(0, 1), t)) == expected

    def test_index_range(self):
        arc = FormalArc(E, E.point(0, 1), TruncatedSeries.variable(0, 1, 3))
        with pytest.raises(IndexError):
            pullback(E, 1, arc)

    def test_weierstrass_arc(self):
        with pytest.raises(WeierstrassCenterError):
            FormalArc(E, E.point(-1, 0), TruncatedSeries.variable(0, 1, 3))

    @given(st.integers(0, 10 ** 6), st.integers(1, 3), st.integers(1, 2), st.integers(2, 5), st.data())
    def test_closed_exact_and_truncation(self, seed, g, n, m, data):
        rng = random.Random(seed)
        c, pts = fixture_curve(rng, g)
        arc = FormalArc(c, rng.choice(pts), random_series(rng, n, m, min_degree=1))
        small = data.draw(st.integers(1, m))
        for j in range(g):
            w = pullback(c, j, arc)
            assert w.is_closed() and w.is_exact()[0]
            assert w.truncate(small) == pullback(c, j, arc.truncate(small))


class TestRatioMatrix:
    def test_elliptic(self):
        m = ratio_matrix(E, [E.point(0, 1)], 4)
        assert m.entries[0][0] == uni([F(1, 2), 0, 0, F(-1, 4)], 4)

    def test_genus_two_at_zero(self):
        c = curve_through_points([(1, 2), (2, 3)], 2)
        m = ratio_matrix(c, [c.point(1, 2), c.point(2, 3)], 3)
        assert m.constant() == [[F(1, 4), F(1, 6)], [F(1, 4), F(2, 6)]]

    def test_matches_pullbacks(self):
        c = curve_through_points([(1, 2), (2, 3)], 2)
        pts = [c.point(1, 2), c.point(2, 3)]
        m = ratio_matrix(c, pts, 4)
        u = TruncatedSeries.variable(0, 1, 4)
        for l, p in enumerate(pts):
            arc = FormalArc(c, p, u)
            for i in range(2):
                expected = DifferentialForm.function(m.entries[i][l]).wedge(DifferentialForm.dt(0, 1, 4))
                assert pullback(c, i, arc) == expected
