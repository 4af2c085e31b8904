from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arcclass.oracles import sqrt_by_undetermined_coefficients
from arcclass.series import (
    NonUnitError,
    RingMismatchError,
    TruncatedSeries,
    invert_unit,
    monomials,
    ring_dimension,
    sqrt_unit,
    substitute,
    substitute_variable,
)

F = Fraction


def uni(coeffs, order):
    return TruncatedSeries.from_coefficients(coeffs, order)


def t(order, nvars=1, i=0):
    return TruncatedSeries.variable(i, nvars, order)


small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def series(draw, nvars=None, order=None, min_degree=0):
    nvars = draw(st.integers(1, 3)) if nvars is None else nvars
    order = draw(st.integers(1, 5)) if order is None else order
    monos = [e for e in monomials(nvars, order - 1) if sum(e) >= min_degree]
    chosen = draw(st.lists(st.sampled_from(monos), max_size=6)) if monos else []
    return TruncatedSeries(nvars, order, {e: draw(small_rationals) for e in chosen})


@st.composite
def series_pair(draw, count=2, min_degree=(0, 0, 0)):
    nvars = draw(st.integers(1, 3))
    order = draw(st.integers(1, 5))
    return tuple(draw(series(nvars, order, min_degree[k])) for k in range(count))


class TestArithmetic:
    def test_additive_inverse(self):
        a = uni([1, 1], 3)
        assert (a + uni([-1, -1], 3)).is_zero()

    def test_doubling(self):
        assert t(3) + t(3) == 2 * t(3)

    def test_sum_at_top_degree(self):
        assert uni([1, 0, 1], 3) + uni([0, 0, 1], 3) == uni([1, 0, 2], 3)

    @pytest.mark.parametrize("order, expected", [(3, [1, 0, -1]), (2, [1])])
    def test_product_truncates(self, order, expected):
        assert uni([1, 1], order) * uni([1, -1], order) == uni(expected, order)

    def test_mixed_product_vanishes_at_order_two(self):
        assert (t(2, 2, 0) * t(2, 2, 1)).is_zero()

    def test_ring_mismatch(self):
        with pytest.raises(RingMismatchError):
            uni([1], 3) + uni([1], 4)
        with pytest.raises(RingMismatchError):
            t(3, 2) * t(3, 1)

    def test_floats_refused(self):
        with pytest.raises(TypeError):
            TruncatedSeries(1, 3, {(0,): 0.5})

    def test_canonical_form(self):
        a = TruncatedSeries(2, 2, {(0, 1): 2, (1, 0): 0, (2, 0): 5})
        assert a.terms == {(0, 1): F(2)}
        assert list(TruncatedSeries(1, 4, {(2,): 1, (0,): 3}).items()) == [((0,), F(3)), ((2,), F(1))]

    def test_ring_dimension(self):
        assert ring_dimension(2, 3) == len(monomials(2, 2)) == 6


class TestSubstitute:
    def test_linear(self):
        assert substitute(uni([1, 1], 4), uni([0, 1, 1], 4)) == uni([1, 1, 1], 4)

    def test_square(self):
        assert substitute(uni([0, 0, 1], 4), uni([0, 1, 1], 4)) == uni([0, 0, 1, 2], 4)

    def test_constant(self):
        g = TruncatedSeries(2, 4, {(1, 0): 3, (0, 2): -1})
        assert substitute(uni([1], 4), g) == TruncatedSeries.constant(1, 2, 4)

    def test_rejects_unit_argument(self):
        with pytest.raises(ValueError):
            substitute(uni([0, 1], 3), uni([1, 1], 3))

    def test_keeps_other_variables(self):
        # f(u, s) = u*s + 1 with u -> u + s^2
        f = TruncatedSeries(2, 4, {(1, 1): 1, (0, 0): 1})
        g = TruncatedSeries(2, 4, {(1, 0): 1, (0, 2): 1})
        assert substitute_variable(f, 0, g) == TruncatedSeries(2, 4, {(1, 1): 1, (0, 3): 1, (0, 0): 1})

    @given(st.data())
    def test_is_ring_homomorphism(self, data):
        order = data.draw(st.integers(1, 5))
        f, g = data.draw(series(1, order)), data.draw(series(1, order))
        h = data.draw(series(data.draw(st.integers(1, 3)), order, min_degree=1))
        assert substitute(f * g, h) == substitute(f, h) * substitute(g, h)
        assert substitute(f + g, h) == substitute(f, h) + substitute(g, h)


class TestDerivative:
    def test_power(self):
        assert uni([0, 0, 1], 4).derivative(0) == uni([0, 2], 4)

    def test_mixed(self):
        assert (t(3, 2, 0) * t(3, 2, 1)).derivative(0) == t(3, 2, 1)

    def test_constant(self):
        assert uni([7], 3).derivative(0).is_zero()


class TestInverseAndRoot:
    def test_geometric(self):
        assert invert_unit(uni([1, -1], 4)) == uni([1, 1, 1, 1], 4)

    def test_rational(self):
        assert invert_unit(uni([2], 1)) == uni([F(1, 2)], 1)

    def test_sparse(self):
        assert invert_unit(uni([1, 0, 0, 1], 4)) == uni([1, 0, 0, -1], 4)

    def test_non_unit(self):
        with pytest.raises(NonUnitError):
            invert_unit(uni([0, 1], 3))

    def test_sqrt_constant(self):
        assert sqrt_unit(uni([4], 1), 2) == uni([2], 1)

    @pytest.mark.parametrize(
        "f, order, expected",
        [
            ([1, 2], 4, [1, 1, F(-1, 2), F(1, 2)]),
            ([1, 0, 0, 1], 7, [1, 0, 0, F(1, 2), 0, 0, F(-1, 8)]),
        ],
    )
    def test_sqrt_matches_oracle(self, f, order, expected):
        fs = uni(f, order)
        assert sqrt_by_undetermined_coefficients(fs, 1) == uni(expected, order)
        assert sqrt_unit(fs, 1) == uni(expected, order)

    def test_sqrt_errors(self):
        with pytest.raises(ValueError):
            sqrt_unit(uni([2, 1], 3), 1)
        with pytest.raises(ValueError):
            sqrt_unit(uni([4, 1], 3), 3)

    @given(series(), small_rationals.filter(bool))
    def test_inverse_and_root_identities(self, f, c):
        u = f - f.constant_term() + c
        assert u * invert_unit(u) == 1
        sq = u * u
        assert sqrt_unit(sq, c) ** 2 == sq
        assert sqrt_unit(sq, c) == u


class TestRingAxioms:
    @given(series_pair(3))
    def test_axioms(self, abc):
        a, b, c = abc
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + b == b + a
        assert a * b == b * a

    @given(st.data())
    def test_truncation_functorial(self, data):
        nvars = data.draw(st.integers(1, 3))
        big = data.draw(st.integers(2, 5))
        small = data.draw(st.integers(1, big - 1))
        a, b = data.draw(series(nvars, big)), data.draw(series(nvars, big))
        assert (a + b).truncate(small) == a.truncate(small) + b.truncate(small)
        assert (a * b).truncate(small) == a.truncate(small) * b.truncate(small)
        f = data.draw(series(1, big))
        h = data.draw(series(nvars, big, min_degree=1))
        assert substitute(f, h).truncate(small) == substitute(f.truncate(small), h.truncate(small))
        u = a - a.constant_term() + 3
        assert invert_unit(u).truncate(small) == invert_unit(u.truncate(small))
        sq = u * u
        assert sqrt_unit(sq, 3).truncate(small) == sqrt_unit(sq.truncate(small), 3)


class TestSerialization:
    def test_round_trip(self):
        a = TruncatedSeries(2, 4, {(1, 0): F(-3, 7), (0, 2): 10 ** 30})
        records = a.to_records()
        assert records[0] == {"exponents": [0, 2], "numerator": str(10 ** 30), "denominator": "1"}
        assert TruncatedSeries.from_json(a.to_json()) == a

    def test_coeff_shorthand(self):
        a = TruncatedSeries.from_records([{"exponents": [1], "coeff": "5/2"}], 1, 3)
        assert a == uni([0, F(5, 2)], 3)
