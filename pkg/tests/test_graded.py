from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcontact import Derivation, GradedVar, Poly, derive, evaluate, format_poly, partial
from dcontact.errors import DegreeError
from dcontact.graded import apply_derivation, koszul_sign
from strategies import VARS, monomials, polys, total_degree

x1, x2 = GradedVar("x1", -1), GradedVar("x2", -1)
a, b = GradedVar("a", -2), GradedVar("b", -2)
xt = GradedVar("xt", 0)
y1 = GradedVar("y1", -2)


def P(v, e=1):
    return Poly.var(v, e)


class TestMul:
    def test_odd_square_vanishes(self):
        assert P(x1) * P(x1) == 0

    def test_even_elements_commute(self):
        assert P(a) * P(b) == P(b) * P(a)

    def test_odd_elements_anticommute(self):
        assert P(x1) * P(x2) + P(x2) * P(x1) == 0

    def test_constant_times_poly(self):
        assert (P(xt) + 1) * 3 == P(xt).scale(3) + 3


@pytest.mark.parametrize("left,right,sign", [([-1], [-1], -1), ([-2], [-1], 1), ([-1, -1], [-1], 1)])
def test_koszul_sign(left, right, sign):
    assert koszul_sign(left, right) == sign


class TestPartial:
    def test_leading_factor(self):
        assert partial(P(x1) * P(x2), x1) == P(x2)

    def test_second_factor_picks_up_sign(self):
        assert partial(P(x1) * P(x2), x2) == -P(x1)

    def test_constant(self):
        assert partial(Poly.const(7), x1) == 0

    def test_power_rule(self):
        assert partial(P(xt, 3), xt) == P(xt, 2).scale(3)


class TestDerivation:
    def test_linearity(self):
        y = GradedVar("y", -1)
        d = Derivation(1, {y: Poly.const(5)})
        assert apply_derivation(d, P(y).scale(3)) == 15

    def test_zero_derivation(self):
        d = Derivation.zero(VARS)
        assert apply_derivation(d, P(VARS[0]) * P(VARS[2])) == 0

    def test_leibniz_sign(self):
        H1, H2 = P(xt, 2), P(xt) + 1
        got = derive({x1: H1, x2: H2}, P(x1) * P(x2))
        assert got == H1 * P(x2) - P(x1) * H2


class TestEvaluate:
    def test_square(self):
        assert evaluate(P(xt, 2), {"xt": 3}) == 9

    def test_negative_generators_die(self):
        y = GradedVar("y", -1)
        assert evaluate(P(y) * P(xt), {"xt": 5}) == 0

    def test_mixed(self):
        assert evaluate(P(xt).scale(2) + P(x1) * P(y1), {"xt": Fraction(1, 2)}) == 1


def test_positive_degree_rejected():
    with pytest.raises(DegreeError):
        GradedVar("q", 1)


def test_format_is_canonical():
    y, z, x = GradedVar("y", -1), GradedVar("z", -1), GradedVar("x", 0)
    p = P(y) * P(x) - P(z)
    assert format_poly(p) == str(p)
    assert str(Poly()) == "0"


# -- properties ---------------------------------------------------------------------

@given(polys(), polys(), polys())
def test_associative(p, q, r):
    assert (p * q) * r == p * (q * r)


@given(polys(), polys(), polys())
def test_distributive(p, q, r):
    assert p * (q + r) == p * q + p * r


@given(monomials(), monomials())
def test_supercommutative(m, n):
    sign = -1 if total_degree(m) * total_degree(n) % 2 else 1
    assert m * n == (n * m).scale(sign)


@given(polys(), st.sampled_from(VARS), st.sampled_from(VARS))
def test_mixed_partials(p, u, v):
    sign = -1 if u.total * v.total % 2 else 1
    assert partial(partial(p, v), u) == partial(partial(p, u), v).scale(sign)


@settings(max_examples=50)
@given(monomials(), monomials(), st.sampled_from(VARS))
def test_partial_is_a_derivation(m, n, v):
    sign = -1 if v.total * total_degree(m) % 2 else 1
    assert partial(m * n, v) == partial(m, v) * n + (m * partial(n, v)).scale(sign)
