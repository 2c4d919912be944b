from fractions import Fraction

import pytest
from hypothesis import given, settings

from dcontact import Poly, parse_expression, parse_form, parse_manifest
from dcontact.parser import ManifestError
from strategies import VARS, polys

S1 = """\
# contact model
[algebra]
name = S1
k = -1
generators = [x:0, y:-1, z:-1]

[forms]
alpha0 = -D(z) + y*D(x)

[points]
p0 = [x: 1/2]
"""

NAMES = {v.name: v for v in VARS}


def code_of(text):
    with pytest.raises(ManifestError) as err:
        parse_manifest(text)
    return err.value


class TestManifest:
    def test_s1(self):
        m = parse_manifest(S1)
        assert m.name == "S1" and m.k == -1
        assert [v.name for v in m.algebra.generators] == ["x", "y", "z"]
        alpha = m.forms["alpha0"]
        assert alpha.weight == 1 and alpha.degree == -1
        assert m.points["p0"]["x"] == Fraction(1, 2)

    def test_empty_manifest(self):
        m = parse_manifest("")
        assert m.algebra.generators == () and not m.forms

    def test_semicolon_comments(self):
        m = parse_manifest("; header\n[algebra]\ngenerators = [a:0]  # trailing\n")
        assert [v.name for v in m.algebra.generators] == ["a"]

    def test_differential(self):
        m = parse_manifest("[algebra]\ngenerators = [a:0, u:-1]\n[differential]\nu = a^2 - 1\n")
        assert str(m.algebra.dv("u")) == "-1 + a^2"

    def test_scheme(self):
        m = parse_manifest("[scheme]\nk = -1\ncounts = [1]\ncontact = true\n")
        assert m.scheme.contact and set(m.variables) == {"x0_1", "y0_1", "z"}

    def test_localize(self):
        m = parse_manifest("[algebra]\ngenerators = [a:0]\nlocalize = [a]\n[points]\np = [a: 2]\n")
        assert m.algebra.gen("a").invertible


class TestDiagnostics:
    def test_positive_degree(self):
        err = code_of("[algebra]\ngenerators = [a:1]\n")
        assert err.code == "E300" and err.line == 2

    def test_bad_expression(self):
        err = code_of("[algebra]\ngenerators = [a:0, u:-1]\n[differential]\nu = a +\n")
        assert err.code == "E101" and err.line == 4

    def test_duplicate_generator(self):
        assert code_of("[algebra]\ngenerators = [a:0, a:0]\n").code == "E200"

    def test_duplicate_key(self):
        assert code_of("[algebra]\nk = -1\nk = -1\n").code == "E200"

    def test_undeclared(self):
        err = code_of("[algebra]\ngenerators = [a:0]\n[points]\np = [b: 1]\n")
        assert err.code == "E400" and err.line == 4

    def test_unknown_section(self):
        assert code_of("[nope]\n").code == "E100"

    def test_bad_integer(self):
        assert code_of("[algebra]\nk = minus one\n").code == "E102"

    def test_sections_exclusive(self):
        assert code_of("[algebra]\n[scheme]\nk = -1\n").code == "E500"

    def test_element_mode_needs_z(self):
        err = code_of("[scheme]\nk = -1\ncounts = [1]\ncontact = true\nz_mode = element\n")
        assert err.code == "E600"

    def test_wrong_differential_degree(self):
        err = code_of("[algebra]\ngenerators = [a:0, u:-1]\n[differential]\nu = u\n")
        assert err.code == "E300"

    def test_message_format(self):
        err = code_of("[algebra]\ngenerators = [a:1]\n")
        assert str(err).startswith("2:") and " E300 " in str(err)


class TestExpressions:
    def test_rationals_and_powers(self):
        p = parse_expression("3/4*a^2 - (b + 1)^2", NAMES)
        a, b = NAMES["a"], NAMES["b"]
        assert p == Poly.var(a, 2).scale(Fraction(3, 4)) - (Poly.var(b) + Poly.const(1)) * (Poly.var(b) + Poly.const(1))

    def test_odd_square_vanishes(self):
        assert parse_expression("u*u", NAMES).is_zero()

    def test_form(self):
        f = parse_form("-D(u) + a*D(b)*u", NAMES)
        assert f.weight == 1 and f.degree == -1

    def test_inhomogeneous_form(self):
        with pytest.raises(ManifestError) as err:
            parse_form("D(u) + D(a)", NAMES)
        assert err.value.code == "E300"


@settings(max_examples=80, deadline=None)
@given(polys())
def test_round_trip(p):
    assert parse_expression(str(p), NAMES) == p
