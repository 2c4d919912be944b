import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from dcontact import (
    CdgaSpec,
    ComplexMap,
    DarbouxScheme,
    FreeComplex,
    GradedVar,
    Poly,
    build_contact_darboux,
    build_tower,
    cocone,
    cone,
    homology_ranks,
    identity_map,
    is_acyclic,
    is_quasi_iso,
    restrict_cotangent,
    restrict_tangent,
    shift,
    strict_cokernel,
    strict_kernel,
)
from dcontact.complexes import kernel_to_cocone, zero_map
from modelgen import random_complex, random_surjection

xt = GradedVar("xt", 0)
y = GradedVar("y", -1)


def line(deg=0, name="e"):
    return FreeComplex({deg: (name,)})


class TestRestriction:
    def test_s1_cotangent(self):
        M = build_contact_darboux(DarbouxScheme(-1, (1,), contact=True))
        L = restrict_cotangent(M.algebra, {"x0_1": 0})
        assert L.dims() == {-1: 2, 0: 1}
        assert not L.diffs

    def test_linear_differential(self):
        A = build_tower(CdgaSpec([xt], [y], {y: Poly.var(xt)}))
        L = restrict_cotangent(A, {"xt": 1})
        assert L.d(-1) == [[Fraction(1)]]
        assert is_acyclic(L)

    def test_quadratic_differential_vanishes_at_origin(self):
        A = build_tower(CdgaSpec([xt], [y], {y: Poly.var(xt, 2)}))
        assert not restrict_cotangent(A, {"xt": 0}).diffs
        assert restrict_cotangent(A, {"xt": 3}).d(-1) == [[Fraction(6)]]

    def test_empty(self):
        A = build_tower(CdgaSpec([], []))
        assert restrict_cotangent(A, A.point()).degrees == []

    def test_tangent_is_dual(self):
        M = build_contact_darboux(DarbouxScheme(-3, (0, 1), contact=True))
        T = restrict_tangent(M.algebra, M.algebra.point())
        assert T.dims() == {1: 1, 2: 1, 3: 1}
        assert T.names(3) == ("∂/∂z",)


class TestCone:
    def test_cone_of_identity_is_acyclic(self):
        C = FreeComplex({0: ("a",), 1: ("b", "c")}, {0: [[1], [0]]})
        assert is_acyclic(cone(identity_map(C)))

    def test_cone_of_zero_map_is_a_sum(self):
        V, W = line(0, "v"), line(0, "w")
        ranks = dict(homology_ranks(cone(zero_map(V, W))))
        assert ranks == {-1: 1, 0: 1}

    def test_cocone_is_cone_shifted(self):
        f = identity_map(line())
        co, c = cocone(f), shift(cone(f), -1)
        assert co.basis == c.basis and co.diffs == c.diffs

    def test_shift_twice(self):
        C = FreeComplex({0: ("a",), 1: ("b",)}, {0: [[2]]})
        assert shift(shift(C, 1), -1).diffs == C.diffs


class TestKernels:
    def test_zero_map(self):
        V, W = line(0, "v"), line(0, "w")
        f = zero_map(V, W)
        assert strict_kernel(f).dims() == {0: 1}
        assert strict_cokernel(f).dims() == {0: 1}

    def test_identity(self):
        f = identity_map(line())
        assert strict_kernel(f).degrees == []
        assert strict_cokernel(f).degrees == []

    def test_projection(self):
        V = FreeComplex({0: ("a", "b")})
        f = ComplexMap(V, line(), {0: [[1, 0]]})
        K = strict_kernel(f)
        assert K.names(0) == ("b",)


class TestHomology:
    def test_isomorphism_line(self):
        C = FreeComplex({0: ("a",), 1: ("b",)}, {0: [[1]]})
        assert homology_ranks(C) == [(0, 0), (1, 0)]

    def test_identity_is_quasi_iso(self):
        assert is_quasi_iso(identity_map(line())).passed

    def test_zero_map_is_not(self):
        rep = is_quasi_iso(zero_map(line(), line()))
        assert not rep.passed
        assert rep.checks[0].detail == "H^-1=1, H^0=1"


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_euler_characteristic(seed):
    C = random_complex(random.Random(seed))
    assert C.euler() == sum((-1) ** (i % 2) * r for i, r in homology_ranks(C))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_cone_laws_for_surjections(seed):
    f = random_surjection(random.Random(seed))
    assert cone(f).euler() == f.target.euler() - f.source.euler()
    assert is_quasi_iso(kernel_to_cocone(f)).passed


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_dual_twice(seed):
    C = random_complex(random.Random(seed))
    assert C.dual().dual().diffs == C.diffs
