from fractions import Fraction

import pytest

from dcontact import (
    CdgaSpec,
    D,
    DarbouxScheme,
    Form,
    Poly,
    build_contact_darboux,
    build_phi,
    build_symplectic_darboux,
    build_tower,
    check_contact,
    d_int,
    ddr,
    omega0,
    theta,
    theta_shift,
    wedge,
)
from dcontact.darboux import darboux_algebra, vdim_report
from dcontact.errors import DegreeError, MasterEquationError, SchemeError
from modelgen import random_models


def var(s, name):
    return s.variables()[name]


class TestSymplectic:
    def test_k_minus_one(self):
        s = DarbouxScheme(-1, (1,))
        M = build_symplectic_darboux(s)
        assert [v.name for v in M.algebra.generators] == ["x0_1", "y0_1"]
        assert M.omega[0] == wedge(D(var(s, "x0_1")), D(var(s, "y0_1")))
        assert M.report.passed

    def test_single_middle_variable(self):
        s = DarbouxScheme(-2, (0,), zcount=1)
        M = build_symplectic_darboux(s)
        z = var(s, "z_1")
        assert [v.name for v in M.algebra.generators] == ["z_1"]
        assert M.omega[0] == wedge(D(z), D(z)) and M.omega[0]
        assert M.report.passed

    def test_cme_violator_rejected(self):
        s = DarbouxScheme(-3, (0, 2))
        H = Poly.var(var(s, "x1_1")) * Poly.var(var(s, "x1_2")) + Poly.var(var(s, "y1_1"))
        with pytest.raises(MasterEquationError) as err:
            build_symplectic_darboux(s, H)
        assert err.value.residual in (Poly.var(var(s, "x1_2")), -Poly.var(var(s, "x1_2")))

    @pytest.mark.parametrize("k", [-1, -2, -3, -4, -5, -6])
    def test_postconditions_with_random_hamiltonians(self, k):
        for s, H in random_models(k, 6, ks=(k,)):
            assert build_symplectic_darboux(s, H).report.passed

    def test_scheme_validation(self):
        with pytest.raises(SchemeError):
            DarbouxScheme(1)
        with pytest.raises(SchemeError):
            DarbouxScheme(-3, (1, 1, 1))
        with pytest.raises(SchemeError):
            DarbouxScheme(-3, zcount=1)
        with pytest.raises(SchemeError):
            DarbouxScheme(-3, case="mod4-0")

    def test_hamiltonian_degree(self):
        s = DarbouxScheme(-1, (1,))
        with pytest.raises(DegreeError):
            build_symplectic_darboux(s, Poly.var(var(s, "y0_1")))


class TestPhi:
    def test_k_minus_one(self):
        s = DarbouxScheme(-1, (1,))
        x, y = var(s, "x0_1"), var(s, "y0_1")
        phi = build_phi(s)
        assert phi == Form(-(Poly.var(y) * Poly.var(D(x).poly.variables().pop())))
        assert ddr(phi) == omega0(s.layout()) * -1

    def test_z_scheme(self):
        s = DarbouxScheme(-2, (0,), zcount=1)
        z = var(s, "z_1")
        phi = build_phi(s)
        assert phi == Form(Poly.var(z)) * D(z) * -2
        assert ddr(phi) == wedge(D(z), D(z)) * -2

    def test_closed_when_h_is_zero(self):
        for k in (-1, -2, -3, -4):
            s = DarbouxScheme(k, (1,) * (DarbouxScheme(k).top + 1))
            A, _ = darboux_algebra(s)
            assert not d_int(build_phi(s), A)

    @pytest.mark.parametrize("k", [-3, -4, -5])
    def test_theta_shift_relates_the_two_forms(self, k):
        for s, H in random_models(10 - k, 4, ks=(k,)):
            A, Hs = darboux_algebra(s, H)
            lay = A.layout
            phi, H2 = theta_shift(build_phi(lay), H, theta(lay), A)
            assert phi == build_phi(lay, simplified=True)
            assert H2 == Hs
            assert not (ddr(Hs, A) + d_int(phi, A))


class TestContact:
    def test_s1(self):
        s = DarbouxScheme(-1, (1,), contact=True)
        M = build_contact_darboux(s)
        x, y = var(s, "x0_1"), var(s, "y0_1")
        z = M.algebra.gen("z")
        assert [v.name for v in M.algebra.generators] == ["x0_1", "y0_1", "z"]
        assert M.alpha == -D(z) + Form(Poly.var(y)) * D(x)
        assert ddr(M.alpha, M.algebra) == wedge(D(y), D(x))
        assert M.report.passed

    def test_degenerate(self):
        M = build_contact_darboux(DarbouxScheme(-1, (), contact=True))
        A = M.algebra
        assert M.alpha == -D(A.gen("z"))
        cr = check_contact(M.alpha, A, A.point())
        assert cr.verdict and cr.kernel_basis == {} and cr.cokernel == {1: 1}

    def test_s2(self):
        s = DarbouxScheme(-3, (0, 1), contact=True)
        M = build_contact_darboux(s)
        x1, y1 = var(s, "x1_1"), var(s, "y1_1")
        assert M.alpha == -D(M.algebra.gen("z")) + Form(Poly.var(y1)) * D(x1)
        assert check_contact(M.alpha, M.algebra, M.algebra.point()).verdict

    @pytest.mark.parametrize("k", [-1, -3, -5])
    def test_alpha_closed_for_random_hamiltonians(self, k):
        for s, H in random_models(20 - k, 5, ks=(k,), contact=True):
            assert build_contact_darboux(s, H).report.passed

    def test_element_mode(self):
        s = DarbouxScheme(-1, (1,), contact=True, z_mode="element")
        y = var(s, "y0_1")
        M = build_contact_darboux(s, z=Poly.var(y))
        assert M.alpha == -D(y) + Form(Poly.var(y)) * D(var(s, "x0_1"))

    def test_element_mode_needs_matching_differential(self):
        s = DarbouxScheme(-1, (1,), contact=True, z_mode="element")
        x = var(s, "x0_1")
        H = Poly.var(x, 2)
        with pytest.raises(SchemeError):
            build_contact_darboux(s, H, z=Poly.var(var(s, "y0_1")))

    def test_element_mode_needs_z(self):
        with pytest.raises(SchemeError):
            build_contact_darboux(DarbouxScheme(-1, (1,), contact=True, z_mode="element"))

    def test_generator_mode_dz(self):
        s = DarbouxScheme(-1, (1,), contact=True)
        H = Poly.var(var(s, "x0_1"), 2)
        M = build_contact_darboux(s, H)
        assert M.algebra.dv("z") == H.scale(Fraction(-1))


class TestVdim:
    def test_symplectic_pairs(self):
        A, _ = darboux_algebra(DarbouxScheme(-1, (1,)))
        rep = vdim_report(A, "symplectic")
        assert rep.passed and rep.data["vdim"] == 0 and rep.data["magnitude_agrees"]

    def test_contact_s1_flags_magnitude(self):
        A, _ = darboux_algebra(DarbouxScheme(-1, (1,), contact=True))
        rep = vdim_report(A, "contact")
        assert rep.passed
        assert rep.checks[0].detail == "-1 odd; reference value 1 differs"

    def test_constant_algebra(self):
        rep = vdim_report(build_tower(CdgaSpec([], [])), "symplectic")
        assert rep.passed and rep.data["vdim"] == 0

    def test_odd_middle_count(self):
        A, _ = darboux_algebra(DarbouxScheme(-2, (0,), zcount=1))
        assert not vdim_report(A, "symplectic").passed
