"""Explicit Darboux local models: symplectic families for every parity of k and the contact model."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .cdga import (
    Cdga,
    CdgaSpec,
    DarbouxLayout,
    build_tower,
    check_d_squared,
    check_master_equation,
    differential_from_hamiltonian,
    normalize_case,
    pair_sign,
    vdim,
    with_differential,
)
from .derham import Form, d_int, ddr, is_closed_sequence
from .errors import DegreeError, MasterEquationError, SchemeError
from .graded import GradedVar, Poly, dR
from .report import Report

Z_MODES = ("generator", "element")


@dataclass(frozen=True)
class DarbouxScheme:
    """Parameters of a Darboux model.

    ``counts[i]`` is the number of pairs (x^{-i}, y^{k+i}) for i = 0..top, where
    top = (-k-1)/2 for odd k and top = -k/2 (k = 0 mod 4) or (-k-2)/2
    (k = 2 mod 4) otherwise. ``zcount`` middle variables of degree k/2 exist
    only for k = 2 mod 4.
    """

    k: int
    counts: tuple = ()
    zcount: int = 0
    contact: bool = False
    z_mode: str = "generator"
    spectators: int = 0
    case: str | None = None

    def __post_init__(self):
        if self.k >= 0:
            raise SchemeError("Darboux schemes need k < 0")
        object.__setattr__(self, "case", normalize_case(self.case, self.k))
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if any(c < 0 for c in self.counts) or self.zcount < 0 or self.spectators < 0:
            raise SchemeError("counts must be non-negative")
        if len(self.counts) > self.top + 1:
            raise SchemeError(f"at most {self.top + 1} pair counts for k = {self.k}")
        if self.zcount and self.case != "mod4-2":
            raise SchemeError("middle z-variables only exist when k = 2 mod 4")
        if self.z_mode not in Z_MODES:
            raise SchemeError(f"unknown z mode {self.z_mode!r}")

    @property
    def top(self) -> int:
        if self.case == "odd":
            return (-self.k - 1) // 2
        if self.case == "mod4-0":
            return -self.k // 2
        return (-self.k - 2) // 2

    def pair_counts(self) -> list[int]:
        return list(self.counts) + [0] * (self.top + 1 - len(self.counts))

    def layout(self) -> DarbouxLayout:
        k = self.k
        pairs = []
        for i, m in enumerate(self.pair_counts()):
            for j in range(1, m + 1):
                pairs.append((GradedVar(f"x{i}_{j}", -i), GradedVar(f"y{i}_{j}", k + i), i))
        zs = tuple(GradedVar(f"z_{j}", k // 2) for j in range(1, self.zcount + 1))
        contact_z = GradedVar("z", k) if self.contact and self.z_mode == "generator" else None
        spect = tuple(GradedVar(f"xt_{j}", 0) for j in range(1, self.spectators + 1))
        return DarbouxLayout(k, self.case, tuple(pairs), zs, contact_z, spect)

    def variables(self) -> dict[str, GradedVar]:
        """Name table of every generator the model will have (for parsing H or z)."""
        lay = self.layout()
        vs = lay.variables() + list(lay.spectators)
        if lay.contact_z is not None:
            vs.append(lay.contact_z)
        return {v.name: v for v in vs}


def _base_algebra(s: DarbouxScheme, name: str) -> Cdga:
    lay = s.layout()
    gens = lay.variables() + list(lay.spectators)
    if lay.contact_z is not None:
        gens.append(lay.contact_z)
    base = [v for v in gens if v.degree == 0]
    neg = [v for v in gens if v.degree < 0]
    return build_tower(CdgaSpec(base, neg, None, lay, name))


def omega0(lay: DarbouxLayout) -> Form:
    out = Poly()
    for x, y, _ in lay.pairs:
        out = out + Poly.var(dR(x)) * Poly.var(dR(y))
    for z in lay.zs:
        out = out + Poly.var(dR(z)) * Poly.var(dR(z))
    return Form(out, 2, lay.k)


def theta(lay: DarbouxLayout) -> Poly:
    """The degree-k function relating the two normalizations of phi."""
    out = Poly()
    for x, y, i in lay.pairs:
        if i:
            out = out + (Poly.var(x) * Poly.var(y)).scale((-1) ** i * i)
    return out


def build_phi(lay: DarbouxLayout | DarbouxScheme, simplified: bool = False) -> Form:
    """A primitive phi with d_dR phi = k omega0.

    The default form also satisfies d_dR H + d phi = 0 for the Hamiltonian H
    itself; the simplified form k*sum(s_i y D(x)) + k*sum(z D(z)) satisfies it
    for H + d(theta) instead (see :func:`theta`).
    """
    if isinstance(lay, DarbouxScheme):
        lay = lay.layout()
    k = lay.k
    out = Poly()
    for x, y, i in lay.pairs:
        s = pair_sign(k, i)
        if simplified:
            out = out + (Poly.var(y) * Poly.var(dR(x))).scale(k * s)
        else:
            out = out + (Poly.var(x) * Poly.var(dR(y))).scale(-i)
            out = out + (Poly.var(y) * Poly.var(dR(x))).scale(s * (k + i))
    for z in lay.zs:
        out = out + (Poly.var(z) * Poly.var(dR(z))).scale(k)
    return Form(out, 1, k)


def theta_shift(phi: Form, H: Poly, th: Poly, A: Cdga) -> tuple[Form, Poly]:
    """Replace (phi, H) by (phi + d_dR theta, H + d theta); preserves d_dR H + d phi = 0."""
    return phi + ddr(th, A), H + A.d(th)


def _require_cme(A: Cdga, H: Poly) -> None:
    rep = check_master_equation(A, H)
    if not rep.passed:
        res = rep.data["residual"]
        raise MasterEquationError(f"Hamiltonian fails the master equation: residual {res}", res)


@dataclass
class SymplecticDarbouxModel:
    algebra: Cdga
    omega: list
    phi: Form
    hamiltonian: Poly
    scheme: DarbouxScheme
    report: Report = field(default_factory=lambda: Report("symplectic Darboux model"))


def _postconditions(A: Cdga, om: Form, phi: Form, H: Poly, rep: Report) -> None:
    rep.extend(check_d_squared(A))
    r = d_int(om, A)
    rep.add("d-omega", r.is_zero(), "" if r.is_zero() else str(r))
    r = ddr(om, A)
    rep.add("ddr-omega", r.is_zero(), "" if r.is_zero() else str(r))
    r = ddr(phi, A) - om * A.layout.k
    rep.add("ddr-phi", r.is_zero(), "" if r.is_zero() else f"d_dR phi - k omega0 = {r}")
    r = ddr(H, A).poly + d_int(phi, A).poly
    rep.add("hamiltonian-phi", r.is_zero(), "" if r.is_zero() else f"d_dR H + d phi = {r}")


def build_symplectic_darboux(s: DarbouxScheme, H: Poly | None = None, name: str = "A") -> SymplecticDarbouxModel:
    H = H if H is not None else Poly()
    A, _ = darboux_algebra(s, H, name)
    _require_cme(A, H)
    om = omega0(A.layout)
    phi = build_phi(A.layout)
    rep = Report(f"symplectic Darboux model k={s.k} ({s.case})")
    rep.add("master-equation", True)
    _postconditions(A, om, phi, H, rep)
    rep.data["vdim"] = vdim(A)
    return SymplecticDarbouxModel(A, [om], phi, H, s, rep)


@dataclass
class ContactDarbouxModel:
    algebra: Cdga
    alpha: Form
    omega0: Form
    hamiltonian: Poly
    shifted_hamiltonian: Poly
    z: Poly
    scheme: DarbouxScheme
    report: Report = field(default_factory=lambda: Report("contact Darboux model"))


def darboux_algebra(s: DarbouxScheme, H: Poly | None = None, name: str = "A") -> tuple[Cdga, Poly]:
    """The scheme's algebra with the Hamiltonian differential, without checking the CME.

    Returns the algebra and the shifted Hamiltonian H' = H + d(theta). In
    contact generator mode z is adjoined with dz = H'/k.
    """
    H = H if H is not None else Poly()
    A0 = _base_algebra(s, name)
    if H and H.degree != s.k + 1:
        raise DegreeError(f"Hamiltonian must have degree {s.k + 1}")
    for v in H.variables():
        A0.gen(v.name)
    A = with_differential(A0, differential_from_hamiltonian(A0, H).images)
    Hs = H + A.d(theta(A.layout))
    zv = A.layout.contact_z
    if zv is not None:
        A = with_differential(A, {zv: Hs.scale(Fraction(1, s.k))})
    return A, Hs


def build_contact_darboux(
    s: DarbouxScheme, H: Poly | None = None, z: Poly | None = None, name: str = "A"
) -> ContactDarbouxModel:
    """alpha0 = -D(z) + (1/k) phi_s, with phi_s the simplified primitive.

    Generator mode adjoins z of degree k with dz = H'/k, where H' = H + d(theta)
    is the Hamiltonian matched to phi_s. Element mode takes z as a given
    degree-k element and requires k*dz = H'.
    """
    if not s.contact:
        raise SchemeError("scheme is not a contact scheme")
    H = H if H is not None else Poly()
    k = s.k
    A, Hs = darboux_algebra(s, H, name)
    _require_cme(A, H)
    lay = A.layout
    if s.z_mode == "generator":
        if z is not None:
            raise SchemeError("generator mode adjoins z itself; no z element expected")
        zp = Poly.var(lay.contact_z)
    else:
        if z is None:
            raise SchemeError("element mode needs a z element of degree k")
        if z and z.degree != k:
            raise DegreeError(f"z must have degree {k}, got {z.degree}")
        for v in z.variables():
            A.gen(v.name)
        if A.d(z) * k != Hs:
            raise SchemeError(f"element mode needs k*dz = {Hs}, got {A.d(z) * k}")
        zp = z
    phi_s = build_phi(lay, simplified=True)
    alpha = Form(-ddr(zp, A).poly, 1, k) + phi_s * Fraction(1, k)
    om = omega0(lay)
    rep = Report(f"contact Darboux model k={k} ({s.case}, z {s.z_mode})")
    rep.add("master-equation", True)
    rep.extend(check_d_squared(A))
    r = d_int(alpha, A)
    rep.add("alpha-d-closed", r.is_zero(), "" if r.is_zero() else str(r))
    r = ddr(alpha, A) - om
    rep.add("ddr-alpha-omega", r.is_zero(), "" if r.is_zero() else f"d_dR alpha - omega0 = {r}")
    rep.data["vdim"] = vdim(A)
    return ContactDarbouxModel(A, alpha, om, H, Hs, zp, s, rep)


def vdim_report(A: Cdga, role: str) -> Report:
    """Compute vdim and compare with the expected parity for the role.

    Symplectic models are expected to have even vdim, contact models odd.
    When A carries a Darboux layout the closed-form reference value is also
    computed (2*sum (-1)^i m_i for even k, 0 for odd k; plus 1 for contact) and
    a magnitude disagreement is flagged in the detail. Only parity decides
    the check.
    """
    if role not in ("symplectic", "contact"):
        raise ValueError(f"unknown role {role!r}")
    v = vdim(A)
    want_parity = 0 if role == "symplectic" else 1
    parity_ok = v % 2 == want_parity
    ref = None
    lay = A.layout
    if lay is not None:
        ref = 0 if lay.k % 2 else 2 * sum((-1) ** i for _, _, i in lay.pairs)
        if role == "contact":
            ref += 1
    detail = f"{v} {'even' if v % 2 == 0 else 'odd'}"
    rep = Report(f"virtual dimension ({role})")
    rep.data.update(vdim=v, expected_parity="even" if want_parity == 0 else "odd", reference=ref)
    if ref is not None and ref != v:
        detail += f"; reference value {ref} differs"
        rep.notes.append(
            f"computed vdim {v} differs from the reference value {ref}; parity "
            + ("agrees" if parity_ok else "disagrees")
        )
    rep.data["magnitude_agrees"] = ref is None or ref == v
    rep.add("vdim", parity_ok, detail)
    return rep


def closed_sequence_report(model: SymplecticDarbouxModel) -> Report:
    return is_closed_sequence(model.omega, model.algebra)
