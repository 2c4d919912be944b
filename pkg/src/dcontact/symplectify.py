"""Symplectification of a contact local model: adjoin an invertible f and take lambda = f*alpha."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import linalg as la
from .cdga import Cdga, vdim
from .complexes import ComplexMap, _vec_name, is_quasi_iso, restrict_cotangent, restrict_tangent, tangent_basis
from .contact import check_contact, kernel_subcomplex
from .derham import Form, VectorField, contract, d_int, ddr, is_closed_sequence
from .errors import DuplicateNameError, InvalidPointError, PreconditionError
from .graded import Derivation, GradedVar, Poly, dR, evaluate
from .report import Report


@dataclass
class SymplectifiedModel:
    algebra: Cdga
    lam: Form
    omega: list
    base: Cdga
    alpha: Form
    f: GradedVar
    report: Report = field(default_factory=lambda: Report("symplectification"))

    @property
    def k(self) -> int:
        return self.alpha.degree


def symplectify(A: Cdga, alpha: Form, p: Mapping, fname: str = "f") -> SymplectifiedModel:
    """Extend A by f (degree 0, invertible, df = 0); lambda = f*alpha, omega0 = d_dR lambda."""
    cr = check_contact(alpha, A, p)
    if not cr.verdict:
        raise PreconditionError("form is not contact at the working point: " + "; ".join(
            c.line() for c in cr.report.checks if not c.passed))
    if fname in A.names:
        raise DuplicateNameError(f"generator {fname!r} already exists")
    f = GradedVar(fname, 0, invertible=True)
    images = dict(A.differential.images)
    images[f] = Poly()
    B = Cdga(A.generators + (f,), Derivation(1, images), dict(A.inverses), A.layout, A.name + "~")
    lam = Form(Poly.var(f) * alpha.poly, 1, alpha.degree)
    om = ddr(lam, B)
    rep = Report("symplectification")
    r = d_int(lam, B)
    rep.add("lambda-d-closed", r.is_zero(), "" if r.is_zero() else str(r))
    rep.extend(is_closed_sequence([om], B))
    return SymplectifiedModel(B, lam, [om], A, alpha, f, rep)


def _point(M: SymplectifiedModel, p: Mapping, f_value) -> Mapping:
    fv = Fraction(f_value)
    if not fv:
        raise InvalidPointError("f must be nonzero")
    vals = {k: v for k, v in dict(p).items() if k not in M.base.inverses}
    vals[M.f.name] = fv
    q = M.algebra.point(vals, getattr(p, "name", "p"))
    M.algebra.require_h0_point(q)
    return q


def _pair(omega: Form, A: Cdga, q, sig: Mapping, eta: Mapping) -> Fraction:
    """Value of iota_eta iota_sigma omega at q for constant vectors keyed by generator name."""
    s = VectorField.combination({A.gen(n): c for n, c in sig.items()})
    e = VectorField.combination({A.gen(n): c for n, c in eta.items()})
    return evaluate(contract(e, contract(s, omega)).poly, q)


def check_symplectic(
    M: SymplectifiedModel, p: Mapping, f_value=1, drop_dfalpha: bool = False
) -> Report:
    """Non-degeneracy of omega0 at p, plus the three-case witness table.

    ``drop_dfalpha`` removes the D(f)*alpha term from omega0 (negative testing).
    """
    B = M.algebra
    q = _point(M, p, f_value)
    k = M.k
    omega = M.omega[0]
    if drop_dfalpha:
        omega = Form(Poly.var(M.f) * ddr(M.alpha, M.base).poly, 2, k)
    T = restrict_tangent(B, q)
    L = restrict_cotangent(B, q)
    tb = tangent_basis(B)
    mats = {}
    for i, gens_a in tb.items():
        gens_u = [u for u in B.true_generators if u.degree == i + k]
        if not gens_u:
            continue
        mats[i] = [
            [evaluate(contract(VectorField.basis(u), contract(VectorField.basis(a), omega)).poly, q) for a in gens_a]
            for u in gens_u
        ]
    rep = Report(f"symplectic check at f = {Fraction(f_value)}")
    qi = is_quasi_iso(ComplexMap(T, L, mats, shift=k))
    rep.data["cone_ranks"] = qi.data["cone_ranks"]
    rep.add("symplectic-quasi-iso", qi.passed, qi.checks[0].detail)
    table = three_case_table(M, p, f_value, omega)
    rep.data["cases"] = table
    missing = [row["direction"] for row in table if row["witness"] is None]
    rep.add("three-case-certificate", not missing,
            "" if not missing else "no witness for " + ", ".join(missing))
    return rep


def three_case_table(M: SymplectifiedModel, p: Mapping, f_value=1, omega: Form | None = None) -> list[dict]:
    """Split T|_p = ker(alpha) + Rest + <d/df> and find, per direction, a partner eta.

    case 1: sigma in ker(alpha), eta in ker(alpha)
    case 2: sigma in Rest, eta = d/df
    case 3: sigma = d/df, eta in Rest
    """
    A, B = M.base, M.algebra
    q = _point(M, p, f_value)
    omega = omega if omega is not None else M.omega[0]
    sub = kernel_subcomplex(M.alpha, A, A.point(p))
    tbA = tangent_basis(A)
    names = {i: [v.name for v in gens] for i, gens in tbA.items()}
    kern = {i: [dict(zip(names[i], v)) for v in sub.vectors.get(i, [])] for i in names}
    rest = {}
    for i in names:
        comp = la.complement_basis(sub.vectors.get(i, []), len(names[i]))
        rest[i] = [dict(zip(names[i], v)) for v in comp]
    fdir = {M.f.name: Fraction(1)}

    def label(vec):
        ns = list(vec)
        return _vec_name([f"∂/∂{n}" for n in ns], [vec[n] for n in ns])

    def witness(sig, candidates):
        for eta in candidates:
            val = _pair(omega, B, q, sig, eta)
            if val:
                return label(eta), val
        return None

    rows = []
    for i in sorted(names):
        partner = -M.k - i
        for v in kern[i]:
            w = witness(v, kern.get(partner, []))
            rows.append(_row(label(v), 1, w))
        for v in rest[i]:
            w = witness(v, [fdir]) if i == -M.k else None
            rows.append(_row(label(v), 2, w))
    fw = witness(fdir, rest.get(-M.k, []))
    rows.append(_row(label(fdir), 3, fw))
    return rows


def _row(direction: str, case: int, w) -> dict:
    return {
        "direction": direction,
        "case": case,
        "witness": None if w is None else w[0],
        "value": None if w is None else w[1],
    }


def pairing_identity(M: SymplectifiedModel, a: GradedVar, b: GradedVar) -> dict:
    """Compare iota_eta iota_sigma omega0 with its three-term expansion.

    For sigma = d/da, eta = d/db and omega0 = D(f)*alpha + f*d_dR(alpha):
      iota_eta iota_sigma omega0
        = s_f * iota_eta(alpha) + (-1)^(|sigma|+1) * e_f * iota_sigma(alpha)
          + f * iota_eta iota_sigma d_dR(alpha)
    where s_f = iota_sigma D(f) and e_f = iota_eta D(f).
    """
    sig, eta = VectorField.basis(a), VectorField.basis(b)
    f = M.f
    direct = contract(eta, contract(sig, M.omega[0])).poly
    s_f = contract(sig, Form(Poly.var(dR(f)), 1, 0)).poly
    e_f = contract(eta, Form(Poly.var(dR(f)), 1, 0)).poly
    sign2 = -1 if (sig.degree + 1) % 2 else 1
    t1 = s_f * contract(eta, M.alpha).poly
    t2 = (e_f * contract(sig, M.alpha).poly).scale(sign2)
    t3 = Poly.var(f) * contract(eta, contract(sig, ddr(M.alpha, M.base))).poly
    return {
        "sigma": f"∂/∂{a.name}",
        "eta": f"∂/∂{b.name}",
        "direct": direct,
        "terms": (t1, t2, t3),
        "signs": (1, sign2, 1),
        "match": direct == t1 + t2 + t3,
    }


def pairing_identity_table(M: SymplectifiedModel) -> list[dict]:
    gens = M.algebra.true_generators
    return [pairing_identity(M, a, b) for a in gens for b in gens]


def _f_weights(form: Form, f: GradedVar) -> set[int]:
    out = set()
    for m in form.poly.terms:
        w = 0
        for v, e in m:
            if v == f or (v.weight and v.base_name == f.name):
                w += e
        out.add(w)
    return out


def weight_grading(M: SymplectifiedModel) -> Report:
    """f and D(f) carry weight 1, everything else weight 0."""
    rep = Report("G_m weight grading")
    for name, form in (("lambda", M.lam), ("omega", M.omega[0])):
        ws = _f_weights(form, M.f)
        ok = ws == {1}
        detail = ",".join(str(w) for w in sorted(ws)) or "empty"
        rep.add(f"weight-{name}", ok, detail)
    return rep


def vdim_extension(M: SymplectifiedModel) -> Report:
    a, b = vdim(M.base), vdim(M.algebra)
    rep = Report("vdim of the symplectification")
    rep.add("vdim-increment", b == a + 1, f"{a} -> {b}")
    rep.add("vdim-even", b % 2 == 0, str(b))
    return rep
