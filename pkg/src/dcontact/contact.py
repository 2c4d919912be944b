"""Contact conditions for a degree-k 1-form on a local model, evaluated at a point."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import linalg as la
from .cdga import Cdga
from .complexes import (
    ComplexMap,
    FreeComplex,
    Subcomplex,
    _vec_name,
    is_quasi_iso,
    restrict_tangent,
    strict_kernel_sub,
    tangent_basis,
)
from .derham import Form, VectorField, contract, d_int, ddr
from .errors import ChainMapError, DegreeError, PreconditionError
from .graded import GradedVar, Poly, evaluate
from .report import Report


def _prepare(alpha: Form, A: Cdga, p: Mapping):
    _check_one_form(alpha, A)
    p = A.point(p)
    A.require_h0_point(p)
    return p


def _check_one_form(alpha: Form, A: Cdga) -> None:
    if alpha.weight != 1:
        raise DegreeError(f"expected a 1-form, got weight {alpha.weight}")
    r = d_int(alpha, A)
    if r:
        raise PreconditionError(f"form is not d-closed: d(alpha) = {r}")


def form_row(alpha: Form, A: Cdga, p: Mapping) -> tuple[list[GradedVar], list[Fraction]]:
    """Values of iota_{d/dv} alpha at p for generators v of degree k."""
    k = alpha.degree
    gens = tangent_basis(A).get(-k, [])
    return gens, [evaluate(contract(VectorField.basis(v), alpha).poly, p) for v in gens]


def pairing_value(omega: Form, a: GradedVar, b: GradedVar, p: Mapping) -> Fraction:
    """iota_{d/db} iota_{d/da} omega evaluated at p."""
    w = contract(VectorField.basis(b), contract(VectorField.basis(a), omega))
    return evaluate(w.poly, p)


def pairing_matrix(omega: Form, A: Cdga, p: Mapping) -> dict[tuple[str, str], Fraction]:
    """Nonzero values of the 2-form on pairs of tangent basis vectors (|a| + |b| = k)."""
    k = omega.degree
    tb = tangent_basis(A)
    out = {}
    for ta, gens_a in tb.items():
        gens_b = tb.get(-k - ta, [])
        for a in gens_a:
            for b in gens_b:
                val = pairing_value(omega, a, b, p)
                if val:
                    out[(a.name, b.name)] = val
    return out


def alpha_map(alpha: Form, A: Cdga, p: Mapping) -> tuple[FreeComplex, ComplexMap]:
    """The map T|_p -> O[k] given by contraction with alpha."""
    T = restrict_tangent(A, p)
    k = alpha.degree
    target = FreeComplex({-k: ("1",)})
    _, row = form_row(alpha, A, p)
    mats = {-k: [row]} if row else {}
    return T, ComplexMap(T, target, mats)


def kernel_subcomplex(alpha: Form, A: Cdga, p: Mapping) -> Subcomplex:
    p = _prepare(alpha, A, p)
    _, f = alpha_map(alpha, A, p)
    return strict_kernel_sub(f)


def kernel_of_form(alpha: Form, A: Cdga, p: Mapping) -> FreeComplex:
    return kernel_subcomplex(alpha, A, p).complex


def _pairing_map(sub: Subcomplex, T: FreeComplex, omega: Form, A: Cdga, p, k: int):
    """K -> K^vee with shift k, entries sigma^T B eta."""
    tb = tangent_basis(A)
    K = sub.complex
    Kv = K.dual()
    mats = {}
    for i, sig in sub.vectors.items():
        etas = sub.vectors.get(-i - k, [])
        if not sig or not etas:
            continue
        ga, gb = tb.get(i, []), tb.get(-i - k, [])
        B = [[pairing_value(omega, a, b, p) for b in gb] for a in ga]
        m = []
        for eta in etas:
            row = []
            for s in sig:
                row.append(sum(s[x] * B[x][y] * eta[y] for x in range(len(ga)) for y in range(len(gb)) if s[x] and eta[y]))
            m.append(row)
        mats[i] = m
    return ComplexMap(K, Kv, mats, shift=k), mats


def _degenerate_directions(sub: Subcomplex, T: FreeComplex, mats: dict, k: int) -> list[str]:
    out = []
    for i, sig in sub.vectors.items():
        if not sig:
            continue
        m = mats.get(i)
        if m is None:
            null = [[Fraction(int(r == c)) for r in range(len(sig))] for c in range(len(sig))]
        else:
            null = la.nullspace(m, len(sig))
        for coeffs in null:
            vec = [sum(c * s[x] for c, s in zip(coeffs, sig)) for x in range(T.dim(i))]
            out.append(_vec_name(T.names(i), vec))
    return out


@dataclass
class ContactReport:
    kernel_basis: dict
    cokernel: dict
    pairing_verdict: Report
    reeb: Report
    verdict: bool
    report: Report = field(default_factory=lambda: Report("contact check"))
    degenerate_directions: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict


def check_contact(alpha: Form, A: Cdga, p: Mapping) -> ContactReport:
    """Kernel, cokernel line and non-degeneracy of d_dR alpha on the kernel, all at p.

    The kernel is taken after restriction to p.
    """
    p = _prepare(alpha, A, p)
    k = alpha.degree
    T, f = alpha_map(alpha, A, p)
    sub = strict_kernel_sub(f)
    K = sub.complex
    rep = Report(f"contact check at {p.name}")
    ktotal = sum(K.dims().values())
    ttotal = sum(T.dims().values())
    rep.add("kernel-rank", ktotal == ttotal - 1, str(ktotal))
    coker = {i: T.dim(i) - K.dim(i) for i in T.degrees if T.dim(i) - K.dim(i)}
    line_ok = coker == {-k: 1}
    rep.add(
        "cokernel-line",
        line_ok,
        f"degree {-k}" if line_ok else "ranks " + (", ".join(f"{i}:{r}" for i, r in coker.items()) or "none"),
    )
    omega = ddr(alpha, A)
    degenerate: list[str] = []
    try:
        P, mats = _pairing_map(sub, T, omega, A, p, k)
        qi = is_quasi_iso(P)
        if not qi.passed:
            degenerate = _degenerate_directions(sub, T, mats, k)
        detail = "" if qi.passed else (
            "degenerate-direction " + ", ".join(degenerate) if degenerate else qi.checks[0].detail
        )
        pairing = Report("pairing on the kernel")
        pairing.data.update(qi.data)
        pairing.add("pairing-quasi-iso", qi.passed, detail)
    except ChainMapError as e:
        pairing = Report("pairing on the kernel")
        pairing.add("pairing-quasi-iso", False, f"not-a-chain-map ({e})")
    rep.extend(pairing)
    reeb = reeb_solutions(alpha, A, p)
    rep.notes.append("kernel computed after restriction to the point")
    basis = {i: list(K.names(i)) for i in K.degrees if K.dim(i)}
    rep.data.update(kernel_basis=basis, cokernel=coker)
    verdict = line_ok and pairing.passed
    return ContactReport(basis, coker, pairing, reeb, verdict, rep, degenerate)


def reeb_solutions(alpha: Form, A: Cdga, p: Mapping) -> Report:
    """Solve iota_R alpha = 1 and iota_R d_dR alpha = 0 over the degree -k tangent directions."""
    p = _prepare(alpha, A, p)
    omega = ddr(alpha, A)
    gens, row = form_row(alpha, A, p)
    rep = Report("Reeb solution set")
    tangent_names = [f"∂/∂{v.name}" for v in gens]
    if not gens:
        rep.data.update(kind="empty")
        rep.add("reeb", False, "empty")
        return rep
    us = tangent_basis(A).get(0, [])
    M = [row] + [[pairing_value(omega, a, u, p) for a in gens] for u in us]
    b = [Fraction(1)] + [Fraction(0)] * len(us)
    sol = la.solve(M, b, cols=len(gens))
    if sol is None:
        rep.data.update(kind="empty")
        rep.add("reeb", False, "empty")
        return rep
    x, null = sol
    name = _vec_name(tangent_names, x)
    rep.data.update(particular=dict(zip([v.name for v in gens], x)), dimension=len(null), vector=name)
    if null:
        rep.data["kind"] = "affine"
        rep.add("reeb", False, f"affine dimension {len(null)} through {name}")
    else:
        rep.data["kind"] = "unique"
        rep.add("reeb", True, f"unique {name}")
    return rep


def reeb_field(rep: Report, A: Cdga) -> VectorField:
    """The particular Reeb solution as a constant vector field."""
    coeffs = {A.gen(n): c for n, c in rep.data.get("particular", {}).items() if c}
    return VectorField.combination(coeffs)


def check_scale_invariance(alpha: Form, g: Poly, A: Cdga, p: Mapping) -> Report:
    p = A.point(p)
    if g and g.degree != 0:
        raise DegreeError("scale factor must have degree 0")
    gv = evaluate(g, p)
    if not gv:
        raise PreconditionError("scale factor vanishes at the point")
    ga = Form(g * alpha.poly, 1, alpha.degree)
    s1 = kernel_subcomplex(alpha, A, p)
    s2 = kernel_subcomplex(ga, A, p)
    same = True
    for i in set(s1.vectors) | set(s2.vectors):
        a, b = s1.vectors.get(i, []), s2.vectors.get(i, [])
        if len(a) != len(b) or (a and la.rank(a + b) != len(a)):
            same = False
    c1 = check_contact(alpha, A, p).verdict
    c2 = check_contact(ga, A, p).verdict
    rep = Report("scale invariance")
    rep.add("kernel-spans", same)
    rep.add("verdicts-agree", c1 == c2, f"{'pass' if c1 else 'fail'}/{'pass' if c2 else 'fail'}")
    return rep
