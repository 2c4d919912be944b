"""Command-line front end: ``dcontact <command> MANIFEST [options]``.

Exit codes: 0 all checks pass, 1 some check failed, 2 input error (no CHECK lines).
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Sequence

from .cdga import Cdga, check_d_squared, check_master_equation, check_minimal_at, localize, vdim
from .contact import check_contact, reeb_solutions
from .darboux import (
    build_contact_darboux,
    build_phi,
    darboux_algebra,
    omega0,
    vdim_report,
)
from .derham import Form, d_int, ddr, is_closed_sequence, is_shifted_pform
from .errors import DContactError, MasterEquationError, PreconditionError
from .graded import Poly
from .parser import Manifest, ManifestError, _retarget, build_manifest_algebra, parse_manifest
from .report import Report
from .symplectify import (
    check_symplectic,
    pairing_identity_table,
    symplectify,
    vdim_extension,
    weight_grading,
)

COMMANDS = (
    "verify-cdga",
    "verify-form",
    "darboux-symplectic",
    "darboux-contact",
    "contact-check",
    "reeb",
    "symplectify",
    "report",
)


class InputError(Exception):
    """Bad command-line input; reported with exit code 2."""


@dataclass
class Options:
    point: str | None = None
    form: str | None = None
    case: str | None = None
    z_mode: str | None = None
    f_value: Fraction = Fraction(1)
    machine: bool = False


@dataclass
class Context:
    manifest: Manifest
    options: Options
    algebra: Cdga | None = None
    alpha: Form | None = None


def _scheme(m: Manifest, opts: Options, contact: bool | None = None):
    s = m.scheme
    if s is None:
        return None
    changes = {}
    if opts.case is not None:
        changes["case"] = opts.case
    if opts.z_mode is not None:
        changes["z_mode"] = opts.z_mode
    if contact is not None:
        changes["contact"] = contact
    try:
        return replace(s, **changes) if changes else s
    except DContactError as e:
        raise InputError(str(e)) from None


def _localized(A: Cdga, m: Manifest) -> Cdga:
    for g in m.localize:
        A = localize(A, _retarget(g, A))
    return A


def _algebra(m: Manifest, opts: Options, contact: bool | None = None) -> Cdga:
    """The manifest's algebra with the Hamiltonian differential, CME not enforced."""
    if m.scheme is not None:
        s = _scheme(m, opts, contact)
        A, _ = darboux_algebra(s, m.hamiltonian, m.name)
        return _localized(A, m)
    if opts.case is not None and m.algebra.layout is not None and opts.case != m.algebra.layout.case:
        raise InputError(f"--case {opts.case} does not match the manifest's k")
    return build_manifest_algebra(m)


def _point(m: Manifest, A: Cdga, opts: Options, required: bool = True):
    if opts.point is not None:
        if opts.point not in m.points:
            raise InputError(f"no point named {opts.point!r}")
        return A.point(m.points[opts.point], opts.point)
    if m.points:
        name = next(iter(m.points))
        return A.point(m.points[name], name)
    if not any(v.degree == 0 for v in A.true_generators):
        return A.point({}, "p")
    if required:
        raise InputError("a point is required (add a [points] entry or pass --point)")
    return None


def _form(m: Manifest, A: Cdga, opts: Options) -> Form:
    if opts.form is not None:
        if opts.form not in m.forms:
            raise InputError(f"no form named {opts.form!r}")
        return _retarget_form(m.forms[opts.form], A)
    if m.scheme is not None and m.scheme.contact:
        return _contact_model(m, opts).alpha
    if not m.forms:
        raise InputError("no form given (add a [forms] entry or pass --form)")
    return _retarget_form(next(iter(m.forms.values())), A)


def _retarget_form(w: Form, A: Cdga) -> Form:
    return Form(_retarget_poly(w.poly, A), w.weight, w.degree)


def _retarget_poly(p: Poly, A: Cdga) -> Poly:
    from .graded import dR

    out = {}
    for mono, c in p.terms.items():
        out[tuple(((dR(A.gen(v.base_name)) if v.weight else A.gen(v.name)), e) for v, e in mono)] = c
    return Poly(out)


def _contact_model(m: Manifest, opts: Options):
    s = _scheme(m, opts, contact=True)
    model = build_contact_darboux(s, m.hamiltonian, m.z_element, m.name)
    if m.localize:
        A = _localized(model.algebra, m)
        model = replace(model, algebra=A, alpha=_retarget_form(model.alpha, A))
    return model


# -- command bodies -------------------------------------------------------------

def _cme(rep: Report, A: Cdga, m: Manifest) -> bool:
    if m.hamiltonian is None or A.layout is None:
        return True
    r = check_master_equation(A, _retarget_poly(m.hamiltonian, A))
    rep.extend(r)
    return r.passed


def cmd_verify_cdga(ctx: Context, rep: Report) -> None:
    m, opts = ctx.manifest, ctx.options
    A = _algebra(m, opts)
    _cme(rep, A, m)
    rep.extend(check_d_squared(A))
    rep.data["vdim"] = vdim(A)
    rep.notes.append(f"vdim = {vdim(A)}; generator counts {A.counts()}")
    names = [opts.point] if opts.point else list(m.points)
    for name in names:
        if name not in m.points:
            raise InputError(f"no point named {name!r}")
        r = check_minimal_at(A, A.point(m.points[name], name))
        rep.add(f"minimal:{name}", r.passed, r.checks[0].detail)


def cmd_verify_form(ctx: Context, rep: Report) -> None:
    m, opts = ctx.manifest, ctx.options
    A = _contact_model(m, opts).algebra if (m.scheme and m.scheme.contact) else _algebra(m, opts)
    if opts.form is None and not (m.scheme and m.scheme.contact) and not m.forms:
        raise InputError("no forms to verify")
    names = [opts.form] if opts.form else list(m.forms)
    if not names:
        names = ["alpha0"]
    for name in names:
        w = _form(m, A, replace(opts, form=name if name in m.forms else None))
        rep.add(f"bidegree:{name}", True, f"p={w.weight} k={w.degree}")
        r = is_shifted_pform(w, A)
        rep.add(f"shifted-pform:{name}", r.passed, r.checks[0].detail)
        if w.weight >= 2:
            r = is_closed_sequence([w], A)
            rep.add(f"closed-sequence:{name}", r.passed, r.checks[0].detail)


def cmd_darboux_symplectic(ctx: Context, rep: Report) -> None:
    m, opts = ctx.manifest, ctx.options
    if m.scheme is None:
        raise InputError("darboux-symplectic needs a [scheme] section")
    s = _scheme(m, opts, contact=False)
    A, _ = darboux_algebra(s, m.hamiltonian, m.name)
    H = m.hamiltonian or Poly()
    if not _cme(rep, A, m):
        return
    if m.hamiltonian is None:
        rep.add("master-equation", True)
    A = _localized(A, m)
    om = omega0(A.layout)
    phi = build_phi(A.layout)
    rep.extend(check_d_squared(A))
    checks = (
        ("d-omega", d_int(om, A).poly),
        ("ddr-omega", ddr(om, A).poly),
        ("ddr-phi", (ddr(phi, A) - om * s.k).poly),
        ("hamiltonian-phi", ddr(_retarget_poly(H, A), A).poly + d_int(phi, A).poly),
    )
    for name, r in checks:
        rep.add(name, r.is_zero(), "" if r.is_zero() else str(r))
    rep.extend(vdim_report(A, "symplectic"))


def _contact_checks(rep: Report, alpha: Form, A: Cdga, p) -> bool:
    cr = check_contact(alpha, A, p)
    rep.extend(cr.report)
    return cr.verdict


def cmd_darboux_contact(ctx: Context, rep: Report) -> None:
    m, opts = ctx.manifest, ctx.options
    if m.scheme is None:
        raise InputError("darboux-contact needs a [scheme] section")
    A = _algebra(m, opts, contact=True)
    if not _cme(rep, A, m):
        return
    if m.hamiltonian is None:
        rep.add("master-equation", True)
    model = _contact_model(m, opts)
    for c in model.report.checks:
        if c.name != "master-equation":
            rep.checks.append(c)
    rep.extend(vdim_report(model.algebra, "contact"))
    p = _point(m, model.algebra, opts, required=False)
    if p is not None:
        _contact_checks(rep, model.alpha, model.algebra, p)
        rep.extend(reeb_solutions(model.alpha, model.algebra, p))


def _contact_input(ctx: Context, rep: Report):
    m, opts = ctx.manifest, ctx.options
    if m.scheme is not None and m.scheme.contact and opts.form is None:
        A = _algebra(m, opts, contact=True)
        if not _cme(rep, A, m):
            return None
        model = _contact_model(m, opts)
        A, alpha = model.algebra, model.alpha
    else:
        A = _algebra(m, opts)
        alpha = _form(m, A, opts)
    r = d_int(alpha, A)
    rep.add("alpha-d-closed", r.is_zero(), "" if r.is_zero() else str(r))
    if r:
        return None
    p = _point(m, A, opts)
    return alpha, A, p


def cmd_contact_check(ctx: Context, rep: Report) -> None:
    got = _contact_input(ctx, rep)
    if got is None:
        return
    _contact_checks(rep, *got)


def cmd_reeb(ctx: Context, rep: Report) -> None:
    got = _contact_input(ctx, rep)
    if got is None:
        return
    rep.extend(reeb_solutions(*got))


def cmd_symplectify(ctx: Context, rep: Report) -> None:
    got = _contact_input(ctx, rep)
    if got is None:
        return
    alpha, A, p = got
    cr = check_contact(alpha, A, p)
    ok = cr.verdict
    failed = [c.name for c in cr.report.checks if not c.passed]
    rep.add("contact-precondition", ok, "" if ok else "failed " + ", ".join(failed))
    if not ok:
        return
    M = symplectify(A, alpha, p)
    rep.extend(M.report)
    r = check_symplectic(M, p, ctx.options.f_value)
    rep.extend(r)
    for row in r.data["cases"]:
        rep.notes.append(f"case {row['case']}: {row['direction']} pairs with {row['witness']}")
    rep.extend(weight_grading(M))
    rep.extend(vdim_extension(M))
    table = pairing_identity_table(M)
    bad = [f"{t['sigma']},{t['eta']}" for t in table if not t["match"]]
    rep.add("pairing-identity", not bad, f"{len(table)} pairs" if not bad else "mismatch " + "; ".join(bad))


def cmd_report(ctx: Context, rep: Report) -> None:
    m = ctx.manifest
    if m.scheme is None:
        cmd_verify_cdga(ctx, rep)
        if not rep.passed or not m.forms:
            return
        cmd_verify_form(ctx, rep)
        alpha = m.forms[ctx.options.form] if ctx.options.form in m.forms else next(iter(m.forms.values()))
        if alpha.weight == 1 and _point(m, _algebra(m, ctx.options), ctx.options, required=False) is not None:
            sub = Report("contact")
            got = _contact_input(ctx, sub)
            if got is not None:
                sub.checks = [c for c in sub.checks if c.name != "alpha-d-closed"]
                _contact_checks(sub, *got)
                sub.extend(reeb_solutions(*got))
            rep.extend(sub)
        return
    if m.scheme.contact:
        cmd_darboux_contact(ctx, rep)
        if rep.passed and _point(m, _contact_model(m, ctx.options).algebra, ctx.options, required=False) is not None:
            cmd_symplectify(ctx, _Sub(rep, "symplectify"))
    else:
        cmd_darboux_symplectic(ctx, rep)
    if rep.passed:
        A = _algebra(m, ctx.options)
        for name, vals in m.points.items():
            r = check_minimal_at(A, A.point(vals, name))
            rep.add(f"minimal:{name}", r.passed, r.checks[0].detail)


class _Sub(Report):
    """Forward checks into a parent report, prefixing names and skipping duplicates."""

    def __init__(self, parent: Report, prefix: str):
        super().__init__(parent.title)
        self._parent, self._prefix = parent, prefix

    def add(self, name, passed, detail=""):
        return self._parent.add(f"{self._prefix}.{name}", passed, detail)

    def extend(self, other, prefix=""):
        for c in other.checks:
            self.add(prefix + c.name, c.passed, c.detail)
        self._parent.notes.extend(other.notes)


HANDLERS = {
    "verify-cdga": cmd_verify_cdga,
    "verify-form": cmd_verify_form,
    "darboux-symplectic": cmd_darboux_symplectic,
    "darboux-contact": cmd_darboux_contact,
    "contact-check": cmd_contact_check,
    "reeb": cmd_reeb,
    "symplectify": cmd_symplectify,
    "report": cmd_report,
}


@dataclass
class Outcome:
    code: int
    report: Report | None = None
    error: str | None = None

    def stdout(self, machine: bool) -> str:
        if self.report is None:
            return ""
        lines = [] if machine else [self.report.text(), ""]
        lines.extend(self.report.machine_lines())
        return "\n".join(lines) + "\n"


def run_command(cmd: str, manifest_text: str, options: Options | None = None) -> Outcome:
    """Run one command on manifest text; never raises for bad input."""
    options = options or Options()
    if cmd not in HANDLERS:
        return Outcome(2, error=f"unknown command {cmd!r}")
    try:
        m = parse_manifest(manifest_text)
    except ManifestError as e:
        return Outcome(2, error=f"manifest:{e}")
    rep = Report(f"{cmd} {m.name}")
    try:
        HANDLERS[cmd](Context(m, options), rep)
    except MasterEquationError as e:
        rep.add("master-equation", False, f"residual {e.residual}")
    except InputError as e:
        return Outcome(2, error=str(e))
    except PreconditionError as e:
        rep.add("precondition", False, str(e))
    except DContactError as e:
        return Outcome(2, error=f"{type(e).__name__}: {e}")
    if not rep.checks:
        return Outcome(2, error="no checks apply to this manifest")
    return Outcome(0 if rep.passed else 1, rep)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational p/q, got {text!r}") from None


def build_arg_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dcontact", description="Verify shifted symplectic and contact local models.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("manifest", help="manifest file ('-' for stdin)")
    ap.add_argument("--point", help="name of the point in [points]")
    ap.add_argument("--form", help="name of the form in [forms]")
    ap.add_argument("--case", choices=("odd", "mod4-0", "mod4-2"))
    ap.add_argument("--z-mode", choices=("generator", "element"))
    ap.add_argument("--f-value", type=_fraction, default=Fraction(1))
    ap.add_argument("--machine", action="store_true", help="print only CHECK lines")
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        if args.manifest == "-":
            text = sys.stdin.read()
        else:
            with open(args.manifest, encoding="utf-8") as fh:
                text = fh.read()
    except (OSError, UnicodeDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    opts = Options(args.point, args.form, args.case, args.z_mode, args.f_value, args.machine)
    out = run_command(args.command, text, opts)
    if out.code == 2:
        print(f"error: {out.error}", file=sys.stderr)
        return 2
    sys.stdout.write(out.stdout(args.machine))
    return out.code


if __name__ == "__main__":
    sys.exit(main())
