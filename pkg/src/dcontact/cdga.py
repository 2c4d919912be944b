"""Standard-form cdgas: generator towers, Hamiltonian differentials, and their checks."""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable

from .errors import (
    DegreeError,
    DuplicateNameError,
    InvalidPointError,
    NotAGeneratorError,
    PreconditionError,
    SchemeError,
    TowerError,
)
from .graded import Derivation, GradedVar, Poly, derive, evaluate, format_rational, partial
from .report import Report

CASES = ("odd", "mod4-0", "mod4-2")
_CASE_ALIASES = {
    "odd": "odd",
    "mod4-0": "mod4-0",
    "zero-mod-4": "mod4-0",
    "mod4-2": "mod4-2",
    "two-mod-4": "mod4-2",
}


def parity_case(k: int) -> str:
    if k % 2:
        return "odd"
    return "mod4-0" if k % 4 == 0 else "mod4-2"


def normalize_case(case: str | None, k: int) -> str:
    expected = parity_case(k)
    if case is None:
        return expected
    c = _CASE_ALIASES.get(case)
    if c is None:
        raise SchemeError(f"unknown parity case {case!r}")
    if c != expected:
        raise SchemeError(f"case {case!r} does not match k = {k} (expected {expected})")
    return c


def pair_sign(k: int, i: int) -> int:
    """Sign in dx^{-i} = sign * dH/dy^{k+i}; +1 for odd k, (-1)^(i+1) for even k."""
    if k % 2:
        return 1
    return 1 if i % 2 else -1


@dataclass(frozen=True)
class DarbouxLayout:
    """Which generators play the roles x^{-i}_j, y^{k+i}_j, z_j in a Darboux scheme."""

    k: int
    case: str
    pairs: tuple  # ((x, y, i), ...)
    zs: tuple = ()
    contact_z: GradedVar | None = None
    spectators: tuple = ()

    def __post_init__(self):
        if self.k >= 0:
            raise SchemeError("Darboux schemes need k < 0")
        object.__setattr__(self, "case", normalize_case(self.case, self.k))
        for x, y, i in self.pairs:
            if x.degree != -i or y.degree != self.k + i:
                raise SchemeError(
                    f"pair ({x.name}, {y.name}) has degrees ({x.degree}, {y.degree}), "
                    f"expected ({-i}, {self.k + i})"
                )
        if self.zs and self.case != "mod4-2":
            raise SchemeError("middle z-variables only exist when k = 2 mod 4")
        for z in self.zs:
            if 2 * z.degree != self.k:
                raise SchemeError(f"z-variable {z.name} must have degree {self.k // 2}")

    def variables(self) -> list[GradedVar]:
        out = [v for x, y, _ in self.pairs for v in (x, y)]
        out.extend(self.zs)
        return out


@dataclass
class CdgaSpec:
    """Raw tower data; ``differential`` maps generators (or names) to images."""

    base_vars: list
    neg_vars: list
    differential: Mapping | Derivation | None = None
    layout: DarbouxLayout | None = None
    name: str = "A"


class Point(Mapping):
    """An assignment of rationals to the degree-0 generators."""

    def __init__(self, assignment: Mapping[str, object] | None = None, name: str = "p"):
        self._values = {str(k): Fraction(v) for k, v in (assignment or {}).items()}
        self.name = name

    def __getitem__(self, key):
        return self._values[key]

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def with_values(self, **extra) -> "Point":
        vals = dict(self._values)
        vals.update({k: Fraction(v) for k, v in extra.items()})
        return Point(vals, self.name)

    def __repr__(self):
        inner = ", ".join(f"{k}={v}" for k, v in self._values.items())
        return f"Point({inner})"


@dataclass(frozen=True)
class Cdga:
    """A validated standard-form cdga.

    ``inverses`` maps adjoined localization symbols to the element they invert;
    those symbols are bookkeeping and do not count as generators for vdim or
    for the cotangent basis.
    """

    generators: tuple
    differential: Derivation
    inverses: Mapping = field(default_factory=dict)
    layout: DarbouxLayout | None = None
    name: str = "A"

    # -- lookup ---------------------------------------------------------
    def gen(self, name: str) -> GradedVar:
        for v in self.generators:
            if v.name == name:
                return v
        raise NotAGeneratorError(f"{name!r} is not a generator of {self.name}")

    def var(self, name: str) -> Poly:
        return Poly.var(self.gen(name))

    @property
    def names(self) -> list[str]:
        return [v.name for v in self.generators]

    def is_inverse_symbol(self, v: GradedVar) -> bool:
        return v.name in self.inverses

    @property
    def true_generators(self) -> list[GradedVar]:
        return [v for v in self.generators if v.name not in self.inverses]

    def of_degree(self, deg: int) -> list[GradedVar]:
        return [v for v in self.true_generators if v.degree == deg]

    def counts(self) -> dict[int, int]:
        """m_i = number of generators in degree -i."""
        out: dict[int, int] = {}
        for v in self.true_generators:
            out[-v.degree] = out.get(-v.degree, 0) + 1
        return dict(sorted(out.items()))

    @property
    def min_degree(self) -> int:
        return min((v.degree for v in self.true_generators), default=0)

    # -- differential ---------------------------------------------------
    def d(self, p: Poly) -> Poly:
        return derive(self.differential.images, p, strict=True)

    def dv(self, v: GradedVar | str) -> Poly:
        if isinstance(v, str):
            v = self.gen(v)
        return self.differential.image(v)

    def total_partial(self, p: Poly, w: GradedVar) -> Poly:
        """``dp/dw`` treating each inverse symbol u = 1/g as a function of the generators."""
        out = partial(p, w)
        for uname, g in self.inverses.items():
            u = self.gen(uname)
            pu = partial(p, u)
            if pu.is_zero():
                continue
            dg = self.total_partial(g, w)
            if dg:
                out = out - pu * Poly.var(u, 2) * dg
        return out

    # -- points ---------------------------------------------------------
    def point(self, assignment: Mapping | None = None, name: str | None = None) -> Point:
        """Validate an assignment and fill in the values of inverse symbols."""
        pname = name or getattr(assignment, "name", "p")
        assignment = dict(assignment or {})
        degree0 = {v.name: v for v in self.true_generators if v.degree == 0}
        vals: dict[str, Fraction] = {}
        for key, val in assignment.items():
            if key in self.inverses:
                continue
            if key not in degree0:
                raise InvalidPointError(f"{key!r} is not a degree-0 generator of {self.name}")
            vals[key] = Fraction(val)
        for name_, v in degree0.items():
            if name_ not in vals:
                raise InvalidPointError(f"point assigns no value to {name_!r}")
            if v.invertible and not vals[name_]:
                raise InvalidPointError(f"invertible generator {name_!r} assigned 0")
        for uname, g in self.inverses.items():
            gv = evaluate(g, vals)
            if not gv:
                raise InvalidPointError(f"localized element {g} vanishes at the point")
            vals[uname] = 1 / gv
        return Point(vals, pname)

    def require_h0_point(self, p: Mapping) -> None:
        """Raise unless p lies in spec H^0(A), i.e. d of every degree -1 generator vanishes at p."""
        for v in self.of_degree(-1):
            r = evaluate(self.dv(v), p)
            if r:
                raise InvalidPointError(f"point is not in spec H^0: d({v.name}) = {format_rational(r)} there")


def _as_var_map(A_gens: dict[str, GradedVar], images) -> dict[GradedVar, Poly]:
    if images is None:
        return {}
    if isinstance(images, Derivation):
        if images.parity_degree != 1:
            raise DegreeError("internal differential must have degree +1")
        images = images.images
    out = {}
    for key, img in images.items():
        name = key.name if isinstance(key, GradedVar) else str(key)
        if name not in A_gens:
            raise NotAGeneratorError(f"differential given for unknown generator {name!r}")
        out[A_gens[name]] = img if isinstance(img, Poly) else Poly.const(img)
    return out


def build_tower(spec: CdgaSpec, inverses: Mapping | None = None) -> Cdga:
    """Validate a tower specification and return the algebra."""
    gens: list[GradedVar] = []
    seen: dict[str, GradedVar] = {}
    for v in list(spec.base_vars) + list(spec.neg_vars):
        if v.weight:
            raise DegreeError(f"{v.name} is a de Rham symbol, not a generator")
        if v.name in seen:
            raise DuplicateNameError(f"duplicate generator name {v.name!r}")
        seen[v.name] = v
        gens.append(v)
    for v in spec.base_vars:
        if v.degree != 0:
            raise DegreeError(f"base generator {v.name} must have degree 0")
    for v in spec.neg_vars:
        if v.degree >= 0 and v.name not in (inverses or {}):
            raise DegreeError(f"adjoined generator {v.name} must have negative degree")
    gens.sort(key=lambda v: (-v.degree, v.name))
    images = _as_var_map(seen, spec.differential)
    for v, img in images.items():
        for w in img.variables():
            if seen.get(w.name) != w:
                raise TowerError(f"d({v.name}) uses {w.name!r}, which is not a generator")
            if w.degree <= v.degree:
                raise TowerError(f"d({v.name}) uses {w.name}, adjoined at or after {v.name}")
        if img and img.degree != v.degree + 1:
            raise DegreeError(
                f"d({v.name}) has degree {img.degree}, expected {v.degree + 1}"
            )
    full = {v: images.get(v, Poly()) for v in gens}
    for v in gens:
        if v.degree == 0 and full[v]:
            raise DegreeError(f"d({v.name}) must vanish on degree-0 generators")
    A = Cdga(tuple(gens), Derivation(1, full), dict(inverses or {}), spec.layout, spec.name)
    if spec.layout is not None:
        for v in spec.layout.variables():
            if seen.get(v.name) != v:
                raise SchemeError(f"layout variable {v.name} is not a generator")
    return A


def with_differential(A: Cdga, images: Mapping[GradedVar, Poly]) -> Cdga:
    full = dict(A.differential.images)
    full.update(images)
    return replace(A, differential=Derivation(1, full))


def check_d_squared(A: Cdga) -> Report:
    """d^2 = 0 on generators; by the Leibniz rule this covers the whole algebra."""
    rep = Report(f"d^2 = 0 on {A.name}")
    residuals = {}
    for v in A.generators:
        r = A.d(A.dv(v))
        if r:
            residuals[v.name] = r
    rep.data["residuals"] = residuals
    detail = "; ".join(f"d^2({n}) = {r}" for n, r in residuals.items())
    rep.add("d-squared", not residuals, detail)
    return rep


def _require_layout(A: Cdga, k: int | None) -> DarbouxLayout:
    lay = A.layout
    if lay is None:
        raise SchemeError(f"{A.name} has no Darboux variable scheme")
    if k is not None and k != lay.k:
        raise SchemeError(f"k = {k} does not match the scheme's k = {lay.k}")
    return lay


def _check_h_degree(H: Poly, k: int):
    if H and H.degree != k + 1:
        raise DegreeError(f"Hamiltonian must be homogeneous of degree {k + 1}, got {H.degree}")


def master_equation_residual(A: Cdga, H: Poly, k: int | None = None) -> Poly:
    lay = _require_layout(A, k)
    _check_h_degree(H, lay.k)
    out = Poly()
    for x, y, i in lay.pairs:
        if i >= 1:
            out = out + partial(H, x) * partial(H, y)
    for z in lay.zs:
        hz = partial(H, z)
        out = out + (hz * hz).scale(Fraction(1, 4))
    return out


def check_master_equation(A: Cdga, H: Poly, k: int | None = None) -> Report:
    res = master_equation_residual(A, H, k)
    rep = Report("classical master equation")
    rep.data["residual"] = res
    rep.add("master-equation", res.is_zero(), "" if res.is_zero() else f"residual {res}")
    return rep


def differential_from_hamiltonian(
    A: Cdga, H: Poly, k: int | None = None, case: str | None = None
) -> Derivation:
    """The Hamiltonian differential on the scheme variables.

    dx^{-i} = s_i dH/dy^{k+i}, dy^{k+i} = dH/dx^{-i}, dz = (1/2) dH/dz, with
    s_i from :func:`pair_sign`. Generators outside the scheme keep their
    current images.
    """
    lay = _require_layout(A, k)
    normalize_case(case, lay.k)
    _check_h_degree(H, lay.k)
    images = dict(A.differential.images)
    for x, y, i in lay.pairs:
        images[x] = partial(H, y).scale(pair_sign(lay.k, i))
        images[y] = partial(H, x)
    for z in lay.zs:
        images[z] = partial(H, z).scale(Fraction(1, 2))
    return Derivation(1, images)


def vdim(A: Cdga) -> int:
    return sum((-1) ** i * m for i, m in A.counts().items())


def _rename(p: Poly, old: GradedVar, new: GradedVar) -> Poly:
    out = {}
    for m, c in p.terms.items():
        out[tuple((new if v == old else v, e) for v, e in m)] = c
    return Poly(out)


def localize(A: Cdga, g: Poly, symbol: str | None = None) -> Cdga:
    """Invert a degree-0 element.

    A bare generator is simply marked invertible. Anything else gets a fresh
    invertible symbol u with du = -u^2 dg, recorded in ``inverses``.
    """
    if g.is_zero():
        raise PreconditionError("cannot invert 0")
    if g.degree != 0:
        raise DegreeError(f"can only invert degree-0 elements, got degree {g.degree}")
    for v in g.variables():
        if v not in A.generators:
            raise NotAGeneratorError(f"{v.name} is not a generator of {A.name}")
    if len(g.terms) == 1:
        (m, c), = g.terms.items()
        if len(m) == 1 and m[0][1] == 1 and c == 1:
            old = m[0][0]
            if old.invertible:
                return A
            new = GradedVar(old.name, 0, invertible=True)
            gens = tuple(new if v == old else v for v in A.generators)
            images = {
                (new if v == old else v): _rename(img, old, new)
                for v, img in A.differential.images.items()
            }
            inverses = {u: _rename(h, old, new) for u, h in A.inverses.items()}
            lay = A.layout
            if lay is not None and old in lay.spectators:
                lay = replace(lay, spectators=tuple(new if s == old else s for s in lay.spectators))
            return Cdga(gens, Derivation(1, images), inverses, lay, A.name)
    taken = set(A.names)
    if symbol is None:
        n = 1
        while f"inv{n}" in taken:
            n += 1
        symbol = f"inv{n}"
    elif symbol in taken:
        raise DuplicateNameError(f"duplicate generator name {symbol!r}")
    u = GradedVar(symbol, 0, invertible=True)
    images = dict(A.differential.images)
    images[u] = -(Poly.var(u, 2) * A.d(g))
    inverses = dict(A.inverses)
    inverses[symbol] = g
    return Cdga(A.generators + (u,), Derivation(1, images), inverses, A.layout, A.name)


def linearization(A: Cdga, p: Mapping) -> dict[tuple[str, str], Fraction]:
    """Nonzero entries (w, v) of the differential of the cotangent complex at p."""
    out = {}
    for v in A.true_generators:
        if v.degree >= 0:
            continue
        dv = A.dv(v)
        if dv.is_zero():
            continue
        for w in A.of_degree(v.degree + 1):
            val = evaluate(A.total_partial(dv, w), p)
            if val:
                out[(w.name, v.name)] = val
    return out


def check_minimal_at(A: Cdga, p: Mapping) -> Report:
    p = A.point(p)
    entries = linearization(A, p)
    rep = Report(f"minimality of {A.name} at {p.name}")
    rep.data["entries"] = entries
    detail = ", ".join(f"d({v})/d({w})={e}" for (w, v), e in entries.items())
    rep.add("minimal", not entries, detail)
    return rep


def generators_by_degree(gens: Iterable[GradedVar]) -> dict[int, list[GradedVar]]:
    out: dict[int, list[GradedVar]] = {}
    for v in gens:
        out.setdefault(v.degree, []).append(v)
    return out
