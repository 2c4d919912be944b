"""The de Rham algebra DR(A): forms, d_dR, the internal d, and contraction.

A form is a :class:`Poly` over the generators and their de Rham symbols
``D(v)``. Commutation signs use the total degree, so ``D(v)`` behaves as a
symbol of parity ``|v| + 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .cdga import Cdga
from .errors import DegreeError
from .graded import GradedVar, Poly, dR, derive, format_poly, monomial_degree, monomial_weight, partial
from .report import Report


class Form:
    """A homogeneous element of DR(A) of weight ``p`` and degree ``k``."""

    __slots__ = ("poly", "weight", "degree")

    def __init__(self, poly: Poly, weight: int | None = None, degree: int | None = None):
        if not isinstance(poly, Poly):
            poly = Poly.const(poly)
        ws = {monomial_weight(m) for m in poly.terms}
        ds = {monomial_degree(m) for m in poly.terms}
        if len(ws) > 1 or len(ds) > 1:
            raise DegreeError(f"form {poly} is not bihomogeneous")
        if ws:
            w, d = ws.pop(), ds.pop()
            if weight is not None and weight != w:
                raise DegreeError(f"form {poly} has weight {w}, expected {weight}")
            if degree is not None and degree != d:
                raise DegreeError(f"form {poly} has degree {d}, expected {degree}")
            weight, degree = w, d
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "weight", 0 if weight is None else weight)
        object.__setattr__(self, "degree", 0 if degree is None else degree)

    def __setattr__(self, name, value):
        raise AttributeError("Form is immutable")

    @classmethod
    def zero(cls, weight: int, degree: int) -> "Form":
        return cls(Poly(), weight, degree)

    @property
    def total_degree(self) -> int:
        return self.weight + self.degree

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __bool__(self):
        return not self.poly.is_zero()

    def _same(self, other: "Form"):
        if self.poly and other.poly and (self.weight, self.degree) != (other.weight, other.degree):
            raise DegreeError(
                f"cannot add forms of bidegree {(self.weight, self.degree)} and {(other.weight, other.degree)}"
            )

    def _bideg(self, other: "Form"):
        return (self.weight, self.degree) if self.poly else (other.weight, other.degree)

    def __add__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        self._same(other)
        return Form(self.poly + other.poly, *self._bideg(other))

    def __sub__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        self._same(other)
        return Form(self.poly - other.poly, *self._bideg(other))

    def __neg__(self):
        return Form(-self.poly, self.weight, self.degree)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Form(self.poly.scale(other), self.weight, self.degree)
        if isinstance(other, Form):
            return Form(self.poly * other.poly, self.weight + other.weight, self.degree + other.degree)
        if isinstance(other, Poly):
            deg = other.degree if other else 0
            return Form(self.poly * other, self.weight, self.degree + (deg or 0))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Form(self.poly.scale(other), self.weight, self.degree)
        if isinstance(other, Poly):
            deg = other.degree if other else 0
            return Form(other * self.poly, self.weight, self.degree + (deg or 0))
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, Form):
            return self.poly == other.poly and (
                self.poly.is_zero() or (self.weight, self.degree) == (other.weight, other.degree)
            )
        if isinstance(other, Poly):
            return self.poly == other
        if isinstance(other, (int, Fraction)):
            return self.poly == other
        return NotImplemented

    def __hash__(self):
        return hash(self.poly)

    def __str__(self):
        return format_poly(self.poly)

    def __repr__(self):
        return f"Form[{self.weight},{self.degree}]({self})"


def wedge(a: Form, b: Form) -> Form:
    return a * b


def D(v: GradedVar) -> Form:
    """The basic 1-form D(v)."""
    return Form(Poly.var(dR(v)), 1, v.degree)


def _ddr_images(p: Poly, A: Cdga | None) -> dict:
    images = {}
    for v in p.variables():
        if v.weight:
            continue
        if A is not None and v.name in A.inverses:
            g = A.inverses[v.name]
            images[v] = -(Poly.var(v, 2) * _ddr_poly(g, A))
        else:
            images[v] = Poly.var(dR(v))
    return images


def _ddr_poly(p: Poly, A: Cdga | None) -> Poly:
    return derive(_ddr_images(p, A), p, strict=False)


def ddr(w: Form | Poly, A: Cdga | None = None) -> Form:
    """De Rham differential. With ``A``, inverse symbols u = 1/g get D(u) = -u^2 D(g)."""
    if isinstance(w, Poly):
        w = Form(w)
    return Form(_ddr_poly(w.poly, A), w.weight + 1, w.degree)


def _dint_images(p: Poly, A: Cdga) -> dict:
    images = {}
    for v in p.variables():
        if v.weight:
            base = A.gen(v.base_name)
            images[v] = -_ddr_poly(A.dv(base), A)
        else:
            images[v] = A.dv(A.gen(v.name))
    return images


def d_int(w: Form | Poly, A: Cdga) -> Form:
    """Internal differential: d on coefficients, D(v) -> -D(dv) so that d and d_dR anticommute."""
    if isinstance(w, Poly):
        w = Form(w)
    return Form(derive(_dint_images(w.poly, A), w.poly, strict=False), w.weight, w.degree + 1)


@dataclass(frozen=True)
class VectorField:
    """``sum_v c_v d/dv`` with homogeneous degree ``deg(c_v) - deg(v)``."""

    components: Mapping[GradedVar, Poly]
    degree: int

    def __post_init__(self):
        for v, c in self.components.items():
            if v.weight:
                raise DegreeError(f"vector fields act on generators, not on {v.name}")
            if c and (c.weight or c.degree != v.degree + self.degree):
                raise DegreeError(f"component on {v.name} breaks degree {self.degree}")

    @classmethod
    def basis(cls, v: GradedVar, coeff=1) -> "VectorField":
        return cls({v: Poly.const(coeff)}, -v.degree)

    @classmethod
    def combination(cls, coeffs: Mapping[GradedVar, object]) -> "VectorField":
        """A constant-coefficient field; all ``v`` must share one degree."""
        degs = {v.degree for v, c in coeffs.items() if c}
        if len(degs) > 1:
            raise DegreeError("constant vector field mixes degrees")
        deg = -degs.pop() if degs else 0
        return cls({v: Poly.const(c) for v, c in coeffs.items() if c}, deg)

    def scaled(self, f: Poly) -> "VectorField":
        if f and f.degree is None:
            raise DegreeError("scaling field by an inhomogeneous element")
        fd = f.degree if f else 0
        return VectorField({v: f * c for v, c in self.components.items()}, self.degree + fd)

    def __call__(self, g: Poly) -> Poly:
        out = Poly()
        for v, c in self.components.items():
            out = out + c * partial(g, v)
        return out

    def __str__(self):
        parts = []
        for v, c in sorted(self.components.items(), key=lambda vc: vc[0].name):
            if c.is_zero():
                continue
            coef = format_poly(c)
            if coef == "1":
                parts.append(f"∂/∂{v.name}")
            elif coef == "-1":
                parts.append(f"-∂/∂{v.name}")
            else:
                parts.append(f"({coef})*∂/∂{v.name}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def contract(Y: VectorField, w: Form | Poly) -> Form:
    """Interior product: the derivation of degree |Y| + 1 with D(v) -> c_v and functions -> 0."""
    if isinstance(w, Poly):
        w = Form(w)
    if w.weight == 0:
        return Form.zero(0, w.degree + Y.degree)
    images = {dR(v): c for v, c in Y.components.items()}
    return Form(derive(images, w.poly, strict=False), w.weight - 1, w.degree + Y.degree)


def is_shifted_pform(w: Form, A: Cdga) -> Report:
    r = d_int(w, A)
    rep = Report(f"shifted {w.weight}-form of degree {w.degree}")
    rep.data["residual"] = r
    rep.add("shifted-pform", r.is_zero(), "" if r.is_zero() else f"d(w) = {r}")
    return rep


def is_closed_sequence(ws: Sequence[Form], A: Cdga) -> Report:
    """Check d w0 = 0 and d_dR w_i + d w_{i+1} = 0 with an implicit zero tail."""
    rep = Report("closed form sequence")
    if not ws:
        rep.add("closed-sequence", True, "empty")
        return rep
    p, k = ws[0].weight, ws[0].degree
    for i, w in enumerate(ws):
        if w and (w.weight, w.degree) != (p + i, k - i):
            raise DegreeError(
                f"entry {i} has bidegree {(w.weight, w.degree)}, expected {(p + i, k - i)}"
            )
    r0 = d_int(ws[0], A)
    if r0:
        rep.data["failure"] = ("d", 0, r0)
        rep.add("closed-sequence", False, f"d w0 = {r0}")
        return rep
    for i, w in enumerate(ws):
        nxt = ws[i + 1] if i + 1 < len(ws) else Form.zero(p + i + 1, k - i - 1)
        r = ddr(w, A).poly + d_int(nxt, A).poly
        if r:
            rep.data["failure"] = ("ddr", i, r)
            rep.add("closed-sequence", False, f"at {i}: d_dR w{i} + d w{i + 1} = {r}")
            return rep
    rep.add("closed-sequence", True)
    return rep
