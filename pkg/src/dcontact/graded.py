"""Free graded-commutative polynomial algebras over Q.

Elements are stored as maps from canonical monomials to nonzero
``Fraction`` coefficients. A monomial is a tuple of ``(symbol, exponent)``
pairs sorted by ``(weight, name)``; the Koszul sign produced by sorting is
folded into the coefficient, so equal elements have identical term maps.

The same machinery carries the de Rham symbols ``D(v)`` (weight 1): sign
rules always use the total degree ``degree + weight``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from .errors import (
    AlgebraMismatchError,
    DegreeError,
    InvalidPointError,
    MissingImageError,
    NotAGeneratorError,
)

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class GradedVar:
    """A generator symbol with cohomological degree <= 0.

    ``weight`` is 0 for algebra generators and 1 for the de Rham symbol
    ``D(v)`` of a generator ``v``; users normally never set it.
    """

    name: str
    degree: int
    invertible: bool = False
    weight: int = field(default=0, compare=True)

    def __post_init__(self):
        if self.degree > 0:
            raise DegreeError(f"generator {self.name!r} has positive degree {self.degree}")
        if self.invertible and (self.degree != 0 or self.weight != 0):
            raise DegreeError(f"invertible symbol {self.name!r} must have degree 0")
        if self.weight == 0 and not _IDENT.match(self.name):
            raise ValueError(f"invalid generator name {self.name!r}")

    @property
    def total(self) -> int:
        return self.degree + self.weight

    @property
    def parity(self) -> int:
        return (self.degree + self.weight) % 2

    @property
    def key(self):
        return (self.weight, self.name)

    @property
    def base_name(self) -> str:
        return self.name[2:-1] if self.weight else self.name

    def __repr__(self):
        return f"{self.name}:{self.degree}"


@lru_cache(maxsize=None)
def dR(v: GradedVar) -> GradedVar:
    """The de Rham symbol D(v): same cohomological degree, weight 1."""
    if v.weight:
        raise DegreeError(f"D() applied to the de Rham symbol {v.name}")
    return GradedVar(f"D({v.name})", v.degree, weight=1)


Monomial = tuple  # tuple[tuple[GradedVar, int], ...]

ONE: Monomial = ()


def monomial_degree(m: Monomial) -> int:
    return sum(v.degree * e for v, e in m)


def monomial_weight(m: Monomial) -> int:
    return sum(v.weight * e for v, e in m)


def monomial_total(m: Monomial) -> int:
    return sum(v.total * e for v, e in m)


def koszul_sign(left_degrees: Iterable[int], right_degrees: Iterable[int]) -> int:
    """Sign from moving every right factor past every left factor."""
    left = sum(d % 2 for d in left_degrees)
    right = sum(d % 2 for d in right_degrees)
    return -1 if (left * right) % 2 else 1


def mul_monomials(a: Monomial, b: Monomial):
    """Return ``(sign, monomial)`` for the product ``a*b``, or ``None`` if it vanishes."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    out = []
    flips = 0
    i = j = 0
    # number of odd factors of ``a`` not yet emitted
    odd_left = sum(1 for v, e in a if v.parity and e % 2)
    while i < len(a) and j < len(b):
        va, ea = a[i]
        vb, eb = b[j]
        ka, kb = va.key, vb.key
        if ka < kb:
            out.append(a[i])
            if va.parity and ea % 2:
                odd_left -= 1
            i += 1
        elif kb < ka:
            if vb.parity and eb % 2:
                flips += odd_left
            out.append(b[j])
            j += 1
        else:
            if va != vb:
                raise AlgebraMismatchError(f"symbol {va.name!r} has conflicting gradings")
            if va.parity:
                return None
            e = ea + eb
            if e:
                out.append((va, e))
            i += 1
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return (-1 if flips % 2 else 1), tuple(out)


def _check_exponent(v: GradedVar, e: int):
    if e < 0 and not v.invertible:
        raise DegreeError(f"negative exponent on non-invertible generator {v.name!r}")


class Poly:
    """An exact-rational element of a free graded-commutative algebra.

    Instances are immutable; every operation returns a new canonical element.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[Monomial, Scalar] | None = None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[m] = c
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- constructors -------------------------------------------------
    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls({ONE: c})

    @classmethod
    def var(cls, v: GradedVar, exponent: int = 1) -> "Poly":
        if exponent == 0:
            return cls.const(1)
        _check_exponent(v, exponent)
        if v.parity and exponent > 1:
            return cls()
        return cls({((v, exponent),): 1})

    @classmethod
    def monomial(cls, factors: Iterable[tuple[GradedVar, int]], coeff: Scalar = 1) -> "Poly":
        """Build ``coeff * v1^e1 * v2^e2 * ...`` in the given (unsorted) order."""
        out = cls.const(coeff)
        for v, e in factors:
            out = out * cls.var(v, e)
        return out

    # -- structure ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def variables(self) -> set[GradedVar]:
        return {v for m in self.terms for v, _ in m}

    @property
    def degree(self) -> int | None:
        """Common cohomological degree of all terms; ``None`` if inhomogeneous or zero."""
        degs = {monomial_degree(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    @property
    def weight(self) -> int | None:
        ws = {monomial_weight(m) for m in self.terms}
        return ws.pop() if len(ws) == 1 else None

    @property
    def total_degree(self) -> int | None:
        ts = {monomial_total(m) for m in self.terms}
        return ts.pop() if len(ts) == 1 else None

    def is_homogeneous(self) -> bool:
        return len({monomial_degree(m) for m in self.terms}) <= 1

    def constant_term(self) -> Fraction:
        return self.terms.get(ONE, Fraction(0))

    # -- arithmetic ---------------------------------------------------
    @staticmethod
    def _lift(x) -> "Poly":
        if isinstance(x, Poly):
            return x
        if isinstance(x, (int, Fraction)):
            return Poly.const(x)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Scalar) -> "Poly":
        c = Fraction(c)
        if not c:
            return Poly()
        return Poly({m: c * v for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers of a Poly are not defined")
        out = Poly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: _term_sort_key(mc[0]))

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Poly({format_poly(self)})"


def _term_sort_key(m: Monomial):
    return (monomial_weight(m), len(m), tuple((v.weight, v.name, -e) for v, e in m))


def mul(a: Poly, b: Poly) -> Poly:
    """Graded-commutative product with Koszul signs."""
    out: dict = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            r = mul_monomials(ma, mb)
            if r is None:
                continue
            s, m = r
            out[m] = out.get(m, 0) + s * ca * cb
    return Poly(out)


def partial(p: Poly, v: GradedVar) -> Poly:
    """Left partial derivative: commute ``v`` to the front, then strip it."""
    if not isinstance(v, GradedVar):
        raise NotAGeneratorError(f"cannot differentiate with respect to {v!r}")
    out: dict = {}
    for m, c in p.terms.items():
        before = 0
        for idx, (w, e) in enumerate(m):
            if w.key == v.key:
                if w != v:
                    raise AlgebraMismatchError(f"symbol {v.name!r} has conflicting gradings")
                sign = -1 if (v.parity and before % 2) else 1
                rest = m[:idx] + (((w, e - 1),) if e - 1 else ()) + m[idx + 1:]
                out[rest] = out.get(rest, 0) + sign * e * c
                break
            before += w.parity * e
    return Poly(out)


def derive(images: Mapping[GradedVar, Poly], p: Poly, strict: bool = True) -> Poly:
    """Apply the derivation determined by ``images`` to ``p``.

    Uses ``E(p) = sum_s E(s) * dp/ds`` with left partials, which is the
    unique Leibniz extension for a derivation of any parity. Symbols absent
    from ``images`` raise when ``strict``; otherwise they map to zero.
    """
    out = Poly()
    for s in p.variables():
        img = images.get(s)
        if img is None:
            if strict:
                raise MissingImageError(f"derivation has no image for {s.name!r}")
            continue
        if img.is_zero():
            continue
        out = out + img * partial(p, s)
    return out


@dataclass(frozen=True)
class Derivation:
    """A graded derivation given by its values on generators."""

    parity_degree: int
    images: Mapping[GradedVar, Poly]

    def __post_init__(self):
        for v, img in self.images.items():
            if img.is_zero():
                continue
            deg = img.degree
            if deg is None or deg != v.degree + self.parity_degree:
                raise DegreeError(
                    f"image of {v.name} has degree {deg}, expected {v.degree + self.parity_degree}"
                )

    def __call__(self, p: Poly) -> Poly:
        return apply_derivation(self, p)

    def image(self, v: GradedVar) -> Poly:
        return self.images.get(v, Poly())

    @classmethod
    def zero(cls, generators: Iterable[GradedVar], parity_degree: int = 1) -> "Derivation":
        return cls(parity_degree, {v: Poly() for v in generators})


def apply_derivation(D: Derivation, p: Poly) -> Poly:
    return derive(D.images, p, strict=True)


def evaluate(p: Poly, point: Mapping[str, Scalar]) -> Fraction:
    """Restrict to spec H^0: negative-degree and de Rham factors evaluate to zero."""
    total = Fraction(0)
    for m, c in p.terms.items():
        val = c
        for v, e in m:
            if v.degree < 0 or v.weight:
                val = Fraction(0)
                break
            if v.name not in point:
                raise InvalidPointError(f"point assigns no value to {v.name!r}")
            x = Fraction(point[v.name])
            if e < 0:
                if not x:
                    raise InvalidPointError(f"invertible {v.name!r} evaluated at 0")
                val *= (1 / x) ** (-e)
            else:
                val *= x ** e
        total += val
    return total


def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(m: Monomial) -> str:
    parts = []
    for v, e in m:
        parts.append(v.name if e == 1 else f"{v.name}^{e}")
    return "*".join(parts)


def format_poly(p: Poly) -> str:
    """Render in the manifest expression grammar (round-trips through the parser)."""
    if p.is_zero():
        return "0"
    pieces = []
    for m, c in p.sorted_terms():
        neg = c < 0
        a = -c if neg else c
        body = format_monomial(m)
        if not body:
            s = format_rational(a)
        elif a == 1:
            s = body
        else:
            s = f"{format_rational(a)}*{body}"
        pieces.append(("-" if neg else "+", s))
    first_sign, first = pieces[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, s in pieces[1:]:
        out += f" {sign} {s}"
    return out
