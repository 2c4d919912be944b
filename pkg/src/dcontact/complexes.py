"""Finite complexes of Q-vector spaces and the homotopy constructions used at a point.

Conventions: ``d[i]`` maps degree i to degree i+1 and is stored as a
``dim(i+1) x dim(i)`` matrix; X[s]^n = X^{n+s} with differential (-1)^s d;
cone(f)^n = V^{n+1} + W^n with differential [[-d, 0], [f, d]].
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from . import linalg as la
from .cdga import Cdga, linearization
from .errors import ChainMapError, DegreeError
from .report import Report


@dataclass
class FreeComplex:
    basis: dict  # degree -> tuple of names
    diffs: dict = field(default_factory=dict)  # degree i -> matrix V^i -> V^{i+1}

    def __post_init__(self):
        self.basis = {i: tuple(b) for i, b in self.basis.items() if b}
        for i, b in self.basis.items():
            if len(set(b)) != len(b):
                raise DegreeError(f"basis names repeat in degree {i}")
        clean = {}
        for i, m in self.diffs.items():
            rows, cols = self.dim(i + 1), self.dim(i)
            if rows and cols:
                if len(m) != rows or any(len(r) != cols for r in m):
                    raise DegreeError(f"differential in degree {i} has the wrong shape")
                m = la.to_matrix(m)
                if not la.is_zero(m):
                    clean[i] = m
        self.diffs = clean
        for i in self.diffs:
            if i + 1 in self.diffs and not la.is_zero(la.matmul(self.diffs[i + 1], self.diffs[i])):
                raise ChainMapError(f"d^2 != 0 at degree {i}")

    @property
    def degrees(self) -> list[int]:
        if not self.basis:
            return []
        return list(range(min(self.basis), max(self.basis) + 1))

    def dim(self, i: int) -> int:
        return len(self.basis.get(i, ()))

    def names(self, i: int) -> tuple:
        return self.basis.get(i, ())

    def d(self, i: int) -> la.Matrix:
        if i in self.diffs:
            return self.diffs[i]
        return la.zeros(self.dim(i + 1), self.dim(i))

    def dims(self) -> dict[int, int]:
        return {i: self.dim(i) for i in self.degrees}

    def euler(self) -> int:
        return sum((-1) ** (i % 2) * n for i, n in self.dims().items())

    def shifted(self, s: int) -> "FreeComplex":
        return shift(self, s)

    def dual(self) -> "FreeComplex":
        """(V^vee)^j = (V^{-j})^*, with d^j = transpose of d^{-j-1}."""
        basis = {-i: tuple(f"{n}*" for n in b) for i, b in self.basis.items()}
        diffs = {-i - 1: la.transpose(m) for i, m in self.diffs.items()}
        return FreeComplex(basis, diffs)


def shift(C: FreeComplex, s: int) -> FreeComplex:
    sign = -1 if s % 2 else 1
    return FreeComplex(
        {i - s: b for i, b in C.basis.items()},
        {i - s: la.scale(m, sign) for i, m in C.diffs.items()},
    )


def _rows_cols(target: FreeComplex, source: FreeComplex, i: int, s: int):
    return target.dim(i + s), source.dim(i)


@dataclass
class ComplexMap:
    """Degree-wise matrices f^i: source^i -> target^{i+shift}.

    Construction verifies f d = eta d f for a uniform eta = +-1; ``sign`` records
    eta. :meth:`normalized` rescales by (+-1)^i into a genuine chain map
    source -> target[shift].
    """

    source: FreeComplex
    target: FreeComplex
    mats: dict = field(default_factory=dict)
    shift: int = 0
    sign: int = 0

    def __post_init__(self):
        clean = {}
        for i, m in self.mats.items():
            rows, cols = _rows_cols(self.target, self.source, i, self.shift)
            if rows and cols:
                if len(m) != rows or any(len(r) != cols for r in m):
                    raise DegreeError(f"map matrix in degree {i} has the wrong shape")
                m = la.to_matrix(m)
                if not la.is_zero(m):
                    clean[i] = m
        self.mats = clean
        if self.sign == 0:
            self.sign = self._find_sign()

    def f(self, i: int) -> la.Matrix:
        if i in self.mats:
            return self.mats[i]
        return la.zeros(*_rows_cols(self.target, self.source, i, self.shift))

    def _residual(self, eta: int, i: int):
        s = self.shift
        left = la.matmul(self.f(i + 1), self.source.d(i), cols=self.source.dim(i))
        right = la.matmul(self.target.d(i + s), self.f(i), cols=self.source.dim(i))
        return la.add(left, la.scale(right, -eta)) if left else left

    def _find_sign(self) -> int:
        degs = set(self.source.degrees) | {j - self.shift for j in self.target.degrees}
        if not degs:
            return 1
        lo, hi = min(degs) - 1, max(degs) + 1
        for eta in (1, -1):
            if all(la.is_zero(self._residual(eta, i)) for i in range(lo, hi)):
                return eta
        raise ChainMapError("matrices do not commute with the differentials up to a global sign")

    def normalized(self) -> "ComplexMap":
        """The chain map source -> target[shift] (shift 0) obtained by degree-wise signs."""
        s = self.shift
        tgt = shift(self.target, s)
        c = self.sign * (-1 if s % 2 else 1)
        mats = {i: la.scale(m, c ** (i % 2)) for i, m in self.mats.items()}
        return ComplexMap(self.source, tgt, mats, 0)


def identity_map(C: FreeComplex) -> ComplexMap:
    return ComplexMap(C, C, {i: la.identity(C.dim(i)) for i in C.degrees})


def zero_map(V: FreeComplex, W: FreeComplex) -> ComplexMap:
    return ComplexMap(V, W, {})


def _block(a, b, c, d_, r1, r2, c1, c2):
    """Assemble [[a, b], [c, d]] with block sizes r1, r2 x c1, c2."""
    out = la.zeros(r1 + r2, c1 + c2)
    for blk, ro, co, rn, cn in ((a, 0, 0, r1, c1), (b, 0, c1, r1, c2), (c, r1, 0, r2, c1), (d_, r1, c1, r2, c2)):
        if blk is None:
            continue
        for r in range(rn):
            for q in range(cn):
                out[ro + r][co + q] = blk[r][q]
    return out


def cone(f: ComplexMap) -> FreeComplex:
    g = f.normalized() if f.shift or f.sign != 1 else f
    V, W = g.source, g.target
    degs = set(i - 1 for i in V.degrees) | set(W.degrees)
    basis = {n: tuple(f"s:{b}" for b in V.names(n + 1)) + tuple(f"t:{b}" for b in W.names(n)) for n in degs}
    diffs = {}
    for n in degs:
        a = la.scale(V.d(n + 1), -1)
        c = g.f(n + 1)
        dd = W.d(n)
        diffs[n] = _block(a, None, c, dd, V.dim(n + 2), W.dim(n + 1), V.dim(n + 1), W.dim(n))
    return FreeComplex(basis, diffs)


def cocone(f: ComplexMap) -> FreeComplex:
    return shift(cone(f), -1)


def homology_ranks(C: FreeComplex) -> list[tuple[int, int]]:
    out = []
    for i in C.degrees:
        out.append((i, C.dim(i) - la.rank(C.d(i)) - la.rank(C.d(i - 1))))
    return out


def is_acyclic(C: FreeComplex) -> bool:
    return all(r == 0 for _, r in homology_ranks(C))


def is_quasi_iso(f: ComplexMap) -> Report:
    C = cone(f)
    ranks = homology_ranks(C)
    rep = Report("quasi-isomorphism test")
    rep.data["cone_ranks"] = ranks
    bad = [(i, r) for i, r in ranks if r]
    rep.add("quasi-iso", not bad, ", ".join(f"H^{i}={r}" for i, r in bad))
    return rep


def _vec_name(names, v) -> str:
    from .graded import format_rational

    parts = []
    for n, c in zip(names, v):
        if not c:
            continue
        if c == 1:
            parts.append(("+", n))
        elif c == -1:
            parts.append(("-", n))
        else:
            parts.append(("-" if c < 0 else "+", f"{format_rational(abs(c))}*{n}"))
    if not parts:
        return "0"
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, p in parts[1:]:
        out += f" {s} {p}"
    return out


@dataclass
class Subcomplex:
    """A subcomplex K of V given by column bases; ``inclusion`` maps K -> V."""

    complex: FreeComplex
    vectors: dict  # degree -> list of vectors in V^i
    inclusion: ComplexMap


def _restrict_diff(Vd, src_vecs, tgt_vecs, tgt_dim):
    """Matrix of V's differential restricted to span(src) -> span(tgt)."""
    if not src_vecs:
        return []
    if not tgt_vecs:
        for v in src_vecs:
            img = [sum(Vd[r][c] * v[c] for c in range(len(v))) for r in range(len(Vd))]
            if any(img):
                raise ChainMapError("differential does not restrict to the kernel")
        return []
    T = la.transpose(tgt_vecs)  # columns are target basis vectors
    cols = []
    for v in src_vecs:
        img = [sum(Vd[r][c] * v[c] for c in range(len(v))) for r in range(tgt_dim)] if Vd else [Fraction(0)] * tgt_dim
        sol = la.solve(T, img, cols=len(tgt_vecs))
        if sol is None:
            raise ChainMapError("differential does not restrict to the kernel")
        cols.append(sol[0])
    return la.transpose(cols)


def strict_kernel_sub(f: ComplexMap) -> Subcomplex:
    g = f.normalized() if f.shift or f.sign != 1 else f
    V = g.source
    vecs = {}
    for i in V.degrees:
        m = g.f(i)
        vecs[i] = la.nullspace(m, V.dim(i)) if m else la.nullspace([], V.dim(i))
    basis = {i: tuple(_vec_name(V.names(i), v) for v in vs) for i, vs in vecs.items()}
    diffs = {i: _restrict_diff(V.d(i), vecs[i], vecs.get(i + 1, []), V.dim(i + 1)) for i in vecs}
    K = FreeComplex(basis, diffs)
    incl = ComplexMap(K, V, {i: la.transpose(vs) for i, vs in vecs.items() if vs})
    return Subcomplex(K, vecs, incl)


def strict_kernel(f: ComplexMap) -> FreeComplex:
    return strict_kernel_sub(f).complex


def strict_cokernel(f: ComplexMap) -> FreeComplex:
    """W / im(f), presented on complement coordinates chosen among W's basis."""
    g = f.normalized() if f.shift or f.sign != 1 else f
    W = g.target
    comp = {}
    images = {}
    for i in W.degrees:
        m = g.f(i)
        cols = la.transpose(m, g.source.dim(i)) if m else []
        im = la.column_space_basis([c for c in cols if any(c)])
        images[i] = im
        comp[i] = la.complement_basis(im, W.dim(i))
    basis = {i: tuple(_vec_name(W.names(i), v) for v in comp[i]) for i in W.degrees}
    diffs = {}
    for i in W.degrees:
        if not comp[i] or not comp.get(i + 1):
            continue
        # express d(c) in the basis im(i+1) + comp(i+1) and keep the comp part
        full = images.get(i + 1, []) + comp[i + 1]
        T = la.transpose(full)
        Wd = W.d(i)
        rows = []
        for c in comp[i]:
            img = [sum(Wd[r][q] * c[q] for q in range(len(c))) for r in range(W.dim(i + 1))]
            sol = la.solve(T, img, cols=len(full))
            rows.append(sol[0][len(images.get(i + 1, [])):])
        diffs[i] = la.transpose(rows)
    return FreeComplex(basis, diffs)


def kernel_to_cocone(f: ComplexMap) -> ComplexMap:
    """The natural inclusion ker(f) -> Cocone(f), k -> (k, 0)."""
    g = f.normalized() if f.shift or f.sign != 1 else f
    sub = strict_kernel_sub(g)
    Co = cocone(g)
    mats = {}
    for i, vs in sub.vectors.items():
        if not vs:
            continue
        rows = Co.dim(i)
        m = la.zeros(rows, len(vs))
        for c, v in enumerate(vs):
            for r, x in enumerate(v):
                m[r][c] = x
        mats[i] = m
    return ComplexMap(sub.complex, Co, mats)


# -- restriction of a cdga to a point ----------------------------------------

def restrict_cotangent(A: Cdga, p: Mapping) -> FreeComplex:
    """Basis D(v) in degree |v|; entry (w, v) is the linearization of dv at p."""
    p = A.point(p)
    gens = A.true_generators
    basis: dict[int, list[str]] = {}
    for v in gens:
        basis.setdefault(v.degree, []).append(f"D({v.name})")
    if basis:
        for i in range(min(basis), 1):
            basis.setdefault(i, [])
    entries = linearization(A, p)
    index = {}
    for i, names in basis.items():
        for j, n in enumerate(names):
            index[n[2:-1]] = (i, j)
    diffs = {i: la.zeros(len(basis.get(i + 1, [])), len(basis[i])) for i in basis}
    for (w, v), val in entries.items():
        i, c = index[v]
        _, r = index[w]
        diffs[i][r][c] = val
    return FreeComplex({i: tuple(b) for i, b in basis.items()}, diffs)


def restrict_tangent(A: Cdga, p: Mapping) -> FreeComplex:
    """Basis d/dv in degree -|v|, differentials transposed from the cotangent complex."""
    L = restrict_cotangent(A, p)
    basis = {-i: tuple(f"∂/∂{n[2:-1]}" for n in b) for i, b in L.basis.items()}
    diffs = {-i - 1: la.transpose(m) for i, m in L.diffs.items()}
    return FreeComplex(basis, diffs)


def tangent_basis(A: Cdga) -> dict[int, list]:
    """Generators indexing the tangent basis, keyed by tangent degree -|v|."""
    out: dict[int, list] = {}
    for v in A.true_generators:
        out.setdefault(-v.degree, []).append(v)
    return out
