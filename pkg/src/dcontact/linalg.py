"""Exact row reduction over Q on dense ``list[list[Fraction]]`` matrices."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list  # list[list[Fraction]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def to_matrix(rows: Sequence[Sequence], cols: int | None = None) -> Matrix:
    out = [[Fraction(x) for x in r] for r in rows]
    if cols is not None and not out:
        return []
    return out


def shape(m: Matrix, cols: int | None = None) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else (cols or 0))


def transpose(m: Matrix, cols: int = 0) -> Matrix:
    """Transpose; ``cols`` gives the column count when ``m`` has no rows."""
    if not m:
        return [[] for _ in range(cols)]
    return [list(r) for r in zip(*m)] if m[0] else []


def matmul(a: Matrix, b: Matrix, inner: int | None = None, cols: int | None = None) -> Matrix:
    """Product ``a @ b``. ``cols`` is needed when ``b`` has no rows."""
    n = len(a)
    k = len(b)
    c = len(b[0]) if b else (cols or 0)
    out = zeros(n, c)
    for i in range(n):
        row = a[i]
        oi = out[i]
        for t in range(k):
            x = row[t]
            if x:
                bt = b[t]
                for j in range(c):
                    if bt[j]:
                        oi[j] += x * bt[j]
    return out


def scale(m: Matrix, c) -> Matrix:
    c = Fraction(c)
    return [[c * x for x in r] for r in m]


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def is_zero(m: Matrix) -> bool:
    return all(not x for r in m for x in r)


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    a = [list(r) for r in m]
    if not a:
        return a, []
    rows, cols = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def nullspace(m: Matrix, cols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{v : m v = 0}``; free variables set to 1 in turn."""
    n = len(m[0]) if m else (cols or 0)
    if not m:
        return [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    r, pivots = rref(m)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * n
        v[fc] = Fraction(1)
        for row, pc in zip(r, pivots):
            v[pc] = -row[fc]
        basis.append(v)
    return basis


def solve(m: Matrix, b: Sequence, cols: int | None = None):
    """Solve ``m x = b``. Returns ``(particular, nullspace_basis)`` or ``None``."""
    n = len(m[0]) if m else (cols or 0)
    if not m:
        return [Fraction(0)] * n, nullspace(m, n)
    aug = [list(r) + [Fraction(x)] for r, x in zip(m, b)]
    r, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, pc in zip(r, pivots):
        x[pc] = row[n]
    return x, nullspace(m, n)


def column_space_basis(vectors: list[list[Fraction]]) -> list[list[Fraction]]:
    """Canonical (RREF) basis of the span of ``vectors``."""
    if not vectors:
        return []
    r, piv = rref(vectors)
    return r[: len(piv)]


def complement_basis(vectors: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    """Standard unit vectors completing ``vectors`` to a basis of Q^n."""
    current = [list(v) for v in vectors]
    out = []
    base = rank(current) if current else 0
    for i in range(n):
        e = [Fraction(int(i == j)) for j in range(n)]
        if rank(current + [e]) > base:
            current.append(e)
            out.append(e)
            base += 1
    return out
