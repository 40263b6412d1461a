"""Exact integer matrix algebra.

Everything here works on Python ints, so entries never overflow and no
floating point value is ever involved.  The main entry point is
:func:`smith_normal_form`, which also drives :func:`integer_kernel_basis`
and :func:`unimodular_inverse`.
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

import numpy as np


class NotUnimodular(ValueError):
    """Raised when a matrix that must lie in GL_n(Z) does not."""


def _as_int(x) -> int:
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, numbers.Integral):
        return int(x)
    if isinstance(x, str):
        return int(x.strip())
    raise TypeError(f"integer entry expected, got {type(x).__name__}: {x!r}")


class IntMatrix:
    """Immutable dense matrix of arbitrary-precision integers (row-major)."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(_as_int(x) for x in row) for row in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(data[0])
        if any(len(row) != ncols for row in data):
            raise ValueError("ragged rows")
        self._rows = data
        self.nrows = len(data)
        self.ncols = ncols

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, m: int, n: int) -> IntMatrix:
        return cls(((0,) * n for _ in range(m)), ncols=n)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(((1 if i == j else 0 for j in range(n)) for i in range(n)), ncols=n)

    @classmethod
    def diag(cls, entries: Sequence[int]) -> IntMatrix:
        n = len(entries)
        return cls(((entries[i] if i == j else 0 for j in range(n)) for i in range(n)), ncols=n)

    @classmethod
    def block(cls, blocks: Sequence[Sequence[IntMatrix]]) -> IntMatrix:
        """Assemble ``[[A, B], [C, D]]``-style block matrices."""
        rows = []
        for brow in blocks:
            height = brow[0].nrows
            if any(b.nrows != height for b in brow):
                raise ValueError("block row height mismatch")
            for i in range(height):
                rows.append(tuple(x for b in brow for x in b._rows[i]))
        ncols = sum(b.ncols for b in blocks[0])
        return cls(rows, ncols=ncols)

    @classmethod
    def vstack(cls, *mats: IntMatrix) -> IntMatrix:
        return cls.block([[m] for m in mats])

    @classmethod
    def hstack(cls, *mats: IntMatrix) -> IntMatrix:
        return cls.block([list(mats)])

    @classmethod
    def from_numpy(cls, arr) -> IntMatrix:
        arr = np.asarray(arr)
        if arr.dtype.kind not in "iub" and arr.dtype != object:
            raise TypeError("integer array expected; round explicitly first")
        return cls(arr.tolist(), ncols=arr.shape[1])

    # -- access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def row(self, i: int) -> tuple[int, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._rows)

    def __getitem__(self, key):
        i, j = key
        if isinstance(i, slice) or isinstance(j, slice):
            ri = range(self.nrows)[i] if isinstance(i, slice) else [i]
            cj = range(self.ncols)[j] if isinstance(j, slice) else [j]
            return IntMatrix(([self._rows[a][b] for b in cj] for a in ri), ncols=len(cj))
        return self._rows[i][j]

    def __iter__(self):
        return iter(self._rows)

    def to_numpy(self, dtype=float) -> np.ndarray:
        if dtype is object:
            out = np.empty(self.shape, dtype=object)
            for i, r in enumerate(self._rows):
                for j, x in enumerate(r):
                    out[i, j] = x
            return out
        return np.array(self._rows, dtype=dtype).reshape(self.shape)

    # -- arithmetic ---------------------------------------------------------

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(zip(*self._rows), ncols=self.nrows) if self.nrows else IntMatrix.zeros(self.ncols, 0)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = other.T._rows
        return IntMatrix(
            (tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self._rows),
            ncols=other.ncols,
        )

    def _zip(self, other: IntMatrix, op) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return IntMatrix(
            (tuple(op(a, b) for a, b in zip(r, s)) for r, s in zip(self._rows, other._rows)),
            ncols=self.ncols,
        )

    def __add__(self, other: IntMatrix) -> IntMatrix:
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self) -> IntMatrix:
        return IntMatrix((tuple(-x for x in r) for r in self._rows), ncols=self.ncols)

    def scale(self, k: int) -> IntMatrix:
        return IntMatrix((tuple(k * x for x in r) for r in self._rows), ncols=self.ncols)

    def mod(self, p: int) -> IntMatrix:
        return IntMatrix((tuple(x % p for x in r) for r in self._rows), ncols=self.ncols)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self._rows)

    def trace(self) -> int:
        return sum(self._rows[i][i] for i in range(min(self.shape)))

    def max_abs(self) -> int:
        return max((abs(x) for r in self._rows for x in r), default=0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.shape, self._rows))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r})" if self.nrows else f"IntMatrix.zeros(0, {self.ncols})"

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        """``{"rows", "cols", "data"}`` with entries as decimal strings."""
        return {"rows": self.nrows, "cols": self.ncols, "data": [[str(x) for x in r] for r in self._rows]}

    @classmethod
    def from_json(cls, doc) -> IntMatrix:
        if isinstance(doc, list):
            # bare nested list is accepted for convenience
            if not doc:
                raise ValueError("empty matrix needs explicit rows/cols")
            return cls(doc)
        try:
            m, n, data = int(doc["rows"]), int(doc["cols"]), doc["data"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed matrix document: {exc}") from None
        mat = cls(data, ncols=n)
        if mat.nrows != m:
            raise ValueError(f"declared {m} rows, found {mat.nrows}")
        return mat


def det(m: IntMatrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = m.nrows
    if n != m.ncols:
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    a = m.tolist()
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


@dataclass(frozen=True)
class SmithDecomposition:
    """``u @ m @ v == s`` with ``s`` in Smith normal form."""

    u: IntMatrix
    s: IntMatrix
    v: IntMatrix
    rank: int

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        return tuple(self.s[i, i] for i in range(self.rank))


def _swap_rows(a, i, j):
    a[i], a[j] = a[j], a[i]


def _swap_cols(a, i, j):
    for r in a:
        r[i], r[j] = r[j], r[i]


def _add_row(a, src, dst, k):
    """row[dst] += k * row[src]"""
    rs, rd = a[src], a[dst]
    for c in range(len(rd)):
        rd[c] += k * rs[c]


def _add_col(a, src, dst, k):
    """col[dst] += k * col[src]"""
    for r in a:
        r[dst] += k * r[src]


def smith_normal_form(m: IntMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Pivots on the smallest nonzero absolute value of the remaining
    submatrix; row operations are mirrored into ``u`` and column operations
    into ``v``.  Diagonal entries come out nonnegative with each dividing
    the next.
    """
    rows, cols = m.shape
    a = m.tolist()
    u = IntMatrix.identity(rows).tolist()
    # v is tracked transposed so that column ops become row ops on vt
    vt = IntMatrix.identity(cols).tolist()

    def row_swap(i, j):
        _swap_rows(a, i, j)
        _swap_rows(u, i, j)

    def col_swap(i, j):
        _swap_cols(a, i, j)
        _swap_rows(vt, i, j)

    def row_add(src, dst, k):
        _add_row(a, src, dst, k)
        _add_row(u, src, dst, k)

    def col_add(src, dst, k):
        _add_col(a, src, dst, k)
        _add_row(vt, src, dst, k)

    rank = 0
    for t in range(min(rows, cols)):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = a[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, pi, pj = best
        row_swap(t, pi)
        col_swap(t, pj)

        while True:
            # clear column t below the pivot; a nonzero remainder becomes the new pivot
            dirty = False
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    row_add(t, i, -q)
                    if a[i][t]:
                        dirty = True
            if dirty:
                i = min((i for i in range(t + 1, rows) if a[i][t]), key=lambda i: abs(a[i][t]))
                row_swap(t, i)
                continue
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    col_add(t, j, -q)
                    if a[t][j]:
                        dirty = True
            if dirty:
                j = min((j for j in range(t + 1, cols) if a[t][j]), key=lambda j: abs(a[t][j]))
                col_swap(t, j)
                continue
            p = a[t][t]
            bad = next(
                ((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            # pull the offending row into row t; the next sweep shrinks the pivot
            row_add(bad[0], t, 1)
        if a[t][t] < 0:
            for c in range(cols):
                a[t][c] = -a[t][c]
            u[t] = [-x for x in u[t]]
        rank += 1

    return SmithDecomposition(
        u=IntMatrix(u, ncols=rows),
        s=IntMatrix(a, ncols=cols),
        v=IntMatrix(vt, ncols=cols).T,
        rank=rank,
    )


def integer_kernel_basis(m: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of ``{w in Z^n : m @ w == 0}``.

    Returns an ``n x (n - rank)`` matrix (``n x 0`` for full column rank).
    """
    dec = smith_normal_form(m)
    return dec.v[:, dec.rank:]


def rank(m: IntMatrix) -> int:
    return smith_normal_form(m).rank


def unimodular_inverse(m: IntMatrix) -> IntMatrix:
    """Exact inverse of a matrix in GL_n(Z).

    With ``u @ m @ v == I`` the inverse is simply ``v @ u``.
    """
    if m.nrows != m.ncols:
        raise NotUnimodular(f"non-square matrix {m.shape}")
    dec = smith_normal_form(m)
    if dec.rank != m.nrows or any(p != 1 for p in dec.invariant_factors):
        raise NotUnimodular(f"|det| = {abs(det(m))}, not 1")
    return dec.v @ dec.u


def gcd_of(values: Iterable[int]) -> int:
    g = 0
    for x in values:
        g = gcd(g, x)
    return g
