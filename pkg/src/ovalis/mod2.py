"""Symmetric congruence reduction over GF(2) and the topological type.

A symmetric matrix ``N`` over GF(2) is brought to one of the canonical
shapes (zero, ``diag(1,..,1,0,..,0)``, or ``[[0,1],[1,0]]`` blocks followed
by zeros) by paired row/column operations.  The operations are recorded so
the inverse transform can be lifted to an honest element of GL_g(Z).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

from .exact import IntMatrix


class NotSymmetric(ValueError):
    """N1 is not symmetric mod 2; the periods or the rounding are off."""


class Inconsistent(ValueError):
    """The canonical form contradicts the stated real-points information."""


class Mod2Matrix:
    """Bit-packed matrix over GF(2); row ``i`` is an int whose bit ``j`` is entry (i, j)."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[int], ncols: int):
        mask = (1 << ncols) - 1
        self.rows = tuple(int(r) & mask for r in rows)
        self.nrows = len(self.rows)
        self.ncols = ncols

    @classmethod
    def from_lists(cls, data: Sequence[Sequence[int]], ncols: int | None = None) -> Mod2Matrix:
        if ncols is None:
            ncols = len(data[0]) if data else 0
        return cls([sum((int(x) % 2) << j for j, x in enumerate(r)) for r in data], ncols)

    @classmethod
    def from_int(cls, m: IntMatrix) -> Mod2Matrix:
        return cls.from_lists(m.tolist(), m.ncols)

    @classmethod
    def identity(cls, n: int) -> Mod2Matrix:
        return cls([1 << i for i in range(n)], n)

    @classmethod
    def zeros(cls, m: int, n: int) -> Mod2Matrix:
        return cls([0] * m, n)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __getitem__(self, key) -> int:
        i, j = key
        return (self.rows[i] >> j) & 1

    def tolist(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.ncols)] for r in self.rows]

    def to_int(self) -> IntMatrix:
        return IntMatrix(self.tolist(), ncols=self.ncols)

    @property
    def T(self) -> Mod2Matrix:
        return Mod2Matrix([sum(((r >> j) & 1) << i for i, r in enumerate(self.rows)) for j in range(self.ncols)],
                          self.nrows)

    def __matmul__(self, other: Mod2Matrix) -> Mod2Matrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for r in self.rows:
            acc = 0
            j = 0
            while r:
                if r & 1:
                    acc ^= other.rows[j]
                r >>= 1
                j += 1
            out.append(acc)
        return Mod2Matrix(out, other.ncols)

    def rank(self) -> int:
        rows = list(self.rows)
        rk = 0
        for j in range(self.ncols):
            bit = 1 << j
            piv = next((i for i in range(rk, len(rows)) if rows[i] & bit), None)
            if piv is None:
                continue
            rows[rk], rows[piv] = rows[piv], rows[rk]
            for i in range(len(rows)):
                if i != rk and rows[i] & bit:
                    rows[i] ^= rows[rk]
            rk += 1
        return rk

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and self == self.T

    def is_zero(self) -> bool:
        return not any(self.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mod2Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.shape, self.rows))

    def __repr__(self) -> str:
        return f"Mod2Matrix({self.tolist()!r})"


# -- canonical forms ----------------------------------------------------------

class Pattern(str, enum.Enum):
    ZERO = "zero"
    DIAG_ONES = "diag_ones"
    BLOCKS = "blocks"


@dataclass(frozen=True)
class HMatrix:
    """Canonical g x g matrix: ``count`` leading ones or ``count`` H0 blocks, zeros after."""

    g: int
    pattern: Pattern
    count: int = 0

    def __post_init__(self):
        if self.pattern is Pattern.ZERO and self.count != 0:
            raise ValueError("zero pattern has no count")
        if self.pattern is Pattern.DIAG_ONES and not 1 <= self.count <= self.g:
            raise ValueError(f"diagonal count {self.count} out of range for g={self.g}")
        if self.pattern is Pattern.BLOCKS and not 1 <= 2 * self.count <= self.g:
            raise ValueError(f"{self.count} blocks do not fit in g={self.g}")

    @classmethod
    def zero(cls, g: int) -> HMatrix:
        return cls(g, Pattern.ZERO)

    @classmethod
    def diag_ones(cls, g: int, d: int) -> HMatrix:
        return cls(g, Pattern.DIAG_ONES, d) if d else cls.zero(g)

    @classmethod
    def blocks(cls, g: int, b: int) -> HMatrix:
        return cls(g, Pattern.BLOCKS, b) if b else cls.zero(g)

    @property
    def rank(self) -> int:
        if self.pattern is Pattern.BLOCKS:
            return 2 * self.count
        return self.count

    def to_int(self) -> IntMatrix:
        rows = [[0] * self.g for _ in range(self.g)]
        if self.pattern is Pattern.DIAG_ONES:
            for i in range(self.count):
                rows[i][i] = 1
        elif self.pattern is Pattern.BLOCKS:
            for b in range(self.count):
                rows[2 * b][2 * b + 1] = rows[2 * b + 1][2 * b] = 1
        return IntMatrix(rows, ncols=self.g)

    def to_mod2(self) -> Mod2Matrix:
        return Mod2Matrix.from_int(self.to_int())

    @classmethod
    def from_matrix(cls, m: Union[Mod2Matrix, IntMatrix, Sequence[Sequence[int]]]) -> HMatrix:
        """Recognize a canonical matrix; ``ValueError`` if it is not one."""
        if isinstance(m, Mod2Matrix):
            m2 = m
        elif isinstance(m, IntMatrix):
            m2 = Mod2Matrix.from_int(m)
        else:
            m2 = Mod2Matrix.from_lists(m)
        g = m2.nrows
        if m2.ncols != g:
            raise ValueError("H must be square")
        for cand in _candidates(g):
            if cand.to_mod2() == m2:
                return cand
        raise ValueError(f"not a canonical H matrix: {m2.tolist()}")

    def to_json(self) -> dict:
        return {"pattern": self.pattern.value, "count": self.count, "rank": self.rank,
                "matrix": self.to_int().tolist()}

    def __str__(self) -> str:
        if self.pattern is Pattern.ZERO:
            return f"0_{self.g}"
        head = f"I_{self.count}" if self.pattern is Pattern.DIAG_ONES else f"{self.count} x H0"
        rest = self.g - self.rank
        return f"{head} + 0_{rest}" if rest else head


def _candidates(g: int):
    yield HMatrix.zero(g)
    for d in range(1, g + 1):
        yield HMatrix.diag_ones(g, d)
    for b in range(1, g // 2 + 1):
        yield HMatrix.blocks(g, b)


def canonical_forms(g: int) -> list[HMatrix]:
    """All canonical H matrices of size g."""
    return list(_candidates(g))


# -- elementary operations ----------------------------------------------------

class SwapRows(NamedTuple):
    i: int
    j: int


class AddRow(NamedTuple):
    """row ``dst`` += row ``src`` (and the matching column operation)."""

    src: int
    dst: int


ElementaryOp = Union[SwapRows, AddRow]


@dataclass(frozen=True)
class ElementaryOpTrace:
    g: int
    ops: tuple[ElementaryOp, ...] = ()

    def composite(self) -> Mod2Matrix:
        """The GF(2) matrix P with ``P @ N @ P.T`` equal to the replayed result."""
        p = list(Mod2Matrix.identity(self.g).rows)
        for op in self.ops:
            _apply_row_op(p, op)
        return Mod2Matrix(p, self.g)

    def replay(self, n: Mod2Matrix) -> Mod2Matrix:
        work = _Work(n)
        for op in self.ops:
            work.apply(op)
        return work.matrix()

    def __len__(self) -> int:
        return len(self.ops)


def _apply_row_op(rows: list[int], op: ElementaryOp) -> None:
    if isinstance(op, SwapRows):
        rows[op.i], rows[op.j] = rows[op.j], rows[op.i]
    else:
        rows[op.dst] ^= rows[op.src]


class _Work:
    """Mutable symmetric matrix that applies each op to rows and columns."""

    def __init__(self, n: Mod2Matrix):
        self.g = n.nrows
        self.rows = list(n.rows)
        self.ops: list[ElementaryOp] = []

    def get(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def apply(self, op: ElementaryOp) -> None:
        _apply_row_op(self.rows, op)
        if isinstance(op, SwapRows):
            bi, bj = 1 << op.i, 1 << op.j
            for k, r in enumerate(self.rows):
                if bool(r & bi) != bool(r & bj):
                    self.rows[k] = r ^ bi ^ bj
        else:
            bs, bd = 1 << op.src, 1 << op.dst
            for k, r in enumerate(self.rows):
                if r & bs:
                    self.rows[k] = r ^ bd
        self.ops.append(op)

    def swap(self, i: int, j: int) -> None:
        if i != j:
            self.apply(SwapRows(i, j))

    def add(self, src: int, dst: int) -> None:
        self.apply(AddRow(src, dst))

    def col_nonzero(self, j: int, start: int = 0) -> bool:
        return any(self.get(i, j) for i in range(start, self.g))

    def matrix(self) -> Mod2Matrix:
        return Mod2Matrix(self.rows, self.g)


# Q1 of the 1 + H0 -> I_3 rewrite: Q1 @ diag(1, H0) @ Q1.T == I_3 over GF(2)
_MIXED_TO_DIAG = ((1, 1, 1), (1, 0, 1), (1, 1, 0))


def _decompose(p: Sequence[Sequence[int]]) -> list[ElementaryOp]:
    """Elementary ops (applied in order to the identity) whose product is ``p``."""
    n = len(p)
    rows = [sum(x << j for j, x in enumerate(r)) for r in p]
    # Gauss-Jordan to the identity; ops E_k..E_1 p = I, so p = E_1^-1 .. E_k^-1
    ops: list[ElementaryOp] = []
    for j in range(n):
        piv = next(i for i in range(j, n) if (rows[i] >> j) & 1)
        if piv != j:
            rows[j], rows[piv] = rows[piv], rows[j]
            ops.append(SwapRows(j, piv))
        for i in range(n):
            if i != j and (rows[i] >> j) & 1:
                rows[i] ^= rows[j]
                ops.append(AddRow(j, i))
    # each op is its own inverse over GF(2); apply the inverses in reverse
    return ops[::-1]


def congruence_reduce(n1: Union[Mod2Matrix, IntMatrix], g: int | None = None) -> tuple[ElementaryOpTrace, HMatrix]:
    """Find P (as an op trace) and canonical H with ``P @ n1 @ P.T == H`` over GF(2).

    Columns are processed left to right.  A diagonal 1 is eliminated in the
    usual way; an off-diagonal 1 is moved next to the diagonal to form an H0
    block.  Mixed results (ones and blocks) are then rewritten block by block
    into a pure diagonal.
    """
    if isinstance(n1, IntMatrix):
        n1 = Mod2Matrix.from_int(n1)
    if g is None:
        g = n1.nrows
    if n1.shape != (g, g):
        raise ValueError(f"expected a {g}x{g} matrix, got {n1.shape}")
    if not n1.is_symmetric():
        raise NotSymmetric(f"N1 mod 2 is not symmetric: {n1.tolist()}")

    w = _Work(n1)
    ones = blocks = 0
    j = 0
    while j < g and any(w.rows[i] >> j for i in range(j, g)):
        if not w.col_nonzero(j, j):
            last = max(k for k in range(j, g) if w.col_nonzero(k, j))
            w.swap(j, last)
        if not w.get(j, j):
            i = next(i for i in range(j + 1, g) if w.get(i, j))
            if w.get(i, i):
                w.swap(j, i)
        if w.get(j, j):
            for r in range(j + 1, g):
                if w.get(r, j):
                    w.add(j, r)
            ones += 1
            j += 1
            continue
        i = next(i for i in range(j + 1, g) if w.get(i, j))
        w.swap(j + 1, i)
        for r in range(j + 2, g):
            if w.get(r, j):
                w.add(j + 1, r)
        for r in range(j + 2, g):
            if w.get(r, j + 1):
                w.add(j, r)
        blocks += 1
        j += 2

    # Pivots are taken in column order, so ones and blocks may interleave.
    # Sort them: all diagonal ones first, then the blocks.
    _sort_canonical(w)

    while ones and blocks:
        a = ones - 1
        idx = (a, ones, ones + 1)
        q = [[1 if r == c else 0 for c in range(g)] for r in range(g)]
        for r3, r in enumerate(idx):
            for c3, c in enumerate(idx):
                q[r][c] = _MIXED_TO_DIAG[r3][c3]
        for op in _decompose(q):
            w.apply(op)
        ones += 2
        blocks -= 1

    trace = ElementaryOpTrace(g, tuple(w.ops))
    if ones:
        h = HMatrix.diag_ones(g, ones)
    elif blocks:
        h = HMatrix.blocks(g, blocks)
    else:
        h = HMatrix.zero(g)
    if w.matrix() != h.to_mod2():
        raise AssertionError(f"reduction did not reach canonical form: {w.matrix().tolist()}")
    return trace, h


def _sort_canonical(w: _Work) -> None:
    """Permute pivots so diagonal ones precede H0 blocks (congruence by permutation)."""
    g = w.g
    units = []
    j = 0
    while j < g:
        if w.get(j, j):
            units.append(("one", j))
            j += 1
        elif j + 1 < g and w.get(j, j + 1):
            units.append(("block", j))
            j += 2
        else:
            j += 1
    order = [j for kind, j in units if kind == "one"]
    for kind, j in units:
        if kind == "block":
            order += [j, j + 1]
    order += [k for k in range(g) if k not in order]
    # realize the permutation with swaps; position t receives original index order[t]
    pos = list(range(g))  # pos[k] = current location of original index k
    at = list(range(g))   # at[t] = original index currently at location t
    for t, k in enumerate(order):
        src = pos[k]
        if src != t:
            w.swap(t, src)
            other = at[t]
            at[t], at[src] = k, other
            pos[k], pos[other] = t, src


def lift_to_unimodular(trace: ElementaryOpTrace) -> IntMatrix:
    """Integer Q in GL_g(Z) with ``Q == P^-1 (mod 2)`` for the trace composite P.

    P = E_k ... E_1, so Q = E_1^-1 ... E_k^-1 using the integer inverses
    (a swap is its own inverse, ``row dst += row src`` inverts to ``-=``).
    """
    g = trace.g
    # build Q column-wise by applying each inverse on the right: Q <- Q @ E^-1,
    # which for E^-1 = I - e_dst e_src^T subtracts column dst from column src
    q = IntMatrix.identity(g).tolist()
    for op in trace.ops:
        if isinstance(op, SwapRows):
            for r in q:
                r[op.i], r[op.j] = r[op.j], r[op.i]
        else:
            for r in q:
                r[op.src] -= r[op.dst]
    return IntMatrix(q, ncols=g)


# -- classification -----------------------------------------------------------

class RealPoints(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


@dataclass(frozen=True, order=True)
class TopologicalType:
    g: int
    k: int
    a: int

    def __post_init__(self):
        if not 0 <= self.k <= self.g + 1:
            raise ValueError(f"Harnack bound violated: k={self.k}, g={self.g}")
        if self.a not in (0, 1):
            raise ValueError("a must be 0 or 1")
        if self.k == 0 and self.a != 1:
            raise ValueError("a curve without real ovals is non-dividing")
        if self.k == self.g + 1 and self.a != 0:
            raise ValueError("an M-curve is dividing")

    def __str__(self) -> str:
        return f"({self.g},{self.k},{self.a})"

    def to_json(self) -> dict:
        return {"g": self.g, "k": self.k, "a": self.a}


def _no_oval_rank(g: int) -> int:
    return g if g % 2 == 0 else g - 1


def classify_H(h: HMatrix, real_points: RealPoints | str = RealPoints.UNKNOWN) -> list[TopologicalType]:
    """Topological type(s) encoded by a canonical H.

    Returns one type, or two (the ambiguous k > 0 / k = 0 pair) when
    ``real_points`` is unknown and both readings fit.
    """
    rp = RealPoints(real_points)
    g, rk = h.g, h.rank
    if h.pattern is Pattern.DIAG_ONES:
        if rp is RealPoints.NO:
            raise Inconsistent("a diagonal 1 in H requires real ovals")
        return [TopologicalType(g, g + 1 - rk, 1)]

    # zero and block patterns: dividing if there are ovals
    with_ovals = TopologicalType(g, g + 1 - rk, 0)
    fits_empty = rk == _no_oval_rank(g)
    if rp is RealPoints.YES:
        return [with_ovals]
    if rp is RealPoints.NO:
        if not fits_empty:
            raise Inconsistent(f"rank {rk} of H does not match the no-oval shape for g={g}")
        return [TopologicalType(g, 0, 1)]
    if fits_empty:
        return [with_ovals, TopologicalType(g, 0, 1)]
    return [with_ovals]
