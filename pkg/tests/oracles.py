"""Independent brute-force oracles used to cross-check the library.

Nothing here imports ovalis; each oracle computes its answer from first
principles on plain Python lists.
"""
from __future__ import annotations

import itertools
import math


def det_laplace(m: list[list[int]]) -> int:
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j]:
            minor = [row[:j] + row[j + 1:] for row in m[1:]]
            total += (-1) ** j * m[0][j] * det_laplace(minor)
    return total


def minor_gcds(m: list[list[int]]) -> list[int]:
    """d_k = gcd of all k x k minors, for k = 1 .. min(rows, cols), stopping at zero."""
    rows, cols = len(m), len(m[0]) if m else 0
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for ri in itertools.combinations(range(rows), k):
            for ci in itertools.combinations(range(cols), k):
                g = math.gcd(g, det_laplace([[m[r][c] for c in ci] for r in ri]))
        if g == 0:
            break
        out.append(g)
    return out


def invariant_factors(m: list[list[int]]) -> list[int]:
    """p_k = d_k / d_(k-1)."""
    d = minor_gcds(m)
    return [d[0]] + [d[k] // d[k - 1] for k in range(1, len(d))] if d else []


def gf2_rank(m: list[list[int]]) -> int:
    rows = [[v & 1 for v in r] for r in m]
    rank, ncols = 0, len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                rows[r] = [a ^ b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def gf2_congruence_class(n: list[list[int]]) -> tuple[str, int]:
    """Congruence class of a symmetric GF(2) matrix as (pattern, count).

    Symmetric forms over GF(2) are classified by rank and by whether the
    diagonal vanishes (alternating forms are sums of hyperbolic blocks).
    """
    r = gf2_rank(n)
    if r == 0:
        return ("zero", 0)
    if any(n[i][i] & 1 for i in range(len(n))):
        return ("diag_ones", r)
    return ("blocks", r // 2)


def h_for_type(g: int, k: int, a: int) -> tuple[str, int]:
    """Canonical H shape for a topological type, read forward from the type."""
    if k == 0:
        rank = g if g % 2 == 0 else g - 1
        return ("blocks", rank // 2) if rank else ("zero", 0)
    rank = g + 1 - k
    if rank == 0:
        return ("zero", 0)
    return ("blocks", rank // 2) if a == 0 else ("diag_ones", rank)


def valid_types(g: int):
    """All (g, k, a) allowed by Harnack's bound and the dividing-curve parity rule."""
    for k in range(g + 2):
        for a in (0, 1):
            if k == 0 and a == 0:
                continue
            if k == g + 1 and a == 1:
                continue
            if a == 0 and (g + 1 - k) % 2:
                continue
            yield (g, k, a)


def types_for_h(g: int, pattern: str, count: int) -> set[tuple[int, int, int]]:
    return {t for t in valid_types(g) if h_for_type(*t) == (pattern, count)}


def canonical_h_matrix(g: int, pattern: str, count: int) -> list[list[int]]:
    h = [[0] * g for _ in range(g)]
    if pattern == "diag_ones":
        for i in range(count):
            h[i][i] = 1
    elif pattern == "blocks":
        for b in range(count):
            h[2 * b][2 * b + 1] = h[2 * b + 1][2 * b] = 1
    return h
