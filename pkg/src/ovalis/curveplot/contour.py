"""Marching squares for the real zero set of a polynomial."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .polynomial import Polynomial

DEFAULT_GRID = 400
DEFAULT_WINDOW = (-3.0, 3.0, -3.0, 3.0)

# corners: 0=(i,j) 1=(i+1,j) 2=(i+1,j+1) 3=(i,j+1)
# edges:   0=bottom(0-1) 1=right(1-2) 2=top(3-2) 3=left(0-3)
_EDGE_CORNERS = ((0, 1), (1, 2), (3, 2), (0, 3))


@dataclass(frozen=True)
class ContourSet:
    polylines: tuple[np.ndarray, ...]
    closed: tuple[bool, ...]
    window: tuple[float, float, float, float]
    grid: int
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def components(self) -> int:
        return len(self.polylines)

    @property
    def cell_size(self) -> tuple[float, float]:
        x0, x1, y0, y1 = self.window
        return (x1 - x0) / self.grid, (y1 - y0) / self.grid


def _edge_key(i: int, j: int, e: int) -> tuple[int, int, int]:
    """Global id of cell (i, j)'s edge ``e``: (kind, i, j) with 0=horizontal, 1=vertical."""
    if e == 0:
        return (0, i, j)
    if e == 1:
        return (1, i + 1, j)
    if e == 2:
        return (0, i, j + 1)
    return (1, i, j)


def marching_squares(p: Polynomial, window=DEFAULT_WINDOW, grid: int = DEFAULT_GRID) -> ContourSet:
    """Trace ``p(x, y) == 0`` over ``window = (xmin, xmax, ymin, ymax)``.

    Samples ``p`` on a ``(grid+1)^2`` lattice, cuts each sign-changing cell
    edge by linear interpolation and resolves saddle cells with the sign at
    the cell center.  Segments are joined through their shared edge points.
    """
    if grid < 8:
        raise ValueError("grid must be at least 8")
    x0, x1, y0, y1 = map(float, window)
    if not (x1 > x0 and y1 > y0):
        raise ValueError(f"degenerate window {window}")
    xs = np.linspace(x0, x1, grid + 1)
    ys = np.linspace(y0, y1, grid + 1)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    f = p(X, Y)
    pos = f > 0

    c0, c1 = pos[:-1, :-1], pos[1:, :-1]
    c2, c3 = pos[1:, 1:], pos[:-1, 1:]
    code = c0.astype(np.int8) | (c1 << 1) | (c2 << 2) | (c3 << 3)
    active = np.argwhere((code != 0) & (code != 15))

    points: dict[tuple[int, int, int], tuple[float, float]] = {}

    def point(key):
        pt = points.get(key)
        if pt is None:
            kind, i, j = key
            if kind == 0:
                fa, fb = f[i, j], f[i + 1, j]
                t = fa / (fa - fb)
                pt = (xs[i] + t * (xs[i + 1] - xs[i]), ys[j])
            else:
                fa, fb = f[i, j], f[i, j + 1]
                t = fa / (fa - fb)
                pt = (xs[i], ys[j] + t * (ys[j + 1] - ys[j]))
            points[key] = pt
        return pt

    adjacency: dict[tuple, list[tuple]] = {}

    def link(a, b):
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)

    for i, j in active:
        i, j = int(i), int(j)
        s = (bool(c0[i, j]), bool(c1[i, j]), bool(c2[i, j]), bool(c3[i, j]))
        cut = [e for e, (a, b) in enumerate(_EDGE_CORNERS) if s[a] != s[b]]
        if len(cut) == 2:
            link(_edge_key(i, j, cut[0]), _edge_key(i, j, cut[1]))
            continue
        center = p(0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])) > 0
        if center == s[0]:
            # corners 0 and 2 joined through the center: isolate corners 1 and 3
            pairs = ((0, 1), (2, 3))
        else:
            pairs = ((0, 3), (1, 2))
        for ea, eb in pairs:
            link(_edge_key(i, j, ea), _edge_key(i, j, eb))

    polylines, closed = _chain(adjacency)
    return ContourSet(
        polylines=tuple(np.array([point(k) for k in chain], dtype=float) for chain in polylines),
        closed=tuple(closed),
        window=(x0, x1, y0, y1),
        grid=grid,
    )


def _chain(adjacency: dict) -> tuple[list[list], list[bool]]:
    """Walk the edge-point graph (max degree 2) into polylines, deterministically."""
    seen: set = set()
    chains, closed = [], []

    def walk(start):
        chain = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [n for n in adjacency[cur] if n != prev or adjacency[cur].count(n) > 1]
            nxt = [n for n in nxt if n not in seen]
            if not nxt:
                return chain
            prev, cur = cur, nxt[0]
            seen.add(cur)
            chain.append(cur)

    # open chains start at degree-1 points (window boundary)
    for key in sorted(k for k, v in adjacency.items() if len(v) == 1):
        if key not in seen:
            chains.append(walk(key))
            closed.append(False)
    for key in sorted(adjacency):
        if key not in seen:
            chain = walk(key)
            chain.append(chain[0])
            chains.append(chain)
            closed.append(True)
    return chains, closed
