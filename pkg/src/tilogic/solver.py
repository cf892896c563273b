"""Finite grid and torus tiling search, plus the exhaustive counting oracle.

The search is deliberately plain: cells are filled in row-major order (bottom
row first), tiles are tried in tile-set order, and placing a tile prunes the
candidate sets of the cell to its right and the cell above it. Torus wrap
constraints are checked when a row or column closes. Witnesses and node
counts are therefore reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from .errors import InputError, ResourceLimitError, default_budget
from .tiles import GridTiling, TileSet, TorusTiling

DEFAULT_CELL_LIMIT = 10**4
DEFAULT_COUNT_BUDGET = 10**8

FOUND = "found"
EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class SolveOutcome:
    status: str
    witness: Optional[GridTiling]
    nodes_explored: int

    def __post_init__(self) -> None:
        if (self.status == FOUND) != (self.witness is not None):
            raise ValueError("witness must be present exactly when status is 'found'")

    @property
    def found(self) -> bool:
        return self.status == FOUND


def _check_size(w: int, h: int, cell_limit: int) -> None:
    if w < 1 or h < 1:
        raise InputError(f"dimensions must be positive, got {w}x{h}")
    if w * h > cell_limit:
        raise ResourceLimitError(f"{w}x{h} = {w * h} cells exceeds the cell limit {cell_limit}")


def _compat_masks(tiles: TileSet) -> tuple[list[int], list[int]]:
    n = len(tiles)
    right_ok = [0] * n
    top_ok = [0] * n
    for k in range(n):
        for j in range(n):
            if tiles.horizontally_compatible(k, j):
                right_ok[k] |= 1 << j
            if tiles.vertically_compatible(k, j):
                top_ok[k] |= 1 << j
    return right_ok, top_ok


def _bits(mask: int) -> list[int]:
    out = []
    k = 0
    while mask:
        if mask & 1:
            out.append(k)
        mask >>= 1
        k += 1
    return out


def _search(tiles: TileSet, w: int, h: int, wrap: bool) -> SolveOutcome:
    right_ok, top_ok = _compat_masks(tiles)
    n = w * h
    full = (1 << len(tiles)) - 1
    domains = [full] * n
    assign = [-1] * n
    cands: list[list[int]] = [[] for _ in range(n)]
    ptr = [0] * n
    # (cell, previous mask) pairs overwritten by the assignment at each position
    saved: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    nodes = 0

    pos = 0
    cands[0] = _bits(domains[0])
    while 0 <= pos < n:
        for cell, mask in saved[pos]:
            domains[cell] = mask
        saved[pos] = []
        i, j = pos % w, pos // w
        placed = False
        while ptr[pos] < len(cands[pos]):
            t = cands[pos][ptr[pos]]
            ptr[pos] += 1
            nodes += 1
            if wrap and i == w - 1:
                # closing a row: its first cell is this cell's right neighbour
                first = t if w == 1 else assign[j * w]
                if not (right_ok[t] >> first) & 1:
                    continue
            if wrap and j == h - 1:
                first = t if h == 1 else assign[i]
                if not (top_ok[t] >> first) & 1:
                    continue
            updates: list[tuple[int, int]] = []
            if i + 1 < w:
                updates.append((pos + 1, domains[pos + 1] & right_ok[t]))
            if j + 1 < h:
                updates.append((pos + w, domains[pos + w] & top_ok[t]))
            if any(mask == 0 for _, mask in updates):
                continue
            for cell, mask in updates:
                saved[pos].append((cell, domains[cell]))
                domains[cell] = mask
            assign[pos] = t
            placed = True
            break
        if placed:
            pos += 1
            if pos < n:
                cands[pos] = _bits(domains[pos])
                ptr[pos] = 0
        else:
            assign[pos] = -1
            pos -= 1

    if pos < 0:
        return SolveOutcome(EXHAUSTED, None, nodes)
    kind = TorusTiling if wrap else GridTiling
    return SolveOutcome(FOUND, kind.from_flat(w, h, assign), nodes)


def solve_grid(
    tiles: TileSet, w: int, h: int, cell_limit: int = DEFAULT_CELL_LIMIT
) -> SolveOutcome:
    """Find the first ``w x h`` rectangle tiling in search order, if any."""
    _check_size(w, h, cell_limit)
    return _search(tiles, w, h, wrap=False)


def solve_torus(
    tiles: TileSet, w: int, h: int, cell_limit: int = DEFAULT_CELL_LIMIT
) -> SolveOutcome:
    """Find the first ``w x h`` torus tiling in search order, if any."""
    _check_size(w, h, cell_limit)
    return _search(tiles, w, h, wrap=True)


def count_grid(tiles: TileSet, w: int, h: int, budget: Optional[int] = None) -> int:
    """Count all assignments cells -> tiles satisfying both matching conditions.

    Exhaustive by design: every one of ``|T| ** (w * h)`` assignments is
    generated and tested, in vectorised chunks. This is the reference the
    backtracking solver is checked against, so it shares no code with it.
    """
    if w < 1 or h < 1:
        raise InputError(f"dimensions must be positive, got {w}x{h}")
    if budget is None:
        budget = default_budget(DEFAULT_COUNT_BUDGET)
    k = len(tiles)
    cells = w * h
    total = k**cells
    if total > budget:
        raise ResourceLimitError(f"{k}^{cells} = {total} assignments exceeds budget {budget}")

    palette = {c: n for n, c in enumerate(tiles.colors)}
    left = np.array([palette[t.left] for t in tiles])
    right = np.array([palette[t.right] for t in tiles])
    top = np.array([palette[t.top] for t in tiles])
    bottom = np.array([palette[t.bottom] for t in tiles])

    count = 0
    for grid in _assignments(k, w, h):
        ok = np.ones(len(grid), dtype=bool)
        if w > 1:
            ok &= (right[grid[:, :, :-1]] == left[grid[:, :, 1:]]).all(axis=(1, 2))
        if h > 1:
            ok &= (top[grid[:, :-1, :]] == bottom[grid[:, 1:, :]]).all(axis=(1, 2))
        count += int(ok.sum())
    return count


_CHUNK_CELLS = 2**20


@lru_cache(maxsize=64)
def _small_assignments(k: int, w: int, h: int) -> np.ndarray:
    return _assignment_block(k, w, h, 0, k ** (w * h))


def _assignment_block(k: int, w: int, h: int, start: int, stop: int) -> np.ndarray:
    """Assignments number ``start..stop-1``; cell ``j*w + i`` is base-k digit ``j*w + i``."""
    powers = np.array([k**c for c in range(w * h)], dtype=np.int64)
    idx = np.arange(start, stop, dtype=np.int64)
    grid = ((idx[:, None] // powers[None, :]) % k).reshape(-1, h, w)
    grid.flags.writeable = False
    return grid


def _assignments(k: int, w: int, h: int) -> Iterator[np.ndarray]:
    total = k ** (w * h)
    chunk = max(1, _CHUNK_CELLS // (w * h))
    if total <= chunk:
        yield _small_assignments(k, w, h)
        return
    for start in range(0, total, chunk):
        yield _assignment_block(k, w, h, start, min(total, start + chunk))


def unfold_torus(t: GridTiling, width: int, height: int) -> GridTiling:
    """Repeat a torus tiling periodically over a ``width x height`` rectangle."""
    if width < 1 or height < 1:
        raise InputError(f"dimensions must be positive, got {width}x{height}")
    return GridTiling(
        width,
        height,
        tuple(tuple(t[i % t.width, j % t.height] for i in range(width)) for j in range(height)),
    )
