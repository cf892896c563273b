"""Tile types, tile sets, finite tilings and the local matching checks.

Coordinates follow the usual convention for the quarter plane: cell ``(0, 0)``
is bottom-left, ``i`` grows to the right and ``j`` grows upward, so the right
neighbour of ``(i, j)`` is ``(i + 1, j)`` and the one above is ``(i, j + 1)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import InputError

Color = str

_IDENT = re.compile(r"^[A-Za-z_][A-Za-z0-9_\-]*$")

HORIZONTAL = "horizontal"
VERTICAL = "vertical"


def _check_ident(kind: str, name: str) -> None:
    if not isinstance(name, str) or not _IDENT.match(name):
        raise InputError(f"invalid {kind} name: {name!r}")


@dataclass(frozen=True)
class TileType:
    name: str
    left: Color
    right: Color
    top: Color
    bottom: Color

    def __post_init__(self) -> None:
        _check_ident("tile", self.name)
        for side in ("left", "right", "top", "bottom"):
            _check_ident("color", getattr(self, side))

    @property
    def edges(self) -> tuple[Color, Color, Color, Color]:
        """Edge colours in the order (left, right, top, bottom)."""
        return (self.left, self.right, self.top, self.bottom)


@dataclass(frozen=True)
class TileSet:
    """An ordered, immutable set of tile types; ``tiles[k]`` is t_k.

    ``colors`` defaults to the colours actually used by the tiles. When given
    explicitly it may contain unused colours but must cover every edge.
    """

    tiles: tuple[TileType, ...]
    distinguished: int = 0
    colors: tuple[Color, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "tiles", tuple(self.tiles))
        if not self.tiles:
            raise InputError("a tile set needs at least one tile")
        names = [t.name for t in self.tiles]
        if len(set(names)) != len(names):
            raise InputError(f"duplicate tile names in {names}")
        if not 0 <= self.distinguished < len(self.tiles):
            raise InputError(f"distinguished index {self.distinguished} out of range")
        used: list[Color] = []
        for t in self.tiles:
            for c in t.edges:
                if c not in used:
                    used.append(c)
        if self.colors:
            colors = tuple(self.colors)
            for c in colors:
                _check_ident("color", c)
            if len(set(colors)) != len(colors):
                raise InputError(f"duplicate colors in {list(colors)}")
            missing = [c for c in used if c not in colors]
            if missing:
                raise InputError(f"tiles use undeclared colors {missing}")
            object.__setattr__(self, "colors", colors)
        else:
            object.__setattr__(self, "colors", tuple(used))

    def __len__(self) -> int:
        return len(self.tiles)

    def __getitem__(self, k: int) -> TileType:
        return self.tiles[k]

    def __iter__(self) -> Iterator[TileType]:
        return iter(self.tiles)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.tiles)

    def index(self, name: str) -> int:
        for k, t in enumerate(self.tiles):
            if t.name == name:
                return k
        raise InputError(f"unknown tile {name!r}")

    @classmethod
    def from_edges(
        cls, edges: Sequence[tuple[Color, Color, Color, Color]], distinguished: int = 0
    ) -> "TileSet":
        """Build ``t0, t1, ...`` from (left, right, top, bottom) colour tuples."""
        return cls(
            tuple(TileType(f"t{k}", *e) for k, e in enumerate(edges)),
            distinguished=distinguished,
        )

    def horizontally_compatible(self, k: int, j: int) -> bool:
        """t_j may sit immediately right of t_k."""
        return self.tiles[k].right == self.tiles[j].left

    def vertically_compatible(self, k: int, j: int) -> bool:
        """t_j may sit immediately above t_k."""
        return self.tiles[k].top == self.tiles[j].bottom


@dataclass(frozen=True)
class GridTiling:
    """Tile indices on a ``width x height`` rectangle, stored bottom row first.

    ``rows[j][i]`` is the tile index at cell ``(i, j)``.
    """

    width: int
    height: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.width < 1 or self.height < 1:
            raise InputError(f"tiling dimensions must be positive, got {self.width}x{self.height}")
        rows = tuple(tuple(int(k) for k in r) for r in self.rows)
        if len(rows) != self.height or any(len(r) != self.width for r in rows):
            raise InputError(f"rows do not form a {self.width}x{self.height} rectangle")
        object.__setattr__(self, "rows", rows)

    def __getitem__(self, cell: tuple[int, int]) -> int:
        i, j = cell
        return self.rows[j][i]

    def cells(self) -> Iterator[tuple[int, int]]:
        for j in range(self.height):
            for i in range(self.width):
                yield (i, j)

    @classmethod
    def from_flat(cls, width: int, height: int, flat: Sequence[int]) -> "GridTiling":
        """Build from a row-major list whose element ``j * width + i`` is cell (i, j)."""
        return cls(width, height, tuple(tuple(flat[j * width:(j + 1) * width]) for j in range(height)))


class TorusTiling(GridTiling):
    """Same storage as :class:`GridTiling`; adjacency wraps around both axes."""


@dataclass(frozen=True, order=True)
class Violation:
    j: int
    i: int
    axis: str
    expected: Color
    found: Color

    @property
    def cell(self) -> tuple[int, int]:
        return (self.i, self.j)


@dataclass(frozen=True)
class ViolationReport:
    entries: tuple[Violation, ...] = ()

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Violation]:
        return iter(self.entries)

    @property
    def ok(self) -> bool:
        return not self.entries


def _validate(t: GridTiling, tiles: TileSet) -> None:
    n = len(tiles)
    for i, j in t.cells():
        k = t[i, j]
        if not 0 <= k < n:
            raise InputError(f"tile index {k} at cell ({i}, {j}) out of range for {n} tiles")


def _collect(t: GridTiling, tiles: TileSet, wrap: bool) -> ViolationReport:
    _validate(t, tiles)
    w, h = t.width, t.height
    found: list[Violation] = []
    for i, j in t.cells():
        here = tiles[t[i, j]]
        if i + 1 < w or wrap:
            right = tiles[t[(i + 1) % w, j]]
            if here.right != right.left:
                found.append(Violation(j, i, HORIZONTAL, here.right, right.left))
        if j + 1 < h or wrap:
            above = tiles[t[i, (j + 1) % h]]
            if here.top != above.bottom:
                found.append(Violation(j, i, VERTICAL, here.top, above.bottom))
    return ViolationReport(tuple(sorted(found)))


def check_grid(t: GridTiling, tiles: TileSet) -> ViolationReport:
    """Report every adjacent pair inside the rectangle whose shared edge colours differ.

    Each entry names the lower-left cell of the pair, the axis, the colour that
    cell shows on the shared edge (``expected``) and the colour its neighbour
    shows (``found``). No wrap-around pairs are considered.
    """
    return _collect(t, tiles, wrap=False)


def check_torus(t: GridTiling, tiles: TileSet) -> ViolationReport:
    """As :func:`check_grid`, plus the wrap pairs ``(w-1, j)/(0, j)`` and ``(i, h-1)/(i, 0)``."""
    return _collect(t, tiles, wrap=True)


def count_t0_column(t: GridTiling, tiles: TileSet) -> int:
    """Number of cells in the leftmost column holding the distinguished tile."""
    _validate(t, tiles)
    return sum(1 for j in range(t.height) if t[0, j] == tiles.distinguished)
