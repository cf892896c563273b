"""Plain-text drawing of a tiling, top row first.

Each cell shows its tile name in brackets with the left and right colours
beside it and the top and bottom colours above and below::

       a         b
    c [t0] d  d [t1] c
       b         a
"""

from __future__ import annotations

from .tiles import GridTiling, TileSet


def render_tiling(t: GridTiling, tiles: TileSet) -> str:
    used = [tiles[t[i, j]] for i, j in t.cells()]
    side = max(len(c) for tile in used for c in (tile.left, tile.right))
    core = max(max(len(tile.name), len(tile.top), len(tile.bottom)) for tile in used) + 2
    lines = []
    for j in reversed(range(t.height)):
        top, mid, bottom = [], [], []
        for i in range(t.width):
            tile = tiles[t[i, j]]
            pad = " " * (side + 1)
            top.append(pad + tile.top.center(core) + pad)
            mid.append(f"{tile.left.rjust(side)} [{tile.name.center(core - 2)}] {tile.right.ljust(side)}")
            bottom.append(pad + tile.bottom.center(core) + pad)
        for row in (top, mid, bottom):
            lines.append("  ".join(row).rstrip())
    return "\n".join(lines) + "\n"
