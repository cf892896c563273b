"""Exhaustive small tile-set corpora, deduplicated up to colour renaming."""

from __future__ import annotations

from itertools import combinations, permutations, product
from typing import Iterator, Sequence

from .tiles import TileSet

Edges = tuple[str, str, str, str]


def canonical_form(edges: Sequence[Edges], alphabet: Sequence[str]) -> tuple[Edges, ...]:
    """Least sorted edge list over all renamings of ``alphabet``."""
    best = None
    for perm in permutations(alphabet):
        rename = dict(zip(alphabet, perm))
        form = tuple(sorted(tuple(rename[c] for c in e) for e in edges))
        if best is None or form < best:
            best = form
    return best


def small_tile_sets(max_tiles: int = 3, alphabet: Sequence[str] = ("a", "b", "c")) -> Iterator[TileSet]:
    """Every set of 1..max_tiles distinct tile types over ``alphabet``, one per
    colour-renaming class, in a fixed order. Tiles within a set are sorted by
    their (left, right, top, bottom) colours and named t0, t1, ..."""
    types = list(product(alphabet, repeat=4))
    for k in range(1, max_tiles + 1):
        seen: set = set()
        for combo in combinations(types, k):
            form = canonical_form(combo, alphabet)
            if form in seen:
                continue
            seen.add(form)
            yield TileSet.from_edges(form)
