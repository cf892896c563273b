"""Compile tile sets into first-order sentences and move between tilings and models.

Letters: ``H(x, y)`` says y is right of x, ``V(x, y)`` says y is above x and
``P<k>(x)`` says x holds tile t_k.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import InputError
from .fol import FiniteModel, Signature, evaluate
from .syntax import (
    Base, Comp, Eq, Formula, Iff, Imp, Not, RelAtom, TC, atom, conj, disj, exists, forall,
)
from .tiles import GridTiling, TileSet, check_grid, check_torus

FO = "fo"
FO_TC = "fo-tc"
MODAL = "modal"
DIALECTS = (FO, FO_TC, MODAL)


def tile_letter(k: int) -> str:
    return f"P{k}"


@dataclass(frozen=True)
class ReductionOutput:
    formulas: tuple[tuple[str, Formula], ...]
    signature: Signature
    dialect: str

    def __post_init__(self) -> None:
        if self.dialect not in DIALECTS:
            raise InputError(f"unknown dialect {self.dialect!r}")
        names = [n for n, _ in self.formulas]
        if len(set(names)) != len(names):
            raise InputError(f"duplicate formula names {names}")

    def __len__(self) -> int:
        return len(self.formulas)

    def __getitem__(self, name: str) -> Formula:
        for n, f in self.formulas:
            if n == name:
                return f
        raise KeyError(name)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.formulas)

    def conjunction(self) -> Formula:
        return conj(f for _, f in self.formulas)

    def __add__(self, other: "ReductionOutput") -> "ReductionOutput":
        if other.dialect != self.dialect:
            raise InputError(f"refusing to mix dialects {self.dialect} and {other.dialect}")
        return _output(self.formulas + other.formulas, self.dialect)


def _output(named, dialect: str) -> ReductionOutput:
    named = tuple(named)
    return ReductionOutput(named, Signature.of(*(f for _, f in named)), dialect)


def grid_axioms(dialect: str = FO) -> ReductionOutput:
    """Every element has a right and an upper neighbour, and right-then-up meets up-then-right."""
    confluence = forall(
        "x y",
        Iff(
            exists("z", conj([atom("H", "x", "z"), atom("V", "z", "y")])),
            exists("z", conj([atom("V", "x", "z"), atom("H", "z", "y")])),
        ),
    )
    return _output(
        [
            ("grid-h", forall("x", exists("y", atom("H", "x", "y")))),
            ("grid-v", forall("x", exists("y", atom("V", "x", "y")))),
            ("grid-confluence", confluence),
        ],
        dialect,
    )


def uniqueness_body(tiles: TileSet, var: str) -> Formula:
    n = len(tiles)
    return disj(
        conj([atom(tile_letter(i), var)] + [Not(atom(tile_letter(j), var)) for j in range(n) if j != i])
        for i in range(n)
    )


def tiling_axioms(tiles: TileSet, dialect: str = FO) -> ReductionOutput:
    n = len(tiles)

    def matching(letter: str, compatible) -> Formula:
        return forall(
            "x",
            conj(
                Imp(
                    atom(tile_letter(i), "x"),
                    forall(
                        "y",
                        Imp(
                            atom(letter, "x", "y"),
                            disj(atom(tile_letter(j), "y") for j in range(n) if compatible(i, j)),
                        ),
                    ),
                )
                for i in range(n)
            ),
        )

    return _output(
        [
            ("uniqueness", forall("x", uniqueness_body(tiles, "x"))),
            ("horizontal", matching("H", tiles.horizontally_compatible)),
            ("vertical", matching("V", tiles.vertically_compatible)),
        ],
        dialect,
    )


def tc_extension_axioms(tiles: TileSet, eliminate_z: bool = False) -> ReductionOutput:
    """Condition (3) via the transitive closure of V, irreflexivity of V, and
    the two-variable confluence via composition.

    With ``eliminate_z`` the innermost witness reuses ``x``; the inner
    quantifier shadows the outer one, so both variants mean the same thing.
    """
    w = "x" if eliminate_z else "z"
    vplus = TC(Base("V"))
    infinitely_often = exists(
        "x",
        forall(
            "y",
            Imp(
                RelAtom(vplus, "x", "y"),
                exists(w, conj([Not(Eq(w, "y")), RelAtom(vplus, "y", w), atom(tile_letter(tiles.distinguished), w)])),
            ),
        ),
    )
    return _output(
        [
            ("condition-3", infinitely_often),
            ("irreflexivity", forall("x", Not(atom("V", "x", "x")))),
            (
                "confluence-comp",
                forall(
                    "x y",
                    Iff(
                        RelAtom(Comp(Base("V"), Base("H")), "x", "y"),
                        RelAtom(Comp(Base("H"), Base("V")), "x", "y"),
                    ),
                ),
            ),
        ],
        FO_TC,
    )


def reduce_tiles(tiles: TileSet, dialect: str = FO, eliminate_z: bool = False) -> ReductionOutput:
    """The complete first-order formula set for one dialect.

    ``fo``: the three grid axioms and the three tiling axioms. ``fo-tc``: the
    same with the three-variable confluence replaced by the composition form,
    plus condition (3) and irreflexivity.
    """
    if dialect == FO:
        if eliminate_z:
            raise InputError("eliminate_z only applies to the fo-tc dialect")
        return grid_axioms() + tiling_axioms(tiles)
    if dialect == FO_TC:
        grid = grid_axioms(FO_TC)
        ext = tc_extension_axioms(tiles, eliminate_z)
        return _output(
            [(n, grid[n]) for n in ("grid-h", "grid-v")]
            + [("confluence-comp", ext["confluence-comp"])]
            + list(tiling_axioms(tiles, FO_TC).formulas)
            + [(n, ext[n]) for n in ("condition-3", "irreflexivity")],
            FO_TC,
        )
    raise InputError(f"reduce_tiles handles fo and fo-tc, not {dialect!r}")


def cell_element(t: GridTiling, i: int, j: int) -> int:
    return j * t.width + i


def tiling_to_model(t: GridTiling, tiles: TileSet) -> FiniteModel:
    """The intended model of a torus tiling: one element per cell, numbered row-major
    from the bottom row, with H/V the (wrapping) right/upper neighbour relations."""
    report = check_torus(t, tiles)
    if not report.ok:
        raise InputError(f"not a torus tiling: {len(report)} violation(s), first {report.entries[0]}")
    w, h = t.width, t.height
    rel_h = set()
    rel_v = set()
    holders: dict[str, set] = {tile_letter(k): set() for k in range(len(tiles))}
    for i, j in t.cells():
        a = cell_element(t, i, j)
        rel_h.add((a, cell_element(t, (i + 1) % w, j)))
        rel_v.add((a, cell_element(t, i, (j + 1) % h)))
        holders[tile_letter(t[i, j])].add((a,))
    arity = {"H": 2, "V": 2, **{name: 1 for name in holders}}
    return FiniteModel(w * h, arity, {"H": rel_h, "V": rel_v, **holders})


def model_to_tiling_walk(model: FiniteModel, tiles: TileSet, start: int, steps: int) -> GridTiling:
    """Read a ``steps x steps`` tiling out of a finite model of the fo formulas.

    Elements are chosen cell by cell in row-major order starting from
    ``start``: each must be an H-successor of its left neighbour and a
    V-successor of the element below. Candidates are tried in ascending
    order, backtracking on dead ends, so the result is the least such grid of
    elements. The tile at each cell is the unique P_k holding there.
    """
    if steps < 1:
        raise InputError("steps must be positive")
    if not 0 <= start < model.size:
        raise InputError(f"start element {start} outside the domain")
    required = reduce_tiles(tiles)
    for name, f in required.formulas:
        try:
            holds = evaluate(model, f)
        except InputError as exc:
            raise InputError(f"model does not fit the {name} axiom: {exc}") from None
        if not holds:
            raise InputError(f"model violates the {name} axiom")

    succ_h = _successors(model, "H")
    succ_v = _successors(model, "V")
    tile_of = {}
    for k in range(len(tiles)):
        for (a,) in model.extension(tile_letter(k)):
            tile_of[a] = k

    n = steps * steps
    grid: list[int] = [-1] * n
    cands: list[list[int]] = [[] for _ in range(n)]
    ptr = [0] * n
    cands[0] = [start]
    pos = 0
    while 0 <= pos < n:
        if ptr[pos] < len(cands[pos]):
            grid[pos] = cands[pos][ptr[pos]]
            ptr[pos] += 1
            pos += 1
            if pos < n:
                cands[pos] = _candidates(pos, steps, grid, succ_h, succ_v)
                ptr[pos] = 0
        else:
            pos -= 1
    if pos < 0:
        raise InputError("no grid of H/V successors exists from this start element")

    tiling = GridTiling.from_flat(steps, steps, [tile_of[a] for a in grid])
    if not check_grid(tiling, tiles).ok:
        raise AssertionError("extracted tiling has mismatched edges")
    return tiling


def _successors(model: FiniteModel, letter: str) -> dict[int, list[int]]:
    out: dict[int, list[int]] = {a: [] for a in model.domain}
    for a, b in sorted(model.extension(letter)):
        out[a].append(b)
    return out


def _candidates(pos: int, steps: int, grid: list[int], succ_h, succ_v) -> list[int]:
    i, j = pos % steps, pos // steps
    options: Optional[set] = None
    if i > 0:
        options = set(succ_h[grid[pos - 1]])
    if j > 0:
        below = set(succ_v[grid[pos - steps]])
        options = below if options is None else options & below
    return sorted(options or ())
