"""JSON documents for tile sets, tilings, classical models and Kripke models.

Tile set::

    {"colors": ["a", "b"], "distinguished": "t0",
     "tiles": [{"name": "t0", "left": "a", "right": "b", "top": "a", "bottom": "a"}]}

Tiling (rows bottom row first)::

    {"width": 2, "height": 1, "mode": "torus", "rows": [["t0", "t1"]]}

Classical model::

    {"size": 2, "arity": {"H": 2, "P0": 1}, "letters": {"H": [[0, 1], [1, 0]], "P0": [[0], [1]]}}

Kripke model::

    {"worlds": ["w", "v0"], "root": "w", "R": [["w", "v0"]],
     "domains": {"w": [0], "v0": [0]}, "arity": {"L": 1},
     "letters": {"w": {}, "v0": {"L": [[0]]}}}

Writers emit sorted keys and sorted tuple lists so output is byte-stable.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Union

from .errors import InputError
from .fol import FiniteModel
from .modal import AugmentedFrame, KripkeFrame, KripkeModel
from .tiles import GridTiling, TileSet, TileType, TorusTiling

PathLike = Union[str, Path]

GRID = "grid"
TORUS = "torus"


def _dump(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def read_json(path: PathLike) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _field(doc: Any, name: str, kind: type | tuple, where: str) -> Any:
    if not isinstance(doc, dict) or name not in doc:
        raise InputError(f"{where}: missing field {name!r}")
    value = doc[name]
    if not isinstance(value, kind) or isinstance(value, bool):
        raise InputError(f"{where}: field {name!r} has the wrong type")
    return value


# -- tile sets ----------------------------------------------------------------


def tileset_from_doc(doc: Any) -> TileSet:
    colors = _field(doc, "colors", list, "tile set")
    entries = _field(doc, "tiles", list, "tile set")
    tiles = []
    for entry in entries:
        tiles.append(
            TileType(*(_field(entry, k, str, "tile") for k in ("name", "left", "right", "top", "bottom")))
        )
    if not tiles:
        raise InputError("tile set: no tiles")
    names = [t.name for t in tiles]
    distinguished = 0
    if "distinguished" in doc:
        name = _field(doc, "distinguished", str, "tile set")
        if name not in names:
            raise InputError(f"tile set: distinguished tile {name!r} is not defined")
        distinguished = names.index(name)
    if not colors:
        raise InputError("tile set: no colors")
    return TileSet(tuple(tiles), distinguished, tuple(colors))


def tileset_to_doc(tiles: TileSet) -> dict:
    return {
        "colors": list(tiles.colors),
        "distinguished": tiles[tiles.distinguished].name,
        "tiles": [
            {"name": t.name, "left": t.left, "right": t.right, "top": t.top, "bottom": t.bottom}
            for t in tiles
        ],
    }


def load_tileset(path: PathLike) -> TileSet:
    return tileset_from_doc(read_json(path))


def dump_tileset(tiles: TileSet) -> str:
    return _dump(tileset_to_doc(tiles))


# -- tilings ------------------------------------------------------------------


def tiling_from_doc(doc: Any, tiles: TileSet) -> GridTiling:
    width = _field(doc, "width", int, "tiling")
    height = _field(doc, "height", int, "tiling")
    mode = _field(doc, "mode", str, "tiling")
    rows = _field(doc, "rows", list, "tiling")
    if mode not in (GRID, TORUS):
        raise InputError(f"tiling: mode must be 'grid' or 'torus', got {mode!r}")
    cells = []
    for row in rows:
        if not isinstance(row, list):
            raise InputError("tiling: each row must be a list of tile names")
        cells.append(tuple(tiles.index(name) for name in row))
    kind = TorusTiling if mode == TORUS else GridTiling
    return kind(width, height, tuple(cells))


def tiling_to_doc(t: GridTiling, tiles: TileSet) -> dict:
    return {
        "width": t.width,
        "height": t.height,
        "mode": TORUS if isinstance(t, TorusTiling) else GRID,
        "rows": [[tiles[k].name for k in row] for row in t.rows],
    }


def load_tiling(path: PathLike, tiles: TileSet) -> GridTiling:
    return tiling_from_doc(read_json(path), tiles)


def dump_tiling(t: GridTiling, tiles: TileSet) -> str:
    return _dump(tiling_to_doc(t, tiles))


# -- classical models ---------------------------------------------------------


def _arity_doc(doc: Any, where: str) -> dict[str, int]:
    arity = _field(doc, "arity", dict, where)
    for name, n in arity.items():
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise InputError(f"{where}: bad arity for {name!r}")
    return arity


def _tuples(raw: Any, where: str) -> list[tuple[int, ...]]:
    if not isinstance(raw, list) or not all(
        isinstance(t, list) and all(isinstance(a, int) and not isinstance(a, bool) for a in t) for t in raw
    ):
        raise InputError(f"{where}: extensions must be lists of integer lists")
    return [tuple(t) for t in raw]


def _sorted_ext(ext) -> list[list[int]]:
    return [list(t) for t in sorted(ext)]


def model_from_doc(doc: Any) -> FiniteModel:
    size = _field(doc, "size", int, "model")
    arity = _arity_doc(doc, "model")
    letters = doc.get("letters", {}) if isinstance(doc, dict) else {}
    if not isinstance(letters, dict):
        raise InputError("model: 'letters' must be an object")
    return FiniteModel(size, arity, {k: _tuples(v, f"model letter {k}") for k, v in letters.items()})


def model_to_doc(model: FiniteModel) -> dict:
    return {
        "size": model.size,
        "arity": dict(model.arity),
        "letters": {k: _sorted_ext(v) for k, v in model.relations.items()},
    }


def dump_model(model: FiniteModel) -> str:
    return _dump(model_to_doc(model))


# -- Kripke models ------------------------------------------------------------


def kripke_from_doc(doc: Any) -> KripkeModel:
    worlds = _field(doc, "worlds", list, "Kripke model")
    if not all(isinstance(w, str) for w in worlds):
        raise InputError("Kripke model: world names must be strings")
    pairs = _field(doc, "R", list, "Kripke model")
    if not all(isinstance(p, list) and len(p) == 2 for p in pairs):
        raise InputError("Kripke model: R must be a list of [from, to] pairs")
    root = doc.get("root")
    frame = KripkeFrame(tuple(worlds), frozenset((a, b) for a, b in pairs), root)
    domains_raw = _field(doc, "domains", dict, "Kripke model")
    domains = {}
    for w, elems in domains_raw.items():
        if not isinstance(elems, list) or not all(isinstance(a, int) and not isinstance(a, bool) for a in elems):
            raise InputError(f"Kripke model: domain of {w!r} must be a list of integers")
        domains[w] = frozenset(elems)
    arity = _arity_doc(doc, "Kripke model")
    letters = doc.get("letters", {})
    if not isinstance(letters, dict):
        raise InputError("Kripke model: 'letters' must be an object")
    interp = {}
    for w, per in letters.items():
        if not isinstance(per, dict):
            raise InputError(f"Kripke model: letters of {w!r} must be an object")
        interp[w] = {k: _tuples(v, f"letter {k} at {w}") for k, v in per.items()}
    return KripkeModel(AugmentedFrame(frame, domains), arity, interp)


def kripke_to_doc(model: KripkeModel) -> dict:
    frame = model.frame
    order = {w: n for n, w in enumerate(frame.worlds)}
    return {
        "worlds": list(frame.worlds),
        "root": frame.root,
        "R": [list(p) for p in sorted(frame.R, key=lambda p: (order[p[0]], order[p[1]]))],
        "domains": {w: sorted(model.domain(w)) for w in frame.worlds},
        "arity": dict(model.arity),
        "letters": {
            w: {k: _sorted_ext(v) for k, v in model.interp[w].items() if v} for w in frame.worlds
        },
    }


def dump_kripke(model: KripkeModel) -> str:
    return _dump(kripke_to_doc(model))


def load_any_model(path: PathLike) -> Union[FiniteModel, KripkeModel]:
    """Classical or Kripke model, told apart by the presence of ``worlds``."""
    doc = read_json(path)
    if isinstance(doc, dict) and "worlds" in doc:
        return kripke_from_doc(doc)
    return model_from_doc(doc)
