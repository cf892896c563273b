"""Command-line entry point.

Exit codes are uniform across subcommands: 0 positive answer, 1 negative
answer, 2 input error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import fileio
from .errors import InputError, ResourceLimitError
from .finder import find_model
from .fol import FiniteModel, evaluate
from .modal import modal_tiling_axioms, mevaluate
from .reduction import DIALECTS, FO_TC, MODAL, model_to_tiling_walk, reduce_tiles, tiling_to_model
from .render import render_tiling
from .solver import solve_grid, solve_torus
from .syntax import conj, format_formulas, free_variables, is_modal, parse_formulas
from .tiles import TorusTiling, check_grid, check_torus, count_t0_column

EXIT_YES = 0
EXIT_NO = 1
EXIT_INPUT = 2
EXIT_RESOURCE = 3


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _positive(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {raw!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _natural(raw: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {raw!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _read_formulas(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    named = parse_formulas(text)
    if not named:
        raise InputError(f"{path}: no formulas")
    sentence = conj(f for _, f in named)
    free = free_variables(sentence)
    if free:
        raise InputError(f"{path}: formula has free variables {sorted(free)}")
    return sentence


def cmd_solve(args) -> int:
    tiles = fileio.load_tileset(args.input)
    solve = solve_torus if args.mode == fileio.TORUS else solve_grid
    outcome = solve(tiles, args.width, args.height)
    print(f"{outcome.status} ({args.width}x{args.height} {args.mode}, nodes explored: {outcome.nodes_explored})")
    if not outcome.found:
        return EXIT_NO
    witness = outcome.witness
    if args.output:
        _emit(fileio.dump_tiling(witness, tiles), args.output)
    if args.model_output:
        if not isinstance(witness, TorusTiling):
            raise InputError("--model-output requires --mode torus")
        _emit(fileio.dump_model(tiling_to_model(witness, tiles)), args.model_output)
    if args.render:
        sys.stdout.write(render_tiling(witness, tiles))
    return EXIT_YES


def cmd_check(args) -> int:
    tiles = fileio.load_tileset(args.tiles)
    tiling = fileio.load_tiling(args.input, tiles)
    report = check_torus(tiling, tiles) if isinstance(tiling, TorusTiling) else check_grid(tiling, tiles)
    for v in report:
        print(f"({v.i},{v.j}) {v.axis}: expected {v.expected}, found {v.found}")
    print(f"violations: {len(report)}")
    print(f"{tiles[tiles.distinguished].name} in column 0: {count_t0_column(tiling, tiles)}")
    return EXIT_YES if report.ok else EXIT_NO


def cmd_reduce(args) -> int:
    if args.eliminate_z and args.dialect != FO_TC:
        raise InputError("--eliminate-z only applies to --dialect fo-tc")
    if args.v_two_var and args.dialect != MODAL:
        raise InputError("--v-two-var only applies to --dialect modal")
    tiles = fileio.load_tileset(args.input)
    if args.dialect == MODAL:
        out = modal_tiling_axioms(tiles, two_var_v=args.v_two_var)
    else:
        out = reduce_tiles(tiles, args.dialect, eliminate_z=args.eliminate_z)
    _emit(format_formulas(out.formulas), args.output)
    return EXIT_YES


def cmd_eval(args) -> int:
    sentence = _read_formulas(args.input)
    model = fileio.load_any_model(args.model)
    if isinstance(model, FiniteModel):
        if is_modal(sentence):
            raise InputError("modal formula given with a classical model")
        holds = evaluate(model, sentence)
    else:
        world = args.world or model.frame.root
        holds = mevaluate(model, world, sentence)
    print("true" if holds else "false")
    return EXIT_YES if holds else EXIT_NO


def cmd_find_model(args) -> int:
    sentence = _read_formulas(args.input)
    if is_modal(sentence):
        raise InputError("find-model handles classical formulas only")
    model = find_model(sentence, args.max_size, budget=args.budget)
    if model is None:
        print(f"no model with at most {args.max_size} elements")
        return EXIT_NO
    _emit(fileio.dump_model(model), args.output)
    return EXIT_YES


def cmd_render(args) -> int:
    tiles = fileio.load_tileset(args.tiles)
    if args.model:
        model = fileio.load_any_model(args.model)
        if not isinstance(model, FiniteModel):
            raise InputError("render extracts tilings from classical models only")
        tiling = model_to_tiling_walk(model, tiles, args.start, args.steps)
        if args.output:
            _emit(fileio.dump_tiling(tiling, tiles), args.output)
    elif args.input:
        tiling = fileio.load_tiling(args.input, tiles)
    else:
        raise InputError("render needs --input TILING or --model MODEL")
    sys.stdout.write(render_tiling(tiling, tiles))
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tilogic", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="search for a finite grid or torus tiling")
    p.add_argument("--input", required=True, help="tile-set file")
    p.add_argument("--width", type=_positive, default=1)
    p.add_argument("--height", type=_positive, default=1)
    p.add_argument("--mode", choices=(fileio.GRID, fileio.TORUS), default=fileio.GRID)
    p.add_argument("--output", help="write the witness tiling here")
    p.add_argument("--model-output", help="write the witness's intended model here (torus only)")
    p.add_argument("--render", action="store_true", help="draw the witness")
    p.set_defaults(run=cmd_solve)

    p = sub.add_parser("check", help="check a tiling for edge mismatches")
    p.add_argument("--input", required=True, help="tiling file")
    p.add_argument("--tiles", required=True, help="tile-set file")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("reduce", help="emit the formula set for a tile set")
    p.add_argument("--input", required=True, help="tile-set file")
    p.add_argument("--dialect", choices=DIALECTS, default="fo")
    p.add_argument("--eliminate-z", action="store_true", help="fo-tc: reuse x instead of z")
    p.add_argument("--v-two-var", action="store_true", help="modal: two-variable definition of V")
    p.add_argument("--output")
    p.set_defaults(run=cmd_reduce)

    p = sub.add_parser("eval", help="evaluate a formula file in a model")
    p.add_argument("--input", required=True, help="formula file (all formulas are conjoined)")
    p.add_argument("--model", required=True, help="classical or Kripke model file")
    p.add_argument("--world", help="Kripke world to evaluate at (default: root)")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("find-model", help="search for a small finite model")
    p.add_argument("--input", required=True, help="formula file (all formulas are conjoined)")
    p.add_argument("--max-size", type=_positive, default=4)
    p.add_argument("--budget", type=_positive, help="search-node budget (default: $TILOGIC_BUDGET or 2^25)")
    p.add_argument("--output")
    p.set_defaults(run=cmd_find_model)

    p = sub.add_parser("render", help="draw a tiling, or one extracted from a model")
    p.add_argument("--input", help="tiling file")
    p.add_argument("--model", help="classical model to walk instead of a tiling file")
    p.add_argument("--tiles", required=True, help="tile-set file")
    p.add_argument("--start", type=_natural, default=0)
    p.add_argument("--steps", type=_positive, default=3)
    p.add_argument("--output", help="write the extracted tiling here")
    p.set_defaults(run=cmd_render)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
