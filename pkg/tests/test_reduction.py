from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tilogic import (
    FiniteModel, InputError, TileSet, check_grid, evaluate, find_model, grid_axioms, model_to_tiling_walk,
    parse_formula, reduce_tiles, solve_torus, tc_extension_axioms, tiling_axioms, tiling_to_model, unfold_torus,
)
from tilogic.reduction import FO, FO_TC, tile_letter, uniqueness_body
from tilogic.syntax import FALSE, Forall, Imp, atom, distinct_variable_count, free_variables

from .test_tiles import TILE_SETS


def test_fo_names_and_order(alternating):
    out = reduce_tiles(alternating)
    assert out.names == ("grid-h", "grid-v", "grid-confluence", "uniqueness", "horizontal", "vertical")
    assert out.dialect == FO
    assert out.signature.arities == {"H": 2, "P0": 1, "P1": 1, "V": 2}
    tc = reduce_tiles(alternating, FO_TC)
    assert tc.names == (
        "grid-h", "grid-v", "confluence-comp", "uniqueness", "horizontal", "vertical", "condition-3", "irreflexivity",
    )
    with pytest.raises(InputError):
        reduce_tiles(alternating, FO, eliminate_z=True)
    with pytest.raises(InputError):
        reduce_tiles(alternating, "modal")
    with pytest.raises(KeyError):
        out["nope"]


def test_every_formula_is_a_sentence(alternating):
    for dialect in (FO, FO_TC):
        for _, f in reduce_tiles(alternating, dialect).formulas:
            assert free_variables(f) == set()


def test_grid_axioms_fail_on_empty_relations():
    m = FiniteModel(1, {"H": 2, "V": 2})
    assert not evaluate(m, grid_axioms()["grid-h"])
    assert not evaluate(m, grid_axioms()["grid-v"])
    assert evaluate(m, grid_axioms()["grid-confluence"])


def test_uniform_horizontal_disjunction_is_single_atom(uniform):
    horizontal = tiling_axioms(uniform)["horizontal"]
    assert horizontal == Forall("x", Imp(atom("P0", "x"), Forall("y", Imp(atom("H", "x", "y"), atom("P0", "y")))))
    assert uniqueness_body(uniform, "x") == atom("P0", "x")


def test_unmatched_colours_leave_empty_disjunction(incompatible):
    assert tiling_axioms(incompatible)["horizontal"] == Forall(
        "x", Imp(atom("P0", "x"), Forall("y", Imp(atom("H", "x", "y"), FALSE)))
    )
    assert find_model(reduce_tiles(incompatible).conjunction(), 4) is None


def test_tc_variants_hold_on_a_vertical_cycle():
    m = FiniteModel(3, {"V": 2, "H": 2, "P0": 1}, {"V": {(0, 1), (1, 2), (2, 0)}, "H": {(0, 0), (1, 1), (2, 2)}, "P0": {(0,), (1,), (2,)}})
    tiles = TileSet.from_edges([("a", "a", "a", "a")])
    for eliminate_z in (False, True):
        ext = tc_extension_axioms(tiles, eliminate_z)
        for name in ("condition-3", "irreflexivity", "confluence-comp"):
            assert evaluate(m, ext[name]), (eliminate_z, name)
    no_p0 = FiniteModel(3, m.arity, {**m.relations, "P0": set()})
    assert not evaluate(no_p0, tc_extension_axioms(tiles)["condition-3"])
    assert not evaluate(no_p0, tc_extension_axioms(tiles, True)["condition-3"])


def test_eliminate_z_is_two_variables(alternating):
    for _, f in tc_extension_axioms(alternating, eliminate_z=True).formulas:
        assert distinct_variable_count(f) <= 2
    assert distinct_variable_count(tc_extension_axioms(alternating)["condition-3"]) == 3


def test_condition_3_uses_distinguished_tile():
    tiles = TileSet.from_edges([("a", "a", "a", "a"), ("b", "b", "b", "b")], distinguished=1)
    text = str(tc_extension_axioms(tiles)["condition-3"])
    assert tile_letter(1) in text and tile_letter(0) not in text


def test_mixing_dialects_refused(alternating):
    with pytest.raises(InputError):
        grid_axioms(FO) + tc_extension_axioms(alternating)
    assert len(grid_axioms() + tiling_axioms(alternating)) == 6


def test_tiling_to_model_alternating(alternating):
    torus = solve_torus(alternating, 2, 1).witness
    m = tiling_to_model(torus, alternating)
    assert m.size == 2
    assert m.extension("H") == {(0, 1), (1, 0)}
    assert m.extension("V") == {(0, 0), (1, 1)}
    assert m.extension("P0") == {(0,)} and m.extension("P1") == {(1,)}
    assert evaluate(m, reduce_tiles(alternating).conjunction())


def test_tiling_to_model_rejects_broken_torus(alternating):
    grid = solve_torus(alternating, 2, 1).witness
    from tilogic.tiles import TorusTiling

    bad = TorusTiling(3, 1, ((0, 1, 0),))
    assert check_grid(bad, alternating).ok
    with pytest.raises(InputError):
        tiling_to_model(bad, alternating)
    assert grid.width == 2


def test_walk_errors(alternating):
    torus = solve_torus(alternating, 2, 1).witness
    m = tiling_to_model(torus, alternating)
    with pytest.raises(InputError):
        model_to_tiling_walk(m, alternating, 5, 2)
    with pytest.raises(InputError):
        model_to_tiling_walk(m, alternating, 0, 0)
    broken = FiniteModel(2, m.arity, {**m.relations, "H": {(0, 0), (1, 1)}})
    with pytest.raises(InputError, match="horizontal"):
        model_to_tiling_walk(broken, alternating, 0, 2)


def test_walk_handles_non_functional_successors(uniform):
    # two H-successors of 0; only one of them closes a square with V
    m = FiniteModel(
        3,
        {"H": 2, "V": 2, "P0": 1},
        {
            "H": {(0, 1), (0, 2), (1, 1), (2, 2), (1, 0), (2, 0)},
            "V": {(0, 0), (1, 2), (2, 1)},
            "P0": {(0,), (1,), (2,)},
        },
    )
    assert evaluate(m, reduce_tiles(uniform).conjunction())
    t = model_to_tiling_walk(m, uniform, 0, 3)
    assert t.width == t.height == 3


@settings(max_examples=40, deadline=None)
@given(TILE_SETS, st.integers(1, 3), st.integers(1, 3))
def test_torus_models_satisfy_fo_and_walk_unfolds(tiles, w, h):
    outcome = solve_torus(tiles, w, h)
    if not outcome.found:
        return
    m = tiling_to_model(outcome.witness, tiles)
    for name, f in reduce_tiles(tiles).formulas:
        assert evaluate(m, f), name
    steps = 2 * max(w, h)
    assert model_to_tiling_walk(m, tiles, 0, steps) == unfold_torus(outcome.witness, steps, steps)


def test_find_model_then_walk(alternating):
    m = find_model(reduce_tiles(alternating).conjunction(), 4)
    assert m is not None and m.size == 2
    t = model_to_tiling_walk(m, alternating, 0, 3)
    assert check_grid(t, alternating).ok


def test_parsed_golden_matches_generator(alternating):
    from tilogic.syntax import format_formulas, parse_formulas

    text = format_formulas(reduce_tiles(alternating).formulas)
    assert tuple(parse_formulas(text)) == reduce_tiles(alternating).formulas
    assert parse_formula("(forall x (P0 x))") == Forall("x", atom("P0", "x"))
