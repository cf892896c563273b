"""Finite domino tilings and their first-order and modal encodings."""

from .errors import InputError, ModalOperatorError, ResourceLimitError, TilogicError, UnboundVariableError
from .finder import find_model
from .fol import FiniteModel, Signature, compose, evaluate, transitive_closure
from .modal import (
    AugmentedFrame, KripkeFrame, KripkeModel, Verdict, check_consequence, intended_model,
    make_noetherian_chain, mevaluate, modal_tiling_axioms,
)
from .reduction import (
    ReductionOutput, grid_axioms, model_to_tiling_walk, reduce_tiles, tc_extension_axioms,
    tiling_axioms, tiling_to_model,
)
from .solver import SolveOutcome, count_grid, solve_grid, solve_torus, unfold_torus
from .syntax import distinct_variable_count, parse_formula, parse_formulas, to_text
from .tiles import (
    GridTiling, TileSet, TileType, TorusTiling, Violation, ViolationReport, check_grid,
    check_torus, count_t0_column,
)

__version__ = "0.1.0"
