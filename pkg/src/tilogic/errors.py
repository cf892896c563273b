"""Exception hierarchy shared by every kernel and the CLI."""

from __future__ import annotations

import os


class TilogicError(Exception):
    """Base class for all workbench errors."""


class InputError(TilogicError, ValueError):
    """Malformed or inconsistent input (bad index, unknown letter, parse failure...)."""


class UnboundVariableError(InputError):
    pass


class ModalOperatorError(InputError):
    """A modal operator reached the classical evaluator."""


class ResourceLimitError(TilogicError):
    """A configured cell limit or enumeration budget was exceeded.

    This is never a semantic answer: callers must not read it as "no tiling"
    or "no model".
    """


DEFAULT_BUDGET = 2**25
BUDGET_ENV = "TILOGIC_BUDGET"


def default_budget(fallback: int = DEFAULT_BUDGET) -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None or raw.strip() == "":
        return fallback
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise InputError(f"{BUDGET_ENV} must be positive, got {value}")
    return value
