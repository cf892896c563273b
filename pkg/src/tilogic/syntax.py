"""Formula syntax shared by the classical and modal kernels.

Terms are variables only. Binary letters may also appear inside relation
expressions built with transitive closure (``tc``) and composition
(``comp``). The diamond is not a node of its own: ``dia(f)`` builds
``Not(Box(Not(f)))`` and the printer folds that shape back into ``(dia f)``.

Text format (parenthesised prefix)::

    false  true
    (not f)  (and f ...)  (or f ...)  (imp f g)  (iff f g)
    (forall x f)  (exists x f)  (box f)  (dia f)
    (eq x y)  (LETTER x ...)  (REL x y)
    REL := LETTER | (tc REL) | (comp REL REL)

``;`` starts a comment running to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .errors import InputError

# -- relation expressions ---------------------------------------------------


@dataclass(frozen=True)
class Base:
    name: str


@dataclass(frozen=True)
class TC:
    rel: "RelExpr"


@dataclass(frozen=True)
class Comp:
    """``Comp(r, s)(x, y)`` holds iff some z has ``r(x, z)`` and ``s(z, y)``."""

    first: "RelExpr"
    second: "RelExpr"


RelExpr = Union[Base, TC, Comp]

# -- formulas ---------------------------------------------------------------


@dataclass(frozen=True)
class Atom:
    letter: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class RelAtom:
    rel: RelExpr
    left: str
    right: str


@dataclass(frozen=True)
class Eq:
    left: str
    right: str


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class And:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    args: tuple["Formula", ...]


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Box:
    body: "Formula"


Formula = Union[Atom, RelAtom, Eq, Bottom, Not, And, Or, Imp, Iff, Forall, Exists, Box]

FALSE = Bottom()
TRUE = Not(FALSE)


def atom(letter: str, *args: str) -> Atom:
    return Atom(letter, tuple(args))


def dia(body: Formula) -> Formula:
    return Not(Box(Not(body)))


def conj(parts: Iterable[Formula]) -> Formula:
    """Conjunction that collapses the empty case to ``true`` and singletons to themselves."""
    parts = tuple(parts)
    if not parts:
        return TRUE
    if len(parts) == 1:
        return parts[0]
    return And(parts)


def disj(parts: Iterable[Formula]) -> Formula:
    """Disjunction; an empty one is ``false`` so unsatisfiable schemas stay unsatisfiable."""
    parts = tuple(parts)
    if not parts:
        return FALSE
    if len(parts) == 1:
        return parts[0]
    return Or(parts)


def forall(vars_: str, body: Formula) -> Formula:
    """``forall("x y", f)`` is ``Forall(x, Forall(y, f))``."""
    for v in reversed(vars_.split()):
        body = Forall(v, body)
    return body


def exists(vars_: str, body: Formula) -> Formula:
    for v in reversed(vars_.split()):
        body = Exists(v, body)
    return body


# -- traversal --------------------------------------------------------------


def subformulas(f: Formula) -> Iterator[Formula]:
    yield f
    match f:
        case Not(body) | Box(body) | Forall(_, body) | Exists(_, body):
            yield from subformulas(body)
        case And(args) | Or(args):
            for a in args:
                yield from subformulas(a)
        case Imp(l, r) | Iff(l, r):
            yield from subformulas(l)
            yield from subformulas(r)


def rel_letters(r: RelExpr) -> Iterator[str]:
    match r:
        case Base(name):
            yield name
        case TC(inner):
            yield from rel_letters(inner)
        case Comp(a, b):
            yield from rel_letters(a)
            yield from rel_letters(b)


def variables(f: Formula) -> set[str]:
    """Every variable name occurring in ``f``, free or bound."""
    out: set[str] = set()
    for g in subformulas(f):
        match g:
            case Atom(_, args):
                out.update(args)
            case RelAtom(_, x, y) | Eq(x, y):
                out.update((x, y))
            case Forall(v, _) | Exists(v, _):
                out.add(v)
    return out


def distinct_variable_count(f: Formula) -> int:
    return len(variables(f))


def free_variables(f: Formula) -> set[str]:
    match f:
        case Atom(_, args):
            return set(args)
        case RelAtom(_, x, y) | Eq(x, y):
            return {x, y}
        case Bottom():
            return set()
        case Not(body) | Box(body):
            return free_variables(body)
        case And(args) | Or(args):
            return set().union(*(free_variables(a) for a in args))
        case Imp(l, r) | Iff(l, r):
            return free_variables(l) | free_variables(r)
        case Forall(v, body) | Exists(v, body):
            return free_variables(body) - {v}
    raise TypeError(f"not a formula: {f!r}")


def is_modal(f: Formula) -> bool:
    return any(isinstance(g, Box) for g in subformulas(f))


def letter_arities(f: Formula) -> dict[str, int]:
    """Map each predicate letter used in ``f`` to its arity; inconsistent use is an error."""
    found: dict[str, int] = {}

    def note(letter: str, arity: int) -> None:
        if found.setdefault(letter, arity) != arity:
            raise InputError(f"letter {letter} used with arities {found[letter]} and {arity}")

    for g in subformulas(f):
        match g:
            case Atom(letter, args):
                note(letter, len(args))
            case RelAtom(rel, _, _):
                for name in rel_letters(rel):
                    note(name, 2)
    return found


# -- printing ---------------------------------------------------------------


def rel_to_text(r: RelExpr) -> str:
    match r:
        case Base(name):
            return name
        case TC(inner):
            return f"(tc {rel_to_text(inner)})"
        case Comp(a, b):
            return f"(comp {rel_to_text(a)} {rel_to_text(b)})"
    raise TypeError(f"not a relation expression: {r!r}")


def to_text(f: Formula) -> str:
    match f:
        case Bottom():
            return "false"
        case Atom(letter, args):
            return "(" + " ".join((letter,) + args) + ")"
        case RelAtom(rel, x, y):
            return f"({rel_to_text(rel)} {x} {y})"
        case Eq(x, y):
            return f"(eq {x} {y})"
        case Not(Box(Not(body))):
            return f"(dia {to_text(body)})"
        case Not(body):
            return f"(not {to_text(body)})"
        case And(args):
            return "(" + " ".join(["and"] + [to_text(a) for a in args]) + ")"
        case Or(args):
            return "(" + " ".join(["or"] + [to_text(a) for a in args]) + ")"
        case Imp(l, r):
            return f"(imp {to_text(l)} {to_text(r)})"
        case Iff(l, r):
            return f"(iff {to_text(l)} {to_text(r)})"
        case Forall(v, body):
            return f"(forall {v} {to_text(body)})"
        case Exists(v, body):
            return f"(exists {v} {to_text(body)})"
        case Box(body):
            return f"(box {to_text(body)})"
    raise TypeError(f"not a formula: {f!r}")


# -- parsing ----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(;[^\n]*)|(\()|(\))|([^\s();]+))")
_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_']*$")
KEYWORDS = frozenset(
    "false true not and or imp iff forall exists box dia eq tc comp".split()
)


def _tokens(text: str) -> list[str]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise InputError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        if m.group(1):
            continue
        tok = m.group(2) or m.group(3) or m.group(4)
        if tok:
            out.append(tok)
    return out


def _read(tokens: list[str], pos: int):
    """Read one s-expression; atoms are strings, lists are Python lists."""
    if pos >= len(tokens):
        raise InputError("unexpected end of input")
    tok = tokens[pos]
    if tok == ")":
        raise InputError("unexpected ')'")
    if tok != "(":
        return tok, pos + 1
    items = []
    pos += 1
    while True:
        if pos >= len(tokens):
            raise InputError("missing ')'")
        if tokens[pos] == ")":
            return items, pos + 1
        item, pos = _read(tokens, pos)
        items.append(item)


def _name(tok, what: str) -> str:
    if not isinstance(tok, str) or tok in KEYWORDS or not _NAME.match(tok):
        raise InputError(f"expected a {what} name, got {tok!r}")
    return tok


def _rel(sx) -> RelExpr:
    if isinstance(sx, str):
        return Base(_name(sx, "relation"))
    if sx and sx[0] == "tc" and len(sx) == 2:
        return TC(_rel(sx[1]))
    if sx and sx[0] == "comp" and len(sx) == 3:
        return Comp(_rel(sx[1]), _rel(sx[2]))
    raise InputError(f"malformed relation expression {sx!r}")


def _arity(sx, n: int, head: str) -> None:
    if len(sx) != n:
        raise InputError(f"'{head}' expects {n - 1} argument(s), got {len(sx) - 1}")


def _formula(sx) -> Formula:
    if isinstance(sx, str):
        if sx == "false":
            return FALSE
        if sx == "true":
            return TRUE
        raise InputError(f"unexpected symbol {sx!r}")
    if not sx:
        raise InputError("empty list is not a formula")
    head = sx[0]
    if isinstance(head, list):
        _arity(sx, 3, "relation")
        return RelAtom(_rel(head), _name(sx[1], "variable"), _name(sx[2], "variable"))
    match head:
        case "not":
            _arity(sx, 2, head)
            return Not(_formula(sx[1]))
        case "and":
            return And(tuple(_formula(a) for a in sx[1:]))
        case "or":
            return Or(tuple(_formula(a) for a in sx[1:]))
        case "imp":
            _arity(sx, 3, head)
            return Imp(_formula(sx[1]), _formula(sx[2]))
        case "iff":
            _arity(sx, 3, head)
            return Iff(_formula(sx[1]), _formula(sx[2]))
        case "forall" | "exists":
            _arity(sx, 3, head)
            q = Forall if head == "forall" else Exists
            return q(_name(sx[1], "variable"), _formula(sx[2]))
        case "box":
            _arity(sx, 2, head)
            return Box(_formula(sx[1]))
        case "dia":
            _arity(sx, 2, head)
            return dia(_formula(sx[1]))
        case "eq":
            _arity(sx, 3, head)
            return Eq(_name(sx[1], "variable"), _name(sx[2], "variable"))
    letter = _name(head, "predicate")
    return Atom(letter, tuple(_name(a, "variable") for a in sx[1:]))


def parse_formula(text: str) -> Formula:
    """Parse exactly one formula."""
    tokens = _tokens(text)
    sx, pos = _read(tokens, 0)
    if pos != len(tokens):
        raise InputError("trailing input after formula")
    return _formula(sx)


def parse_formulas(text: str) -> list[tuple[str, Formula]]:
    """Parse a formula file: any number of formulas, each optionally preceded by a
    ``; name`` comment line. Unnamed formulas are called ``f1, f2, ...``."""
    out: list[tuple[str, Formula]] = []
    pending: str | None = None
    buf: list[str] = []
    depth = 0
    for line in text.splitlines():
        stripped = line.strip()
        if depth == 0 and stripped.startswith(";"):
            pending = stripped.lstrip(";").strip() or None
            continue
        if not stripped:
            continue
        buf.append(line)
        for tok in _tokens(line):
            depth += tok == "("
            depth -= tok == ")"
        if depth < 0:
            raise InputError("unbalanced ')'")
        if depth == 0:
            tokens = _tokens("\n".join(buf))
            pos = 0
            while pos < len(tokens):
                sx, pos = _read(tokens, pos)
                out.append((pending or f"f{len(out) + 1}", _formula(sx)))
                pending = None
            buf = []
    if depth != 0:
        raise InputError("missing ')' at end of formula file")
    return out


def format_formulas(named: Iterable[tuple[str, Formula]]) -> str:
    return "".join(f"; {name}\n{to_text(f)}\n" for name, f in named)
