"""Finite classical models and Tarskian evaluation, including ``tc`` and ``comp``."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .errors import InputError, ModalOperatorError, UnboundVariableError
from .syntax import (
    And, Atom, Base, Bottom, Box, Comp, Eq, Exists, Forall, Formula, Iff, Imp, Not, Or,
    RelAtom, RelExpr, TC, is_modal, letter_arities, rel_letters,
)

Pair = tuple[int, int]
Env = Mapping[str, int]


@dataclass(frozen=True)
class Signature:
    """Predicate letters with their arities; equality is always available."""

    arities: Mapping[str, int]

    def __post_init__(self) -> None:
        for name, n in self.arities.items():
            if n not in (1, 2):
                raise InputError(f"letter {name} has arity {n}; only 1 and 2 are supported")

    @classmethod
    def of(cls, *formulas: Formula) -> "Signature":
        merged: dict[str, int] = {}
        for f in formulas:
            for name, n in letter_arities(f).items():
                if merged.setdefault(name, n) != n:
                    raise InputError(f"letter {name} used with arities {merged[name]} and {n}")
        return cls(dict(sorted(merged.items())))

    @property
    def letters(self) -> tuple[str, ...]:
        return tuple(sorted(self.arities))


@dataclass(frozen=True)
class FiniteModel:
    """Domain ``{0, ..., size-1}`` with an extension for every letter.

    Letters listed in ``arity`` but missing from ``relations`` have an empty
    extension.
    """

    size: int
    arity: Mapping[str, int]
    relations: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.size < 1:
            raise InputError("a model needs a non-empty domain")
        rels = {}
        for name, n in self.arity.items():
            if n < 1:
                raise InputError(f"letter {name} has arity {n}")
            ext = frozenset(tuple(t) for t in self.relations.get(name, ()))
            for t in ext:
                if len(t) != n or any(not 0 <= a < self.size for a in t):
                    raise InputError(f"tuple {t} invalid for {name}/{n} over domain {self.size}")
            rels[name] = ext
        unknown = set(self.relations) - set(self.arity)
        if unknown:
            raise InputError(f"extensions given for undeclared letters {sorted(unknown)}")
        object.__setattr__(self, "arity", dict(sorted(self.arity.items())))
        object.__setattr__(self, "relations", rels)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteModel):
            return NotImplemented
        return (self.size, self.arity, self.relations) == (other.size, other.arity, other.relations)

    def __hash__(self) -> int:
        return hash((self.size, tuple(sorted(self.relations.items()))))

    @property
    def domain(self) -> range:
        return range(self.size)

    def extension(self, letter: str) -> frozenset:
        try:
            return self.relations[letter]
        except KeyError:
            raise InputError(f"unknown letter {letter!r}") from None


def transitive_closure(rel: Iterable[Pair], d: Optional[int] = None) -> frozenset[Pair]:
    """Smallest transitive superset of ``rel`` (Warshall's saturation).

    ``d`` is the domain size; when omitted the elements mentioned in ``rel``
    are used. Elements need not be contiguous.
    """
    closure = set(rel)
    if d is None:
        elems = sorted({a for p in closure for a in p})
    else:
        elems = range(d)
    succ: dict[int, set[int]] = {a: set() for a in elems}
    for a, b in closure:
        succ.setdefault(a, set()).add(b)
        succ.setdefault(b, set())
    for k in list(succ):
        via_k = succ[k]
        for i in succ:
            if k in succ[i]:
                succ[i] |= via_k
    return frozenset((a, b) for a, bs in succ.items() for b in bs)


def compose(first: Iterable[Pair], second: Iterable[Pair]) -> frozenset[Pair]:
    """``{(x, y) : exists z. (x, z) in first and (z, y) in second}``."""
    after: dict[int, list[int]] = {}
    for z, y in second:
        after.setdefault(z, []).append(y)
    return frozenset((x, y) for x, z in first for y in after.get(z, ()))


def relation_extension(rel: RelExpr, base: Mapping[str, frozenset], d: Optional[int] = None) -> frozenset[Pair]:
    match rel:
        case Base(name):
            try:
                return base[name]
            except KeyError:
                raise InputError(f"unknown letter {name!r}") from None
        case TC(inner):
            return transitive_closure(relation_extension(inner, base, d), d)
        case Comp(a, b):
            return compose(relation_extension(a, base, d), relation_extension(b, base, d))
    raise TypeError(f"not a relation expression: {rel!r}")


class _Evaluator:
    def __init__(self, model: FiniteModel):
        self.model = model
        self.rel_cache: dict[RelExpr, frozenset[Pair]] = {}

    def rel(self, r: RelExpr) -> frozenset[Pair]:
        ext = self.rel_cache.get(r)
        if ext is None:
            for name in rel_letters(r):
                if self.model.arity.get(name) != 2:
                    raise InputError(f"{name} is not a binary letter of the model")
            ext = relation_extension(r, self.model.relations, self.model.size)
            self.rel_cache[r] = ext
        return ext

    def value(self, f: Formula, env: dict[str, int]) -> bool:
        match f:
            case Atom(letter, args):
                if self.model.arity.get(letter, len(args)) != len(args):
                    raise InputError(f"{letter} applied to {len(args)} argument(s)")
                return tuple(_lookup(env, a) for a in args) in self.model.extension(letter)
            case RelAtom(r, x, y):
                return (_lookup(env, x), _lookup(env, y)) in self.rel(r)
            case Eq(x, y):
                return _lookup(env, x) == _lookup(env, y)
            case Bottom():
                return False
            case Not(body):
                return not self.value(body, env)
            case And(args):
                return all(self.value(a, env) for a in args)
            case Or(args):
                return any(self.value(a, env) for a in args)
            case Imp(l, r):
                return not self.value(l, env) or self.value(r, env)
            case Iff(l, r):
                return self.value(l, env) == self.value(r, env)
            case Forall(v, body):
                return all(self.value(body, {**env, v: a}) for a in self.model.domain)
            case Exists(v, body):
                return any(self.value(body, {**env, v: a}) for a in self.model.domain)
            case Box():
                raise ModalOperatorError("modal operators have no classical meaning")
        raise TypeError(f"not a formula: {f!r}")


def _lookup(env: Mapping[str, int], var: str) -> int:
    try:
        return env[var]
    except KeyError:
        raise UnboundVariableError(f"variable {var!r} is not bound") from None


def evaluate(model: FiniteModel, f: Formula, env: Optional[Env] = None) -> bool:
    """Truth value of ``f`` in ``model`` under ``env`` (empty for sentences)."""
    if is_modal(f):
        raise ModalOperatorError("modal operators have no classical meaning")
    env = dict(env or {})
    for var, a in env.items():
        if not 0 <= a < model.size:
            raise InputError(f"{var} = {a} lies outside the domain")
    return _Evaluator(model).value(f, env)
