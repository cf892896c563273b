"""Bounded finite-model search for closed classical sentences.

Domain sizes are tried in increasing order. For a fixed size every ground
atom gets a position in a fixed order, sorted by (arity, argument tuple,
letter), and atoms are assigned depth first with ``False`` tried before
``True``. The first complete assignment satisfying the sentence is therefore
the lexicographically least model of the smallest size.

Pruning never changes that answer: the sentence is split into ground
instances along top-level conjunctions and universal quantifiers, and after
each assignment the instances mentioning the new atom are evaluated in
Kleene's three-valued logic. A branch is cut only when some instance is
already false under every completion.
"""

from __future__ import annotations

from itertools import product
from typing import Optional

from .errors import InputError, ModalOperatorError, ResourceLimitError, default_budget
from .fol import FiniteModel, Signature, compose, evaluate, transitive_closure
from .syntax import (
    And, Atom, Base, Bottom, Comp, Eq, Exists, Forall, Formula, Iff, Imp, Not, Or, RelAtom,
    RelExpr, TC, free_variables, is_modal, rel_letters,
)

MAX_DOMAIN = 6

Ground = dict[tuple[str, tuple[int, ...]], int]


def _atom_order(sig: Signature, d: int) -> list[tuple[str, tuple[int, ...]]]:
    atoms = [
        (letter, args)
        for letter, n in sig.arities.items()
        for args in product(range(d), repeat=n)
    ]
    atoms.sort(key=lambda a: (len(a[1]), a[1], a[0]))
    return atoms


def _split(f: Formula, env: dict[str, int], d: int, out: list) -> None:
    match f:
        case And(args):
            for a in args:
                _split(a, env, d, out)
        case Forall(v, body):
            for a in range(d):
                _split(body, {**env, v: a}, d, out)
        case _:
            out.append((f, env))


def _deps(f: Formula, env: dict[str, Optional[int]], ids: Ground, by_letter: dict, out: set) -> None:
    """Collect every ground atom the instance could read."""
    match f:
        case Atom(letter, args):
            pattern = [env.get(a) for a in args]
            for args_, k in by_letter.get(letter, ()):
                if all(p is None or p == a for p, a in zip(pattern, args_)):
                    out.add(k)
        case RelAtom(Base(name), x, y):
            _deps(Atom(name, (x, y)), env, ids, by_letter, out)
        case RelAtom(rel, _, _):
            for name in rel_letters(rel):
                out.update(k for _, k in by_letter.get(name, ()))
        case Eq() | Bottom():
            pass
        case Not(body):
            _deps(body, env, ids, by_letter, out)
        case And(args) | Or(args):
            for a in args:
                _deps(a, env, ids, by_letter, out)
        case Imp(l, r) | Iff(l, r):
            _deps(l, env, ids, by_letter, out)
            _deps(r, env, ids, by_letter, out)
        case Forall(v, body) | Exists(v, body):
            _deps(body, {**env, v: None}, ids, by_letter, out)
        case _:
            raise TypeError(f"not a classical formula: {f!r}")


class _Kleene:
    """Three-valued evaluation over a partial assignment (``None`` = unknown)."""

    def __init__(self, d: int, ids: Ground, vals: list):
        self.d = d
        self.ids = ids
        self.vals = vals

    def rel(self, r: RelExpr, cache: dict) -> tuple[frozenset, frozenset]:
        """(pairs certainly in r, pairs possibly in r)."""
        hit = cache.get(r)
        if hit is not None:
            return hit
        match r:
            case Base(name):
                sure, maybe = set(), set()
                for x in range(self.d):
                    for y in range(self.d):
                        v = self.vals[self.ids[(name, (x, y))]]
                        if v is not False:
                            maybe.add((x, y))
                            if v:
                                sure.add((x, y))
                hit = (frozenset(sure), frozenset(maybe))
            case TC(inner):
                sure, maybe = self.rel(inner, cache)
                hit = (transitive_closure(sure, self.d), transitive_closure(maybe, self.d))
            case Comp(a, b):
                sa, ma = self.rel(a, cache)
                sb, mb = self.rel(b, cache)
                hit = (compose(sa, sb), compose(ma, mb))
        cache[r] = hit
        return hit

    def value(self, f: Formula, env: dict[str, int], cache: dict) -> Optional[bool]:
        match f:
            case Atom(letter, args):
                return self.vals[self.ids[(letter, tuple(env[a] for a in args))]]
            case RelAtom(Base(name), x, y):
                return self.vals[self.ids[(name, (env[x], env[y]))]]
            case RelAtom(r, x, y):
                sure, maybe = self.rel(r, cache)
                pair = (env[x], env[y])
                if pair in sure:
                    return True
                return None if pair in maybe else False
            case Eq(x, y):
                return env[x] == env[y]
            case Bottom():
                return False
            case Not(body):
                v = self.value(body, env, cache)
                return None if v is None else not v
            case And(args):
                return self._all((self.value(a, env, cache) for a in args))
            case Or(args):
                return self._any((self.value(a, env, cache) for a in args))
            case Imp(l, r):
                v = self.value(l, env, cache)
                if v is False:
                    return True
                w = self.value(r, env, cache)
                if w is True:
                    return True
                return None if v is None or w is None else False
            case Iff(l, r):
                v = self.value(l, env, cache)
                if v is None:
                    return None
                w = self.value(r, env, cache)
                return None if w is None else v == w
            case Forall(v, body):
                return self._all(self.value(body, {**env, v: a}, cache) for a in range(self.d))
            case Exists(v, body):
                return self._any(self.value(body, {**env, v: a}, cache) for a in range(self.d))
        raise TypeError(f"not a classical formula: {f!r}")

    @staticmethod
    def _all(values) -> Optional[bool]:
        unknown = False
        for v in values:
            if v is False:
                return False
            if v is None:
                unknown = True
        return None if unknown else True

    @staticmethod
    def _any(values) -> Optional[bool]:
        unknown = False
        for v in values:
            if v is True:
                return True
            if v is None:
                unknown = True
        return None if unknown else False


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise ResourceLimitError(f"model search exceeded its budget of {self.limit} nodes")


def _search(f: Formula, sig: Signature, d: int, budget: _Budget) -> Optional[FiniteModel]:
    atoms = _atom_order(sig, d)
    ids: Ground = {a: k for k, a in enumerate(atoms)}
    by_letter: dict[str, list] = {}
    for (letter, args), k in ids.items():
        by_letter.setdefault(letter, []).append((args, k))

    instances: list = []
    _split(f, {}, d, instances)
    watch: list[list[int]] = [[] for _ in atoms]
    vals: list[Optional[bool]] = [None] * len(atoms)
    kleene = _Kleene(d, ids, vals)

    for c, (g, env) in enumerate(instances):
        deps: set[int] = set()
        _deps(g, dict(env), ids, by_letter, deps)
        for k in deps:
            watch[k].append(c)
        if kleene.value(g, env, {}) is False:
            return None

    n = len(atoms)
    choice = [-1] * n
    pos = 0
    while 0 <= pos < n:
        c = choice[pos] + 1
        if c > 1:
            choice[pos] = -1
            vals[pos] = None
            pos -= 1
            continue
        choice[pos] = c
        vals[pos] = bool(c)
        budget.spend()
        if all(kleene.value(*instances[i], {}) is not False for i in watch[pos]):
            pos += 1
    if pos < 0:
        return None

    relations: dict[str, set] = {letter: set() for letter in sig.arities}
    for (letter, args), v in zip(atoms, vals):
        if v:
            relations[letter].add(args)
    model = FiniteModel(d, dict(sig.arities), {k: frozenset(v) for k, v in relations.items()})
    if not evaluate(model, f):
        raise AssertionError("model search produced a non-model; pruning is unsound")
    return model


def find_model(f: Formula, max_d: int, budget: Optional[int] = None) -> Optional[FiniteModel]:
    """Smallest, then lexicographically least, model of the sentence ``f`` with at
    most ``max_d`` elements, or ``None`` when there is none up to that size.

    ``budget`` caps the number of search nodes (atom assignments) summed over
    all sizes tried; running out raises :class:`ResourceLimitError`.
    """
    if is_modal(f):
        raise ModalOperatorError("find_model handles classical sentences only")
    free = free_variables(f)
    if free:
        raise InputError(f"sentence has free variables {sorted(free)}")
    if not 1 <= max_d <= MAX_DOMAIN:
        raise InputError(f"max domain size must be between 1 and {MAX_DOMAIN}, got {max_d}")
    counter = _Budget(default_budget() if budget is None else budget)
    sig = Signature.of(f)
    for d in range(1, max_d + 1):
        model = _search(f, sig, d, counter)
        if model is not None:
            return model
    return None
