"""Kripke semantics with expanding domains, finite chains approximating 1 + omega*,
and the modal formula generator for Noetherian-chain frames.

Letters: binary ``P`` is the strict order on individuals, monadic ``L``
labels worlds with individuals, and ``P<k>`` are the tile letters.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Optional, Sequence

from .errors import InputError, ResourceLimitError, UnboundVariableError, default_budget
from .fol import Signature, relation_extension
from .reduction import MODAL, ReductionOutput, tile_letter, uniqueness_body
from .syntax import (
    And, Atom, Bottom, Box, Eq, Exists, FALSE, Forall, Formula, Iff, Imp, Not, Or, RelAtom,
    RelExpr, atom, conj, dia, disj, exists, forall, letter_arities, rel_letters,
)
from .tiles import TileSet

World = str


@dataclass(frozen=True)
class KripkeFrame:
    worlds: tuple[World, ...]
    R: frozenset[tuple[World, World]]
    root: Optional[World] = None

    def __post_init__(self) -> None:
        worlds = tuple(self.worlds)
        if not worlds:
            raise InputError("a frame needs at least one world")
        if len(set(worlds)) != len(worlds):
            raise InputError(f"duplicate worlds in {list(worlds)}")
        pairs = frozenset((a, b) for a, b in self.R)
        bad = [p for p in pairs if p[0] not in worlds or p[1] not in worlds]
        if bad:
            raise InputError(f"accessibility pairs mention unknown worlds: {sorted(bad)}")
        root = worlds[0] if self.root is None else self.root
        if root not in worlds:
            raise InputError(f"root {root!r} is not a world")
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "R", pairs)
        object.__setattr__(self, "root", root)
        order = {w: n for n, w in enumerate(worlds)}
        succ: dict[World, tuple[World, ...]] = {
            w: tuple(sorted((b for a, b in pairs if a == w), key=order.__getitem__)) for w in worlds
        }
        object.__setattr__(self, "_succ", succ)

    def successors(self, w: World) -> tuple[World, ...]:
        return self._succ[w]

    def is_irreflexive(self) -> bool:
        return all(a != b for a, b in self.R)

    def is_transitive(self) -> bool:
        return all((a, c) in self.R for a, b in self.R for c in self.successors(b))

    def has_cycle(self) -> bool:
        state: dict[World, int] = {}

        def visit(w: World) -> bool:
            state[w] = 1
            for v in self.successors(w):
                if state.get(v) == 1 or (v not in state and visit(v)):
                    return True
            state[w] = 2
            return False

        return any(w not in state and visit(w) for w in self.worlds)


@dataclass(frozen=True)
class AugmentedFrame:
    """A frame with non-empty domains, expanding along R."""

    frame: KripkeFrame
    domains: Mapping[World, frozenset[int]]

    def __post_init__(self) -> None:
        doms = {}
        for w in self.frame.worlds:
            if w not in self.domains:
                raise InputError(f"world {w!r} has no domain")
            d = frozenset(self.domains[w])
            if not d:
                raise InputError(f"world {w!r} has an empty domain")
            doms[w] = d
        extra = set(self.domains) - set(self.frame.worlds)
        if extra:
            raise InputError(f"domains given for unknown worlds {sorted(extra)}")
        for a, b in self.frame.R:
            if not doms[a] <= doms[b]:
                raise InputError(f"domains must expand along R: D({a}) is not a subset of D({b})")
        object.__setattr__(self, "domains", doms)

    @classmethod
    def constant(cls, frame: KripkeFrame, size: int) -> "AugmentedFrame":
        d = frozenset(range(size))
        return cls(frame, {w: d for w in frame.worlds})


@dataclass(frozen=True, eq=False)
class KripkeModel:
    """An augmented frame plus, for each world, extensions of every letter over D_w."""

    aug: AugmentedFrame
    arity: Mapping[str, int]
    interp: Mapping[World, Mapping[str, frozenset]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        extra = set(self.interp) - set(self.frame.worlds)
        if extra:
            raise InputError(f"interpretations given for unknown worlds {sorted(extra)}")
        full = {}
        for w in self.frame.worlds:
            given = self.interp.get(w, {})
            unknown = set(given) - set(self.arity)
            if unknown:
                raise InputError(f"world {w!r} interprets undeclared letters {sorted(unknown)}")
            dom = self.aug.domains[w]
            local = {}
            for letter, n in self.arity.items():
                ext = frozenset(tuple(t) for t in given.get(letter, ()))
                for t in ext:
                    if len(t) != n or not set(t) <= dom:
                        raise InputError(f"tuple {t} invalid for {letter}/{n} at world {w!r}")
                local[letter] = ext
            full[w] = local
        object.__setattr__(self, "arity", dict(sorted(self.arity.items())))
        object.__setattr__(self, "interp", full)

    @property
    def frame(self) -> KripkeFrame:
        return self.aug.frame

    def domain(self, w: World) -> frozenset[int]:
        return self.aug.domains[w]

    def extension(self, w: World, letter: str) -> frozenset:
        try:
            return self.interp[w][letter]
        except KeyError:
            raise InputError(f"unknown letter {letter!r}") from None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, KripkeModel):
            return NotImplemented
        return (self.frame, self.aug.domains, self.arity, self.interp) == (
            other.frame, other.aug.domains, other.arity, other.interp,
        )

    __hash__ = None  # type: ignore[assignment]


# -- truth ------------------------------------------------------------------


class _Truth:
    def __init__(self, model: KripkeModel):
        self.model = model
        self.domains = {w: sorted(d) for w, d in model.aug.domains.items()}
        self.rel_cache: dict[tuple[World, RelExpr], frozenset] = {}

    def rel(self, w: World, r: RelExpr) -> frozenset:
        key = (w, r)
        ext = self.rel_cache.get(key)
        if ext is None:
            for name in rel_letters(r):
                if self.model.arity.get(name) != 2:
                    raise InputError(f"{name} is not a binary letter of the model")
            ext = relation_extension(r, self.model.interp[w])
            self.rel_cache[key] = ext
        return ext

    def value(self, w: World, f: Formula, env: dict[str, int]) -> bool:
        match f:
            case Atom(letter, args):
                if self.model.arity.get(letter, len(args)) != len(args):
                    raise InputError(f"{letter} applied to {len(args)} argument(s)")
                return tuple(_lookup(env, a) for a in args) in self.model.extension(w, letter)
            case RelAtom(r, x, y):
                return (_lookup(env, x), _lookup(env, y)) in self.rel(w, r)
            case Eq(x, y):
                return _lookup(env, x) == _lookup(env, y)
            case Bottom():
                return False
            case Not(body):
                return not self.value(w, body, env)
            case And(args):
                return all(self.value(w, a, env) for a in args)
            case Or(args):
                return any(self.value(w, a, env) for a in args)
            case Imp(l, r):
                return not self.value(w, l, env) or self.value(w, r, env)
            case Iff(l, r):
                return self.value(w, l, env) == self.value(w, r, env)
            case Forall(v, body):
                return all(self.value(w, body, {**env, v: a}) for a in self.domains[w])
            case Exists(v, body):
                return any(self.value(w, body, {**env, v: a}) for a in self.domains[w])
            case Box(body):
                # D_w is contained in D_v, so env stays within the domain at v
                return all(self.value(v, body, env) for v in self.model.frame.successors(w))
        raise TypeError(f"not a formula: {f!r}")


def _lookup(env: Mapping[str, int], var: str) -> int:
    try:
        return env[var]
    except KeyError:
        raise UnboundVariableError(f"variable {var!r} is not bound") from None


def mevaluate(model: KripkeModel, w: World, f: Formula, env: Optional[Mapping[str, int]] = None) -> bool:
    """Whether ``f`` holds at world ``w`` under ``env``.

    Quantifiers range over D_w, box ranges over R-successors of ``w`` and
    equality is identity.
    """
    if w not in model.aug.domains:
        raise InputError(f"unknown world {w!r}")
    env = dict(env or {})
    dom = model.domain(w)
    for var, a in env.items():
        if a not in dom:
            raise InputError(f"{var} = {a} lies outside the domain of {w!r}")
    return _Truth(model).value(w, f, env)


# -- frames and the intended model -----------------------------------------


def chain_world(i: int) -> World:
    return f"v{i}"


def make_noetherian_chain(m: int) -> KripkeFrame:
    """Root ``w`` seeing every ``v_i``, where ``v_i`` sees ``v_j`` exactly when i > j."""
    if m < 0:
        raise InputError("chain length must be non-negative")
    chain = [chain_world(i) for i in range(m)]
    pairs = {("w", v) for v in chain}
    pairs |= {(chain[i], chain[j]) for i in range(m) for j in range(i)}
    return KripkeFrame(("w", *chain), frozenset(pairs), root="w")


def intended_model(tiles: TileSet, m: int) -> KripkeModel:
    """Constant domain ``{0..m-1}``; P is ``<`` everywhere; ``v_i`` is labelled ``i``.

    Tile letters are declared with empty extensions.
    """
    if m < 1:
        raise InputError("the intended model needs m >= 1")
    frame = make_noetherian_chain(m)
    less = frozenset((a, b) for a in range(m) for b in range(m) if a < b)
    interp = {"w": {"P": less}}
    for i in range(m):
        interp[chain_world(i)] = {"P": less, "L": frozenset({(i,)})}
    arity = {"P": 2, "L": 1, **{tile_letter(k): 1 for k in range(len(tiles))}}
    return KripkeModel(AugmentedFrame.constant(frame, m), arity, interp)


# -- formula generator ------------------------------------------------------


def immediate_successor(a: str, b: str, two_var: bool = False) -> Formula:
    """V(a, b): b immediately follows a in P.

    The default uses a third variable ``z``; ``two_var`` uses the labels
    instead: every world labelled b sees one labelled a but nothing that sees one.
    """
    if two_var:
        return conj(
            [
                atom("P", a, b),
                Box(Iff(atom("L", b), conj([dia(atom("L", a)), Not(dia(dia(atom("L", a))))]))),
            ]
        )
    if "z" in (a, b):
        raise InputError("the three-variable definition reserves z")
    return conj([atom("P", a, b), Not(exists("z", conj([atom("P", a, "z"), atom("P", "z", b)])))])


def transitivity() -> Formula:
    return forall("x y z", Imp(conj([atom("P", "x", "y"), atom("P", "y", "z")]), atom("P", "x", "z")))


def connection() -> Formula:
    return forall("x y", Iff(atom("P", "x", "y"), Box(Imp(atom("L", "y"), dia(atom("L", "x"))))))


def v_equivalence() -> Formula:
    return forall("x y", Iff(immediate_successor("x", "y"), immediate_successor("x", "y", two_var=True)))


def modal_tiling_axioms(tiles: TileSet, two_var_v: bool = False) -> ReductionOutput:
    """The twelve modal sentences, in a fixed order.

    ``two_var_v`` selects which definition of V is expanded inside
    conditions (1) and (2). ``v-equivalence`` states that both definitions agree.
    """
    n = len(tiles)

    def v(a: str, b: str) -> Formula:
        return immediate_successor(a, b, two_var_v)

    condition_1 = forall(
        "x y",
        Box(
            conj(
                Imp(
                    conj([atom("L", "y"), atom(tile_letter(k), "x")]),
                    Box(
                        Imp(
                            exists("x", conj([v("x", "y"), atom("L", "x")])),
                            disj(atom(tile_letter(j), "x") for j in range(n) if tiles.horizontally_compatible(j, k)),
                        )
                    ),
                )
                for k in range(n)
            )
        ),
    )
    condition_2 = forall(
        "x y",
        Imp(
            v("x", "y"),
            Box(
                conj(
                    Imp(
                        atom(tile_letter(k), "x"),
                        disj(atom(tile_letter(j), "y") for j in range(n) if tiles.vertically_compatible(k, j)),
                    )
                    for k in range(n)
                )
            ),
        ),
    )
    named = [
        ("seriality", forall("x", exists("y", atom("P", "x", "y")))),
        ("irreflexivity", forall("x", Not(atom("P", "x", "x")))),
        ("linearity", forall("x y", disj([atom("P", "x", "y"), Eq("x", "y"), atom("P", "y", "x")]))),
        ("label", forall("x", dia(atom("L", "x")))),
        ("connection", connection()),
        ("v-equivalence", v_equivalence()),
        ("persistence-pos", forall("x y", Imp(atom("P", "x", "y"), Box(atom("P", "x", "y"))))),
        ("persistence-neg", forall("x y", Imp(Not(atom("P", "x", "y")), Box(Not(atom("P", "x", "y")))))),
        ("uniqueness", forall("x y", Box(uniqueness_body(tiles, "y")))),
        ("condition-1", condition_1),
        ("condition-2", condition_2),
        (
            "condition-3",
            forall(
                "x",
                exists(
                    "y",
                    conj([atom("P", "x", "y"), Box(Imp(Box(FALSE), atom(tile_letter(tiles.distinguished), "y")))]),
                ),
            ),
        ),
    ]
    return ReductionOutput(tuple(named), Signature.of(*(f for _, f in named)), MODAL)


# -- consequence checking ---------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    confirmed: bool
    countermodel: Optional[KripkeModel]
    models_checked: int

    @property
    def status(self) -> str:
        return "confirmed" if self.confirmed else "countermodel"


def _letter_table(formulas: Iterable[Formula]) -> dict[str, int]:
    merged: dict[str, int] = {}
    for f in formulas:
        for name, n in letter_arities(f).items():
            if merged.setdefault(name, n) != n:
                raise InputError(f"letter {name} used with arities {merged[name]} and {n}")
    return dict(sorted(merged.items()))


def check_consequence(
    frames: Sequence[KripkeFrame],
    hyp: Formula,
    con: Formula,
    d_max: int,
    budget: Optional[int] = None,
) -> Verdict:
    """Does ``con`` hold at the root of every constant-domain model where ``hyp`` does?

    Enumerates, frame by frame and for domain sizes ``1..d_max``, every
    interpretation of the letters occurring in ``hyp`` and ``con`` at every
    world. The first countermodel in that order is returned. The total number
    of models is checked against ``budget`` before any work starts.
    """
    if d_max < 1:
        raise InputError("d_max must be positive")
    limit = default_budget() if budget is None else budget
    arity = _letter_table([hyp, con])
    plans = []
    total = 0
    for frame in frames:
        for d in range(1, d_max + 1):
            slots = [
                (w, letter, args)
                for w in frame.worlds
                for letter, n in arity.items()
                for args in product(range(d), repeat=n)
            ]
            plans.append((frame, d, slots))
            total += 2 ** len(slots)
    if total > limit:
        raise ResourceLimitError(f"{total} candidate models exceed the budget of {limit}")

    checked = 0
    for frame, d, slots in plans:
        aug = AugmentedFrame.constant(frame, d)
        for bits in product((False, True), repeat=len(slots)):
            interp: dict[World, dict[str, set]] = {w: {letter: set() for letter in arity} for w in frame.worlds}
            for (w, letter, args), on in zip(slots, bits):
                if on:
                    interp[w][letter].add(args)
            model = KripkeModel(aug, arity, interp)
            checked += 1
            truth = _Truth(model)
            if truth.value(frame.root, hyp, {}) and not truth.value(frame.root, con, {}):
                return Verdict(False, model, checked)
    return Verdict(True, None, checked)
