"""Semi-graphoid / graphoid inference over dependency models.

Axioms, written for I(X, Z, Y):

* symmetry       I(X,Z,Y) => I(Y,Z,X)
* decomposition  I(X,Z,YW) => I(X,Z,Y)
* weak union     I(X,Z,YW) => I(X,ZY,W)
* contraction    I(X,ZY,W) & I(X,Z,Y) => I(X,Z,YW)
* intersection   I(X,ZY,W) & I(X,ZW,Y) => I(X,Z,YW)   (graphoid mode only)

Symmetry is built into the canonical triplet form, so it never shows up as a
separate derivation step.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator

from .core import (DependencyModel, Triplet, ValidationError, _mk, canonical,
                   check_limit, submasks)

SYMMETRY = "symmetry"
DECOMPOSITION = "decomposition"
WEAK_UNION = "weak-union"
CONTRACTION = "contraction"
INTERSECTION = "intersection"

AXIOMS = (SYMMETRY, DECOMPOSITION, WEAK_UNION, CONTRACTION, INTERSECTION)
_BINARY = {CONTRACTION, INTERSECTION}

SEMIGRAPHOID = "semigraphoid"
GRAPHOID = "graphoid"
MODES = (SEMIGRAPHOID, GRAPHOID)

CLOSURE_LIMIT = 7


def _orientations(t: Triplet) -> tuple[tuple[int, int, int], ...]:
    return ((t.x, t.z, t.y), (t.y, t.z, t.x))


def _proper_parts(mask: int) -> Iterator[int]:
    for sub in submasks(mask):
        if sub and sub != mask:
            yield sub


def _contract(first: tuple[int, int, int], second: tuple[int, int, int]) -> Triplet | None:
    x1, zy, w = first
    x2, z, y = second
    if x1 == x2 and z | y == zy:
        return _mk(x1, z, y | w)
    return None


def _intersect(first: tuple[int, int, int], second: tuple[int, int, int]) -> Triplet | None:
    x1, zy, w = first
    x2, zw, y = second
    if x1 == x2 and y & ~zy == 0 and zy & ~y == zw & ~w and w & ~zw == 0:
        return _mk(x1, zy & ~y, y | w)
    return None


def apply_axiom(name: str, t1: Triplet, t2: Triplet | None = None) -> set[Triplet]:
    """All one-step consequences of ``name`` applied to the premises.

    Unary axioms act on both orientations of ``t1``. Binary axioms try every
    orientation of both premises in both roles; premises that do not fit the
    pattern give an empty set.
    """
    if name not in AXIOMS:
        raise ValidationError(f"unknown axiom {name!r}")
    if (name in _BINARY) != (t2 is not None):
        raise ValidationError(f"{name} takes {2 if name in _BINARY else 1} premise(s)")
    out: set[Triplet] = set()
    if name == SYMMETRY:
        out.add(canonical(t1))
    elif name == DECOMPOSITION:
        for a, c, b in _orientations(t1):
            for y in _proper_parts(b):
                out.add(_mk(a, c, y))
    elif name == WEAK_UNION:
        for a, c, b in _orientations(t1):
            for w in _proper_parts(b):
                out.add(_mk(a, c | (b & ~w), w))
    else:
        rule = _contract if name == CONTRACTION else _intersect
        for o1 in _orientations(t1):
            for o2 in _orientations(t2):
                for first, second in ((o1, o2), (o2, o1)):
                    r = rule(first, second)
                    if r is not None:
                        out.add(r)
    return out


@dataclass(frozen=True)
class Step:
    axiom: str
    premises: tuple[Triplet, ...]
    result: Triplet


@dataclass(frozen=True)
class DerivationTrace:
    """A replayable proof of ``conclusion`` from the input triplets.

    An empty ``steps`` list means the conclusion is itself an input.
    """

    conclusion: Triplet
    steps: list[Step] = field(default_factory=list)

    def replay(self, inputs: DependencyModel) -> bool:
        """Re-run every step through :func:`apply_axiom` and check the bookkeeping."""
        have = set(inputs.triplets)
        for step in self.steps:
            if any(canonical(p) not in have for p in step.premises):
                return False
            if step.result not in apply_axiom(step.axiom, *step.premises):
                return False
            have.add(step.result)
        return canonical(self.conclusion) in have


def _check_mode(mode: str) -> None:
    if mode not in MODES:
        raise ValidationError(f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")


def _saturate(m: DependencyModel, mode: str, limit: int) -> dict[Triplet, Step | None]:
    """Semi-naive fixpoint. Maps each triplet to the step that first produced it."""
    _check_mode(mode)
    check_limit("closure", len(m.universe), limit)
    graphoid = mode == GRAPHOID
    origin: dict[Triplet, Step | None] = {}
    # (x, z) -> {y} over both orientations of every known triplet
    index: dict[tuple[int, int], set[int]] = {}
    queue: deque[Triplet] = deque()

    def add(t: Triplet, step: Step | None) -> None:
        if t in origin:
            return
        origin[t] = step
        index.setdefault((t.x, t.z), set()).add(t.y)
        index.setdefault((t.y, t.z), set()).add(t.x)
        queue.append(t)

    def known(x: int, z: int, y: int) -> bool:
        return y in index.get((x, z), ())

    for t in sorted(m.triplets):
        add(t, None)

    while queue:
        t = queue.popleft()
        for a, c, b in _orientations(t):
            for y in _proper_parts(b):
                r = _mk(a, c, y)
                if r not in origin:
                    add(r, Step(DECOMPOSITION, (t,), r))
            for w in _proper_parts(b):
                r = _mk(a, c | (b & ~w), w)
                if r not in origin:
                    add(r, Step(WEAK_UNION, (t,), r))
            # t as I(X, ZY, W): look for I(X, Z, Y) with Y a nonempty part of c
            for y in submasks(c):
                if not y:
                    continue
                z = c & ~y
                if known(a, z, y):
                    r = _mk(a, z, y | b)
                    if r not in origin:
                        add(r, Step(CONTRACTION, (t, _mk(a, z, y)), r))
                if graphoid and known(a, z | b, y):
                    r = _mk(a, z, y | b)
                    if r not in origin:
                        add(r, Step(INTERSECTION, (t, _mk(a, z | b, y)), r))
            # t as I(X, Z, Y): look for I(X, ZY, W)
            for w in sorted(index.get((a, c | b), ())):
                r = _mk(a, c, b | w)
                if r not in origin:
                    add(r, Step(CONTRACTION, (_mk(a, c | b, w), t), r))
    return origin


def closure(m: DependencyModel, mode: str = SEMIGRAPHOID, *, limit: int = CLOSURE_LIMIT) -> DependencyModel:
    """Least superset of ``m`` closed under the axioms of ``mode``."""
    return DependencyModel(m.universe, _saturate(m, mode, limit))


def derive(m: DependencyModel, target: Triplet, mode: str = SEMIGRAPHOID, *,
           limit: int = CLOSURE_LIMIT) -> DerivationTrace | None:
    """Derivation of ``target`` from ``m``, or ``None`` if it is not derivable.

    Records the first producer of every triplet during saturation, not a
    shortest proof.
    """
    origin = _saturate(m, mode, limit)
    goal = canonical(target)
    if goal not in origin:
        return None
    steps: list[Step] = []
    done: set[Triplet] = set()
    stack: list[tuple[Triplet, bool]] = [(goal, False)]
    while stack:
        t, expanded = stack.pop()
        if t in done:
            continue
        step = origin[t]
        if step is None:
            done.add(t)
            continue
        if expanded:
            done.add(t)
            steps.append(step)
            continue
        stack.append((t, True))
        for p in reversed(step.premises):
            if p not in done:
                stack.append((p, False))
    return DerivationTrace(target, steps)


def is_closed(m: DependencyModel, mode: str = SEMIGRAPHOID, *, limit: int = CLOSURE_LIMIT) -> bool:
    return closure(m, mode, limit=limit) == m
