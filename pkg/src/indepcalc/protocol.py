"""Stratified protocols (causal input lists) and their DAGs.

A protocol is a total order on the variables plus, for every variable, a
tail boundary drawn from the variables before it. Compiling it takes each
boundary as the parent set of its variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import Dag, Triplet, Universe, ValidationError, bits
from .separation import IndependenceOracle, dsep


class ProtocolError(ValidationError):
    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("invalid protocol: " + "; ".join(self.violations))


class NotAffirmedError(ValidationError):
    """The oracle does not affirm the triplet a witness was requested for."""


@dataclass(frozen=True)
class StratifiedProtocol:
    universe: Universe
    order: tuple[int, ...]
    boundary: tuple[int, ...]  # indexed by variable, not by position

    @classmethod
    def from_names(cls, universe: Universe, order: Sequence[str],
                   boundary: dict[str, Sequence[str]]) -> StratifiedProtocol:
        b = [0] * len(universe)
        for v, bs in boundary.items():
            b[universe.index(v)] = universe.mask(bs)
        return cls(universe, tuple(universe.index(v) for v in order), tuple(b))

    def predecessors(self, v: int) -> int:
        out = 0
        for u in self.order:
            if u == v:
                return out
            out |= 1 << u
        raise KeyError(f"{self.universe.names[v]!r} not in order")


def validate(p: StratifiedProtocol) -> list[str]:
    """Every defect of ``p``; an empty list means the protocol is valid."""
    names = p.universe.names
    n = len(names)
    problems = []
    seen = set()
    for v in p.order:
        if not 0 <= v < n:
            problems.append(f"unknown variable index {v}")
        elif v in seen:
            problems.append(f"duplicate {names[v]}")
        seen.add(v)
    for v in range(n):
        if v not in seen:
            problems.append(f"{names[v]} missing from order")
    if len(p.boundary) != n:
        problems.append(f"expected {n} boundaries, got {len(p.boundary)}")
        return problems
    position = {}
    for i, v in enumerate(p.order):
        position.setdefault(v, i)
    for v in p.order:
        if v not in position or not 0 <= v < n:
            continue
        for u in bits(p.boundary[v]):
            if u >= n:
                problems.append(f"boundary of {names[v]} names unknown index {u}")
            elif u not in position or position[u] >= position[v]:
                problems.append(f"{names[u]} does not precede {names[v]}")
    return problems


def _require_valid(p: StratifiedProtocol) -> None:
    problems = validate(p)
    if problems:
        raise ProtocolError(problems)


def compile_protocol(p: StratifiedProtocol) -> Dag:
    _require_valid(p)
    return Dag(p.universe, p.boundary)


def protocol_triplets(p: StratifiedProtocol) -> list[Triplet]:
    """The protocol as ``I(n, B(n), R)`` statements, in protocol order.

    Variables with nothing left over in ``R`` contribute no statement.
    """
    _require_valid(p)
    out = []
    before = 0
    for v in p.order:
        rest = before & ~p.boundary[v]
        if rest:
            out.append(Triplet(1 << v, p.boundary[v], rest))
        before |= 1 << v
    return out


def extract(g: Dag) -> StratifiedProtocol:
    """The protocol whose order is a topological sort of ``g`` and whose boundaries are its parents."""
    return StratifiedProtocol(g.universe, tuple(g.order), g.parents)


def minimal_boundary(oracle: IndependenceOracle, predecessors: int, v: int) -> int:
    """Inclusion-minimal tail boundary of ``v`` within ``predecessors``.

    Greedy: try dropping members in ascending index order, restart after each
    successful drop, stop when no single drop keeps the oracle's affirmation.
    """
    b = predecessors
    shrunk = True
    while shrunk:
        shrunk = False
        for u in bits(b):
            cand = b & ~(1 << u)
            if Triplet(1 << v, cand, predecessors & ~cand) in oracle:
                b = cand
                shrunk = True
                break
    return b


def boundaries_for_order(oracle: IndependenceOracle, order: Sequence[int]) -> StratifiedProtocol:
    """The protocol over ``order`` with an oracle-minimal boundary for every variable."""
    b = [0] * len(oracle.universe)
    before = 0
    for v in order:
        b[v] = minimal_boundary(oracle, before, v)
        before |= 1 << v
    return StratifiedProtocol(oracle.universe, tuple(order), tuple(b))


def witness_protocol(oracle: IndependenceOracle, t: Triplet, universe: Universe | None = None) -> StratifiedProtocol:
    """A protocol of the oracle's model whose DAG d-separates ``t``.

    Order: y and z first, then x, then everything else, each block ascending.
    Boundaries are oracle-minimal. If that DAG fails to separate ``t`` (possible
    when the model is not a graphoid), each x_i falls back to the boundary
    x_1..x_{i-1} plus z, which contains ``t`` by construction.
    """
    universe = oracle.universe if universe is None else universe
    if t not in oracle:
        raise NotAffirmedError("cannot build a witness: the oracle does not affirm the target")
    full = universe.full
    head = list(bits(t.y | t.z))
    xs = list(bits(t.x))
    tail = list(bits(full & ~t.variables))
    order = head + xs + tail
    p = boundaries_for_order(oracle, order)
    if dsep(compile_protocol(p), t):
        return p
    b = list(p.boundary)
    before = t.z
    for x in xs:
        b[x] = before
        before |= 1 << x
    p = StratifiedProtocol(universe, tuple(order), tuple(b))
    if not dsep(compile_protocol(p), t):
        raise RuntimeError(f"witness DAG does not separate {t}; is the oracle a semi-graphoid?")
    return p
