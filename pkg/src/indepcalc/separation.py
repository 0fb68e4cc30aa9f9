"""Graphical separation criteria and the models they induce.

Queries are :class:`~indepcalc.core.Triplet` values ``(x, z, y)``; the
triplet invariants already enforce disjointness and nonempty ends.
"""

from __future__ import annotations

from typing import Protocol, Sequence

from .core import (DependencyModel, Dag, Triplet, UndirectedGraph, Universe,
                   ValidationError, all_triplets, bits, check_limit)

PATH_LIMIT = 10
MODEL_LIMIT = 7


class IndependenceOracle(Protocol):
    """Anything that can say whether I(x, z, y) holds over ``universe``.

    Implementations must answer ``t`` and ``t.flip()`` identically.
    """

    universe: Universe

    def __contains__(self, t: Triplet) -> bool: ...


class DSepOracle:
    """d-separation in a fixed DAG, as an independence oracle."""

    def __init__(self, g: Dag):
        self.graph = g
        self.universe = g.universe

    def __contains__(self, t: Triplet) -> bool:
        return dsep(self.graph, t)


class IDSepOracle(DSepOracle):
    def __contains__(self, t: Triplet) -> bool:
        return idsep(self.graph, t)


def _check_query(n: int, q: Triplet) -> None:
    if q.variables >> n:
        raise ValidationError("query mentions variables outside the graph")


# -- d-separation ------------------------------------------------------------

def _ancestral_of(g: Dag, z: int) -> int:
    """Nodes that are in ``z`` or have a descendant in ``z``."""
    out = z
    for v in range(len(g)):
        if g.descendants_mask(v) & z:
            out |= 1 << v
    return out


def path_active(g: Dag, path: Sequence[int], z: int, determined: int | None = None) -> bool:
    """Whether an adjacency path is active given ``z``.

    ``path`` lists node indices; consecutive nodes must be adjacent in ``g``.
    A head-to-head interior node keeps the path open only if it or one of its
    descendants is in ``z``; any other interior node closes it if it is in
    ``determined`` (which defaults to ``z``).
    """
    if determined is None:
        determined = z
    for a, b in zip(path, path[1:]):
        if not g.neighbors(a) >> b & 1:
            raise ValidationError(f"{g.universe.names[a]} and {g.universe.names[b]} are not adjacent")
    if len(set(path)) != len(path):
        raise ValidationError("path repeats a node")
    if (1 << path[0] | 1 << path[-1]) & z:
        raise ValidationError("path endpoint lies in the conditioning set")
    for prev, v, nxt in zip(path, path[1:], path[2:]):
        collider = g.parents[v] >> prev & 1 and g.parents[v] >> nxt & 1
        if collider:
            if not (z >> v & 1 or g.descendants_mask(v) & z):
                return False
        elif determined >> v & 1:
            return False
    return True


def _naive(g: Dag, q: Triplet, determined: int, limit: int) -> bool:
    n = len(g)
    check_limit("path enumeration", n, limit)
    _check_query(n, q)
    z = q.z

    def blocked_at(prev: int, v: int, nxt: int) -> bool:
        if g.parents[v] >> prev & 1 and g.parents[v] >> nxt & 1:
            return not (z >> v & 1 or g.descendants_mask(v) & z)
        return bool(determined >> v & 1)

    # DFS over simple paths; a prefix whose interior already blocks is dropped
    # since every extension of it is blocked too
    for start in bits(q.x):
        stack = [[start]]
        while stack:
            path = stack.pop()
            v = path[-1]
            for w in bits(g.neighbors(v)):
                if w in path:
                    continue
                if len(path) >= 2 and blocked_at(path[-2], v, w):
                    continue
                ext = path + [w]
                if q.y >> w & 1 and path_active(g, ext, z, determined):
                    return False
                stack.append(ext)
    return True


def dsep_naive(g: Dag, q: Triplet, *, limit: int = PATH_LIMIT) -> bool:
    """d-separation by enumerating every simple adjacency path from x to y."""
    return _naive(g, q, q.z, limit)


def idsep_naive(g: Dag, q: Triplet, *, limit: int = PATH_LIMIT) -> bool:
    """ID-separation by path enumeration."""
    return _naive(g, q, determination_closure(g, q.z), limit)


def _reach(g: Dag, q: Triplet, determined: int) -> bool:
    n = len(g)
    _check_query(n, q)
    anc = _ancestral_of(g, q.z)
    # states: (node, came_from_child); from a child we may continue up or down,
    # from a parent only down unless the node is an open collider
    seen_up = 0
    seen_down = 0
    stack: list[tuple[int, bool]] = []
    for s in bits(q.x):
        stack.extend((p, True) for p in bits(g.parents[s]))
        stack.extend((c, False) for c in bits(g.children[s]))
    while stack:
        v, up = stack.pop()
        bit = 1 << v
        if up:
            if seen_up & bit:
                continue
            seen_up |= bit
        else:
            if seen_down & bit:
                continue
            seen_down |= bit
        if q.y & bit:
            return False
        if not determined & bit:
            stack.extend((c, False) for c in bits(g.children[v]))
            if up:
                stack.extend((p, True) for p in bits(g.parents[v]))
        if not up and anc & bit:
            stack.extend((p, True) for p in bits(g.parents[v]))
    return True


def dsep(g: Dag, q: Triplet) -> bool:
    """d-separation by a single reachability pass over (node, direction) states."""
    return _reach(g, q, q.z)


def determination_closure(g: Dag, z: int) -> int:
    """``z`` plus every deterministic node whose parents are all determined."""
    out = z
    changed = True
    while changed:
        changed = False
        for v in bits(g.deterministic & ~out):
            if g.parents[v] & ~out == 0:
                out |= 1 << v
                changed = True
    return out


def idsep(g: Dag, q: Triplet) -> bool:
    """ID-separation: d-separation where determined non-colliders also block.

    Colliders are judged against ``z`` itself, not its determination closure.
    """
    return _reach(g, q, determination_closure(g, q.z))


def dsep_model(g: Dag, *, limit: int = MODEL_LIMIT) -> DependencyModel:
    """Every canonical triplet d-separated in ``g``."""
    n = len(g)
    check_limit("d-separation model", n, limit)
    return DependencyModel(g.universe, [t for t in all_triplets(n) if dsep(g, t)])


# -- undirected graphs -------------------------------------------------------

def usep(u: UndirectedGraph, q: Triplet) -> bool:
    """True iff every path from x to y in ``u`` passes through z."""
    _check_query(len(u.universe), q)
    seen = q.x
    frontier = q.x
    blocked = q.z
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= u.adj[v]
        nxt &= ~seen & ~blocked
        if nxt & q.y:
            return False
        seen |= nxt
        frontier = nxt
    return True


def usep_model(u: UndirectedGraph, *, limit: int = MODEL_LIMIT) -> DependencyModel:
    n = len(u.universe)
    check_limit("separation model", n, limit)
    return DependencyModel(u.universe, [t for t in all_triplets(n) if usep(u, t)])


def undirected_minimal_imap(oracle: IndependenceOracle, universe: Universe | None = None) -> UndirectedGraph:
    """Drop the edge a-b exactly when the oracle affirms I(a, rest, b).

    For a graphoid oracle this is the unique edge-minimal undirected I-map.
    """
    universe = oracle.universe if universe is None else universe
    n = len(universe)
    full = universe.full
    edges = []
    for a in range(n):
        for b in range(a + 1, n):
            rest = full & ~(1 << a | 1 << b)
            if Triplet(1 << a, rest, 1 << b) not in oracle:
                edges.append((a, b))
    return UndirectedGraph(universe, edges)


def is_imap(candidate: DependencyModel, m: IndependenceOracle) -> Triplet | None:
    """First triplet of ``candidate`` (canonical order) that ``m`` rejects, else ``None``."""
    for t in candidate:
        if t not in m:
            return t
    return None
