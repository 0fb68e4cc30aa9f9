"""Variable universes, independence triplets and the graph types.

Variable sets are plain ``int`` bitmasks over a :class:`Universe` of at most
64 named variables; bit ``i`` stands for the variable with index ``i``.
Everything here is immutable once built.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

MAX_VARIABLES = 64
_FORBIDDEN_CHARS = frozenset(" \t\r\n,|#")


class ValidationError(ValueError):
    """A value violates a structural invariant (disjointness, ordering, ...)."""


class CycleError(ValidationError):
    """Raised when a directed graph contains a cycle."""

    def __init__(self, cycle: Sequence[str]):
        self.cycle = list(cycle)
        super().__init__("cycle detected: " + " -> ".join(self.cycle + self.cycle[:1]))


class ResourceLimitError(RuntimeError):
    """An exhaustive routine was asked to run on a universe above its limit."""

    def __init__(self, what: str, n: int, limit: int):
        self.what, self.n, self.limit = what, n, limit
        super().__init__(f"{what}: universe has {n} variables, limit is {limit} (raise it with --limit)")


def check_limit(what: str, n: int, limit: int) -> None:
    if n > limit:
        raise ResourceLimitError(what, n, limit)


# -- bitmask helpers ---------------------------------------------------------

def bits(mask: int) -> Iterator[int]:
    """Yield the indices set in ``mask`` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def submasks(mask: int) -> Iterator[int]:
    """Yield every submask of ``mask`` (including 0 and ``mask``), descending."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def popcount(mask: int) -> int:
    return bin(mask).count("1")


# -- universes ---------------------------------------------------------------

class Universe:
    """An ordered, duplicate-free list of variable names.

    The position of a name is its index; indices are dense ``0..n-1``.
    """

    __slots__ = ("names", "_index")

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if len(names) > MAX_VARIABLES:
            raise ValidationError(f"universe has {len(names)} variables, at most {MAX_VARIABLES} allowed")
        index: dict[str, int] = {}
        for i, name in enumerate(names):
            if not isinstance(name, str) or not name:
                raise ValidationError(f"variable name must be a nonempty string, got {name!r}")
            if _FORBIDDEN_CHARS & set(name):
                raise ValidationError(f"variable name {name!r} contains whitespace, ',', '|' or '#'")
            if name in index:
                raise ValidationError(f"duplicate variable {name!r}")
            index[name] = i
        self.names = names
        self._index = index

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[str]:
        return iter(self.names)

    def __contains__(self, name: object) -> bool:
        return name in self._index

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Universe) and self.names == other.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"Universe({list(self.names)!r})"

    @property
    def full(self) -> int:
        return (1 << len(self.names)) - 1

    def index(self, var: int | str) -> int:
        if isinstance(var, str):
            try:
                return self._index[var]
            except KeyError:
                raise KeyError(f"unknown variable {var!r}") from None
        if not 0 <= var < len(self.names):
            raise KeyError(f"unknown variable index {var}")
        return var

    def mask(self, names: Iterable[int | str]) -> int:
        m = 0
        for name in names:
            m |= 1 << self.index(name)
        return m

    def names_of(self, mask: int) -> list[str]:
        return [self.names[i] for i in bits(mask)]

    def triplet(self, x: Iterable[str], z: Iterable[str], y: Iterable[str]) -> Triplet:
        """Build a validated triplet from variable names."""
        return Triplet(self.mask(x), self.mask(z), self.mask(y))


# -- triplets ----------------------------------------------------------------

@dataclass(frozen=True, order=True, slots=True)
class Triplet:
    """The statement I(x, z, y): knowing ``z`` renders ``x`` and ``y`` independent.

    Ordering compares ``(x, z, y)`` as integers; that is the canonical listing
    order used everywhere output is sorted.
    """

    x: int
    z: int
    y: int

    def __post_init__(self) -> None:
        if not self.x:
            raise ValidationError("x is empty")
        if not self.y:
            raise ValidationError("y is empty")
        if self.x & self.z:
            raise ValidationError("x and z overlap")
        if self.y & self.z:
            raise ValidationError("y and z overlap")
        if self.x & self.y:
            raise ValidationError("x and y overlap")

    @property
    def variables(self) -> int:
        return self.x | self.z | self.y

    def flip(self) -> Triplet:
        return Triplet(self.y, self.z, self.x)

    def is_canonical(self) -> bool:
        return self.x < self.y


def canonical(t: Triplet) -> Triplet:
    """Return the symmetric normal form of ``t``: the smaller mask comes first."""
    return t if t.x < t.y else Triplet(t.y, t.z, t.x)


def _mk(x: int, z: int, y: int) -> Triplet:
    # trusted constructor for already-validated masks; canonicalises
    t = object.__new__(Triplet)
    if x > y:
        x, y = y, x
    object.__setattr__(t, "x", x)
    object.__setattr__(t, "z", z)
    object.__setattr__(t, "y", y)
    return t


@lru_cache(maxsize=None)
def all_triplets(n: int) -> tuple[Triplet, ...]:
    """Every canonical triplet over ``n`` variables, in canonical order."""
    full = (1 << n) - 1
    out = []
    for x in range(1, full + 1):
        rest = full & ~x
        for z in submasks(rest):
            for y in submasks(rest & ~z):
                if y > x:
                    out.append(_mk(x, z, y))
    out.sort()
    return tuple(out)


class DependencyModel:
    """A finite set of independence statements over a universe.

    Stores canonical triplets only; membership tests canonicalise first, so
    ``t in m`` and ``t.flip() in m`` always agree.
    """

    __slots__ = ("universe", "triplets")

    def __init__(self, universe: Universe, triplets: Iterable[Triplet] = ()):
        self.universe = universe
        full = universe.full
        ts = set()
        for t in triplets:
            if t.variables & ~full:
                raise ValidationError("triplet mentions variables outside the universe")
            ts.add(canonical(t))
        self.triplets = frozenset(ts)

    def __contains__(self, t: Triplet) -> bool:
        return canonical(t) in self.triplets

    def __iter__(self) -> Iterator[Triplet]:
        return iter(sorted(self.triplets))

    def __len__(self) -> int:
        return len(self.triplets)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DependencyModel):
            return NotImplemented
        return self.universe == other.universe and self.triplets == other.triplets

    def __le__(self, other: DependencyModel) -> bool:
        return self.triplets <= other.triplets

    def __repr__(self) -> str:
        return f"DependencyModel({list(self.universe)!r}, {len(self.triplets)} triplets)"


# -- graphs ------------------------------------------------------------------

def _toposort(parents: Sequence[int], universe: Universe) -> list[int]:
    n = len(parents)
    children = [0] * n
    for c, ps in enumerate(parents):
        for p in bits(ps):
            children[p] |= 1 << c
    indeg = [popcount(ps) for ps in parents]
    heap = [v for v in range(n) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for c in bits(children[v]):
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(heap, c)
    if len(order) < n:
        raise CycleError([universe.names[v] for v in _find_cycle(parents, set(range(n)) - set(order))])
    return order


def _find_cycle(parents: Sequence[int], remaining: set[int]) -> list[int]:
    # every leftover node has a leftover parent; walk parents until a repeat
    v = min(remaining)
    seen: dict[int, int] = {}
    walk = []
    while v not in seen:
        seen[v] = len(walk)
        walk.append(v)
        v = next(p for p in bits(parents[v]) if p in remaining)
    cycle = walk[seen[v]:]
    cycle.reverse()
    start = cycle.index(min(cycle))
    return cycle[start:] + cycle[:start]


class Dag:
    """Directed acyclic graph with an optional set of deterministic nodes.

    ``parents[i]`` is the parent mask of variable ``i``. Construction fails
    with :class:`CycleError` if the parent relation has a cycle.
    """

    __slots__ = ("universe", "parents", "children", "deterministic", "order", "_desc")

    def __init__(self, universe: Universe, parents: Sequence[int], deterministic: int = 0):
        n = len(universe)
        parents = tuple(parents)
        if len(parents) != n:
            raise ValidationError(f"expected {n} parent sets, got {len(parents)}")
        full = universe.full
        for i, ps in enumerate(parents):
            if ps & ~full:
                raise ValidationError(f"parents of {universe.names[i]!r} fall outside the universe")
            if ps >> i & 1:
                raise CycleError([universe.names[i]])
        if deterministic & ~full:
            raise ValidationError("deterministic nodes fall outside the universe")
        self.universe = universe
        self.parents = parents
        self.deterministic = deterministic
        self.order = tuple(_toposort(parents, universe))
        children = [0] * n
        for c, ps in enumerate(parents):
            for p in bits(ps):
                children[p] |= 1 << c
        self.children = tuple(children)
        desc = [0] * n
        for v in reversed(self.order):
            d = 0
            for c in bits(children[v]):
                d |= (1 << c) | desc[c]
            desc[v] = d
        self._desc = tuple(desc)

    @classmethod
    def from_edges(cls, names: Iterable[str], edges: Iterable[tuple[str, str]],
                   deterministic: Iterable[str] = ()) -> Dag:
        universe = names if isinstance(names, Universe) else Universe(names)
        parents = [0] * len(universe)
        for p, c in edges:
            parents[universe.index(c)] |= 1 << universe.index(p)
        return cls(universe, parents, universe.mask(deterministic))

    @classmethod
    def from_parents(cls, universe: Universe, parents: Mapping[str, Iterable[str]],
                     deterministic: Iterable[str] = ()) -> Dag:
        ps = [0] * len(universe)
        for child, pars in parents.items():
            ps[universe.index(child)] = universe.mask(pars)
        return cls(universe, ps, universe.mask(deterministic))

    def __len__(self) -> int:
        return len(self.universe)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dag):
            return NotImplemented
        return (self.universe == other.universe and self.parents == other.parents
                and self.deterministic == other.deterministic)

    def __hash__(self) -> int:
        return hash((self.universe, self.parents, self.deterministic))

    def __repr__(self) -> str:
        names = self.universe.names
        arcs = ", ".join(f"{names[p]}->{names[c]}" for p, c in self.edges())
        return f"Dag([{arcs}])"

    def edges(self) -> list[tuple[int, int]]:
        """All arcs as ``(parent, child)`` index pairs, sorted."""
        return sorted((p, c) for c, ps in enumerate(self.parents) for p in bits(ps))

    def neighbors(self, v: int) -> int:
        return self.parents[v] | self.children[v]

    def descendants_mask(self, v: int) -> int:
        return self._desc[v]


def descendants(g: Dag, v: int | str) -> int:
    """Nodes reachable from ``v`` by a directed path of length >= 1."""
    return g.descendants_mask(g.universe.index(v))


def topological_order(g: Dag) -> list[int]:
    """Parents before children; ties go to the smaller index."""
    return list(g.order)


class UndirectedGraph:
    """Simple undirected graph; ``adj[i]`` is the neighbour mask of ``i``."""

    __slots__ = ("universe", "adj")

    def __init__(self, universe: Universe, edges: Iterable[tuple[int, int]] = ()):
        adj = [0] * len(universe)
        for a, b in edges:
            a, b = universe.index(a), universe.index(b)
            if a == b:
                raise ValidationError(f"self-loop on {universe.names[a]!r}")
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        self.universe = universe
        self.adj = tuple(adj)

    @classmethod
    def from_edges(cls, names: Iterable[str], edges: Iterable[tuple[str, str]]) -> UndirectedGraph:
        universe = names if isinstance(names, Universe) else Universe(names)
        return cls(universe, edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, UndirectedGraph):
            return NotImplemented
        return self.universe == other.universe and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.universe, self.adj))

    def __repr__(self) -> str:
        names = self.universe.names
        return "UndirectedGraph([" + ", ".join(f"{names[a]}-{names[b]}" for a, b in self.edges()) + "])"

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(len(self.adj)) for b in bits(self.adj[a]) if a < b]

    def without_edge(self, a: int, b: int) -> UndirectedGraph:
        return UndirectedGraph(self.universe, [e for e in self.edges() if e != (min(a, b), max(a, b))])
