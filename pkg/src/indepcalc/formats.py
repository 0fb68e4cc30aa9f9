"""Text formats for graphs, dependency models and protocols, plus DOT export.

Graph files::

    node a
    node d det
    edge a d          # directed; use `link a b` for undirected graphs

Model files::

    var a b c
    indep a , b | - | c

Protocol files::

    order a b c
    bnd a : -
    bnd c : a,b
"""

from __future__ import annotations

from typing import Iterator

from .core import (DependencyModel, Dag, Triplet, UndirectedGraph, Universe,
                   ValidationError)
from .protocol import StratifiedProtocol


def error_text(e: Exception) -> str:
    # KeyError.__str__ adds quotes around the message
    return e.args[0] if isinstance(e, KeyError) and e.args else str(e)


class ParseError(ValueError):
    def __init__(self, message: str, lineno: int | None = None, directive: str | None = None,
                 source: str = "<input>"):
        self.lineno, self.directive, self.source = lineno, directive, source
        where = source if lineno is None else f"{source}:{lineno}"
        if directive:
            where += f" ({directive})"
        super().__init__(f"{where}: {message}")


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


# -- triplets ----------------------------------------------------------------

def _parse_names(chunk: str, universe: Universe, allow_empty: bool) -> int:
    chunk = chunk.strip()
    if chunk == "-":
        if not allow_empty:
            raise ValidationError("'-' is only allowed for the conditioning set")
        return 0
    names = [s.strip() for s in chunk.split(",")]
    if any(not s for s in names):
        raise ValidationError(f"empty name in {chunk!r}")
    return universe.mask(names)


def parse_triplet(text: str, universe: Universe) -> Triplet:
    """Parse ``"x-list | z-list | y-list"``; ``-`` stands for an empty z."""
    parts = text.split("|")
    if len(parts) != 3:
        raise ValidationError(f"expected 'x | z | y', got {text!r}")
    x = _parse_names(parts[0], universe, False)
    z = _parse_names(parts[1], universe, True)
    y = _parse_names(parts[2], universe, False)
    return Triplet(x, z, y)


def format_set(mask: int, universe: Universe) -> str:
    return ",".join(universe.names_of(mask)) or "-"


def format_triplet(t: Triplet, universe: Universe) -> str:
    return f"{format_set(t.x, universe)} | {format_set(t.z, universe)} | {format_set(t.y, universe)}"


# -- graphs ------------------------------------------------------------------

def parse_graph(text: str, source: str = "<input>") -> Dag | UndirectedGraph:
    names: list[str] = []
    det: list[str] = []
    arcs: list[tuple[str, str]] = []
    links: list[tuple[str, str]] = []
    declared: set[str] = set()
    for lineno, words in _lines(text):
        head = words[0]
        try:
            if head == "node":
                if len(words) not in (2, 3) or (len(words) == 3 and words[2] != "det"):
                    raise ValidationError("expected 'node <name> [det]'")
                if words[1] in declared:
                    raise ValidationError(f"duplicate node {words[1]!r}")
                names.append(words[1])
                declared.add(words[1])
                if len(words) == 3:
                    det.append(words[1])
            elif head in ("edge", "link"):
                if len(words) != 3:
                    raise ValidationError(f"expected '{head} <a> <b>'")
                for w in words[1:]:
                    if w not in declared:
                        raise ValidationError(f"node {w!r} used before declaration")
                (arcs if head == "edge" else links).append((words[1], words[2]))
            else:
                raise ValidationError(f"unknown directive {head!r}")
        except ValidationError as e:
            raise ParseError(str(e), lineno, head, source) from None
    if arcs and links:
        raise ParseError("a graph file cannot mix 'edge' and 'link'", source=source)
    try:
        universe = Universe(names)
        if links:
            if det:
                raise ValidationError("deterministic nodes need a directed graph")
            return UndirectedGraph(universe, links)
        return Dag.from_edges(universe, arcs, det)
    except ValidationError as e:
        raise ParseError(str(e), source=source) from None


def dump_graph(g: Dag | UndirectedGraph) -> str:
    names = g.universe.names
    out = []
    for i, name in enumerate(names):
        det = isinstance(g, Dag) and g.deterministic >> i & 1
        out.append(f"node {name} det" if det else f"node {name}")
    word = "edge" if isinstance(g, Dag) else "link"
    out.extend(f"{word} {names[a]} {names[b]}" for a, b in g.edges())
    return "\n".join(out) + "\n"


def to_dot(g: Dag | UndirectedGraph) -> str:
    """Standard DOT; deterministic nodes get ``peripheries=2``."""
    names = g.universe.names
    directed = isinstance(g, Dag)
    out = ["digraph {" if directed else "graph {"]
    for i, name in enumerate(names):
        if directed and g.deterministic >> i & 1:
            out.append(f"  {name} [peripheries=2];")
        else:
            out.append(f"  {name};")
    arrow = "->" if directed else "--"
    out.extend(f"  {names[a]} {arrow} {names[b]};" for a, b in g.edges())
    out.append("}")
    return "\n".join(out) + "\n"


# -- models ------------------------------------------------------------------

def parse_model(text: str, source: str = "<input>") -> DependencyModel:
    names: list[str] = []
    pending: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "var":
            if pending:
                raise ParseError("var declarations must precede indep lines", lineno, head, source)
            if not rest.split():
                raise ParseError("expected at least one name", lineno, head, source)
            names.extend(rest.split())
        elif head == "indep":
            pending.append((lineno, rest))
        else:
            raise ParseError(f"unknown directive {head!r}", lineno, head, source)
    try:
        universe = Universe(names)
    except ValidationError as e:
        raise ParseError(str(e), source=source) from None
    triplets = []
    for lineno, rest in pending:
        try:
            triplets.append(parse_triplet(rest, universe))
        except (ValidationError, KeyError) as e:
            raise ParseError(error_text(e), lineno, "indep", source) from None
    return DependencyModel(universe, triplets)


def dump_model(m: DependencyModel, header: bool = True) -> str:
    out = [f"var {' '.join(m.universe.names)}"] if header else []
    out.extend(f"indep {format_triplet(t, m.universe)}" for t in m)
    return "".join(line + "\n" for line in out)


# -- protocols ---------------------------------------------------------------

def parse_protocol(text: str, source: str = "<input>") -> StratifiedProtocol:
    order: list[str] | None = None
    bounds: dict[str, str] = {}
    universe = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        try:
            if head == "order":
                if order is not None:
                    raise ValidationError("only one order line is allowed")
                order = rest.split()
                universe = Universe(order)
            elif head == "bnd":
                if universe is None:
                    raise ValidationError("bnd before order")
                name, sep, body = rest.partition(":")
                name = name.strip()
                if not sep:
                    raise ValidationError("expected 'bnd <name> : <list or ->'")
                if name not in universe:
                    raise ValidationError(f"unknown variable {name!r}")
                if name in bounds:
                    raise ValidationError(f"second boundary for {name!r}")
                body = body.strip()
                if body != "-":
                    _parse_names(body, universe, False)
                bounds[name] = body
            else:
                raise ValidationError(f"unknown directive {head!r}")
        except (ValidationError, KeyError) as e:
            raise ParseError(error_text(e), lineno, head, source) from None
    if order is None:
        raise ParseError("missing order line", source=source)
    missing = [v for v in order if v not in bounds]
    if missing:
        raise ParseError(f"no bnd line for {', '.join(missing)}", source=source)
    b = tuple(_parse_names(bounds[v], universe, True) for v in universe.names)
    return StratifiedProtocol(universe, tuple(range(len(order))), b)


def dump_protocol(p: StratifiedProtocol) -> str:
    """Serialise ``p``. The file's universe is the protocol order itself."""
    names = p.universe.names
    out = ["order " + " ".join(names[v] for v in p.order)]
    out.extend(f"bnd {names[v]} : {format_set(p.boundary[v], p.universe)}" for v in p.order)
    return "\n".join(out) + "\n"
