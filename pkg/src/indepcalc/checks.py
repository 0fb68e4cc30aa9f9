"""Seeded random instances and the theorem checks run by ``indepcalc check``.

Each check draws ``trials`` instances; trial ``i`` uses its own generator
seeded from ``(check name, seed, i)`` so a single failing trial can be
rerun in isolation.
"""

from __future__ import annotations

import itertools
import random
import string
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .axioms import CLOSURE_LIMIT, SEMIGRAPHOID, closure, is_closed
from .core import (DependencyModel, Dag, Triplet, UndirectedGraph, Universe,
                   all_triplets, bits, check_limit)
from .formats import dump_graph, dump_protocol, format_triplet
from .protocol import (StratifiedProtocol, boundaries_for_order, compile_protocol,
                       extract, protocol_triplets, witness_protocol)
from .separation import (MODEL_LIMIT, PATH_LIMIT, DSepOracle, determination_closure,
                         dsep, dsep_model, dsep_naive, idsep, idsep_naive, is_imap,
                         undirected_minimal_imap, usep, usep_model)


# run_check applies the size guard once; inner calls must not re-apply defaults
_NO_LIMIT = 64


def names_for(n: int) -> list[str]:
    if n <= 26:
        return list(string.ascii_lowercase[:n])
    return [f"v{i}" for i in range(n)]


def random_dag(rng: random.Random, n: int, density: float | None = None,
               det_prob: float = 0.0) -> Dag:
    """Random DAG whose topological order is a random permutation of the indices."""
    p = rng.uniform(0.15, 0.7) if density is None else density
    perm = list(range(n))
    rng.shuffle(perm)
    parents = [0] * n
    for j in range(n):
        for i in range(j):
            if rng.random() < p:
                parents[perm[j]] |= 1 << perm[i]
    det = sum(1 << v for v in range(n) if rng.random() < det_prob)
    return Dag(Universe(names_for(n)), parents, det)


def random_protocol(rng: random.Random, n: int) -> StratifiedProtocol:
    order = list(range(n))
    rng.shuffle(order)
    p = rng.uniform(0.1, 0.8)
    b = [0] * n
    for j, v in enumerate(order):
        for u in order[:j]:
            if rng.random() < p:
                b[v] |= 1 << u
    return StratifiedProtocol(Universe(names_for(n)), tuple(order), tuple(b))


def random_undirected(rng: random.Random, n: int) -> UndirectedGraph:
    p = rng.uniform(0.15, 0.7)
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p]
    return UndirectedGraph(Universe(names_for(n)), edges)


def random_query(rng: random.Random, n: int) -> Triplet:
    """Uniform over the 4-way role assignments that give a valid triplet."""
    while True:
        x = z = y = 0
        for v in range(n):
            role = rng.randrange(4)
            if role == 0:
                x |= 1 << v
            elif role == 1:
                z |= 1 << v
            elif role == 2:
                y |= 1 << v
        if x and y:
            return Triplet(x, z, y)


# -- results -----------------------------------------------------------------

@dataclass
class Trial:
    index: int
    n: int
    passed: bool
    repro: str = ""


@dataclass
class CheckReport:
    name: str
    seed: int
    trials: list[Trial] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return sum(t.passed for t in self.trials)

    @property
    def ok(self) -> bool:
        return self.passed == len(self.trials)

    def summary(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return f"check {self.name}: {self.passed}/{len(self.trials)} {verdict} (seed {self.seed})"

    def lines(self) -> list[str]:
        out = []
        for t in self.trials:
            out.append(f"trial {t.index} n={t.n}: {'PASS' if t.passed else 'FAIL'}")
            if not t.passed:
                out.extend("  " + line for line in t.repro.rstrip("\n").splitlines())
        out.append(self.summary())
        return out


# -- individual checks -------------------------------------------------------
# each returns "" on success or a reproduction text on failure

def _corollary1(rng: random.Random, n: int) -> str:
    p = random_protocol(rng, n)
    g = compile_protocol(p)
    derived = closure(DependencyModel(p.universe, protocol_triplets(p)), SEMIGRAPHOID, limit=_NO_LIMIT)
    read = dsep_model(g, limit=_NO_LIMIT)
    if read == derived:
        return ""
    diff = sorted(read.triplets ^ derived.triplets)
    return dump_protocol(p) + f"first discrepancy: {format_triplet(diff[0], p.universe)}\n"


def _theorem1(rng: random.Random, n: int) -> str:
    g = random_dag(rng, n)
    back = compile_protocol(extract(g))
    return "" if back == g else dump_graph(g)


def _orders(rng: random.Random, n: int) -> list[tuple[int, ...]]:
    if n <= 4:
        return list(itertools.permutations(range(n)))
    out = []
    for _ in range(10):
        perm = list(range(n))
        rng.shuffle(perm)
        out.append(tuple(perm))
    return out


def _theorem2(rng: random.Random, n: int) -> str:
    g = random_dag(rng, n)
    m = dsep_model(g, limit=_NO_LIMIT)
    for order in _orders(rng, n):
        p = boundaries_for_order(m, order)
        # minimality: no single member of a boundary can be dropped
        before = 0
        for v in order:
            b = p.boundary[v]
            for u in bits(b):
                cand = b & ~(1 << u)
                if Triplet(1 << v, cand, before & ~cand) in m:
                    return dump_graph(g) + dump_protocol(p) + f"boundary of {g.universe.names[v]} is not minimal\n"
            before |= 1 << v
        bad = is_imap(dsep_model(compile_protocol(p), limit=_NO_LIMIT), m)
        if bad is not None:
            return dump_graph(g) + dump_protocol(p) + f"not an I-map: {format_triplet(bad, g.universe)}\n"
    return ""


def _theorem3(rng: random.Random, n: int) -> str:
    g = random_dag(rng, n)
    m = dsep_model(g, limit=_NO_LIMIT)
    for t in m:
        p = witness_protocol(m, t)
        if not dsep(compile_protocol(p), t):
            return dump_graph(g) + dump_protocol(p) + f"witness misses {format_triplet(t, g.universe)}\n"
    return ""


def _oracle_eq(rng: random.Random, n: int) -> str:
    g = random_dag(rng, n)
    for _ in range(50):
        q = random_query(rng, n)
        if dsep(g, q) != dsep_naive(g, q, limit=_NO_LIMIT):
            return dump_graph(g) + f"query: {format_triplet(q, g.universe)}\n"
    return ""


def _dsep_closed(rng: random.Random, n: int) -> str:
    g = random_dag(rng, n)
    return "" if is_closed(dsep_model(g, limit=_NO_LIMIT), SEMIGRAPHOID, limit=_NO_LIMIT) else dump_graph(g)


def undirected_axiom_violation(u: UndirectedGraph) -> str | None:
    """Name of the first separation property the graph's model breaks, if any.

    Transitivity is checked with the extra variable outside X, Y and Z.
    """
    s = usep_model(u, limit=_NO_LIMIT)
    n = len(u.universe)
    full = u.universe.full
    for t in all_triplets(n):
        if usep(u, t) != usep(u, t.flip()):
            return "symmetry"
    for t in s:
        for x, z, yw in ((t.x, t.z, t.y), (t.y, t.z, t.x)):
            for y in _nonempty_submasks(yw):
                if y != yw and Triplet(x, z, y) not in s:
                    return "decomposition"
            for extra in _nonempty_submasks(full & ~(x | z | yw)):
                if Triplet(x, z | extra, yw) not in s:
                    return "strong union"
            for gamma in bits(full & ~(x | z | yw)):
                if Triplet(x, z, 1 << gamma) not in s and Triplet(yw, z, 1 << gamma) not in s:
                    return "transitivity"
        # intersection premises: (x, zy, w) is t oriented; look for (x, zw, y)
        for x, zy, w in ((t.x, t.z, t.y), (t.y, t.z, t.x)):
            for y in _nonempty_submasks(zy):
                z = zy & ~y
                if Triplet(x, z | w, y) in s and Triplet(x, z, y | w) not in s:
                    return "intersection"
    return None


def _nonempty_submasks(mask: int) -> list[int]:
    out = []
    sub = mask
    while sub:
        out.append(sub)
        sub = (sub - 1) & mask
    return out


def _usep_axioms(rng: random.Random, n: int) -> str:
    u = random_undirected(rng, n)
    broken = undirected_axiom_violation(u)
    return "" if broken is None else dump_graph(u) + f"violates {broken}\n"


def _idsep(rng: random.Random, n: int) -> str:
    g = random_dag(rng, n)
    for t in all_triplets(n):
        if idsep(g, t) != dsep(g, t):
            return dump_graph(g) + f"idsep differs from dsep on {format_triplet(t, g.universe)}\n"
    gd = random_dag(rng, n, det_prob=0.4)
    z2 = rng.getrandbits(n)
    z1 = z2 & rng.getrandbits(n)
    c1, c2 = determination_closure(gd, z1), determination_closure(gd, z2)
    if c1 & ~c2:
        return dump_graph(gd) + f"closure not monotone for z1={z1:b} z2={z2:b}\n"
    for _ in range(20):
        q = random_query(rng, n)
        if idsep(gd, q) != idsep_naive(gd, q, limit=_NO_LIMIT):
            return dump_graph(gd) + f"idsep disagrees with path enumeration on {format_triplet(q, gd.universe)}\n"
    return ""


def _minimal_imap(rng: random.Random, n: int) -> str:
    g = random_dag(rng, n)
    oracle = DSepOracle(g)
    u = undirected_minimal_imap(oracle)
    bad = is_imap(usep_model(u, limit=_NO_LIMIT), oracle)
    if bad is not None:
        return dump_graph(g) + f"not an I-map: {format_triplet(bad, g.universe)}\n"
    for a, b in u.edges():
        if is_imap(usep_model(u.without_edge(a, b), limit=_NO_LIMIT), oracle) is None:
            names = g.universe.names
            return dump_graph(g) + f"edge {names[a]}-{names[b]} is removable\n"
    return ""


CHECKS: dict[str, tuple[Callable[[random.Random, int], str], int]] = {
    "corollary1": (_corollary1, CLOSURE_LIMIT),
    "theorem1": (_theorem1, 64),
    "theorem2": (_theorem2, MODEL_LIMIT),
    "theorem3": (_theorem3, MODEL_LIMIT),
    "oracle-eq": (_oracle_eq, PATH_LIMIT),
    "usep-axioms": (_usep_axioms, MODEL_LIMIT),
    "dsep-closed": (_dsep_closed, MODEL_LIMIT),
    "idsep": (_idsep, MODEL_LIMIT),
    "minimal-imap": (_minimal_imap, MODEL_LIMIT),
}


def run_check(name: str, sizes: Sequence[int], trials: int, seed: int,
              limit: int | None = None) -> CheckReport:
    """Run ``trials`` instances of check ``name``; each draws n from ``sizes``."""
    fn, default_limit = CHECKS[name]
    lim = default_limit if limit is None else limit
    check_limit(f"check {name}", max(sizes), lim)
    report = CheckReport(name, seed)
    for i in range(1, trials + 1):
        rng = random.Random(f"{name}/{seed}/{i}")
        n = rng.choice(list(sizes))
        repro = fn(rng, n)
        report.trials.append(Trial(i, n, not repro, repro))
    return report
