import itertools
import random

import pytest

from indepcalc import (Dag, DependencyModel, DSepOracle, StratifiedProtocol, Universe,
                       closure, compile_protocol, dsep, dsep_model, extract,
                       is_imap, minimal_boundary, protocol_triplets, validate, witness_protocol)
from indepcalc.core import Triplet, all_triplets, submasks
from indepcalc.protocol import NotAffirmedError, ProtocolError, boundaries_for_order


def proto(order, **bnd):
    u = Universe(sorted(order))
    return StratifiedProtocol.from_names(u, list(order), {k: list(v) for k, v in bnd.items()})


CHAIN_P = dict(order="abc", a="", b="a", c="b")
COLLIDER_P = dict(order="abc", a="", b="", c="ab")


def minimal_by_exhaustion(oracle, preds, v):
    """All inclusion-minimal valid boundaries, by checking every subset."""
    valid = [b for b in submasks(preds)
             if b == preds or Triplet(1 << v, b, preds & ~b) in oracle]
    return {b for b in valid if not any(o != b and o & ~b == 0 for o in valid)}


class TestValidate:
    def test_ok(self):
        assert validate(proto(**CHAIN_P)) == []

    def test_boundary_after_variable(self):
        u = Universe("ab")
        p = StratifiedProtocol(u, (0, 1), (0b10, 0))
        assert validate(p) == ["b does not precede a"]

    def test_duplicate(self):
        u = Universe("ab")
        problems = validate(StratifiedProtocol(u, (0, 0), (0, 0)))
        assert "duplicate a" in problems
        assert "b missing from order" in problems

    def test_compile_rejects_invalid(self):
        u = Universe("ab")
        with pytest.raises(ProtocolError) as err:
            compile_protocol(StratifiedProtocol(u, (0, 1), (0b10, 0)))
        assert err.value.violations == ["b does not precede a"]


class TestCompile:
    def test_chain(self, chain):
        assert compile_protocol(proto(**CHAIN_P)) == chain

    def test_collider(self, collider):
        assert compile_protocol(proto(**COLLIDER_P)) == collider

    def test_edgeless(self):
        g = compile_protocol(proto("abc", a="", b="", c=""))
        assert g.edges() == []


class TestProtocolTriplets:
    def test_chain(self):
        p = proto(**CHAIN_P)
        assert protocol_triplets(p) == [p.universe.triplet("c", "b", "a")]

    def test_collider(self):
        p = proto(**COLLIDER_P)
        assert protocol_triplets(p) == [p.universe.triplet("b", "", "a")]

    def test_edgeless(self):
        p = proto("abc", a="", b="", c="")
        u = p.universe
        assert protocol_triplets(p) == [u.triplet("b", "", "a"), u.triplet("c", "", "ab")]


class TestExtract:
    def test_chain(self, chain):
        p = extract(chain)
        assert p.order == (0, 1, 2)
        assert p.boundary == (0, 0b001, 0b010)

    def test_collider(self, collider):
        p = extract(collider)
        assert p.order == (0, 1, 2)
        assert p.boundary == (0, 0, 0b011)

    def test_edgeless(self):
        p = extract(Dag(Universe("abc"), [0, 0, 0]))
        assert p.boundary == (0, 0, 0)

    def test_roundtrip(self, collider_plus, detfork):
        for g in (collider_plus, Dag(detfork.universe, detfork.parents)):
            assert compile_protocol(extract(g)) == g


class TestMinimalBoundary:
    def test_chain(self, chain):
        oracle = DSepOracle(chain)
        preds = chain.universe.mask("ab")
        assert minimal_by_exhaustion(oracle, preds, 2) == {chain.universe.mask("b")}
        assert minimal_boundary(oracle, preds, 2) == chain.universe.mask("b")

    def test_collider(self, collider):
        oracle = DSepOracle(collider)
        preds = collider.universe.mask("ab")
        assert minimal_by_exhaustion(oracle, preds, 2) == {preds}
        assert minimal_boundary(oracle, preds, 2) == preds

    def test_empty_predecessors(self, chain):
        assert minimal_boundary(DSepOracle(chain), 0, 0) == 0

    def test_is_one_of_the_exhaustive_minima(self):
        rng = random.Random(21)
        u = Universe([f"v{i}" for i in range(4)])
        for _ in range(40):
            m = closure(DependencyModel(u, rng.sample(all_triplets(4), 3)))
            for v in range(4):
                preds = u.full & ~(1 << v)
                assert minimal_boundary(m, preds, v) in minimal_by_exhaustion(m, preds, v)


class TestWitness:
    def test_chain(self, chain):
        t = chain.universe.triplet("a", "b", "c")
        p = witness_protocol(DSepOracle(chain), t)
        assert validate(p) == []
        assert dsep(compile_protocol(p), t)
        # y and z first, then x
        assert [chain.universe.names[v] for v in p.order] == ["b", "c", "a"]

    def test_semigraphoid_model(self, xzyw):
        u = xzyw
        m = closure(DependencyModel(u, [u.triplet("x", "z", "yw")]))
        t = u.triplet("x", "z", "y")
        assert dsep(compile_protocol(witness_protocol(m, t)), t)

    def test_refuses_unaffirmed(self, chain):
        with pytest.raises(NotAffirmedError):
            witness_protocol(DSepOracle(chain), chain.universe.triplet("a", "", "c"))

    def test_falls_back_when_minimal_boundaries_miss(self):
        # I(x,y,z) and I(x,z,y) without intersection: greedy minimisation keeps
        # {z} for x, whose DAG z -> x does not separate x from z given y
        u = Universe("xyz")
        m = closure(DependencyModel(u, [u.triplet("x", "y", "z"), u.triplet("x", "z", "y")]))
        t = u.triplet("x", "y", "z")
        greedy = boundaries_for_order(m, [1, 2, 0])
        assert not dsep(compile_protocol(greedy), t)
        p = witness_protocol(m, t)
        assert p.boundary[0] == u.mask("y")
        assert dsep(compile_protocol(p), t)
        assert is_imap(dsep_model(compile_protocol(p)), m) is None

    def test_every_closure_triplet(self):
        rng = random.Random(17)
        u = Universe([f"v{i}" for i in range(4)])
        for _ in range(30):
            m = closure(DependencyModel(u, rng.sample(all_triplets(4), 2)))
            for t in m:
                assert dsep(compile_protocol(witness_protocol(m, t)), t)


def _all_protocols_of(m):
    """Every stratified protocol of model m: each boundary must be a tail boundary in m."""
    n = len(m.universe)
    for order in itertools.permutations(range(n)):
        choices = []
        before = 0
        for v in order:
            opts = [b for b in submasks(before)
                    if b == before or Triplet(1 << v, b, before & ~b) in m]
            choices.append((v, opts))
            before |= 1 << v
        for pick in itertools.product(*(opts for _, opts in choices)):
            b = [0] * n
            for (v, _), chosen in zip(choices, pick):
                b[v] = chosen
            yield StratifiedProtocol(m.universe, order, tuple(b))


@pytest.mark.parametrize("seed", range(12))
def test_union_of_all_protocol_dags_is_perfect_map(seed):
    # every semi-graphoid over three variables equals the union of the
    # d-separation models of the DAGs of all its protocols
    rng = random.Random(seed)
    u = Universe("abc")
    m = closure(DependencyModel(u, rng.sample(all_triplets(3), rng.randint(0, 3))))
    union = set()
    for p in _all_protocols_of(m):
        g_model = dsep_model(compile_protocol(p))
        assert g_model <= m
        union |= g_model.triplets
    assert union == set(m.triplets)


def test_any_protocol_of_a_semigraphoid_gives_an_imap():
    rng = random.Random(33)
    for _ in range(40):
        n = rng.randint(3, 5)
        u = Universe([f"v{i}" for i in range(n)])
        m = closure(DependencyModel(u, rng.sample(all_triplets(n), 3)))
        order = list(range(n))
        rng.shuffle(order)
        p = boundaries_for_order(m, order)
        assert is_imap(dsep_model(compile_protocol(p)), m) is None
        # non-minimal boundaries (full predecessor sets) are valid too
        full = StratifiedProtocol(u, tuple(order), tuple(
            sum(1 << w for w in order[:order.index(v)]) for v in range(n)))
        assert is_imap(dsep_model(compile_protocol(full)), m) is None
