import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bndyn.core import BoolNet, RandomSource, parse_config, random_network, random_permutation_network
from bndyn.dynamics import (
    StateDigraph,
    almost_decreasing_reach,
    asynchronous_graph,
    attractors,
    contains_2P1,
    delta_sets,
    fixed_points,
    image_count,
    parse_dot,
    periodic_structure,
    strongly_connected_components,
    synchronous_graph,
    terminal_components,
    to_dot,
    undirected_async,
)
from bndyn.solidity import CubeSubgraph

import oracles

P = parse_config


def arcset(pairs):
    return {(P(a), P(b)) for a, b in pairs}


def tables(n):
    size = 1 << n
    return st.lists(st.integers(0, size - 1), min_size=size, max_size=size).map(lambda t: BoolNet(n, t))


def test_synchronous_graph(shift):
    assert set(synchronous_graph(shift).arcs()) == arcset([("00", "00"), ("01", "10"), ("10", "01"), ("11", "11")])
    ident = synchronous_graph(BoolNet.identity(3))
    assert set(ident.arcs()) == {(x, x) for x in range(8)}
    const = synchronous_graph(BoolNet.constant(2, 0))
    assert set(const.arcs()) == {(x, 0) for x in range(4)}


def test_asynchronous_graph_examples(shift, twin_pair):
    assert set(asynchronous_graph(shift).arcs()) == arcset([("01", "00"), ("01", "11"), ("10", "00"), ("10", "11")])
    f, _ = twin_pair
    assert set(asynchronous_graph(f).arcs()) == arcset([("000", "100"), ("000", "010"), ("110", "111")])
    neg = asynchronous_graph(BoolNet.negation(2))
    assert neg.num_arcs() == 8


@given(tables(4))
def test_async_out_degree_is_distance(f):
    g = asynchronous_graph(f)
    for x in range(f.size):
        assert len(g.successors(x)) == bin(x ^ f(x)).count("1")
        assert all(bin(x ^ y).count("1") == 1 for y in g.successors(x))
    assert set(g.arcs()) == set(oracles.async_arcs(f.table, 4))


def test_undirected_async(shift):
    assert undirected_async(BoolNet.negation(2)) == CubeSubgraph.full(2)
    assert undirected_async(BoolNet.identity(3)) == CubeSubgraph.empty(3)
    expected = CubeSubgraph.from_edges(2, arcset([("01", "00"), ("01", "11"), ("10", "00"), ("10", "11")]))
    assert undirected_async(shift) == expected


def test_attractor_examples(shift, twin_pair):
    assert attractors(shift).attractors == ((P("00"),), (P("11"),))
    neg = attractors(BoolNet.negation(2))
    assert neg.sizes == [4]
    f, _ = twin_pair
    expected = sorted((P(s),) for s in ["100", "010", "001", "011", "101", "111"])
    assert sorted(attractors(f).attractors) == expected


@given(tables(3))
def test_attractors_match_networkx(f):
    assert sorted(attractors(f).attractors) == oracles.attractors(f.table, 3)


def test_attractors_match_networkx_larger(rng):
    for n in (5, 6):
        for _ in range(20):
            f = random_network(n, rng)
            assert sorted(attractors(f).attractors) == oracles.attractors(f.table, n)


def test_attractors_are_closed_and_strongly_connected(rng):
    for _ in range(30):
        f = random_network(5, rng)
        g = asynchronous_graph(f)
        atts = attractors(g)
        seen = set()
        for att in atts:
            members = set(att)
            assert not members & seen
            seen |= members
            assert all(set(g.successors(x)) <= members for x in att)
            sub = [[y for y in g.successors(x)] for x in att]
            assert len(members) == 1 or all(sub)


def test_singleton_attractor_iff_fixed_point(rng):
    for _ in range(30):
        f = random_network(5, rng)
        singles = {a[0] for a in attractors(f) if len(a) == 1}
        assert singles == set(fixed_points(f))


def test_trivial_bound_exhaustive_n2():
    for t in itertools.product(range(4), repeat=4):
        f = BoolNet(2, t)
        assert len(attractors(f)) >= max(1, len(fixed_points(f)))


def test_trivial_bound_random(rng):
    for n in range(3, 11):
        for _ in range(5):
            f = random_network(n, rng)
            assert len(attractors(f)) >= max(1, len(fixed_points(f)))


def test_permutations_without_short_cycles_have_big_attractors(rng):
    for n in range(3, 8):
        for _ in range(10):
            f = random_permutation_network(n, rng, {1, 2})
            assert min(attractors(f).sizes) >= 4


def test_iterative_scc_handles_long_paths():
    # a 5000-vertex path followed by a loop would overflow a recursive Tarjan
    size = 5000
    adj = [[v + 1] for v in range(size - 1)] + [[size - 1]]
    comps = strongly_connected_components(adj)
    assert len(comps) == size
    assert terminal_components(adj) == [[size - 1]]


def test_periodic_structure(shift, twin_pair):
    ps = periodic_structure(shift)
    assert ps.fixed_points == (0, 3)
    assert sorted(ps.cycle_lengths) == [1, 1, 2]
    ident = periodic_structure(BoolNet.identity(3))
    assert ident.fp == 8 and sorted(ident.cycle_lengths) == [1] * 8
    ps = periodic_structure(twin_pair[0])
    assert ps.fp == 6
    assert sorted(ps.cycle_lengths) == [1] * 6
    transient = [x for x in range(8) if ps.period[x] == 0]
    assert transient == [P("000"), P("110")]


@given(tables(4))
def test_periodic_invariants(f):
    ps = periodic_structure(f)
    assert sum(ps.cycle_lengths) == len(ps.periodic)
    assert ps.fp == ps.cycle_lengths.count(1)
    for x in ps.periodic:
        assert f.power(int(ps.period[x]))(x) == x


def test_delta_sets(shift):
    plus, minus = delta_sets(BoolNet.negation(2))
    assert plus == {0, 1, 2, 3}
    plus, _ = delta_sets(shift)
    assert plus == {P("01"), P("10")}
    assert delta_sets(BoolNet.identity(3)) == (set(), set())


@given(tables(3))
def test_delta_counts_match_degrees(f):
    plus, minus = delta_sets(f)
    assert (len(plus), len(minus)) == oracles.delta_counts(f.table, 3)


def test_image_count(shift):
    assert image_count(BoolNet.identity(4), 3) == 16
    assert image_count(BoolNet.constant(4, 2), 1) == 1
    assert image_count(shift, 2) == 4
    with pytest.raises(ValueError):
        image_count(shift, 0)


@given(tables(4))
def test_image_chain(f):
    d1, d2 = image_count(f, 1), image_count(f, 2)
    assert d2 <= d1 <= 16
    assert (d2 == d1 == 16) == f.is_permutation()
    assert d2 == oracles.image_count(f.table, 2)


def test_contains_2p1_examples(shift, twin_pair):
    assert contains_2P1(BoolNet.identity(3)) is None
    assert contains_2P1(shift) is None
    assert contains_2P1(twin_pair[0]) is None


@given(tables(3))
def test_contains_2p1_matches_pair_scan(f):
    found = contains_2P1(f)
    brute = [
        (a, b)
        for a in range(8)
        for b in range(8)
        if len({a, b, f(a), f(b)}) == 4
    ]
    assert (found is None) == (not brute)
    if found is not None:
        a, b = found
        assert len({a, b, f(a), f(b)}) == 4


def test_reach_examples():
    assert almost_decreasing_reach(BoolNet.identity(3)).ok
    assert almost_decreasing_reach(BoolNet.negation(2), {0}).ok
    assert not almost_decreasing_reach(BoolNet.constant(3, 7)).ok


@given(tables(3), st.sets(st.integers(0, 7), max_size=2))
def test_reach_matches_bfs_oracle(f, targets):
    assert almost_decreasing_reach(f, targets).ok == oracles.almost_decreasing_ok(f.table, 3, targets)


def test_reach_witness_paths(rng):
    for _ in range(40):
        f = random_network(5, rng)
        targets = {int(rng.integers(0, 32))}
        rep = almost_decreasing_reach(f, targets)
        g = asynchronous_graph(f)
        for x in range(32):
            path = rep.path(x)
            if rep.dist[x] < 0:
                assert path is None
                continue
            assert path[-1] in rep.targets
            assert len(path) - 1 == rep.dist[x]
            ups = sum(1 for a, b in zip(path, path[1:]) if b > a)
            assert ups <= 1
            assert all(g.has_arc(a, b) for a, b in zip(path, path[1:]))
            # one increasing arc costs two more steps than the weight drop
            drop = bin(path[0]).count("1") - bin(path[-1]).count("1")
            assert len(path) - 1 == drop + 2 * ups


def test_dot_round_trip(rng):
    f = random_network(4, rng)
    g = asynchronous_graph(f)
    text = to_dot(g, attractors(g))
    assert parse_dot(text) == g
    assert "attractor=0" in text


def test_from_arcs_rejects_foreign_vertices():
    with pytest.raises(ValueError):
        StateDigraph.from_arcs(2, [(0, 9)])


def test_random_streams_give_reproducible_attractors():
    a = attractors(random_network(8, RandomSource(3))).sizes
    b = attractors(random_network(8, RandomSource(3))).sizes
    assert a == b
    assert isinstance(np.sum(a), np.integer)
