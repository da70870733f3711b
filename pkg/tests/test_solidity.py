import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bndyn.core import BoolNet, RandomSource, parse_config, random_network
from bndyn.solidity import (
    CubeSubgraph,
    async_solidity_link,
    edge_endpoints,
    edge_index,
    exact_solid_closure,
    random_cube_subgraph,
    solidity_experiment,
    solidity_samples,
    staple_closure,
    staples,
)

import oracles

P = parse_config


def as_edge_sets(g: CubeSubgraph) -> set[frozenset]:
    return {frozenset(e) for e in g.edge_list()}


def subgraphs(n):
    m = n << (n - 1)
    return st.lists(st.booleans(), min_size=m, max_size=m).map(lambda bits: CubeSubgraph(n, np.array(bits)))


def test_edge_indexing_round_trip():
    for n in (1, 2, 3, 5):
        seen = set()
        for k in range(n << (n - 1)):
            x, y = edge_endpoints(n, k)
            assert bin(x ^ y).count("1") == 1
            assert edge_index(n, x, y) == edge_index(n, y, x) == k
            seen.add((x, y))
        assert len(seen) == n << (n - 1)


def test_staples_on_first_unit_edge():
    got = {frozenset(frozenset(e) for e in s) for s in staples(4, P("0000"), P("1000"))}
    expected = set()
    for mid in ("0100", "0010", "0001"):
        a, b = P(mid), P(mid) ^ P("1000")
        expected.add(frozenset({frozenset((P("0000"), a)), frozenset((a, b)), frozenset((b, P("1000")))}))
    assert got == expected


def test_staples_count_and_disjoint():
    for n in range(2, 15):
        for x in (0, (1 << n) - 1, 0b1011 & ((1 << n) - 1)):
            for i in range(n):
                y = x ^ (1 << i)
                sts = staples(n, x, y)
                assert len(sts) == n - 1
                edges = [e for s in sts for e in s]
                assert len(set(edges)) == len(edges)
                assert set(sts) == set(staples(n, y, x))


def test_staples_reject_non_edges():
    with pytest.raises(ValueError):
        staples(3, 0, 3)
    with pytest.raises(ValueError):
        staples(3, 2, 2)


def test_closure_of_full_and_empty():
    for n in (3, 5, 6):
        rep = staple_closure(CubeSubgraph.full(n))
        assert rep.is_fully_solid and rep.closure_rounds == 0
        rep = staple_closure(CubeSubgraph.empty(n))
        assert rep.certified_solid_edges == CubeSubgraph.empty(n)
        assert not rep.is_fully_solid


def test_q6_minus_one_edge_closes_in_one_round():
    edges = CubeSubgraph.full(6).edges.copy()
    edges[17] = False
    g = CubeSubgraph(6, edges)
    x, y = edge_endpoints(6, 17)
    assert oracles.staple_count(as_edge_sets(g), 6, x, y) == 5
    rep = staple_closure(g)
    assert rep.is_fully_solid and rep.closure_rounds == 1


def test_closure_matches_naive_oracle(rng):
    for n in (5, 6):
        for p in (0.6, 0.75, 0.85):
            g = random_cube_subgraph(n, p, rng)
            closed = staple_closure(g).certified_solid_edges
            assert as_edge_sets(closed) == oracles.staple_closure(as_edge_sets(g), n)


def test_closure_inert_below_five():
    # at most 3 staples per edge, so nothing is ever added
    g = random_cube_subgraph(4, 0.8, RandomSource(1))
    assert staple_closure(g).certified_solid_edges == g


def test_exact_closure_examples():
    assert exact_solid_closure(CubeSubgraph.full(3)) == CubeSubgraph.full(3)
    assert exact_solid_closure(CubeSubgraph.empty(2)) == CubeSubgraph.empty(2)
    with pytest.raises(ValueError):
        exact_solid_closure(CubeSubgraph.empty(4))


def test_staple_closure_sound_at_three(rng):
    for _ in range(200):
        g = random_cube_subgraph(3, float(rng.random()), rng)
        exact = exact_solid_closure(g)
        assert g <= exact
        assert staple_closure(g).certified_solid_edges <= exact


def test_exact_closure_monotone(rng):
    for _ in range(20):
        g = random_cube_subgraph(3, 0.5, rng)
        extra = g.edges | (rng.random(len(g.edges)) < 0.3)
        assert exact_solid_closure(g) <= exact_solid_closure(CubeSubgraph(3, extra))


@given(subgraphs(5), st.lists(st.integers(0, 79), max_size=10))
def test_closure_properties(g, extra):
    closed = staple_closure(g).certified_solid_edges
    assert g <= closed
    assert staple_closure(closed).certified_solid_edges == closed
    bigger = g.edges.copy()
    bigger[extra] = True
    assert closed <= staple_closure(CubeSubgraph(5, bigger)).certified_solid_edges


def test_experiment_extremes():
    rs = RandomSource(4)
    assert solidity_experiment(6, 1.0, 10, rs) == 1.0
    assert solidity_experiment(6, 0.0, 10, rs) == 0.0
    with pytest.raises(ValueError):
        solidity_experiment(15, 0.5, 1, rs)
    with pytest.raises(ValueError):
        solidity_experiment(5, 1.5, 1, rs)


def test_experiment_deterministic():
    a = solidity_experiment(7, 0.9, 30, RandomSource(9))
    assert a == solidity_experiment(7, 0.9, 30, RandomSource(9))


def test_common_random_numbers_monotone_per_sample():
    out = solidity_samples(7, [0.7, 0.8, 0.9, 0.95], 40, RandomSource(12))
    # raising p only adds edges, so a certified sample stays certified
    for row in out:
        assert all(a <= b for a, b in itertools.pairwise(row))


def test_async_link_examples():
    assert async_solidity_link(BoolNet.negation(6))
    assert not async_solidity_link(BoolNet.identity(6))


def test_async_link_random_at_ten():
    rs = RandomSource(7)
    hits = sum(async_solidity_link(random_network(10, rs.substream(k))) for k in range(100))
    assert hits >= 95
