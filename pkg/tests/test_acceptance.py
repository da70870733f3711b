"""Acceptance criteria 1-11, each printing one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines inline;
they are also written to the terminal when output is captured.
"""

import itertools

import numpy as np
import pytest

from bndyn.core import (
    BoolNet,
    RandomSource,
    StatePermutation,
    conjugate,
    random_derangement,
    random_network,
    random_permutation_network,
)
from bndyn.construct import (
    break_async_iso,
    converge_to_fixed_points,
    converge_to_small_attractor,
    exceptional_fixtures,
    h4_coloring,
    many_attractors,
    strongly_connected_variant,
)
from bndyn.construct.strong import distance_bound_holds
from bndyn.dynamics import (
    almost_decreasing_reach,
    asynchronous_graph,
    attractors,
    delta_sets,
    fixed_points,
    image_count,
    is_strongly_connected,
)
from bndyn.experiments import IMAGE2_LIMIT, MANY_ATT_RATE
from bndyn.iso import (
    HyperIsometry,
    are_isomorphic_digraphs,
    canonical_form,
    enumerate_functional_classes,
    reconstruct_network,
    relabel_digraph,
)
from bndyn.solidity import solidity_samples


@pytest.fixture
def report(capsys):
    def emit(k: int, label: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {label}" + (f" ({detail})" if detail else "")
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return emit


def test_criterion_01_trivial_bound(report):
    bad = 0
    for t in itertools.product(range(4), repeat=4):
        f = BoolNet(2, t)
        if len(attractors(f)) < max(1, len(fixed_points(f))):
            bad += 1
    report(1, "attractor count >= max(1, fp) over all 256 networks on 2 coordinates", bad == 0, f"violations={bad}")


def test_criterion_02_reconstruction(report):
    rs = RandomSource(202)
    exact = relabelled = 0
    for k in range(500):
        n = 4 + k % 5
        sub = rs.substream(k).generator()
        f = random_network(n, sub)
        g = asynchronous_graph(f)
        exact += reconstruct_network(g) == f
        iso = HyperIsometry(tuple(int(v) for v in sub.permutation(n)), int(sub.integers(0, 1 << n)))
        relabelled += canonical_form(reconstruct_network(relabel_digraph(g, iso))) == canonical_form(f)
    report(
        2,
        "network recovered from its asynchronous graph, also after a random cube isometry",
        exact == relabelled == 500,
        f"exact={exact}/500 isometric={relabelled}/500",
    )


def test_criterion_03_twin_pair(report, twin_pair):
    f, h = twin_pair
    found = are_isomorphic_digraphs(asynchronous_graph(f), asynchronous_graph(h))
    ok = found is not None and relabel_digraph(asynchronous_graph(f), found) == asynchronous_graph(h)
    ok = ok and canonical_form(f) != canonical_form(h)
    report(3, "shipped pair has isomorphic asynchronous graphs but non-isomorphic networks", ok)


def test_criterion_04_converge_to_fixed_points(report):
    rs = RandomSource(404)
    failures, longest, over = 0, 0, 0
    done = k = 0
    while done < 500:
        n = 5 + done % 4
        f = random_network(n, rs.substream(k))
        k += 1
        if not fixed_points(f):
            continue
        h = converge_to_fixed_points(f)
        reach = almost_decreasing_reach(h)
        ok = canonical_form(h) == canonical_form(f) and len(attractors(h)) == len(fixed_points(f)) and reach.ok
        failures += not ok
        longest = max(longest, reach.max_length - n)
        over += reach.max_length > n + 1
        done += 1
    report(
        4,
        "500 networks with fixed points relabelled to converge to them, witness paths <= n+1",
        failures == 0 and over == 0,
        f"failures={failures} paths-over-bound={over} max(length-n)={longest}",
    )


def test_criterion_05_small_attractor(report):
    rs = RandomSource(505)
    failures = 0

    def ok(f, res):
        atts = attractors(res.h)
        return (
            canonical_form(res.h) == canonical_form(f)
            and len(atts) == 1
            and len(atts.attractors[0]) <= 4
            and almost_decreasing_reach(res.h, atts.attractors[0]).ok
        )

    done = k = 0
    while done < 500:
        n = 5 + done % 4
        f = random_network(n, rs.substream(k))
        k += 1
        if fixed_points(f):
            continue
        failures += not ok(f, converge_to_small_attractor(f))
        done += 1
    classes = 0
    for n in (2, 3):
        for t in enumerate_functional_classes(1 << n):
            f = BoolNet(n, t)
            if not fixed_points(f):
                failures += not ok(f, converge_to_small_attractor(f))
                classes += 1
    for h in exceptional_fixtures().values():
        f = conjugate(h, StatePermutation(4, rs.substream(k).generator().permutation(16)))
        k += 1
        failures += not ok(f, converge_to_small_attractor(f))
    tight = 0
    for j in range(100):
        f = random_permutation_network(3 + j % 5, rs.substream(10_000 + j), {1, 2})
        tight += min(attractors(f).sizes) >= 4
    report(
        5,
        "unique attractor of size <= 4 reached almost decreasingly; size 4 needed without short cycles",
        failures == 0 and tight == 100,
        f"failures={failures} small-classes={classes} fixtures=4 tightness={tight}/100",
    )


def test_criterion_06_break_async_iso(report):
    rs = RandomSource(606)
    failures = confirmed = 0
    done = k = 0
    while done < 500:
        n = 3 + done % 2
        f = random_network(n, rs.substream(k))
        k += 1
        if f.is_constant() or f.is_identity():
            continue
        h, w = break_async_iso(f)
        idx = 0 if w.invariant == "delta+" else 1
        good = canonical_form(h) == canonical_form(f)
        good = good and len(delta_sets(f)[idx]) == w.count_f != w.count_h == len(delta_sets(h)[idx])
        if n == 3:
            separate = are_isomorphic_digraphs(asynchronous_graph(f), asynchronous_graph(h)) is None
            confirmed += separate
            good = good and separate
        failures += not good
        done += 1
    report(
        6,
        "500 networks get an isomorphic twin with a different asynchronous graph",
        failures == 0,
        f"failures={failures} confirmed-by-digraph-iso={confirmed}/250",
    )


def test_criterion_07_many_attractors(report):
    rs = RandomSource(707)
    threshold = MANY_ATT_RATE * (1 << 10)
    below = hits = 0
    counts = []
    for k in range(100):
        f = random_network(10, rs.substream(k))
        res = many_attractors(f)
        sizes_ok = all(len(g) <= 4 for g in res.gadgets)
        below += res.count < image_count(f, 2) // 10 or not sizes_ok
        hits += res.count >= threshold
        counts.append(res.count)
    fraction = hits / 100
    report(
        7,
        "at least floor(d/10) attractors of size <= 4 at n=10; rate 0.046*2^n reached in >= 95% of samples",
        below == 0 and fraction >= 0.95,
        f"guarantee-misses={below} fraction={fraction:.2f} min-count={min(counts)} threshold={threshold:.1f}",
    )


def test_criterion_08_image_constant(report):
    rs = RandomSource(808)
    ratios = np.array([image_count(random_network(14, rs.substream(k)), 2) / (1 << 14) for k in range(200)])
    mean = float(ratios.mean())
    report(
        8,
        "mean |Im f^2| / 2^14 within [0.46, 0.48]",
        0.46 <= mean <= 0.48,
        f"mean={mean:.6f} limit={IMAGE2_LIMIT:.6f}",
    )


def test_criterion_09_solidity(report):
    rs = RandomSource(2024)
    fractions = {}
    crn_ok = True
    for n in (7, 9, 11):
        out = solidity_samples(n, [0.72, 0.75], 200, rs)
        crn_ok = crn_ok and bool(np.all(out[:, 0] <= out[:, 1]))
        fractions[n] = float(out[:, 1].mean())
    monotone = fractions[7] <= fractions[9] <= fractions[11]
    detail = " ".join(f"n={n}:{v:.3f}" for n, v in fractions.items())
    report(
        9,
        "certified-solid fraction at p=0.75 non-decreasing in n, per-sample monotone in p, >= 0.99 at n=11",
        monotone and crn_ok and fractions[11] >= 0.99,
        f"{detail} monotone-in-n={monotone} per-sample-monotone={crn_ok}",
    )


def test_criterion_10_strongly_connected(report):
    rs = RandomSource(1010)
    failures = 0
    for k in range(200):
        n = 3 + k % 4
        f = random_derangement(n, rs.substream(k))
        h = strongly_connected_variant(f)
        ok = canonical_form(h) == canonical_form(f) and is_strongly_connected(h) and distance_bound_holds(h)
        failures += not ok
    report(10, "200 derangements relabelled to strongly connected graphs with paths <= d(x,y)+4", failures == 0,
           f"failures={failures}")


def test_criterion_11_h4_coloring(report):
    rs = RandomSource(1111)
    failures = 0
    for k in range(200):
        n = 4 + k % 5
        f = random_derangement(n, rs.substream(k))
        phi = h4_coloring(f)
        failures += not (phi.is_valid(f) and phi.classes() == [1 << (n - 2)] * 4)
    report(11, "200 fixed-point-free permutations get arc-valid, exactly balanced H4-colourings", failures == 0,
           f"failures={failures}")
