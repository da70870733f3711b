"""Isomorphism of networks and of their asynchronous graphs, and reconstruction."""

from __future__ import annotations

import hashlib
import itertools
import math
import sys
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .core import BoolNet, Config, DimensionError, StatePermutation
from .dynamics import StateDigraph, periodic_structure, unstable_mask

MAX_ISOMETRY_N = 8
MAX_DIGRAPH_VERTICES = 1 << 12


# ---------------------------------------------------------------------------
# canonical form of a functional graph


@dataclass(frozen=True)
class CanonicalForm:
    text: str
    summary: str = field(compare=False)

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.text.encode()).hexdigest()

    def __str__(self) -> str:
        return self.digest


def least_rotation(seq: Sequence) -> int:
    """Start index of the lexicographically least rotation (Booth)."""
    s = list(seq) * 2
    length = len(seq)
    fail = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = fail[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = fail[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            fail[j - k] = -1
        else:
            fail[j - k] = i + 1
    return k % length if length else 0


def canonical_form(f: BoolNet) -> CanonicalForm:
    """Certificate of ``f`` up to relabelling of configurations.

    Trees hanging on cycles are ranked level by level (height, then sorted
    child ranks), which is a canonical AHU labelling; each cycle contributes
    the least rotation of its root ranks.
    """
    table = f.table.tolist()
    size = len(table)
    ps = periodic_structure(f)
    periodic = ps.period > 0
    children: list[list[int]] = [[] for _ in range(size)]
    for x in range(size):
        if not periodic[x]:
            children[table[x]].append(x)
    height = [0] * size
    # breadth-first from the cycles, then heights bottom-up
    order = []
    frontier = [x for x in range(size) if periodic[x]]
    while frontier:
        nxt = []
        for v in frontier:
            nxt.extend(children[v])
        order.extend(nxt)
        frontier = nxt
    for v in reversed(order):
        p = table[v]
        if height[v] + 1 > height[p]:
            height[p] = height[v] + 1
    by_height: dict[int, list[int]] = {}
    for v in range(size):
        by_height.setdefault(height[v], []).append(v)
    rank = [0] * size
    next_rank = 0
    for h in sorted(by_height):
        sigs = {v: tuple(sorted(rank[c] for c in children[v])) for v in by_height[h]}
        distinct = sorted(set(sigs.values()))
        index = {s: next_rank + k for k, s in enumerate(distinct)}
        next_rank += len(distinct)
        for v, s in sigs.items():
            rank[v] = index[s]
    sig_of = {}
    for v in range(size):
        sig_of.setdefault(rank[v], tuple(sorted(rank[c] for c in children[v])))
    comps = []
    for cyc in ps.cycles:
        roots = [rank[v] for v in cyc]
        start = least_rotation(roots)
        comps.append(tuple(roots[start:] + roots[:start]))
    comps.sort()
    ranks = ";".join(",".join(map(str, sig_of[r])) for r in range(next_rank))
    cycles = ";".join(",".join(map(str, c)) for c in comps)
    text = f"T{ranks}|C{cycles}"
    summary = _summary(ps.cycles, children)
    return CanonicalForm(text, summary)


def _summary(cycles, children) -> str:
    parts = []
    for cyc in cycles:
        tree = 0
        stack = list(cyc)
        while stack:
            v = stack.pop()
            for c in children[v]:
                tree += 1
                stack.append(c)
        parts.append((len(cyc), tree))
    # "C3/2" is a 3-cycle carrying 2 transient configurations
    counts = Counter(parts)
    return " + ".join(
        (f"{k}" if k > 1 else "") + f"C{length}" + (f"/{tree}" if tree else "")
        for (length, tree), k in sorted(counts.items())
    )


def are_isomorphic_networks(f: BoolNet, h: BoolNet) -> bool:
    if f.n != h.n:
        return False
    return canonical_form(f) == canonical_form(h)


# ---------------------------------------------------------------------------
# hypercube isometries


@dataclass(frozen=True)
class HyperIsometry:
    """``x -> sigma(x) + a`` with ``sigma(x)_i = x_{sigma[i]}`` (0-based indices)."""

    sigma: tuple[int, ...]
    a: Config

    @property
    def n(self) -> int:
        return len(self.sigma)

    def __call__(self, x: Config) -> Config:
        return apply(self, x)

    def table(self) -> np.ndarray:
        x = np.arange(1 << self.n, dtype=np.int64)
        return _permute_coords(x, self.sigma) ^ self.a

    def as_permutation(self) -> StatePermutation:
        return StatePermutation(self.n, self.table())

    def inverse(self) -> "HyperIsometry":
        inv = [0] * self.n
        for i, s in enumerate(self.sigma):
            inv[s] = i
        # x = sigma^-1(y + a) = sigma^-1(y) + sigma^-1(a)
        return HyperIsometry(tuple(inv), apply(HyperIsometry(tuple(inv), 0), self.a))


def _permute_coords(x: np.ndarray, sigma: Sequence[int]) -> np.ndarray:
    out = np.zeros_like(x)
    for i, s in enumerate(sigma):
        out |= ((x >> s) & 1) << i
    return out


def apply(iso: HyperIsometry, x: Config) -> Config:
    y = 0
    for i, s in enumerate(iso.sigma):
        y |= ((x >> s) & 1) << i
    return y ^ iso.a


def enumerate_isometries(n: int) -> Iterator[HyperIsometry]:
    if n > MAX_ISOMETRY_N:
        raise ValueError(f"n={n} too large to enumerate isometries (max {MAX_ISOMETRY_N})")
    for sigma in itertools.permutations(range(n)):
        for a in range(1 << n):
            yield HyperIsometry(sigma, a)


def _direction_counts(f: BoolNet) -> list[tuple[int, int]]:
    """Per coordinate: (#arcs setting it, #arcs clearing it) in the asynchronous graph."""
    x = np.arange(f.size, dtype=np.int64)
    unstable = unstable_mask(f)
    out = []
    for i in range(f.n):
        moving = ((unstable >> i) & 1).astype(bool)
        up = int(np.count_nonzero(moving & ((x >> i) & 1 == 0)))
        out.append((up, int(np.count_nonzero(moving)) - up))
    return out


def are_isometric_async(f: BoolNet, h: BoolNet) -> HyperIsometry | None:
    """An isometry mapping the asynchronous graph of ``f`` onto that of ``h``.

    Such an isometry also conjugates ``f`` into ``h``, which is what the
    search tests directly.
    """
    if f.n != h.n:
        raise DimensionError(f"dimension mismatch: {f.n} != {h.n}")
    n = f.n
    if n > MAX_ISOMETRY_N:
        raise ValueError(f"n={n} too large for the isometry search (max {MAX_ISOMETRY_N})")
    cf, ch = _direction_counts(f), _direction_counts(h)
    key_f = [tuple(sorted(c)) for c in cf]
    key_h = [tuple(sorted(c)) for c in ch]
    if sorted(key_f) != sorted(key_h):
        return None
    x = np.arange(f.size, dtype=np.int64)
    h_shift = h.table ^ x  # h(a) + a
    choices = [[j for j in range(n) if key_f[j] == key_h[i]] for i in range(n)]

    def search(i: int, sigma: list[int], used: int):
        if i == n:
            yield tuple(sigma)
            return
        for j in choices[i]:
            if not (used >> j) & 1:
                sigma.append(j)
                yield from search(i + 1, sigma, used | (1 << j))
                sigma.pop()

    for sigma in search(0, [], 0):
        s = _permute_coords(x, sigma)
        image_f = s[f.table]
        # x = 0 forces h(a) + a = sigma(f(0))
        for a in np.flatnonzero(h_shift == image_f[0]).tolist():
            if np.array_equal(h.table[s ^ a], image_f ^ a):
                return HyperIsometry(sigma, int(a))
    return None


# ---------------------------------------------------------------------------
# general digraph isomorphism


def _refine(colors: list[int], out_adj, in_adj) -> list[int]:
    """Iterate colour refinement to a fixpoint; colours are canonical ranks."""
    count = len(set(colors))
    while True:
        sigs = [
            (
                colors[v],
                tuple(sorted(colors[w] for w in out_adj[v])),
                tuple(sorted(colors[w] for w in in_adj[v])),
            )
            for v in range(len(colors))
        ]
        index = {s: k for k, s in enumerate(sorted(set(sigs)))}
        colors = [index[s] for s in sigs]
        new_count = len(index)
        if new_count == count:
            return colors
        count = new_count


def are_isomorphic_digraphs(g: StateDigraph, h: StateDigraph) -> StatePermutation | None:
    """Vertex bijection carrying the arcs of ``g`` exactly onto those of ``h``."""
    if g.size != h.size:
        raise ValueError("digraphs have different vertex counts")
    if g.size > MAX_DIGRAPH_VERTICES:
        raise ValueError(f"{g.size} vertices exceeds the limit {MAX_DIGRAPH_VERTICES}")
    size = g.size
    if g.num_arcs() != h.num_arcs():
        return None
    ga, ha = g.adjacency(), h.adjacency()
    # disjoint union: g on 0..size-1, h on size..2size-1
    out_adj = ga + [[w + size for w in succ] for succ in ha]
    in_adj: list[list[int]] = [[] for _ in range(2 * size)]
    for v, succ in enumerate(out_adj):
        for w in succ:
            in_adj[w].append(v)
    h_rows = h.rows

    def balanced(colors: list[int]) -> bool:
        return sorted(colors[:size]) == sorted(colors[size:])

    def search(colors: list[int]) -> list[int] | None:
        if not balanced(colors):
            return None
        classes: dict[int, list[int]] = {}
        for v in range(size):
            classes.setdefault(colors[v], []).append(v)
        target = None
        for c, members in sorted(classes.items(), key=lambda kv: (len(kv[1]), kv[0])):
            if len(members) > 1:
                target = c
                break
        if target is None:
            where = {colors[v + size]: v for v in range(size)}
            mapping = [where[colors[v]] for v in range(size)]
            for v in range(size):
                row = 0
                for w in ga[v]:
                    row |= 1 << mapping[w]
                if row != h_rows[mapping[v]]:
                    return None
            return mapping
        v = classes[target][0]
        fresh = max(colors) + 1
        for w in range(size, 2 * size):
            if colors[w] != target:
                continue
            trial = list(colors)
            trial[v] = fresh
            trial[w] = fresh
            found = search(_refine(trial, out_adj, in_adj))
            if found is not None:
                return found
        return None

    initial = [
        (len(out_adj[v]), len(in_adj[v]), int(v in _self_loops(out_adj, v))) for v in range(2 * size)
    ]
    index = {s: k for k, s in enumerate(sorted(set(initial)))}
    colors = _refine([index[s] for s in initial], out_adj, in_adj)
    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, 4 * size + 1000))
    try:
        mapping = search(colors)
    finally:
        sys.setrecursionlimit(old)
    if mapping is None:
        return None
    return StatePermutation(g.n, mapping)


def _self_loops(out_adj, v):
    return (v,) if v in out_adj[v] else ()


# ---------------------------------------------------------------------------
# reconstruction


def reconstruct_network(graph: StateDigraph) -> BoolNet:
    """The unique ``f`` whose asynchronous graph is ``graph``."""
    table = []
    for x, row in enumerate(graph.rows):
        fx = x
        r = row
        while r:
            low = r & -r
            y = low.bit_length() - 1
            diff = x ^ y
            if diff == 0 or diff & (diff - 1):
                raise ValueError(f"arc {x}->{y} does not join adjacent configurations")
            fx ^= diff
            r ^= low
        table.append(fx)
    return BoolNet(graph.n, table)


def relabel_digraph(graph: StateDigraph, pi: StatePermutation | HyperIsometry) -> StateDigraph:
    images = pi.images if isinstance(pi, StatePermutation) else pi.table()
    images = images.tolist()
    rows = [0] * graph.size
    for x, y in graph.arcs():
        rows[images[x]] |= 1 << images[y]
    return StateDigraph(graph.n, rows)


# ---------------------------------------------------------------------------
# unlabelled functional graphs


@lru_cache(maxsize=None)
def rooted_trees(k: int) -> tuple[tuple, ...]:
    """All unlabelled rooted trees with ``k`` vertices, as sorted child tuples."""
    if k < 1:
        return ()
    forests = _forests(k - 1, (k - 1, math.inf))
    return tuple(sorted({tuple(sorted(forest)) for forest in forests}))


def _forests(total: int, max_key) -> list[tuple]:
    """Multisets of rooted trees of total size ``total`` with keys at most ``max_key``."""
    if total == 0:
        return [()]
    out = []
    for size in range(min(total, max_key[0]), 0, -1):
        trees = rooted_trees(size)
        for idx in range(len(trees) - 1, -1, -1):
            if (size, idx) > max_key:
                continue
            for rest in _forests(total - size, (size, idx)):
                out.append((trees[idx],) + rest)
    return out


@lru_cache(maxsize=None)
def _components(size: int) -> tuple[tuple, ...]:
    """Connected functional graphs with ``size`` vertices: necklaces of rooted trees."""
    out = set()
    for length in range(1, size + 1):
        for parts in _compositions(size, length):
            for combo in itertools.product(*(rooted_trees(p) for p in parts)):
                start = least_rotation(combo)
                out.add(tuple(combo[start:] + combo[:start]))
    return tuple(sorted(out))


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def enumerate_functional_classes(size: int) -> list[list[int]]:
    """One function table per isomorphism class of maps on ``size`` points."""
    keyed = [(s, i) for s in range(1, size + 1) for i in range(len(_components(s)))]
    results = []

    def rec(remaining: int, max_key, chosen):
        if remaining == 0:
            results.append(_build(chosen))
            return
        for key in reversed(keyed):
            if key[0] > remaining or key > max_key:
                continue
            rec(remaining - key[0], key, chosen + [_components(key[0])[key[1]]])

    rec(size, (size + 1, 0), [])
    return results


def _build(components: list[tuple]) -> list[int]:
    table: list[int] = []

    def place_tree(tree: tuple, parent: int) -> None:
        for child in tree:
            v = len(table)
            table.append(parent)
            place_tree(child, v)

    for comp in components:
        roots = list(range(len(table), len(table) + len(comp)))
        for k in range(len(comp)):
            table.append(roots[(k + 1) % len(comp)])
        for root, tree in zip(roots, comp):
            place_tree(tree, root)
    return table
