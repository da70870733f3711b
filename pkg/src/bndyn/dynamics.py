"""Synchronous and asynchronous dynamics, attractors and path predicates."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .core import BoolNet, Config, format_config, weights_table


@dataclass(frozen=True, eq=False)
class StateDigraph:
    """Digraph on ``{0,1}^n``; ``rows[x]`` is the out-neighbour bitset of ``x``."""

    n: int
    rows: tuple[int, ...] = field(repr=False)

    def __post_init__(self):
        rows = tuple(int(r) for r in self.rows)
        if len(rows) != 1 << self.n:
            raise ValueError(f"expected {1 << self.n} rows, got {len(rows)}")
        limit = 1 << (1 << self.n)
        if any(r < 0 or r >= limit for r in rows):
            raise ValueError("row bitset wider than the vertex set")
        object.__setattr__(self, "rows", rows)

    @property
    def size(self) -> int:
        return len(self.rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, StateDigraph):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def successors(self, x: Config) -> list[int]:
        return _bits(self.rows[x])

    def has_arc(self, x: Config, y: Config) -> bool:
        return bool((self.rows[x] >> y) & 1)

    def arcs(self) -> Iterator[tuple[int, int]]:
        for x, row in enumerate(self.rows):
            for y in _bits(row):
                yield x, y

    def num_arcs(self) -> int:
        return sum(r.bit_count() for r in self.rows)

    def out_degrees(self) -> np.ndarray:
        return np.array([r.bit_count() for r in self.rows], dtype=np.int64)

    def in_degrees(self) -> np.ndarray:
        deg = np.zeros(self.size, dtype=np.int64)
        for _, y in self.arcs():
            deg[y] += 1
        return deg

    def adjacency(self) -> list[list[int]]:
        return [_bits(r) for r in self.rows]

    def reverse(self) -> "StateDigraph":
        rows = [0] * self.size
        for x, y in self.arcs():
            rows[y] |= 1 << x
        return StateDigraph(self.n, rows)

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "StateDigraph":
        rows = [0] * (1 << n)
        for x, y in arcs:
            rows[x] |= 1 << y
        return cls(n, rows)

    def to_dot(self, attractors: "AttractorSet | None" = None, name: str = "G") -> str:
        return to_dot(self, attractors, name)


def _bits(row: int) -> list[int]:
    out = []
    while row:
        low = row & -row
        out.append(low.bit_length() - 1)
        row ^= low
    return out


@dataclass(frozen=True)
class AttractorSet:
    """Terminal strong components, each as a sorted tuple of configurations."""

    attractors: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.attractors)

    def __iter__(self):
        return iter(self.attractors)

    @property
    def sizes(self) -> list[int]:
        return [len(a) for a in self.attractors]

    @property
    def bitsets(self) -> list[int]:
        return [sum(1 << v for v in a) for a in self.attractors]

    def containing(self, x: Config) -> tuple[int, ...] | None:
        for a in self.attractors:
            if x in a:
                return a
        return None


@dataclass(frozen=True)
class PeriodicStructure:
    cycle_lengths: tuple[int, ...]
    period: np.ndarray = field(repr=False)
    fixed_points: tuple[int, ...]
    periodic: tuple[int, ...]
    cycles: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def fp(self) -> int:
        return len(self.fixed_points)


# ---------------------------------------------------------------------------
# graph extraction


def synchronous_graph(f: BoolNet) -> StateDigraph:
    return StateDigraph(f.n, [1 << int(y) for y in f.table])


def unstable_mask(f: BoolNet) -> np.ndarray:
    """``f(x) xor x``: bit ``i-1`` set iff coordinate ``i`` is unstable at ``x``."""
    return f.table ^ np.arange(f.size, dtype=np.int64)


def asynchronous_graph(f: BoolNet) -> StateDigraph:
    rows = []
    for x, m in enumerate(unstable_mask(f).tolist()):
        row = 0
        while m:
            low = m & -m
            row |= 1 << (x ^ low)
            m ^= low
        rows.append(row)
    return StateDigraph(f.n, rows)


def async_successors(f: BoolNet) -> list[list[int]]:
    out = []
    for x, m in enumerate(unstable_mask(f).tolist()):
        succ = []
        while m:
            low = m & -m
            succ.append(x ^ low)
            m ^= low
        out.append(succ)
    return out


def undirected_async(f: BoolNet):
    """Hypercube edges carrying an arc of the asynchronous graph in either direction."""
    from .solidity import CubeSubgraph

    n = f.n
    x = np.arange(f.size, dtype=np.int64)
    unstable = unstable_mask(f)
    present = np.zeros((n, f.size >> 1), dtype=bool)
    for i in range(n):
        low = x[(x >> i) & 1 == 0]
        high = low | (1 << i)
        present[i] = ((unstable[low] >> i) & 1).astype(bool) | ((unstable[high] >> i) & 1).astype(bool)
    return CubeSubgraph(n, present.reshape(-1))


# ---------------------------------------------------------------------------
# strong components


def strongly_connected_components(adj: Sequence[Sequence[int]]) -> list[list[int]]:
    """Iterative Tarjan; components are emitted in reverse topological order."""
    size = len(adj)
    index = [-1] * size
    low = [0] * size
    on_stack = [False] * size
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(size):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pos = work[-1]
            succ = adj[v]
            if pos < len(succ):
                work[-1] = (v, pos + 1)
                w = succ[pos]
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def terminal_components(adj: Sequence[Sequence[int]]) -> list[list[int]]:
    comps = strongly_connected_components(adj)
    comp_of = [0] * len(adj)
    for k, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = k
    out = []
    for k, comp in enumerate(comps):
        if all(comp_of[w] == k for v in comp for w in adj[v]):
            out.append(comp)
    out.sort()
    return out


def attractors(graph: StateDigraph | BoolNet) -> AttractorSet:
    """Terminal strong components of a digraph.

    A :class:`BoolNet` is accepted as shorthand for its asynchronous graph.
    """
    if isinstance(graph, BoolNet):
        adj = async_successors(graph)
    else:
        adj = graph.adjacency()
    return AttractorSet(tuple(tuple(c) for c in terminal_components(adj)))


def is_strongly_connected(graph: StateDigraph | BoolNet) -> bool:
    adj = async_successors(graph) if isinstance(graph, BoolNet) else graph.adjacency()
    return len(strongly_connected_components(adj)) == 1


def bfs_distances(adj: Sequence[Sequence[int]], source: int) -> np.ndarray:
    dist = np.full(len(adj), -1, dtype=np.int64)
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


# ---------------------------------------------------------------------------
# synchronous structure


def fixed_points(f: BoolNet) -> list[int]:
    return np.flatnonzero(f.table == np.arange(f.size)).tolist()


def periodic_structure(f: BoolNet) -> PeriodicStructure:
    size = f.size
    table = f.table.tolist()
    # 0 unvisited, 1 on the current walk, 2 finished
    state = [0] * size
    period = np.zeros(size, dtype=np.int64)
    cycles = []
    for start in range(size):
        if state[start]:
            continue
        walk = []
        x = start
        while state[x] == 0:
            state[x] = 1
            walk.append(x)
            x = table[x]
        if state[x] == 1:
            cycle = walk[walk.index(x):]
            for v in cycle:
                period[v] = len(cycle)
            cycles.append(tuple(cycle))
        for v in walk:
            state[v] = 2
    periodic = tuple(np.flatnonzero(period).tolist())
    return PeriodicStructure(
        cycle_lengths=tuple(sorted(len(c) for c in cycles)),
        period=period,
        fixed_points=tuple(fixed_points(f)),
        periodic=periodic,
        cycles=tuple(cycles),
    )


def delta_sets(f: BoolNet) -> tuple[set[int], set[int]]:
    """Configurations of out-degree ``n`` and of in-degree ``n`` in the asynchronous graph."""
    n, size = f.n, f.size
    x = np.arange(size, dtype=np.int64)
    full = size - 1
    plus = set(np.flatnonzero(f.table == (x ^ full)).tolist())
    ok = np.ones(size, dtype=bool)
    for i in range(n):
        e = 1 << i
        # arc x+e_i -> x exists iff f_i(x+e_i) = x_i
        ok &= ((f.table[x ^ e] >> i) & 1) == ((x >> i) & 1)
    minus = set(np.flatnonzero(ok).tolist())
    return plus, minus


def image_count(f: BoolNet, k: int = 1) -> int:
    if k < 1:
        raise ValueError("k must be at least 1")
    t = f.table
    for _ in range(k - 1):
        t = f.table[t]
    return int(np.unique(t).size)


def contains_2P1(f: BoolNet) -> tuple[int, int] | None:
    """Least ``(a, b)`` with ``a, b, f(a), f(b)`` pairwise distinct, if any."""
    table = f.table
    x = np.arange(f.size, dtype=np.int64)
    moving = table != x
    for a in np.flatnonzero(moving).tolist():
        fa = int(table[a])
        ok = moving & (x != a) & (x != fa) & (table != a) & (table != fa)
        hits = np.flatnonzero(ok)
        if hits.size:
            return a, int(hits[0])
    return None


# ---------------------------------------------------------------------------
# almost decreasing paths


@dataclass(frozen=True)
class ReachReport:
    """Shortest almost decreasing paths towards a target set.

    ``dist[x]`` is the length of a shortest path from ``x`` with at most one
    increasing arc, or ``-1`` when none exists.
    """

    ok: bool
    targets: frozenset[int]
    dist: np.ndarray = field(repr=False)
    _next: tuple[np.ndarray, np.ndarray] = field(repr=False)

    def path(self, x: Config) -> list[int] | None:
        if self.dist[x] < 0:
            return None
        next0, next1 = self._next
        out = [int(x)]
        v, budget = int(x), 1
        while v not in self.targets:
            step = int(next1[v] if budget else next0[v])
            if step < 0:
                return None
            if step > v:
                budget = 0
            v = step
            out.append(v)
        return out

    @property
    def max_length(self) -> int:
        return int(self.dist.max()) if self.dist.size else 0


def almost_decreasing_reach(f: BoolNet, targets: Iterable[int] = ()) -> ReachReport:
    """Shortest paths in the asynchronous graph to ``targets`` or a fixed point."""
    size = f.size
    target_set = frozenset(int(t) for t in targets) | frozenset(fixed_points(f))
    w = weights_table(f.n)
    order = np.argsort(w, kind="stable").tolist()
    succ = async_successors(f)
    inf = 1 << 30
    dist0 = [inf] * size
    next0 = [-1] * size
    for v in order:
        if v in target_set:
            dist0[v] = 0
            continue
        for u in succ[v]:
            if u < v and dist0[u] + 1 < dist0[v]:
                dist0[v] = dist0[u] + 1
                next0[v] = u
    dist1 = list(dist0)
    next1 = list(next0)
    for v in order:
        if v in target_set:
            continue
        for u in succ[v]:
            cand = (dist1[u] if u < v else dist0[u]) + 1
            if cand < dist1[v]:
                dist1[v] = cand
                next1[v] = u
    dist = np.array([d if d < inf else -1 for d in dist1], dtype=np.int64)
    return ReachReport(
        ok=bool(np.all(dist >= 0)),
        targets=target_set,
        dist=dist,
        _next=(np.array(next0), np.array(next1)),
    )


# ---------------------------------------------------------------------------
# export


def to_dot(graph: StateDigraph, attractors: AttractorSet | None = None, name: str = "G") -> str:
    n = graph.n
    cluster = {}
    if attractors is not None:
        for k, att in enumerate(attractors):
            for v in att:
                cluster[v] = k
    lines = [f"digraph {name} {{"]
    for v in range(graph.size):
        label = format_config(v, n)
        if v in cluster:
            lines.append(f'  "{label}" [attractor={cluster[v]}];')
        else:
            lines.append(f'  "{label}";')
    for x, y in graph.arcs():
        lines.append(f'  "{format_config(x, n)}" -> "{format_config(y, n)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def parse_dot(text: str) -> StateDigraph:
    """Read back a digraph written by :func:`to_dot`."""
    import re

    from .core import FormatError, parse_config

    nodes = re.findall(r'^\s*"([01]+)"(?:\s*\[[^\]]*\])?\s*;', text, flags=re.M)
    arcs = re.findall(r'^\s*"([01]+)"\s*->\s*"([01]+)"\s*;', text, flags=re.M)
    if not nodes:
        raise FormatError("no vertices in DOT input")
    n = len(nodes[0])
    if len(nodes) != 1 << n:
        raise FormatError(f"expected {1 << n} vertices, got {len(nodes)}")
    return StateDigraph.from_arcs(n, ((parse_config(a), parse_config(b)) for a, b in arcs))
