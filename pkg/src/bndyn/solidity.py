"""Spanning subgraphs of the hypercube, staples and certified solidity."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .core import BoolNet, Config, RandomSource

MAX_EXACT_N = 3
MAX_EXPERIMENT_N = 14


def edge_rank(x: Config, i: int) -> int:
    """Rank of ``x`` among configurations with ``x_i = 0`` (``i`` is 1-based)."""
    return ((x >> i) << (i - 1)) | (x & ((1 << (i - 1)) - 1))


def edge_index(n: int, x: Config, y: Config) -> int:
    diff = x ^ y
    if diff == 0 or diff & (diff - 1) or max(x, y) >= 1 << n:
        raise ValueError(f"{x} and {y} are not adjacent in Q_{n}")
    i = diff.bit_length()
    return (i - 1) * (1 << (n - 1)) + edge_rank(min(x, y), i)


def edge_endpoints(n: int, index: int) -> tuple[int, int]:
    half = 1 << (n - 1)
    i, rank = divmod(index, half)
    low = ((rank >> i) << (i + 1)) | (rank & ((1 << i) - 1))
    return low, low | (1 << i)


@dataclass(frozen=True, eq=False)
class CubeSubgraph:
    """Spanning subgraph of ``Q_n``; ``edges`` is a boolean mask of length ``n * 2^(n-1)``.

    Edge ``{x, x + e_i}`` with ``x_i = 0`` sits at ``(i-1) * 2^(n-1) + rank(x)``.
    """

    n: int
    edges: np.ndarray = field(repr=False)

    def __post_init__(self):
        edges = np.array(self.edges, dtype=bool).reshape(-1)
        if edges.size != self.n << (self.n - 1):
            raise ValueError(f"edge mask length {edges.size} != {self.n << (self.n - 1)}")
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CubeSubgraph):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.edges, other.edges)

    def __hash__(self) -> int:
        return hash((self.n, self.edges.tobytes()))

    def __len__(self) -> int:
        return int(np.count_nonzero(self.edges))

    def __le__(self, other: "CubeSubgraph") -> bool:
        return bool(np.all(~self.edges | other.edges))

    def has_edge(self, x: Config, y: Config) -> bool:
        return bool(self.edges[edge_index(self.n, x, y)])

    def grid(self) -> np.ndarray:
        """Presence indexed by ``[i-1, x]`` for every configuration ``x``."""
        return _grid(self.n, self.edges)

    def edge_list(self) -> list[tuple[int, int]]:
        return [edge_endpoints(self.n, k) for k in np.flatnonzero(self.edges).tolist()]

    @classmethod
    def full(cls, n: int) -> "CubeSubgraph":
        return cls(n, np.ones(n << (n - 1), dtype=bool))

    @classmethod
    def empty(cls, n: int) -> "CubeSubgraph":
        return cls(n, np.zeros(n << (n - 1), dtype=bool))

    @classmethod
    def from_edges(cls, n: int, pairs) -> "CubeSubgraph":
        mask = np.zeros(n << (n - 1), dtype=bool)
        for x, y in pairs:
            mask[edge_index(n, x, y)] = True
        return cls(n, mask)

    @classmethod
    def from_grid(cls, n: int, grid: np.ndarray) -> "CubeSubgraph":
        x = np.arange(1 << n)
        rows = [grid[i][(x >> i) & 1 == 0] for i in range(n)]
        return cls(n, np.concatenate(rows))


def _grid(n: int, edges: np.ndarray) -> np.ndarray:
    """Expand the edge mask so that ``grid[i, x]`` tells whether ``{x, x + e_(i+1)}`` is present."""
    x = np.arange(1 << n, dtype=np.int64)
    half = 1 << (n - 1)
    grid = np.empty((n, 1 << n), dtype=bool)
    for i in range(n):
        low = x & ~(1 << i)
        rank = ((low >> (i + 1)) << i) | (low & ((1 << i) - 1))
        grid[i] = edges[i * half + rank]
    return grid


def staples(n: int, x: Config, y: Config) -> list[tuple[tuple[int, int], ...]]:
    """The ``n - 1`` paths of length 3 joining adjacent ``x`` and ``y``."""
    diff = x ^ y
    if diff == 0 or diff & (diff - 1) or max(x, y) >= 1 << n:
        raise ValueError(f"{x} and {y} are not adjacent in Q_{n}")
    out = []
    for j in range(n):
        e = 1 << j
        if e == diff:
            continue
        xp, yp = x ^ e, y ^ e
        out.append(tuple(sorted([tuple(sorted((x, xp))), tuple(sorted((xp, yp))), tuple(sorted((yp, y)))])))
    return out


def staple_counts(n: int, grid: np.ndarray) -> np.ndarray:
    """Number of complete staples on every edge, in grid layout."""
    x = np.arange(1 << n, dtype=np.int64)
    counts = np.zeros((n, 1 << n), dtype=np.int64)
    for i in range(n):
        ei = 1 << i
        for j in range(n):
            if j == i:
                continue
            ej = 1 << j
            # edges {x, x+e_j}, {x+e_j, x+e_j+e_i}, {x+e_i, x+e_i+e_j}
            counts[i] += grid[j] & grid[i][x ^ ej] & grid[j][x ^ ei]
    return counts


@dataclass(frozen=True)
class SolidityReport:
    certified_solid_edges: CubeSubgraph
    is_fully_solid: bool
    closure_rounds: int


def staple_closure(g: CubeSubgraph) -> SolidityReport:
    """Repeatedly add every cube edge carrying at least 4 complete staples."""
    n = g.n
    grid = g.grid()
    rounds = 0
    while True:
        counts = staple_counts(n, grid)
        add = (counts >= 4) & ~grid
        if not add.any():
            break
        grid = grid | add
        rounds += 1
    closure = CubeSubgraph.from_grid(n, grid)
    return SolidityReport(closure, bool(closure.edges.all()), rounds)


def exact_solid_closure(g: CubeSubgraph) -> CubeSubgraph:
    """Edges mapped to cube edges by every embedding of ``g`` into ``Q_n``."""
    n = g.n
    if n > MAX_EXACT_N:
        raise ValueError(f"exact closure enumerates (2^n)! permutations; n={n} > {MAX_EXACT_N}")
    size = 1 << n
    perms = np.array(list(itertools.permutations(range(size))), dtype=np.int64)
    all_edges = [edge_endpoints(n, k) for k in range(n << (n - 1))]

    def adjacent(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        d = a ^ b
        return (d != 0) & (d & (d - 1) == 0)

    embeds = np.ones(len(perms), dtype=bool)
    for x, y in g.edge_list():
        embeds &= adjacent(perms[:, x], perms[:, y])
    chosen = perms[embeds]
    mask = np.array([bool(np.all(adjacent(chosen[:, x], chosen[:, y]))) for x, y in all_edges])
    return CubeSubgraph(n, mask)


def random_cube_subgraph(n: int, p: float, rs: RandomSource | np.random.Generator) -> CubeSubgraph:
    rng = rs if isinstance(rs, np.random.Generator) else rs.generator()
    u = rng.random(n << (n - 1))
    return CubeSubgraph(n, u < p)


def solidity_samples(n: int, ps, samples: int, rs: RandomSource) -> np.ndarray:
    """Certified-solid outcome per sample and per edge probability.

    Every sample draws one uniform per edge and keeps the edge when its
    uniform is below ``p``, so outcomes for different ``p`` are coupled.
    """
    if not 1 <= n <= MAX_EXPERIMENT_N:
        raise ValueError(f"n={n} outside 1..{MAX_EXPERIMENT_N}")
    ps = list(ps)
    if any(not 0.0 <= p <= 1.0 for p in ps):
        raise ValueError("edge probability must lie in [0, 1]")
    out = np.zeros((samples, len(ps)), dtype=bool)
    for k in range(samples):
        u = rs.substream(k).generator().random(n << (n - 1))
        for j, p in enumerate(ps):
            out[k, j] = staple_closure(CubeSubgraph(n, u < p)).is_fully_solid
    return out


def solidity_experiment(n: int, p: float, samples: int, rs: RandomSource) -> float:
    """Fraction of random subgraphs (edge probability ``p``) certified solid."""
    return float(solidity_samples(n, [p], samples, rs)[:, 0].mean()) if samples else 0.0


def async_solidity_link(f: BoolNet) -> bool:
    """Whether the undirected asynchronous graph of ``f`` is certified solid."""
    from .dynamics import undirected_async

    return staple_closure(undirected_async(f)).is_fully_solid
