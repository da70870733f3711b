"""Configurations, Boolean networks, state permutations and seeded randomness.

A configuration of dimension ``n`` is stored as a plain ``int`` whose bit
``i - 1`` holds coordinate ``x_i`` (coordinate 1 is the least significant
bit).  With that convention ``e_i == 1 << (i - 1)`` and a configuration's
index in every table is the configuration itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_N = 24

Config = int


class DimensionError(ValueError):
    """Dimension out of range, or two objects of different dimension combined."""


class FormatError(ValueError):
    """Raised by :func:`parse_network` on malformed input."""


class PreconditionError(ValueError):
    """A construction was called outside the hypotheses it needs."""


class VerificationError(RuntimeError):
    """A construction produced an output that failed its own checks."""


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_N:
        raise DimensionError(f"dimension n={n} outside 1..{MAX_N}")


# ---------------------------------------------------------------------------
# configuration helpers


def enc(x: Config, n: int | None = None) -> int:
    """Index of configuration ``x``; identical to the word itself."""
    if x < 0 or (n is not None and x >= 1 << n):
        raise ValueError(f"configuration {x} out of range for n={n}")
    return int(x)


def dec(i: int, n: int) -> Config:
    """Configuration with index ``i`` in ``{0,1}^n``."""
    _check_n(n)
    if not 0 <= i < 1 << n:
        raise ValueError(f"index {i} out of range for n={n}")
    return int(i)


def unit(i: int, n: int | None = None) -> Config:
    """``e_i`` (1-based coordinate)."""
    if i < 1 or (n is not None and i > n):
        raise ValueError(f"coordinate {i} out of range")
    return 1 << (i - 1)


def units(*coords: int) -> Config:
    """``e_{i1,...,ik}``."""
    x = 0
    for i in coords:
        x |= unit(i)
    return x


def ones(n: int) -> Config:
    return (1 << n) - 1


def weight(x: Config) -> int:
    return int(x).bit_count()


def distance(x: Config, y: Config) -> int:
    return (int(x) ^ int(y)).bit_count()


def complement(x: Config, n: int) -> Config:
    return int(x) ^ ones(n)


def leq(x: Config, y: Config) -> bool:
    """Componentwise order ``x <= y``."""
    return int(x) & ~int(y) == 0


def bit(x: Config, i: int) -> int:
    """Coordinate ``x_i`` (1-based)."""
    return (int(x) >> (i - 1)) & 1


def format_config(x: Config, n: int) -> str:
    """Bit string with coordinate 1 as the leftmost character."""
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def parse_config(text: str) -> Config:
    if not text or any(c not in "01" for c in text):
        raise FormatError(f"non-binary token {text!r}")
    x = 0
    for i, c in enumerate(text):
        if c == "1":
            x |= 1 << i
    return x


def weight_key(x: Config) -> tuple[int, int]:
    """Sort key (weight, enc) used for every deterministic choice."""
    return (weight(x), int(x))


_POPCOUNT8 = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)


def popcount(a: np.ndarray) -> np.ndarray:
    """Vectorised popcount for non-negative integer arrays below 2**32."""
    a = np.asarray(a, dtype=np.int64)
    out = np.zeros(a.shape, dtype=np.int64)
    for shift in (0, 8, 16, 24):
        out += _POPCOUNT8[(a >> shift) & 0xFF]
    return out


def weights_table(n: int) -> np.ndarray:
    return popcount(np.arange(1 << n, dtype=np.int64))


# ---------------------------------------------------------------------------
# networks and permutations


def _frozen(values: Iterable[int] | np.ndarray, n: int) -> np.ndarray:
    arr = np.array(values, dtype=np.int64).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class BoolNet:
    """A function ``f: {0,1}^n -> {0,1}^n`` held as its full table."""

    n: int
    table: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_n(self.n)
        table = _frozen(self.table, self.n)
        if table.shape[0] != 1 << self.n:
            raise ValueError(f"table length {table.shape[0]} != 2^{self.n}")
        if table.size and (table.min() < 0 or table.max() >= 1 << self.n):
            raise ValueError("table entry is not an n-bit configuration")
        object.__setattr__(self, "table", table)

    @property
    def size(self) -> int:
        return 1 << self.n

    def __call__(self, x: Config) -> Config:
        return int(self.table[x])

    def __eq__(self, other) -> bool:
        if not isinstance(other, BoolNet):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.table, other.table)

    def __hash__(self) -> int:
        return hash((self.n, self.table.tobytes()))

    def __repr__(self) -> str:
        if self.n <= 3:
            body = ", ".join(
                f"{format_config(x, self.n)}->{format_config(int(y), self.n)}"
                for x, y in enumerate(self.table)
            )
            return f"BoolNet(n={self.n}, {body})"
        return f"BoolNet(n={self.n})"

    def component(self, i: int) -> np.ndarray:
        """Local function ``f_i`` as a 0/1 array over all configurations."""
        return (self.table >> (i - 1)) & 1

    def compose(self, other: "BoolNet") -> "BoolNet":
        """``self o other``."""
        _same_n(self.n, other.n)
        return BoolNet(self.n, self.table[other.table])

    def power(self, k: int) -> "BoolNet":
        if k < 0:
            raise ValueError("k must be non-negative")
        t = np.arange(self.size, dtype=np.int64)
        for _ in range(k):
            t = self.table[t]
        return BoolNet(self.n, t)

    def is_permutation(self) -> bool:
        return np.unique(self.table).size == self.size

    def is_identity(self) -> bool:
        return bool(np.all(self.table == np.arange(self.size)))

    def is_constant(self) -> bool:
        return bool(np.all(self.table == self.table[0]))

    @classmethod
    def from_function(cls, n: int, func) -> "BoolNet":
        return cls(n, [func(x) for x in range(1 << n)])

    @classmethod
    def identity(cls, n: int) -> "BoolNet":
        return cls(n, np.arange(1 << n))

    @classmethod
    def constant(cls, n: int, value: Config = 0) -> "BoolNet":
        return cls(n, np.full(1 << n, value))

    @classmethod
    def negation(cls, n: int) -> "BoolNet":
        return cls(n, np.arange(1 << n) ^ ones(n))


def _same_n(a: int, b: int) -> None:
    if a != b:
        raise DimensionError(f"dimension mismatch: {a} != {b}")


@dataclass(frozen=True, eq=False)
class StatePermutation:
    """A bijection of ``{0,1}^n``."""

    n: int
    images: np.ndarray = field(repr=False)

    def __post_init__(self):
        _check_n(self.n)
        images = _frozen(self.images, self.n)
        size = 1 << self.n
        if images.shape[0] != size:
            raise ValueError(f"images length {images.shape[0]} != 2^{self.n}")
        seen = np.zeros(size, dtype=bool)
        if images.min() < 0 or images.max() >= size:
            raise ValueError("image is not an n-bit configuration")
        seen[images] = True
        if not seen.all():
            raise ValueError("images do not form a bijection")
        object.__setattr__(self, "images", images)

    def __call__(self, x: Config) -> Config:
        return int(self.images[x])

    def __eq__(self, other) -> bool:
        if not isinstance(other, StatePermutation):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.images, other.images)

    def __hash__(self) -> int:
        return hash((self.n, self.images.tobytes()))

    def inverse(self) -> "StatePermutation":
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.images.size)
        return StatePermutation(self.n, inv)

    def compose(self, other: "StatePermutation") -> "StatePermutation":
        """``self o other``."""
        _same_n(self.n, other.n)
        return StatePermutation(self.n, self.images[other.images])

    def is_identity(self) -> bool:
        return bool(np.all(self.images == np.arange(self.images.size)))

    @classmethod
    def identity(cls, n: int) -> "StatePermutation":
        return cls(n, np.arange(1 << n))

    @classmethod
    def from_partial(cls, n: int, mapping: dict[int, int]) -> "StatePermutation":
        """Extend an injective partial map to a permutation.

        Unmapped sources are matched with unused targets, both in ascending
        enc order.
        """
        size = 1 << n
        images = np.full(size, -1, dtype=np.int64)
        used = np.zeros(size, dtype=bool)
        for src, dst in mapping.items():
            if used[dst]:
                raise ValueError(f"target {dst} used twice")
            images[src] = dst
            used[dst] = True
        free_targets = iter(np.flatnonzero(~used).tolist())
        for x in range(size):
            if images[x] < 0:
                images[x] = next(free_targets)
        return cls(n, images)


def transposition(a: Config, b: Config, n: int) -> StatePermutation:
    """``(a <-> b)``."""
    size = 1 << n
    if not (0 <= a < size and 0 <= b < size):
        raise DimensionError(f"configurations {a}, {b} not in dimension {n}")
    images = np.arange(size, dtype=np.int64)
    images[a], images[b] = b, a
    return StatePermutation(n, images)


def conjugate(f: BoolNet, pi: StatePermutation) -> BoolNet:
    """``pi o f o pi^-1``: relabel every state ``x`` as ``pi(x)``."""
    _same_n(f.n, pi.n)
    inv = np.empty_like(pi.images)
    inv[pi.images] = np.arange(pi.images.size)
    return BoolNet(f.n, pi.images[f.table[inv]])


def cycle_lengths_of_permutation(images: Sequence[int] | np.ndarray) -> list[int]:
    images = np.asarray(images)
    seen = np.zeros(images.size, dtype=bool)
    lengths = []
    for start in range(images.size):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = int(images[x])
            length += 1
        lengths.append(length)
    return sorted(lengths)


# ---------------------------------------------------------------------------
# text format


def serialize_network(f: BoolNet) -> str:
    lines = [f"BN {f.n}"]
    for x in range(f.size):
        lines.append(f"{format_config(x, f.n)} {format_config(int(f.table[x]), f.n)}")
    return "\n".join(lines) + "\n"


def parse_network(text: str) -> BoolNet:
    lines = [
        line.strip()
        for line in text.splitlines()
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not lines:
        raise FormatError("malformed header: empty input")
    header = lines[0].split()
    if len(header) != 2 or header[0] != "BN" or not header[1].isdigit():
        raise FormatError(f"malformed header {lines[0]!r}")
    n = int(header[1])
    if not 1 <= n <= MAX_N:
        raise FormatError(f"malformed header: n={n} outside 1..{MAX_N}")
    body = lines[1:]
    if len(body) != 1 << n:
        raise FormatError(f"wrong line count: expected {1 << n}, got {len(body)}")
    table = np.full(1 << n, -1, dtype=np.int64)
    for line in body:
        parts = line.split()
        if len(parts) != 2 or len(parts[0]) != n or len(parts[1]) != n:
            raise FormatError(f"malformed line {line!r}")
        x, y = parse_config(parts[0]), parse_config(parts[1])
        if table[x] >= 0:
            raise FormatError(f"duplicate index {parts[0]}")
        table[x] = y
    return BoolNet(n, table)


# ---------------------------------------------------------------------------
# randomness


@dataclass(frozen=True)
class RandomSource:
    """Seeded stream factory; ``(seed, stream)`` fixes the draw sequence."""

    seed: int = 0
    stream: int = 0

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def substream(self, k: int) -> "RandomSource":
        """Independent child stream, e.g. one per Monte Carlo sample."""
        return RandomSource(self.seed, (self.stream << 20) + k + 1)


def _rng(rs: RandomSource | np.random.Generator) -> np.random.Generator:
    return rs if isinstance(rs, np.random.Generator) else rs.generator()


def random_network(n: int, rs: RandomSource | np.random.Generator) -> BoolNet:
    """Uniform element of F(n)."""
    _check_n(n)
    rng = _rng(rs)
    return BoolNet(n, rng.integers(0, 1 << n, size=1 << n))


def random_permutation_network(
    n: int,
    rs: RandomSource | np.random.Generator,
    forbid_cycle_lengths: Iterable[int] = (),
    max_tries: int = 100_000,
) -> BoolNet:
    """Uniform permutation of ``{0,1}^n`` avoiding the given cycle lengths."""
    _check_n(n)
    forbid = set(forbid_cycle_lengths)
    size = 1 << n
    if forbid.issuperset(range(1, size + 1)) or _infeasible(size, forbid):
        raise ValueError(f"no permutation of {size} points avoids lengths {sorted(forbid)}")
    rng = _rng(rs)
    for _ in range(max_tries):
        images = rng.permutation(size)
        if forbid.isdisjoint(cycle_lengths_of_permutation(images)):
            return BoolNet(n, images)
    raise RuntimeError("rejection sampling exhausted; constraint too restrictive")


def _infeasible(size: int, forbid: set[int]) -> bool:
    allowed = [k for k in range(1, size + 1) if k not in forbid]
    reachable = [False] * (size + 1)
    reachable[0] = True
    for total in range(1, size + 1):
        reachable[total] = any(reachable[total - k] for k in allowed if k <= total)
    return not reachable[size]


def random_derangement(n: int, rs: RandomSource | np.random.Generator) -> BoolNet:
    return random_permutation_network(n, rs, forbid_cycle_lengths={1})


def iter_configs(n: int) -> Iterator[Config]:
    return iter(range(1 << n))


def binom(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0
