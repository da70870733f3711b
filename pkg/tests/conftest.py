import numpy as np
import pytest
from hypothesis import settings

from bndyn.core import BoolNet, RandomSource, parse_config

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def net(n: int, arcs: dict[str, str]) -> BoolNet:
    """Network that is the identity except on the listed ``x -> f(x)`` bit strings."""
    table = list(range(1 << n))
    for x, y in arcs.items():
        table[parse_config(x)] = parse_config(y)
    return BoolNet(n, table)


def walk_table(n: int, walks: list[str], base: list[int] | None = None) -> BoolNet:
    table = list(range(1 << n)) if base is None else list(base)
    for walk in walks:
        vs = [parse_config(t) for t in walk.split()]
        for x, y in zip(vs, vs[1:]):
            table[x] = y
    return BoolNet(n, table)


@pytest.fixture
def shift() -> BoolNet:
    # f(x1, x2) = (x2, x1)
    return BoolNet.from_function(2, lambda x: ((x & 1) << 1) | (x >> 1))


@pytest.fixture
def twin_pair() -> tuple[BoolNet, BoolNet]:
    """Two non-isomorphic networks on 3 coordinates with isomorphic asynchronous graphs."""
    f = net(3, {"000": "110", "110": "111"})
    h = net(3, {"000": "110", "011": "111"})
    return f, h


# good order example on 4 coordinates, X = {0000, 1000, 0100}
ORDER_EXAMPLE_WALKS = [
    "0100 0000 1000 0100",
    "0101 0100",
    "1010 1100 0001 1001 1010",
    "0010 1100",
    "1111 0011 1110 1111",
    "1101 0011",
    "0111 1110",
    "1011 0111",
    "0110 0111",
]
ORDER_EXAMPLE_X = ["0000", "1000", "0100"]
ORDER_EXAMPLE_ORDER = "0101 1010 1001 0001 1100 0010 1111 1110 0011 1101 0111 1011 0110"
ORDER_EXAMPLE_SLOTS = "0010 0001 1100 1010 1001 0110 0101 0011 1110 1101 1011 0111 1111"
ORDER_EXAMPLE_MONOTONE = [
    "0100 0000 1000 0100",
    "0010 0100",
    "0001 1001 1010 1100 0001",
    "0110 1001",
    "0101 1110 0011 0101",
    "1101 1110",
    "1011 0011",
    "0111 1011",
    "1111 1011",
]


@pytest.fixture
def order_example():
    f = walk_table(4, ORDER_EXAMPLE_WALKS)
    X = {parse_config(x) for x in ORDER_EXAMPLE_X}
    order = [parse_config(t) for t in ORDER_EXAMPLE_ORDER.split()]
    slots = [parse_config(t) for t in ORDER_EXAMPLE_SLOTS.split()]
    monotone = walk_table(4, ORDER_EXAMPLE_MONOTONE)
    return f, X, order, slots, monotone


@pytest.fixture
def rng() -> np.random.Generator:
    return RandomSource(20241019).generator()


def fixed_point_free(n: int, rng: np.random.Generator) -> BoolNet:
    from bndyn.core import random_network
    from bndyn.dynamics import fixed_points

    while True:
        f = random_network(n, rng)
        if not fixed_points(f):
            return f
