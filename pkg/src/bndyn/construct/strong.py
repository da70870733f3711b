"""Balanced H4-colourings of derangements and the strongly connected relabelling.

H4 has vertices 0..3 and arcs ``c -> c+1`` and ``c -> c+2`` (mod 4).  A
balanced colouring of the synchronous graph lets the relabelling send colour
classes onto the four quadrants fixed by coordinates 1 and 2, so that every
quadrant square becomes an asynchronous 4-cycle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import BoolNet, PreconditionError, StatePermutation, VerificationError, conjugate, popcount
from ..dynamics import async_successors, bfs_distances, is_strongly_connected, periodic_structure

# colour -> value of (x_1, x_2) packed in the two low bits
QUADRANT = {0: 0b00, 1: 0b01, 2: 0b11, 3: 0b10}
DISTANCE_CHECK_MAX_N = 8


def is_h4_arc(a: int, b: int) -> bool:
    return (b - a) % 4 in (1, 2)


@dataclass(frozen=True)
class H4Coloring:
    color: tuple[int, ...]

    def classes(self) -> list[int]:
        return np.bincount(np.asarray(self.color), minlength=4).tolist()

    def is_valid(self, f: BoolNet) -> bool:
        return all(is_h4_arc(self.color[x], self.color[f(x)]) for x in range(f.size))

    def is_balanced(self) -> bool:
        return len(set(self.classes())) == 1


def cycle_coloring(length: int, c: int = 0) -> list[int]:
    """Colours along a cycle ``v_0 -> ... -> v_{l-1} -> v_0``.

    The excess depends on ``length mod 4``: none for 0, one extra ``c`` for 1,
    one missing ``c`` for 3, one extra ``c`` and ``c+2`` for 2.
    """
    if length < 2:
        raise PreconditionError("cycles of length 1 have no H4-colouring")
    t = length % 4
    tail = {0: [], 1: [c, c + 2, c, c + 1, c + 3], 2: [c, c + 2], 3: [c + 1, c + 2, c + 3]}[t]
    head = [c + i for i in range(length - len(tail))]
    return [v % 4 for v in head + tail]


def _combination(by_type: dict[int, list]) -> list[tuple[object, int]]:
    """One sub-multiset of cycles with a balanced colouring, as (cycle, c) pairs.

    Cycles of type 1 and 2 take the exceeding variant at ``c``; cycles of type 3
    the defecting one.  Both are produced by :func:`cycle_coloring`.
    """
    a = {t: len(v) for t, v in by_type.items()}
    take = lambda t: by_type[t].pop(0)  # noqa: E731
    if a[0]:
        return [(take(0), 0)]
    if a[1] >= 4:
        return [(take(1), c) for c in range(4)]
    if a[3] >= 4:
        return [(take(3), c) for c in range(4)]
    if a[2] >= 2:
        return [(take(2), 0), (take(2), 1)]
    if a[1] and a[3]:
        return [(take(1), 0), (take(3), 0)]
    if a[1] >= 2 and a[2]:
        return [(take(1), 0), (take(1), 2), (take(2), 1)]
    if a[3] >= 2 and a[2]:
        return [(take(3), 0), (take(3), 2), (take(2), 0)]
    raise VerificationError("no balanced sub-collection; vertex count is not a multiple of 4")


def h4_coloring(f: BoolNet) -> H4Coloring:
    """Balanced H4-colouring of the synchronous graph of a derangement."""
    if not f.is_permutation():
        raise PreconditionError("f is not a permutation")
    ps = periodic_structure(f)
    if ps.fp:
        raise PreconditionError("f has a fixed point")
    if f.size % 4:
        raise PreconditionError("need a multiple of 4 configurations")
    by_type: dict[int, list] = {0: [], 1: [], 2: [], 3: []}
    for cyc in sorted(ps.cycles, key=lambda c: (len(c), min(c))):
        start = cyc.index(min(cyc))
        by_type[len(cyc) % 4].append(list(cyc[start:]) + list(cyc[:start]))
    color = [-1] * f.size
    while any(by_type.values()):
        for cyc, c in _combination(by_type):
            for v, col in zip(cyc, cycle_coloring(len(cyc), c)):
                color[v] = col
    out = H4Coloring(tuple(color))
    if not (out.is_valid(f) and out.is_balanced()):
        raise VerificationError("colouring is not a balanced H4-colouring")
    return out


def quadrant_permutation(f: BoolNet, phi: H4Coloring) -> StatePermutation:
    """Colour ``k`` goes to quadrant ``QUADRANT[k]``; each colour-0 vertex and its image get complementary tails."""
    n = f.n
    mask = (1 << (n - 2)) - 1
    tails = [set(range(mask + 1)) for _ in range(4)]
    images = [-1] * f.size

    def place(v: int, tail: int) -> None:
        col = phi.color[v]
        tails[col].remove(tail)
        images[v] = (tail << 2) | QUADRANT[col]

    ps = periodic_structure(f)
    nxt = 0
    for cyc in sorted(ps.cycles, key=min):
        start = cyc.index(min(cyc))
        for v in list(cyc[start:]) + list(cyc[:start]):
            if phi.color[v] == 0:
                place(v, nxt)
                place(f(v), nxt ^ mask)
                nxt += 1
    for v in range(f.size):
        if images[v] < 0:
            place(v, min(tails[phi.color[v]]))
    return StatePermutation(n, images)


def _hamming_from(x: int, n: int) -> np.ndarray:
    return popcount(np.arange(1 << n, dtype=np.int64) ^ x)


def distance_bound_holds(h: BoolNet, slack: int = 4) -> bool:
    """All-pairs check that the asynchronous graph has paths of length at most ``d(x,y) + slack``."""
    adj = async_successors(h)
    for x in range(h.size):
        dist = bfs_distances(adj, x)
        if (dist < 0).any() or (dist > _hamming_from(x, h.n) + slack).any():
            return False
    return True


def strongly_connected_variant(f: BoolNet) -> BoolNet:
    """``h ~ f`` whose asynchronous graph is strongly connected, with paths of length at most ``d(x,y)+4``."""
    if not f.is_permutation() or periodic_structure(f).fp:
        raise PreconditionError("f is not a derangement")
    n = f.n
    if n == 1:
        h = f  # the negation
    elif n == 2:
        if f.compose(f).is_identity():
            h = BoolNet.negation(2)
        else:
            # h(x) = (x_2, not x_1)
            h = BoolNet.from_function(2, lambda x: ((x >> 1) & 1) | ((~x & 1) << 1))
    else:
        h = conjugate(f, quadrant_permutation(f, h4_coloring(f)))
    if not is_strongly_connected(h):
        raise VerificationError("asynchronous graph is not strongly connected")
    if n <= DISTANCE_CHECK_MAX_N and not distance_bound_holds(h):
        raise VerificationError("some pair violates the d(x,y)+4 path bound")
    return h
