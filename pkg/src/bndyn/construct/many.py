"""Relabellings with many small asynchronous attractors.

Fixed points, 2-cycles and pairs of disjoint length-2 paths of the
synchronous graph are each sent onto a translate of a tiny gadget sitting
over an anchor with ``x_1 = x_2 = x_3 = 0``.  Every gadget becomes an
attractor of size at most 4.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..core import BoolNet, StatePermutation, VerificationError, conjugate, units
from ..dynamics import attractors, image_count, periodic_structure

E1, E2, E3 = units(1), units(2), units(3)
E12, E13 = units(1, 2), units(1, 3)


@dataclass(frozen=True)
class Packing:
    fixed: tuple[int, ...]
    two_cycles: tuple[tuple[int, int], ...]  # (b, f(b)), one entry per 2-cycle
    paths: tuple[tuple[int, int, int], ...]  # x -> f(x) -> f^2(x), even count

    @property
    def pairs(self) -> int:
        return len(self.paths) // 2

    def __len__(self) -> int:
        return len(self.fixed) + len(self.two_cycles) + self.pairs


@dataclass(frozen=True)
class ManyResult:
    h: BoolNet
    count: int  # attractors of A(h) with at most 4 configurations
    packing: Packing
    d: int  # number of images of f^2
    gadgets: tuple[tuple[int, ...], ...]  # the attractor placed for each packed piece

    @property
    def guarantee(self) -> int:
        return self.d // 10


def anchors(n: int) -> list[int]:
    """Configurations with the first three coordinates at 0, ascending."""
    return [x << 3 for x in range(1 << max(n - 3, 0))] if n >= 3 else []


def packing(f: BoolNet) -> Packing:
    """Greedy disjoint fixed points, 2-cycles and length-2 paths, capped to the anchor supply."""
    table = f.table.tolist()
    ps = periodic_structure(f)
    period = ps.period.tolist()
    fixed = list(ps.fixed_points)
    cycles2 = [(x, table[x]) for x in range(f.size) if period[x] == 2 and x < table[x]]

    sq = [table[table[x]] for x in range(f.size)]
    pre: dict[int, int] = {}
    for x in range(f.size):
        pre.setdefault(sq[x], x)
    pool = sorted(x for x in pre if period[x] not in (1, 2))
    alive = set(pool)
    paths = []
    for x in pool:
        if x not in alive:
            continue
        t = pre[x]
        paths.append((t, table[t], x))
        alive.difference_update((t, table[t], x, table[x], sq[x]))
    if len(paths) % 2:
        paths.pop()

    cap = len(anchors(f.n))
    fixed = fixed[:cap]
    cycles2 = cycles2[: cap - len(fixed)]
    room = cap - len(fixed) - len(cycles2)
    paths = paths[: 2 * room]
    return Packing(tuple(fixed), tuple(cycles2), tuple(paths))


def packing_permutation(f: BoolNet, pack: Packing) -> tuple[StatePermutation, list[tuple[int, ...]]]:
    phi = iter(anchors(f.n))
    mapping: dict[int, int] = {}
    gadgets = []
    for a in pack.fixed:
        p = next(phi)
        mapping[a] = p
        gadgets.append((p,))
    for b, fb in pack.two_cycles:
        p = next(phi)
        mapping[b], mapping[fb] = p, p ^ E1
        gadgets.append((p, p ^ E1))
    c = pack.pairs
    for k in range(c):
        p = next(phi)
        x, y, z = pack.paths[k]
        mapping[x], mapping[y], mapping[z] = p ^ E2, p, p ^ E12
        x, y, z = pack.paths[c + k]
        mapping[x], mapping[y], mapping[z] = p ^ E13, p ^ E1, p ^ E3
        gadgets.append(tuple(sorted((p, p ^ E1, p ^ E2, p ^ E13))))
    return StatePermutation.from_partial(f.n, mapping), gadgets


def many_attractors(f: BoolNet) -> ManyResult:
    """``h ~ f`` with at least ``floor(d/10)`` attractors of size at most 4, ``d = |Im f^2|``."""
    d = image_count(f, 2)
    if f.n < 3:
        # no anchors: keep the fixed points as the attractors
        from .decreasing import converge_to_fixed_points

        h = converge_to_fixed_points(f) if periodic_structure(f).fp else f
        pack = Packing(periodic_structure(f).fixed_points, (), ())
        gadgets = [(a,) for a in pack.fixed]
    else:
        pack = packing(f)
        pi, gadgets = packing_permutation(f, pack)
        h = conjugate(f, pi)
    found = set(attractors(h).attractors)
    for g in gadgets:
        if tuple(sorted(g)) not in found:
            raise VerificationError(f"gadget {g} is not an attractor")
    count = sum(1 for a in found if len(a) <= 4)
    if count < d // 10:
        raise VerificationError(f"{count} small attractors, below floor(d/10) = {d // 10}")
    return ManyResult(h, count, pack, d, tuple(tuple(sorted(g)) for g in gadgets))
