"""Good orders, monotone relabelling with swaps, and convergence to fixed points."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..core import (
    BoolNet,
    Config,
    PreconditionError,
    StatePermutation,
    VerificationError,
    binom,
    conjugate,
    transposition,
    units,
    weight,
    weight_key,
)
from ..dynamics import almost_decreasing_reach, attractors, fixed_points
from ..iso import canonical_form


@dataclass(frozen=True)
class GoodOrder:
    Y: frozenset[int]
    order: tuple[int, ...]

    def position(self) -> dict[int, int]:
        return {v: k for k, v in enumerate(self.order)}


def good_order(f: BoolNet, Y: Iterable[int], maximal: Config | None = None) -> GoodOrder:
    """Total order on ``Y`` with ``x < y <= f(x)  =>  f(y) < y``.

    Each component of the synchronous graph restricted to ``Y`` is a tree,
    possibly hanging on one cycle.  The cycle is cut at its least vertex and
    the tree is listed root first; components follow each other.
    """
    Y = frozenset(int(v) for v in Y)
    table = f.table
    if maximal is not None:
        maximal = int(maximal)
        if maximal not in Y or any(int(table[v]) == maximal for v in Y):
            raise PreconditionError("maximal element must lie in Y but outside f(Y)")
    children: dict[int, list[int]] = {v: [] for v in Y}
    for v in Y:
        w = int(table[v])
        if w in Y and w != v:
            children[w].append(v)
    for v in children:
        children[v].sort(key=weight_key)

    roots = [v for v in Y if int(table[v]) not in Y or int(table[v]) == v]
    # cycles without any exit: cut at the least vertex
    seen: set[int] = set()
    for r in roots:
        _mark(r, children, seen)
    for v in sorted(Y, key=weight_key):
        if v in seen:
            continue
        cycle = _cycle_from(v, table, Y)
        cut = min(cycle, key=weight_key)
        roots.append(cut)
        children[int(table[cut])].remove(cut)
        _mark(cut, children, seen)

    comps = []
    for r in roots:
        listing = []
        queue = deque([r])
        while queue:
            v = queue.popleft()
            listing.append(v)
            queue.extend(children[v])
        comps.append(listing)
    comps.sort(key=lambda c: weight_key(c[0]))
    if maximal is not None:
        k = next(i for i, c in enumerate(comps) if maximal in c)
        comp = comps.pop(k)
        comp.remove(maximal)
        comp.append(maximal)
        comps.append(comp)
    order = tuple(v for c in comps for v in c)
    return GoodOrder(Y, order)


def _mark(root: int, children, seen: set[int]) -> None:
    stack = [root]
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        stack.extend(children[v])


def _cycle_from(v: int, table, Y) -> list[int]:
    path, index = [], {}
    while v not in index:
        index[v] = len(path)
        path.append(v)
        v = int(table[v])
    return path[index[v]:]


def is_good_order(f: BoolNet, order: GoodOrder | Iterable[int]) -> bool:
    """Check the defining implication in linear time with prefix sums."""
    seq = list(order.order if isinstance(order, GoodOrder) else order)
    pos = {v: k for k, v in enumerate(seq)}
    bad = np.zeros(len(seq) + 1, dtype=np.int64)
    for k, y in enumerate(seq):
        fy = f(y)
        if not (fy in pos and pos[fy] < k):
            bad[k + 1] = 1
    prefix = np.cumsum(bad)
    for k, x in enumerate(seq):
        fx = f(x)
        if fx in pos and pos[fx] > k:
            # y ranges over positions k+1 .. pos[fx]
            if prefix[pos[fx] + 1] - prefix[k + 1] > 0:
                return False
    return True


# ---------------------------------------------------------------------------
# preconditions


def is_down_set(X: Iterable[int]) -> bool:
    X = set(X)
    for x in X:
        m = x
        while m:
            low = m & -m
            if x ^ low not in X:
                return False
            m ^= low
    return True


def census_ok(n: int, X: Iterable[int]) -> bool:
    """Every weight ``1 < l < n`` has more than ``C(n-1, l-1)`` configurations outside ``X``."""
    inside = [0] * (n + 1)
    for x in X:
        inside[weight(x)] += 1
    return all(binom(n, l) - inside[l] >= binom(n - 1, l - 1) + 1 for l in range(2, n))


def check_decreasing_preconditions(f: BoolNet, X: Iterable[int]) -> frozenset[int]:
    X = frozenset(int(x) for x in X)
    if not X:
        raise PreconditionError("not-down-set: X is empty")
    if not is_down_set(X):
        raise PreconditionError("not-down-set: X is not closed downwards")
    outside = [v for v in range(f.size) if v not in X]
    if set(f.table[outside].tolist()) == set(outside):
        raise PreconditionError("image-equality: f maps the complement of X onto itself")
    if not census_ok(f.n, X):
        raise PreconditionError("weight-census: too few configurations outside X at some weight")
    return X


# ---------------------------------------------------------------------------
# monotone relabelling


@dataclass(frozen=True)
class DecreasingResult:
    h: BoolNet
    pi: StatePermutation
    swaps: tuple[tuple[int, int], ...]
    X: frozenset[int]


def is_x_converging(h: BoolNet, X: Iterable[int]) -> bool:
    """Every non-fixed configuration outside ``X`` has a decreasing arc."""
    X = set(X)
    for x in range(h.size):
        if x in X:
            continue
        hx = h(x)
        if hx != x and x & ~hx == 0:
            return False
    return True


def agrees_on(h: BoolNet, f: BoolNet, X: Iterable[int]) -> bool:
    """``h`` and ``f`` induce the same arcs inside ``X`` and leave ``X`` at the same places."""
    X = set(X)
    for x in X:
        fx, hx = f(x), h(x)
        if fx in X:
            if hx != fx:
                return False
        elif hx in X:
            return False
    return True


def decreasing_relabel(f: BoolNet, X: Iterable[int]) -> DecreasingResult:
    X = check_decreasing_preconditions(f, X)
    n = f.n
    Y = [v for v in range(f.size) if v not in X]
    image = set(f.table[Y].tolist())
    a = min(v for v in Y if v not in image)
    order = good_order(f, Y, maximal=a).order
    slots = sorted(Y, key=weight_key)
    images = np.arange(f.size, dtype=np.int64)
    for src, dst in zip(order, slots):
        images[src] = dst
    pi = StatePermutation(n, images)
    h = conjugate(f, pi)

    Yset = set(Y)
    by_weight: dict[int, list[int]] = {}
    for v in sorted(Y):
        by_weight.setdefault(weight(v), []).append(v)
    swaps = []
    for _ in range(4 * f.size):
        table = h.table
        Z = [x for x in Y if table[x] != x and x & ~int(table[x]) == 0]
        if not Z:
            break
        x = min(Z, key=weight_key)
        hx = int(table[x])
        y = next((v for v in by_weight.get(weight(hx), ()) if x & ~v), None)
        if y is None or hx not in Yset:
            raise VerificationError("no swap partner; weight census violated")
        t = transposition(hx, y, n)
        pi = t.compose(pi)
        h = conjugate(h, t)
        swaps.append((hx, y))
    else:
        raise VerificationError("swap loop did not terminate")

    if not agrees_on(h, f, X):
        raise VerificationError("relabelled network does not agree with f on X")
    if not is_x_converging(h, X):
        raise VerificationError("relabelled network is not X-converging")
    return DecreasingResult(h, pi, tuple(swaps), X)


def decreasing_construct(f: BoolNet, X: Iterable[int]) -> BoolNet:
    """Relabel the complement of ``X`` so that every non-fixed configuration there descends."""
    return decreasing_relabel(f, X).h


# ---------------------------------------------------------------------------
# convergence to fixed points


def converge_to_fixed_points(f: BoolNet) -> BoolNet:
    """``h ~ f`` whose asynchronous attractors are exactly its fixed points."""
    fp = fixed_points(f)
    if not fp:
        raise PreconditionError("f has no fixed point")
    if f.is_identity():
        return f
    n = f.n
    if n <= 2:
        h = _search_small(f, len(fp))
    elif not f.is_permutation():
        g = conjugate(f, transposition(fp[0], 0, n))
        h = decreasing_construct(g, {0})
    else:
        z = fp[0]
        u = min((v for v in range(f.size) if f(v) != v), key=weight_key)
        e1, e2 = units(1), units(2)
        g = conjugate(f, StatePermutation.from_partial(n, {z: 0, u: e1, f(u): e2}))
        h = decreasing_construct(g, {0, e1})
        if h(e1) & 1:
            h = conjugate(h, transposition(0, e1, n))
    _verify_fixed(f, h, len(fp))
    return h


def _search_small(f: BoolNet, fp: int) -> BoolNet:
    for perm in itertools.permutations(range(f.size)):
        h = conjugate(f, StatePermutation(f.n, perm))
        if len(attractors(h)) == fp and almost_decreasing_reach(h).ok:
            return h
    raise VerificationError("no conjugate converges to its fixed points")


def _verify_fixed(f: BoolNet, h: BoolNet, fp: int) -> None:
    if canonical_form(h) != canonical_form(f):
        raise VerificationError("output is not isomorphic to the input")
    if len(attractors(h)) != fp:
        raise VerificationError("attractor count differs from the number of fixed points")
    if not almost_decreasing_reach(h).ok:
        raise VerificationError("some configuration has no almost decreasing path to a fixed point")
