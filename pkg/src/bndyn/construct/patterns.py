"""The sixteen small gadgets and their placement inside a network.

A gadget fixes a few synchronous arcs on low-weight configurations.  Open
gadgets add a constraint on coordinate 1 of the image of one configuration
(its special configuration).  Every gadget forces an asynchronous attractor
of size at most 4 inside its vertex set.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from ..core import BoolNet, PreconditionError, StatePermutation, conjugate, units
from ..dynamics import periodic_structure
from .decreasing import census_ok

O = 0
E1, E2, E3 = units(1), units(2), units(3)
E12, E13, E23 = units(1, 2), units(1, 3), units(2, 3)
E123 = units(1, 2, 3)


@dataclass(frozen=True)
class Pattern:
    id: str
    arcs: tuple[tuple[int, int], ...]
    special: tuple[int, int] | None  # (configuration, required value of coordinate 1)
    X: frozenset[int]
    A: frozenset[int]

    @property
    def kind(self) -> str:
        if self.special is None:
            return "closed"
        return f"{self.special[1]}-open"

    @property
    def index(self) -> int:
        return int(self.id[-1])

    @property
    def vertices(self) -> frozenset[int]:
        out = set(self.X)
        for x, y in self.arcs:
            out.update((x, y))
        return frozenset(out)


def _p(pid, arcs, X, A, special=None) -> Pattern:
    return Pattern(pid, tuple(arcs), special, frozenset(X), frozenset(A))


def _cycle(*vs) -> list[tuple[int, int]]:
    return [(vs[k], vs[(k + 1) % len(vs)]) for k in range(len(vs))]


def _path(*vs) -> list[tuple[int, int]]:
    return [(vs[k], vs[k + 1]) for k in range(len(vs) - 1)]


_SIX = {O, E1, E2, E3, E12, E13}
_SEVEN_0 = {O, E1, E2, E3, E12, E13, E23}


@lru_cache(maxsize=None)
def pattern_catalog() -> tuple[Pattern, ...]:
    a4 = {O, E1, E2, E13}
    b4 = {O, E2, E3, E13}
    return (
        _p("P1", _cycle(O, E1), {O, E1}, {O, E1}),
        _p("P2", _cycle(O, E1, E12, E2), {O, E1, E2, E12}, {O, E1, E2, E12}),
        _p("P3", _path(E1, O) + _path(E2, O) + _path(O, E12, E1), {O, E1, E2, E12}, {O, E1, E2}),
        _p("P4", _cycle(E2, O, E12) + _cycle(E13, E1, E3), _SIX, a4),
        _p("P5", _cycle(O, E12, E13, E1, E3) + _path(E2, O), _SIX, a4),
        _p("P6", _cycle(E2, O, E12, E13, E1, E3), _SIX, a4),
        _p("P0_1", _cycle(O, E2) + _path(E12, E1), {O, E1, E2, E12}, {O, E2}, (E1, 0)),
        _p("P0_2", _path(E13, E3, E1) + _cycle(E2, O, E23), {O, E1, E2, E3, E13, E23}, b4, (E1, 0)),
        _p("P0_3", _path(E13, E3, E1) + _cycle(E2, O, E23, E12), _SEVEN_0, b4, (E1, 0)),
        _p("P0_4", _path(E13, E3, E1) + _cycle(E2, O, E23, E123, E12), _SEVEN_0 | {E123}, b4, (E1, 0)),
        _p("P0_5", _path(E2, O, E23, E13, E3, E1), {O, E1, E2, E3, E13, E23}, b4, (E1, 0)),
        _p("P1_1", _cycle(E1, E12) + _path(E2, O), {O, E1, E2, E12}, {E1, E12}, (O, 1)),
        _p("P1_2", _cycle(E2, O, E12) + _path(E13, E1, E3), _SIX, a4, (E3, 1)),
        _p("P1_3", _cycle(E2, O, E12, E23) + _path(E13, E1, E3), _SEVEN_0, a4, (E3, 1)),
        _p("P1_4", _cycle(E2, O, E12, E123, E23) + _path(E13, E1, E3), _SEVEN_0 | {E123}, a4, (E3, 1)),
        _p("P1_5", _path(E2, O, E12, E13, E1, E3), _SIX, a4, (E3, 1)),
    )


def get_pattern(pid: str) -> Pattern:
    for p in pattern_catalog():
        if p.id == pid:
            return p
    raise KeyError(pid)


def contains_pattern(f: BoolNet, p: Pattern) -> bool:
    if max(p.vertices) >= f.size:
        return False
    if any(f(x) != y for x, y in p.arcs):
        return False
    if p.special is not None:
        x, a = p.special
        if f(x) & 1 != a:
            return False
    return True


def correction_map(k: int, n: int) -> StatePermutation:
    """Relabelling of the low configurations turning the 0-open gadget ``k`` into the 1-open one."""
    if k == 1:
        pairs = {O: E1, E1: O, E2: E12, E12: E2}
    else:
        pairs = {E1: E3, E3: E1, E12: E23, E23: E12}
    return StatePermutation.from_partial(n, pairs)


def working_set(p: Pattern) -> frozenset[int]:
    """Down set used for the relabelling step: the gadget's vertices plus its 1-open partner's."""
    if p.kind != "0-open":
        return p.X
    return p.X | get_pattern(f"P1_{p.index}").X


# ---------------------------------------------------------------------------
# embedding search


def _structure(p: Pattern):
    succ = dict(p.arcs)
    pred: dict[int, list[int]] = {}
    for x, y in p.arcs:
        pred.setdefault(y, []).append(x)
    cycle_len: dict[int, int] = {}
    for v in p.vertices:
        seen, w = [], v
        while w in succ and w not in seen:
            seen.append(w)
            w = succ[w]
        if w == v and seen:
            cycle_len[v] = len(seen)
    return succ, pred, cycle_len


def embeddings(f: BoolNet, p: Pattern, extra: frozenset[int] = frozenset()) -> Iterator[dict[int, int]]:
    """Injective maps ``gadget vertex -> configuration of f`` realising every arc.

    Vertices in ``extra`` belong to the working set but carry no arc; they are
    filled last, preferring configurations whose image is already used.
    """
    succ, pred, cycle_len = _structure(p)
    table = f.table.tolist()
    size = f.size
    preimages: list[list[int]] = [[] for _ in range(size)]
    for x, y in enumerate(table):
        preimages[y].append(x)
    period = periodic_structure(f).period.tolist()
    verts = sorted(p.vertices - set(extra))
    special = p.special[0] if p.special else None

    def candidates(v: int, assign: dict[int, int]) -> list[int]:
        if v in pred:
            for u in pred[v]:
                if u in assign:
                    return [table[assign[u]]]
        if v in succ and succ[v] in assign:
            cands = preimages[assign[succ[v]]]
        else:
            cands = range(size)
        if v in cycle_len:
            return [c for c in cands if period[c] == cycle_len[v]]
        return list(cands)

    def consistent(v: int, c: int, assign: dict[int, int], used: set[int]) -> bool:
        if c in used:
            return False
        if v in cycle_len and period[c] != cycle_len[v]:
            return False
        if v in succ and succ[v] in assign and table[c] != assign[succ[v]]:
            return False
        for u in pred.get(v, ()):
            if u in assign and table[assign[u]] != c:
                return False
        return True

    def pick(assign: dict[int, int]) -> int:
        best, best_rank = None, None
        for v in verts:
            if v in assign:
                continue
            forced = any(u in assign for u in pred.get(v, ()))
            anchored = v in succ and succ[v] in assign
            rank = (0 if forced else 1 if anchored else 2 if v in cycle_len else 3, v)
            if best_rank is None or rank < best_rank:
                best, best_rank = v, rank
        return best

    def rec(assign: dict[int, int], used: set[int]) -> Iterator[dict[int, int]]:
        if len(assign) == len(verts):
            if special is not None and table[assign[special]] in used:
                return
            yield from _fill_extra(dict(assign), set(used), sorted(extra), table, preimages, special)
            return
        v = pick(assign)
        for c in candidates(v, assign):
            if consistent(v, c, assign, used):
                assign[v] = c
                used.add(c)
                yield from rec(assign, used)
                del assign[v]
                used.discard(c)

    yield from rec({}, set())


def _fill_extra(assign, used, extra, table, preimages, special) -> Iterator[dict[int, int]]:
    if not extra:
        yield assign
        return
    avoid = {table[assign[special]]} if special is not None else set()
    v = extra[0]
    preferred = []
    for target in sorted(assign.values()):
        preferred.extend(c for c in preimages[target] if c not in used and c not in avoid)
    others = [c for c in range(len(table)) if c not in used and c not in avoid and c not in preferred]
    for c in list(dict.fromkeys(preferred)) + others[:1]:
        assign[v] = c
        used.add(c)
        yield from _fill_extra(assign, used, extra[1:], table, preimages, special)
        del assign[v]
        used.discard(c)


def labelling(f: BoolNet, p: Pattern, assign: dict[int, int], X: frozenset[int]) -> StatePermutation:
    """Permutation sending each embedded configuration to its gadget label."""
    mapping = {c: v for v, c in assign.items()}
    if p.special is not None:
        x, a = p.special
        target = f(assign[x])
        label = min(v for v in range(f.size) if v not in X and v & 1 == a and v not in mapping.values())
        mapping[target] = label
    return StatePermutation.from_partial(f.n, mapping)


def properly_contains(g: BoolNet, p: Pattern, X: frozenset[int] | None = None) -> bool:
    X = p.X if X is None else X
    if not contains_pattern(g, p):
        return False
    outside = [v for v in range(g.size) if v not in X]
    if set(g.table[outside].tolist()) == set(outside):
        return False
    return census_ok(g.n, X)


# ---------------------------------------------------------------------------
# case choice


def preferred_pattern(f: BoolNet) -> str:
    """Gadget chosen from the shortest and longest cycle lengths."""
    ps = periodic_structure(f)
    lengths = ps.cycle_lengths
    short, long_ = min(lengths), max(lengths)
    several = len(lengths) >= 2
    if short == 1:
        raise PreconditionError("f has a fixed point")
    if short == 2:
        return "P0_1" if long_ >= 3 else "P1"
    if short == 3:
        if long_ >= 4:
            return "P0_2"
        return "P4" if several else "P3"
    if short == 4:
        return "P0_3" if several else "P2"
    if short == 5:
        return "P0_4" if several else "P5"
    if long_ == 6:
        return "P6"
    return "P0_5"


def plug_candidates(f: BoolNet) -> Iterator[tuple[BoolNet, Pattern, frozenset[int]]]:
    """Relabellings of ``f`` properly containing a closed or 0-open gadget.

    The gadget from the cycle-length case analysis is tried first, then
    every other closed or 0-open gadget.
    """
    first = preferred_pattern(f)
    order = [first] + [p.id for p in pattern_catalog() if p.kind != "1-open" and p.id != first]
    for pid in order:
        p = get_pattern(pid)
        for X in dict.fromkeys([working_set(p), p.X]):
            if len(X) >= f.size or not census_ok(f.n, X):
                continue
            extra = X - p.vertices
            for count, assign in enumerate(embeddings(f, p, frozenset(extra))):
                if count >= 16:
                    break
                g = conjugate(f, labelling(f, p, assign, X))
                if properly_contains(g, p, X):
                    yield g, p, X


def plug_pattern(f: BoolNet) -> tuple[BoolNet, Pattern]:
    """Relabel ``f`` so that it properly contains a closed or 0-open gadget."""
    if f.n < 4:
        raise PreconditionError(f"n={f.n} too small for gadget placement")
    if periodic_structure(f).fp:
        raise PreconditionError("f has a fixed point")
    if f.compose(f).is_identity():
        raise PreconditionError("f^2 = id: handled by the involution construction")
    for g, p, _ in plug_candidates(f):
        return g, p
    raise PreconditionError("no gadget can be placed (exceptional class for n=4)")
