"""Relabellings that change the asynchronous graph but not the synchronous one.

The witnesses are counts of configurations with out-degree ``n`` (the set
``Delta+``) or in-degree ``n`` (``Delta-``) in the asynchronous graph.  Both
counts are digraph invariants, so a differing count rules out isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core import (
    BoolNet,
    PreconditionError,
    StatePermutation,
    VerificationError,
    complement,
    conjugate,
    ones,
    transposition,
    units,
)
from ..dynamics import contains_2P1, delta_sets, periodic_structure
from ..iso import canonical_form


@dataclass(frozen=True)
class DeltaWitness:
    kind: str  # "2P1", "periodic" or "unique-periodic"
    invariant: str  # "delta+" or "delta-"
    count_f: int
    count_h: int
    choices: dict = field(default_factory=dict)


def _plus(f: BoolNet) -> int:
    return len(delta_sets(f)[0])


def _minus(f: BoolNet) -> int:
    return len(delta_sets(f)[1])


def break_async_iso(f: BoolNet) -> tuple[BoolNet, DeltaWitness]:
    """Return ``h`` isomorphic to ``f`` whose asynchronous graph is not isomorphic to ``f``'s."""
    if f.n < 3:
        raise PreconditionError(f"n={f.n} < 3: too small for a distinguishable twin")
    if f.is_constant():
        raise PreconditionError("f = cst excluded: no distinguishable twin exists")
    if f.is_identity():
        raise PreconditionError("f = id excluded: no distinguishable twin exists")

    pair = contains_2P1(f)
    if pair is not None:
        h, witness = _two_paths(f, *pair)
    elif len(periodic_structure(f).periodic) >= 2:
        h, witness = _several_periodic(f)
    else:
        h, witness = _unique_periodic(f)

    if canonical_form(h) != canonical_form(f):
        raise VerificationError("relabelled network is not isomorphic to the input")
    if witness.count_f == witness.count_h:
        raise VerificationError("delta counts agree; no witness produced")
    return h, witness


def _first_differing(f: BoolNet, candidates: list[BoolNet], count) -> tuple[int, BoolNet, int]:
    target = count(f)
    for k, h in enumerate(candidates):
        c = count(h)
        if c != target:
            return k, h, c
    raise VerificationError("no candidate changes the delta count")


def _two_paths(f: BoolNet, a: int, b: int) -> tuple[BoolNet, DeltaWitness]:
    n = f.n
    x, y = 0, units(1)
    xb, yb = complement(x, n), complement(y, n)
    pi = StatePermutation.from_partial(n, {a: x, b: y, f(a): xb, f(b): yb})
    h1 = conjugate(f, pi)
    h2 = conjugate(h1, transposition(y, xb, n))
    h3 = conjugate(h1, transposition(xb, yb, n))
    k, h, c = _first_differing(f, [h1, h2, h3], _plus)
    return h, DeltaWitness("2P1", "delta+", _plus(f), c, {"a": a, "b": b, "x": x, "y": y, "variant": k + 1})


def _several_periodic(f: BoolNet) -> tuple[BoolNet, DeltaWitness]:
    n = f.n
    ps = periodic_structure(f)
    period = ps.period
    moving = [v for v in range(f.size) if f(v) != v and period[f(v)] > 0]
    on_cycle = [v for v in moving if period[v] >= 2]
    a = min(on_cycle) if on_cycle else min(moving)
    abar = complement(a, n)
    g = conjugate(f, transposition(abar, f(a), n))

    gs = periodic_structure(g)
    g_periodic = set(gs.periodic)
    non_periodic = [v for v in range(g.size) if v not in g_periodic]
    longest = max(gs.cycle_lengths)
    choices: dict = {"a": a}
    if longest == 1:
        rest = [v for v in non_periodic if v != a]
        images = {g(v) for v in rest}
        b = min(v for v in gs.fixed_points if v != abar)
        choices["b"] = b
        if images <= {a}:
            h = conjugate(g, transposition(abar, b, n))
            choices["case"] = 1
        else:
            h = conjugate(g, transposition(a, b, n))
            choices["case"] = 2
    elif longest == 2:
        images = {g(v) for v in non_periodic}
        b = min(v for v in range(g.size) if v not in (a, abar))
        choices["b"] = b
        choices["case"] = 3
        if images <= {a}:
            h = conjugate(g, transposition(abar, b, n))
        else:
            h = conjugate(g, transposition(a, b, n))
    else:
        cycle = next(c for c in gs.cycles if len(c) == longest)
        third = next(v for v in cycle if v not in (a, abar))
        c = min(v for v in gs.fixed_points if v != complement(third, n))
        choices.update({"b": third, "c": c, "case": 4})
        h = conjugate(g, transposition(abar, c, n))
    k, out, cnt = _first_differing(f, [g, h], _plus)
    choices["variant"] = "g" if k == 0 else "h"
    return out, DeltaWitness("periodic", "delta+", _plus(f), cnt, choices)


def _unique_periodic(f: BoolNet) -> tuple[BoolNet, DeltaWitness]:
    n = f.n
    b = periodic_structure(f).fixed_points[0]
    a = min(v for v in range(f.size) if v != b and f(v) == b)
    pi1 = StatePermutation.from_partial(n, {a: 0, b: ones(n)})
    pi2 = StatePermutation.from_partial(n, {a: 0, b: units(1, 2)})
    h1, h2 = conjugate(f, pi1), conjugate(f, pi2)
    k, h, c = _first_differing(f, [h1, h2], _minus)
    return h, DeltaWitness("unique-periodic", "delta-", _minus(f), c, {"a": a, "b": b, "variant": k + 1})
