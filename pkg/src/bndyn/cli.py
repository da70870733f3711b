"""Command-line front end.

    bndyn analyze NET [--format text|json|dot]
    bndyn construct KIND NET [--out H.bn] [--cert CERT.json]
    bndyn verify NET H.bn CERT.json
    bndyn experiment NAME --n N [--p P ...] [--samples S] [--seed SEED]
    bndyn reconstruct GRAPH.dot
    bndyn iso NET1 NET2 [--async]

Exit codes: 0 success, 2 parse error, 3 precondition violation,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import BoolNet, FormatError, PreconditionError, RandomSource, VerificationError, parse_network, serialize_network
from .dynamics import (
    almost_decreasing_reach,
    asynchronous_graph,
    attractors,
    delta_sets,
    fixed_points,
    image_count,
    is_strongly_connected,
    parse_dot,
    periodic_structure,
    undirected_async,
)
from .iso import are_isometric_async, are_isomorphic_digraphs, canonical_form, reconstruct_network
from .solidity import staple_closure

SCHEMA = "cert-v1"
KINDS = ("few-att", "small-att", "many-att", "strong", "break-iso")
EXPERIMENTS = ("solidity", "image-count", "many-att-rate")
DIGRAPH_CHECK_MAX_N = 4

EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_VERIFY = 0, 2, 3, 4


# ---------------------------------------------------------------------------
# helpers


def _read_network(path: str) -> BoolNet:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_network(text)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _sorted_sets(sets) -> list[list[int]]:
    return sorted(sorted(int(v) for v in s) for s in sets)


def analysis(f: BoolNet) -> dict:
    ps = periodic_structure(f)
    atts = attractors(f)
    plus, minus = delta_sets(f)
    solid = staple_closure(undirected_async(f))
    return {
        "n": f.n,
        "fp": ps.fp,
        "cycle_lengths": sorted(ps.cycle_lengths),
        "delta_plus": len(plus),
        "delta_minus": len(minus),
        "attractor_count": len(atts),
        "attractor_sizes": sorted(len(a) for a in atts),
        "image_count_f2": image_count(f, 2),
        "async_solid": solid.is_fully_solid,
        "solid_rounds": solid.closure_rounds,
        "canon": canonical_form(f).digest,
        "canon_summary": canonical_form(f).summary,
    }


def _format_analysis(info: dict) -> str:
    sizes = info["attractor_sizes"]
    histogram = ", ".join(f"{sizes.count(s)} x size {s}" for s in sorted(set(sizes)))
    lines = [
        f"n: {info['n']}",
        f"fixed points: {info['fp']}",
        "cycle lengths: {" + ",".join(map(str, info["cycle_lengths"])) + "}",
        f"|delta+|: {info['delta_plus']}",
        f"|delta-|: {info['delta_minus']}",
        f"attractors: {info['attractor_count']} ({histogram})",
        f"|Im f^2|: {info['image_count_f2']}",
        f"async graph certified solid: {str(info['async_solid']).lower()}",
        f"canonical form: {info['canon']}",
        f"structure: {info['canon_summary']}",
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# constructions and certificates


def build(kind: str, f: BoolNet) -> tuple[BoolNet, dict]:
    """Run a construction and return ``(h, construction-specific certificate fields)``."""
    from . import construct as C

    if kind == "few-att":
        if not fixed_points(f):
            raise PreconditionError("few-att requires at least one fixed point")
        return C.converge_to_fixed_points(f), {"witness-kind": "fixed-points"}
    if kind == "small-att":
        res = C.converge_to_small_attractor(f)
        extra = {"witness-kind": res.route, "attractor": sorted(res.attractor)}
        if res.pattern:
            extra["pattern"] = res.pattern
        return res.h, extra
    if kind == "many-att":
        res = C.many_attractors(f)
        return res.h, {
            "witness-kind": "packing",
            "d": res.d,
            "small-attractor-count": res.count,
            "gadgets": _sorted_sets(res.gadgets),
        }
    if kind == "strong":
        h = C.strongly_connected_variant(f)
        return h, {"witness-kind": "h4-coloring", "strongly-connected": True}
    if kind == "break-iso":
        h, w = C.break_async_iso(f)
        return h, {
            "witness-kind": f"{w.kind}:{w.invariant}",
            "invariant": w.invariant,
            "count-input": w.count_f,
            "count-output": w.count_h,
            "choices": {k: w.choices[k] for k in sorted(w.choices)},
        }
    raise PreconditionError(f"unknown construction {kind!r}")


def certificate(kind: str, f: BoolNet, h: BoolNet, extra: dict) -> dict:
    atts = attractors(h)
    cert = {
        "schema": SCHEMA,
        "construction": kind,
        "n": f.n,
        "input-canon": canonical_form(f).digest,
        "output-canon": canonical_form(h).digest,
        "attractor-count": len(atts),
        "attractor-sizes": sorted(len(a) for a in atts),
        "attractors": _sorted_sets(atts),
    }
    cert.update(extra)
    cert["checks-passed"] = check(kind, f, h, cert)
    return cert


def check(kind: str, f: BoolNet, h: BoolNet, cert: dict) -> list[str]:
    """Re-derive every claim from the two networks; raise on the first failure."""
    passed = []

    def require(name: str, ok: bool) -> None:
        if not ok:
            raise VerificationError(f"check failed: {name}")
        passed.append(name)

    require("same-n", f.n == h.n)
    require("isomorphic", canonical_form(f) == canonical_form(h))
    atts = attractors(h)
    require("attractor-count", cert.get("attractor-count") == len(atts))
    require("attractor-sizes", cert.get("attractor-sizes") == sorted(len(a) for a in atts))
    if kind == "few-att":
        require("count-equals-fp", len(atts) == len(fixed_points(f)))
        reach = almost_decreasing_reach(h)
        require("almost-decreasing-reach", reach.ok and reach.max_length <= f.n + 1)
    elif kind == "small-att":
        require("unique-attractor", len(atts) == 1)
        require("size-at-most-4", len(atts.attractors[0]) <= 4)
        require("almost-decreasing-reach", almost_decreasing_reach(h, atts.attractors[0]).ok)
    elif kind == "many-att":
        small = sum(1 for a in atts if len(a) <= 4)
        d = image_count(f, 2)
        require("d", cert.get("d") == d)
        require("count-recorded", cert.get("small-attractor-count") == small)
        require("at-least-d/10", small >= d // 10)
    elif kind == "strong":
        require("strongly-connected", is_strongly_connected(h))
        if f.n <= 8:
            from .construct.strong import distance_bound_holds

            require("distance-bound", distance_bound_holds(h))
    elif kind == "break-iso":
        k = 0 if cert.get("invariant") == "delta+" else 1
        cf, ch = len(delta_sets(f)[k]), len(delta_sets(h)[k])
        require("delta-count-recorded", (cf, ch) == (cert.get("count-input"), cert.get("count-output")))
        require("delta-count-differs", cf != ch)
        if f.n <= DIGRAPH_CHECK_MAX_N:
            require(
                "async-not-isomorphic",
                are_isomorphic_digraphs(asynchronous_graph(f), asynchronous_graph(h)) is None,
            )
    else:
        raise VerificationError(f"unknown construction {kind!r}")
    return passed


# ---------------------------------------------------------------------------
# verbs


def cmd_analyze(args) -> int:
    f = _read_network(args.net)
    if args.format == "dot":
        _emit(asynchronous_graph(f).to_dot(attractors(f), name="A"), args.out)
    elif args.format == "json":
        _emit(json.dumps(analysis(f), indent=2, sort_keys=True) + "\n", args.out)
    else:
        _emit(_format_analysis(analysis(f)), args.out)
    return EXIT_OK


def cmd_construct(args) -> int:
    f = _read_network(args.net)
    h, extra = build(args.kind, f)
    cert = certificate(args.kind, f, h, extra)
    text = json.dumps(cert, indent=2, sort_keys=True) + "\n"
    _emit(serialize_network(h), args.out)
    if args.cert:
        Path(args.cert).write_text(text)
    elif args.out:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_verify(args) -> int:
    f, h = _read_network(args.net), _read_network(args.constructed)
    try:
        cert = json.loads(Path(args.cert).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"unreadable certificate: {exc}") from exc
    if cert.get("schema") != SCHEMA:
        raise FormatError(f"unsupported certificate schema {cert.get('schema')!r}")
    passed = check(cert.get("construction"), f, h, cert)
    claimed = cert.get("checks-passed", [])
    if not set(claimed) <= set(passed):
        raise VerificationError(f"certificate claims unchecked items: {sorted(set(claimed) - set(passed))}")
    sys.stdout.write("ok: " + ", ".join(passed) + "\n")
    return EXIT_OK


def cmd_experiment(args) -> int:
    from . import experiments as E

    rs = RandomSource(args.seed)
    try:
        if args.name == "solidity":
            rows = [r for n in args.n for r in E.solidity_rows(n, args.p or [0.75], args.samples, rs)]
        elif args.name == "image-count":
            rows = [r for n in args.n for r in E.image_count_experiment(n, args.samples, rs)]
        else:
            rows = [r for n in args.n for r in E.many_attractor_experiment(n, args.samples, rs)]
    except ValueError as exc:
        raise PreconditionError(str(exc)) from exc
    if args.format == "json":
        _emit(json.dumps(rows, indent=2) + "\n", args.out)
    else:
        _emit(E.write_csv(rows), args.out)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    try:
        text = Path(args.graph).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {args.graph}: {exc.strerror}") from exc
    _emit(serialize_network(reconstruct_network(parse_dot(text))), args.out)
    return EXIT_OK


def cmd_iso(args) -> int:
    f, h = _read_network(args.net1), _read_network(args.net2)
    result = {"networks-isomorphic": f.n == h.n and canonical_form(f) == canonical_form(h)}
    if args.async_ and f.n == h.n:
        iso = are_isometric_async(f, h) if f.n <= 8 else None
        result["async-isometric"] = iso is not None
        if iso is not None:
            result["isometry"] = {"sigma": [s + 1 for s in iso.sigma], "a": iso.a}
        if f.n <= 12:
            result["async-isomorphic"] = (
                are_isomorphic_digraphs(asynchronous_graph(f), asynchronous_graph(h)) is not None
            )
    if args.format == "json":
        _emit(json.dumps(result, indent=2, sort_keys=True) + "\n", args.out)
    else:
        _emit("".join(f"{k}: {str(v).lower()}\n" for k, v in result.items() if k != "isometry"), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bndyn", description="Boolean network dynamics up to isomorphism")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, formats=("text", "json")):
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--format", choices=formats, default=formats[0])

    p = sub.add_parser("analyze", help="report fixed points, cycles, attractors and invariants")
    p.add_argument("net")
    common(p, ("text", "json", "dot"))
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("construct", help="relabel a network; writes BN text and a JSON certificate")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("net")
    p.add_argument("--cert", help="certificate path (default: stdout after the network)")
    common(p)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="re-check a certificate against the two networks")
    p.add_argument("net")
    p.add_argument("constructed")
    p.add_argument("cert")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", help="Monte Carlo experiments, CSV output")
    p.add_argument("name", choices=EXPERIMENTS)
    p.add_argument("--n", type=int, nargs="+", required=True)
    p.add_argument("--p", type=float, nargs="+")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    common(p, ("csv", "json"))
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("reconstruct", help="recover a network from its asynchronous graph (DOT)")
    p.add_argument("graph")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("iso", help="compare two networks and their asynchronous graphs")
    p.add_argument("net1")
    p.add_argument("net2")
    p.add_argument("--async", dest="async_", action="store_true")
    common(p)
    p.set_defaults(func=cmd_iso)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
