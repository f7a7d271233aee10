"""Command-line surface.

Machine-readable JSON goes to standard output, prose to standard error, so
every command is scriptable.  Exit codes: 0 success, 2 input error, 3 budget
exhausted (unknown verdicts), 4 internal assertion failure.

Set and root literals follow the library grammars: a root is an array of
scalar literals in simple-root coordinates (["2","1"] for 2a+b), a root set
is a JSON array of roots, words join generator names with "." (empty string
for the identity), and infinite words read "prefix|(period)".
"""

from __future__ import annotations

import argparse
import json
import os
import sys as _sys
from pathlib import Path

from .convexity import classify, cone_closure, two_closure
from .coxsys import CoxeterSystem, load_system
from .errors import BudgetExceededError, CoxwoError, InputError, InternalCheckError
from .figures import render_figure
from .imagcone import (
    build_K,
    imaginary_region,
    limit_root_sample,
    orbit_sample,
    probe_orbit_vs_inversions,
)
from .infwords import (
    InvStream,
    accumulation_estimate,
    compare,
    format_infword,
    is_connected,
    parse_infword,
    truncate_inversions,
    word_prefix_of,
)
from .rootstore import RootStore, norm_floats
from .scalar import format_scalar, parse_scalar
from .scan import scan_system
from .weakorder import (
    decide_join,
    enumerate_ball,
    format_word,
    inversion_set,
    meet,
    parse_word,
)


def _env_int(name: str, default: int) -> int:
    value = os.environ.get(name)
    if value is None:
        return default
    try:
        return int(value)
    except ValueError:
        raise InputError(f"environment variable {name} must be an integer") from None


def _load(path: str) -> CoxeterSystem:
    try:
        with open(path) as fh:
            return load_system(json.load(fh))
    except FileNotFoundError:
        raise InputError(f"system file {path!r} not found") from None
    except json.JSONDecodeError as err:
        raise InputError(f"system file {path!r} is not valid JSON: {err}") from None


def _root_literal(sys: CoxeterSystem, literal) -> tuple:
    if not isinstance(literal, list) or len(literal) != sys.rank:
        raise InputError(f"root literal {literal!r} must list {sys.rank} scalar literals")
    return tuple(parse_scalar(str(t), sys.field_d) for t in literal)


def _parse_set(sys: CoxeterSystem, text: str) -> list:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise InputError(f"root set is not valid JSON: {err}") from None
    if not isinstance(data, list):
        raise InputError("root set must be a JSON array of root literals")
    return [_root_literal(sys, item) for item in data]


def _root_json(vec) -> list[str]:
    return [format_scalar(c) for c in vec]


def _emit(payload: dict, summary: str) -> None:
    json.dump(payload, _sys.stdout, indent=2, sort_keys=True)
    _sys.stdout.write("\n")
    print(summary, file=_sys.stderr)


# -- subcommand implementations -------------------------------------------------


def cmd_define(args) -> int:
    sys = _load(args.system)
    payload = {
        "generators": list(sys.generators),
        "field_d": sys.field_d,
        "gram": [[format_scalar(v) for v in row] for row in sys.gram],
        "signature": list(sys.signature()),
        "irreducible": sys.is_irreducible(),
    }
    _emit(payload, f"loaded rank-{sys.rank} system with signature {payload['signature']}")
    return 0


def cmd_roots(args) -> int:
    sys = _load(args.system)
    store = RootStore(sys)
    window = store.window(args.depth)
    payload = {
        "depth": args.depth,
        "count": len(window),
        "complete": store.is_complete(),
        "roots": [
            {
                "root": _root_json(r.vec),
                "depth": r.depth,
                "normalized": [round(c, 12) for c in norm_floats(r.vec)],
            }
            for r in window
        ],
    }
    _emit(payload, f"{len(window)} positive roots up to depth {args.depth}")
    return 0


def cmd_join(args) -> int:
    sys = _load(args.system)
    store = RootStore(sys)
    words = [parse_word(sys, w) for w in args.words]
    verdict = decide_join(store, words, node_budget=args.budget, orbit_depth=args.orbit_depth)
    if verdict.kind == "exists":
        payload = {
            "verdict": "exists",
            "word": format_word(sys, verdict.word),
            "inversions": len(verdict.inversions),
        }
        _emit(payload, f"join exists: {payload['word']}")
        return 0
    if verdict.kind == "not_exists":
        payload = {"verdict": "not_exists", "witness": verdict.witness_kind}
        if verdict.witness_point is not None:
            payload["point"] = _root_json(verdict.witness_point)
        if verdict.witness_words:
            payload["maxima"] = [format_word(sys, w) for w in verdict.witness_words]
        _emit(payload, "join does not exist")
        return 0
    _emit({"verdict": "unknown", "report": verdict.report}, "verdict unknown within budgets")
    return 3


def cmd_meet(args) -> int:
    sys = _load(args.system)
    words = [parse_word(sys, w) for w in args.words]
    got = meet(sys, words)
    _emit({"word": format_word(sys, got), "length": len(got)}, "meet computed")
    return 0


def cmd_closure(args) -> int:
    sys = _load(args.system)
    store = RootStore(sys)
    roots = _parse_set(sys, args.set)
    if args.mode == "two":
        res = two_closure(store, roots)
        if res.finite:
            payload = {
                "closure": "two",
                "finite": True,
                "roots": [_root_json(v) for v in res.members],
            }
            _emit(payload, f"finite 2-closure with {len(res.members)} roots")
        else:
            payload = {
                "closure": "two",
                "finite": False,
                "witness_pair": [_root_json(v) for v in res.witness_pair],
            }
            _emit(payload, "2-closure is infinite")
        return 0
    members = cone_closure(store, roots, args.depth)
    payload = {
        "closure": "cone",
        "depth": args.depth,
        "roots": [_root_json(v) for v in members],
    }
    _emit(payload, f"cone closure holds {len(members)} stored roots at depth {args.depth}")
    return 0


def cmd_classify(args) -> int:
    sys = _load(args.system)
    store = RootStore(sys)
    roots = _parse_set(sys, args.set)
    region = imaginary_region(sys)
    extra = [region.point] if region.kind == "point" else None
    cls = classify(store, roots, depth=args.depth, truncated=args.truncated,
                   imaginary_points=extra)
    payload = cls.as_json()
    flags = {k: payload[k]["value"] for k in ("closed", "coclosed", "convex", "coconvex",
                                              "separable")}
    _emit(payload, f"classification: {flags}")
    return 0


def cmd_infword(args) -> int:
    sys = _load(args.system)
    word = parse_infword(sys, args.literal, horizon=args.horizon)
    payload: dict = {
        "word": format_infword(sys, word),
        "connected": is_connected(sys, word),
    }
    if args.n:
        store = RootStore(sys)
        idx = truncate_inversions(store, word, args.n)
        payload["inversions"] = [_root_json(store.roots[i].vec) for i in sorted(idx)]
    if args.compare:
        other = parse_infword(sys, args.compare, horizon=args.horizon)
        got = compare(sys, word, other, horizon=args.horizon)
        relation = {"equal": "~", "less": "<", "greater": ">"}.get(got.relation, got.relation)
        payload["compare"] = {"other": args.compare, "relation": relation, "exact": got.exact}
    if args.prefix is not None:
        ans = word_prefix_of(sys, parse_word(sys, args.prefix), word, horizon=args.horizon)
        payload["prefix"] = {"word": args.prefix, "value": ans.value, "exact": ans.exact}
    if args.accumulation:
        payload["accumulation"] = accumulation_estimate(sys, word, args.accumulation, args.tol)
    _emit(payload, f"infinite word {payload['word']}")
    return 0


def cmd_limits(args) -> int:
    sys = _load(args.system)
    store = RootStore(sys)
    clusters = limit_root_sample(store, depth=args.depth, tol=args.tol)
    _emit(
        {"depth": args.depth, "tol": args.tol, "clusters": clusters},
        f"{len(clusters)} limit-direction clusters at depth {args.depth}",
    )
    return 0


def cmd_imaginary(args) -> int:
    sys = _load(args.system)
    dom = build_K(sys)
    payload: dict = {"kind": dom.kind, "strict": dom.strict}
    if dom.interior_point is not None:
        payload["point"] = _root_json(dom.interior_point)
        payload["slack"] = format_scalar(dom.slack)
    if args.orbit_depth and dom.interior_point is not None:
        sample = orbit_sample(sys, dom.interior_point, args.orbit_depth)
        payload["orbit"] = [
            {"word": format_word(sys, letters), "point": _root_json(point),
             "floats": [round(c.to_float(), 12) for c in point]}
            for letters, point in sample
        ]
    _emit(payload, f"imaginary domain kind: {dom.kind}")
    return 0


def cmd_probe(args) -> int:
    sys = _load(args.system)
    if args.conjecture == "4.8":
        if not args.infword:
            raise InputError("--conjecture 4.8 needs --infword")
        word = parse_infword(sys, args.infword)
        connected = is_connected(sys, word)
        if not connected:
            payload = {
                "probe": "4.8",
                "connected": False,
                "note": "disconnected word: a single limit is not expected",
                "accumulation": accumulation_estimate(sys, word, args.n, args.tol),
            }
            _emit(payload, "declined: word is not connected")
            return 0
        dom = build_K(sys)
        if dom.interior_point is None:
            raise InputError("system has an empty imaginary domain")
        report = probe_orbit_vs_inversions(sys, word.letters(), dom.interior_point, args.n, args.tol)
        report["probe"] = "4.8"
        report["connected"] = True
        converged = (
            len(report["orbit_clusters"]) == 1
            and len(report["inversion_clusters"]) == 1
            and report["final_distance"] < args.tol
        )
        report["single_common_limit"] = converged
        _emit(report, f"final distance {report['final_distance']:.2e}")
        return 0
    if args.question in ("3.4", "3.5"):
        return _probe_question(sys, args)
    raise InputError("probe needs --conjecture 4.8 or --question 3.4/3.5")


def _probe_question(sys: CoxeterSystem, args) -> int:
    import random

    rng = random.Random(args.seed)
    store = RootStore(sys)
    ball = enumerate_ball(store, 6)
    rows = []
    counterexample_candidates = 0
    for _ in range(args.samples):
        u, w = rng.sample(ball, 2)
        target = sorted(u.inversions | w.inversions)
        roots = [store.roots[i].vec for i in target]
        if args.question == "3.5":
            a = len(cone_closure(store, roots, args.depth))
            b = len(cone_closure(store, roots, args.depth + 2))
            finite_evidence = a == b
        else:
            finite_evidence = two_closure(store, roots).finite
        verdict = decide_join(store, [u.letters, w.letters], node_budget=args.budget)
        if finite_evidence and verdict.kind == "not_exists":
            counterexample_candidates += 1
        rows.append({"closure_finite_evidence": finite_evidence, "verdict": verdict.kind})
    payload = {
        "probe": args.question,
        "samples": args.samples,
        "rows": rows,
        "counterexample_candidates": counterexample_candidates,
    }
    _emit(payload, f"{counterexample_candidates} counterexample candidates (0 expected)")
    return 0


def cmd_plot(args) -> int:
    sys = _load(args.system)
    store = RootStore(sys)
    if args.figure_spec:
        with open(args.figure_spec) as fh:
            spec = json.load(fh)
    else:
        spec = {"store_depth": args.depth, "imaginary": True}
    svg = render_figure(store, spec)
    Path(args.svg).write_text(svg)
    _emit({"svg": args.svg, "bytes": len(svg)}, f"wrote {args.svg}")
    return 0


def cmd_scan(args) -> int:
    directory = Path(args.systems)
    if not directory.is_dir():
        raise InputError(f"{args.systems!r} is not a directory")
    reports = []
    total_violations = 0
    for path in sorted(directory.glob("*.json")):
        sys = _load(str(path))
        report = scan_system(
            sys,
            name=path.stem,
            max_size=args.max_size,
            window_depth=args.window_depth,
            join_samples=args.samples,
            seed=args.seed,
        )
        eq = report.get("equivalence", {})
        total_violations += len(eq.get("violations", []))
        reports.append(report)
        print(f"scanned {path.stem}", file=_sys.stderr)
    _emit(
        {"systems": reports, "total_violations": total_violations},
        f"{len(reports)} systems scanned, {total_violations} equivalence violations",
    )
    return 0


# -- parser ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    budget_default = _env_int("COXWO_BUDGET", 100000)
    seed_default = _env_int("COXWO_SEED", 0)

    parser = argparse.ArgumentParser(prog="coxwo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def system_arg(p):
        p.add_argument("--system", required=True, help="path to a system spec JSON file")

    p = sub.add_parser("define", help="validate a system file and echo its exact data")
    p.add_argument("system", help="path to a system spec JSON file")
    p.set_defaults(func=cmd_define)

    p = sub.add_parser("roots", help="enumerate positive roots by depth")
    system_arg(p)
    p.add_argument("--depth", type=int, default=10)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("join", help="decide the join of the given words")
    system_arg(p)
    p.add_argument("words", nargs="+")
    p.add_argument("--budget", type=int, default=budget_default)
    p.add_argument("--orbit-depth", type=int, default=12)
    p.set_defaults(func=cmd_join)

    p = sub.add_parser("meet", help="meet (greatest common prefix) of the given words")
    system_arg(p)
    p.add_argument("words", nargs="+")
    p.set_defaults(func=cmd_meet)

    p = sub.add_parser("closure", help="2-closure or windowed cone closure of a root set")
    system_arg(p)
    p.add_argument("set", help="JSON array of root literals")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--two", dest="mode", action="store_const", const="two")
    group.add_argument("--cone", dest="mode", action="store_const", const="cone")
    p.add_argument("--depth", type=int, default=10)
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("classify", help="closure/convexity/separability flags of a root set")
    system_arg(p)
    p.add_argument("set", help="JSON array of root literals")
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--truncated", action="store_true",
                   help="treat the set as a window of an infinite set")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("infword", help="inversion stream of an eventually periodic word")
    system_arg(p)
    p.add_argument("literal", help='infinite word literal, e.g. "b|(a.b.g)"')
    p.add_argument("--n", type=int, default=0, help="materialize the first n inversion roots")
    p.add_argument("--compare", help="second infinite word literal")
    p.add_argument("--prefix", help="finite word to test as a prefix")
    p.add_argument("--accumulation", type=int, default=0,
                   help="cluster this many normalized inversion roots")
    p.add_argument("--horizon", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_infword)

    p = sub.add_parser("limits", help="cluster deep normalized roots (limit-root evidence)")
    system_arg(p)
    p.add_argument("--depth", type=int, default=16)
    p.add_argument("--tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_limits)

    p = sub.add_parser("imaginary", help="fundamental domain K and orbit samples")
    system_arg(p)
    p.add_argument("--orbit-depth", type=int, default=0)
    p.set_defaults(func=cmd_imaginary)

    p = sub.add_parser("probe", help="numeric probes of the open questions")
    system_arg(p)
    p.add_argument("--conjecture", choices=["4.8"])
    p.add_argument("--question", choices=["3.4", "3.5"])
    p.add_argument("--infword")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--tol", type=float, default=1e-4)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--budget", type=int, default=budget_default)
    p.add_argument("--seed", type=int, default=seed_default)
    p.set_defaults(func=cmd_probe)

    p = sub.add_parser("plot", help="render an SVG of the projective picture")
    system_arg(p)
    p.add_argument("--svg", required=True, help="output path")
    p.add_argument("--figure-spec", help="path to a figure spec JSON file")
    p.add_argument("--depth", type=int, default=6)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("scan", help="batch equivalence scan over a directory of systems")
    p.add_argument("--systems", required=True)
    p.add_argument("--samples", type=int, default=0, help="random join samples per system")
    p.add_argument("--max-size", type=int, default=3)
    p.add_argument("--window-depth", type=int, default=3)
    p.add_argument("--seed", type=int, default=seed_default)
    p.set_defaults(func=cmd_scan)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as err:
        print(f"budget exhausted: {err}", file=_sys.stderr)
        return 3
    except (InternalCheckError, AssertionError) as err:
        print(f"internal assertion failed: {err}", file=_sys.stderr)
        return 4
    except CoxwoError as err:
        print(f"error: {err}", file=_sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
