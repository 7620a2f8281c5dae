"""Command-line front end: classify, encode, lts, check, bench.

Exit codes are disjoint: 0 success (all requested verdicts hold), 1 a
requested verdict is false, 2 input or precondition error, 3 exploration cap
exceeded. Reports go to stdout as human text or, with ``--format json``, as a
stable JSON document.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from pathlib import Path

from . import bench as bench_mod
from .ccs import build_ccs_lts
from .encode import (
    EncodingResult,
    encode_2tau,
    encode_ccs_net,
    encode_free_choice,
    encode_free_choice_workflow,
    encode_group_choice,
)
from .equivalence import deadlocks, has_divergent_path, strong_bisim, weak_bisim
from .errors import InputError, ResourceLimitError, ToolError
from .formats import parse_ccs, parse_net_text, parse_pnml, print_ccs, write_aut
from .lts import ExplorationLimits
from .nets import build_net_lts, classify
from .transform import TransformTrace

PIPELINES = ("ccs", "2tau", "fcwf", "fc", "gc")
#: Relation each pipeline is guaranteed to satisfy.
PIPELINE_RELATION = {"ccs": "strong", "2tau": "strong", "fcwf": "weak", "fc": "weak", "gc": "weak"}


def _load_net(path: str):
    text = Path(path).read_text()
    if path.endswith((".pnml", ".xml")):
        return parse_pnml(text)
    return parse_net_text(text)


def _digest(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _pick_pipeline(flags) -> str:
    if flags.is_ccs_net:
        return "ccs"
    if flags.is_2tau_sync:
        return "2tau"
    if flags.is_free_choice_workflow:
        return "fcwf"
    if flags.is_free_choice:
        return "fc"
    if flags.is_group_choice:
        return "gc"
    notes = [note for notes in flags.diagnostics.values() for note in notes]
    raise InputError("net is outside every encodable class: " + "; ".join(notes))


def _run_pipeline(pipeline: str, net, m0, *, force: bool, seed) -> tuple[EncodingResult, TransformTrace]:
    if pipeline == "ccs":
        return encode_ccs_net(net, m0), TransformTrace()
    if pipeline == "2tau":
        return encode_2tau(net, m0), TransformTrace()
    fn = {
        "fcwf": encode_free_choice_workflow,
        "fc": encode_free_choice,
        "gc": encode_group_choice,
    }[pipeline]
    return fn(net, m0, force=force, seed=seed)


def _classification_json(flags) -> dict:
    record = dict(flags.as_dict())
    record["diagnostics"] = {key: list(notes) for key, notes in flags.diagnostics.items()}
    return record


def _emit(report: dict, args, lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)


def cmd_classify(args) -> int:
    net, _ = _load_net(args.file)
    flags = classify(net)
    report = {
        "command": "classify",
        "input": {"path": args.file, "sha256": _digest(args.file)},
        "classification": _classification_json(flags),
    }
    lines = [f"{key}: {str(value).lower()}" for key, value in flags.as_dict().items()]
    for key, notes in sorted(flags.diagnostics.items()):
        for note in notes:
            lines.append(f"  {key}: {note}")
    _emit(report, args, lines)
    return 0


def cmd_encode(args) -> int:
    timings: dict[str, float] = {}
    start = time.perf_counter()
    net, m0 = _load_net(args.file)
    timings["parse"] = time.perf_counter() - start

    start = time.perf_counter()
    flags = classify(net)
    pipeline = args.net_class if args.net_class != "auto" else _pick_pipeline(flags)
    timings["classify"] = time.perf_counter() - start

    start = time.perf_counter()
    result, trace = _run_pipeline(pipeline, net, m0, force=args.force, seed=args.seed)
    timings["encode"] = time.perf_counter() - start

    text = print_ccs(result)
    if args.out:
        Path(args.out).write_text(text)
    report = {
        "command": "encode",
        "input": {"path": args.file, "sha256": _digest(args.file)},
        "classification": _classification_json(flags),
        "pipeline": pipeline,
        "transform": _trace_json(trace),
        "encoding": {
            "equations": result.equation_count(),
            "restricted": len(result.restricted_names()),
            "symbols": result.symbol_count(),
        },
        "ccs": text,
        "timing": timings,
    }
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    elif not args.out:
        sys.stdout.write(text)
    else:
        print(f"pipeline {pipeline}: wrote {args.out} ({result.equation_count()} equations)")
    return 0


def _trace_json(trace: TransformTrace) -> dict:
    return {
        "steps": len(trace),
        "fresh_places": [r.fresh_place for r in trace],
        "fresh_transitions": [r.fresh_transition for r in trace],
    }


def cmd_lts(args) -> int:
    limits = ExplorationLimits(max_states=args.max_states)
    if args.ccs:
        process, defs = parse_ccs(Path(args.file).read_text())
        lts = build_ccs_lts(process, defs, limits)
    else:
        net, m0 = _load_net(args.file)
        lts = build_net_lts(net, m0, limits)
    text = write_aut(lts)
    if args.out:
        Path(args.out).write_text(text)
    report = {
        "command": "lts",
        "input": {"path": args.file, "sha256": _digest(args.file)},
        "lts": {
            "states": lts.n_states,
            "edges": len(lts.edges),
            "actions": sorted(lts.actions),
            "deadlocks": len(deadlocks(lts)),
            "divergent": has_divergent_path(lts),
        },
    }
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    elif not args.out:
        sys.stdout.write(text)
    else:
        print(f"wrote {args.out}: {lts.n_states} states, {len(lts.edges)} edges")
    return 0


def cmd_check(args) -> int:
    timings: dict[str, float] = {}
    start = time.perf_counter()
    net, m0 = _load_net(args.file)
    timings["parse"] = time.perf_counter() - start

    start = time.perf_counter()
    flags = classify(net)
    pipeline = args.net_class if args.net_class != "auto" else _pick_pipeline(flags)
    timings["classify"] = time.perf_counter() - start
    relation = args.relation or PIPELINE_RELATION[pipeline]

    limits = ExplorationLimits(max_states=args.max_states)
    encoding_info = None
    trace = TransformTrace()
    if args.against:
        process, defs = parse_ccs(Path(args.against).read_text())
        timings["encode"] = 0.0
    else:
        start = time.perf_counter()
        result, trace = _run_pipeline(pipeline, net, m0, force=args.force, seed=args.seed)
        process, defs = result.process, result.defs
        timings["encode"] = time.perf_counter() - start
        encoding_info = {
            "equations": result.equation_count(),
            "restricted": len(result.restricted_names()),
            "symbols": result.symbol_count(),
        }

    start = time.perf_counter()
    net_lts = build_net_lts(net, m0, limits)
    ccs_lts = build_ccs_lts(process, defs, limits)
    timings["lts"] = time.perf_counter() - start

    start = time.perf_counter()
    report_eq = strong_bisim(net_lts, ccs_lts) if relation == "strong" else weak_bisim(net_lts, ccs_lts)
    verdicts: dict = {relation: report_eq.verdict}
    requested = [report_eq.verdict]
    if args.divergence:
        before = has_divergent_path(net_lts)
        after = has_divergent_path(ccs_lts)
        verdicts["divergence_before"] = before
        verdicts["divergence_after"] = after
        verdicts["divergence_match"] = before == after
        requested.append(before == after)
    timings["check"] = time.perf_counter() - start

    distinguisher = None
    if report_eq.distinguisher is not None:
        distinguisher = {
            "actions": list(report_eq.distinguisher.actions),
            "refusing_side": report_eq.distinguisher.refusing_side,
        }

    report = {
        "command": "check",
        "input": {"path": args.file, "sha256": _digest(args.file)},
        "classification": _classification_json(flags),
        "pipeline": pipeline,
        "transform": _trace_json(trace),
        "encoding": encoding_info,
        "lts": {
            "net_states": net_lts.n_states,
            "net_edges": len(net_lts.edges),
            "ccs_states": ccs_lts.n_states,
            "ccs_edges": len(ccs_lts.edges),
        },
        "verdicts": {**verdicts, "distinguisher": distinguisher},
        "timing": timings,
    }
    lines = [f"pipeline: {pipeline}"]
    lines += [f"{name}: {str(value).lower()}" for name, value in verdicts.items()]
    if distinguisher:
        lines.append(f"distinguisher: {' '.join(distinguisher['actions'])} (side {distinguisher['refusing_side']} refuses)")
    _emit(report, args, lines)
    return 0 if all(requested) else 1


def cmd_bench(args) -> int:
    sizes = args.sizes or list(bench_mod.DEFAULT_SIZES)
    points = bench_mod.run_ladder(sizes=sizes, repeats=args.repeats)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "scaling.csv"
    fig_path = out_dir / "scaling.png"
    csv_path.write_text(bench_mod.ladder_csv(points))
    bench_mod.render_figure(points, str(fig_path))
    xs = [float(p.size) for p in points]
    sym_fit = bench_mod.fit_scaling(xs, [float(p.symbols) for p in points])
    time_fit = bench_mod.fit_scaling(xs, [p.seconds for p in points])
    report = {
        "command": "bench",
        "points": [
            {"size": p.size, "net_size": p.net_size, "symbols": p.symbols, "seconds": p.seconds}
            for p in points
        ],
        "fits": {
            "symbols": {"r_squared": sym_fit.r_squared, "loglog_exponent": sym_fit.loglog_exponent},
            "seconds": {"r_squared": time_fit.r_squared, "loglog_exponent": time_fit.loglog_exponent},
        },
        "outputs": {"csv": str(csv_path), "figure": str(fig_path)},
    }
    lines = [
        f"wrote {csv_path} and {fig_path}",
        f"symbols: loglog exponent {sym_fit.loglog_exponent:.3f}, linear R2 {sym_fit.r_squared:.4f}",
        f"time:    loglog exponent {time_fit.loglog_exponent:.3f}, linear R2 {time_fit.r_squared:.4f}",
    ]
    _emit(report, args, lines)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="netccs",
        description="Translate Petri nets into CCS defining equations and certify the translation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("classify", help="report net-class membership flags")
    p.add_argument("file")
    common(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("encode", help="translate a net into CCS text")
    p.add_argument("file")
    p.add_argument("--class", dest="net_class", choices=("auto",) + PIPELINES, default="auto")
    p.add_argument("--out")
    p.add_argument("--force", action="store_true", help="rewrite outside the stated class (guarantees void)")
    p.add_argument("--seed", type=int, default=None, help="randomise rewrite selection")
    common(p)
    p.set_defaults(fn=cmd_encode)

    p = sub.add_parser("lts", help="build the reachability or CCS transition system as .aut")
    p.add_argument("file")
    p.add_argument("--ccs", action="store_true", help="input is CCS text instead of a net")
    p.add_argument("--max-states", type=int, default=100_000)
    p.add_argument("--out")
    common(p)
    p.set_defaults(fn=cmd_lts)

    p = sub.add_parser("check", help="run the full pipeline and verify the equivalence verdicts")
    p.add_argument("file")
    p.add_argument("--relation", choices=("strong", "weak"), default=None,
                   help="defaults to the relation the chosen pipeline guarantees")
    p.add_argument("--divergence", action="store_true", help="also require equal divergence verdicts")
    p.add_argument("--max-states", type=int, default=100_000)
    p.add_argument("--class", dest="net_class", choices=("auto",) + PIPELINES, default="auto")
    p.add_argument("--against", default=None, help="verify against this CCS file instead of encoding")
    p.add_argument("--force", action="store_true")
    p.add_argument("--seed", type=int, default=None)
    common(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("bench", help="measure pipeline scaling; writes CSV and a figure")
    p.add_argument("--sizes", type=int, nargs="*", default=None)
    p.add_argument("--repeats", type=int, default=5)
    p.add_argument("--out-dir", default="bench-out")
    common(p)
    p.set_defaults(fn=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ToolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
