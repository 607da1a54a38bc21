"""Command-line front end.

Exit status: 0 success, 1 analysis-negative (not a trapping set, decoding
failure, nothing found), 2 input error.  Reports go to stdout; the
effective-config line and structured errors go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .bounds import check_corollary1, find_guaranteed_failure, girth_upper_bound, theorem2_threshold
from .decoders import DecoderConfig, decode, simulate_bsc, trace_jsonl
from .gadgets import GADGET_NAMES, CompletionError, CompletionSpec, build_gadget, complete_to_regular
from .schemas import SCHEMAS
from .tanner import (
    AlistError,
    GirthConstructionError,
    construct_girth_constrained,
    girth,
    read_alist,
    sample_regular_graph,
    word_from_support,
    write_alist,
)
from .trapping import check_trapping_conditions, critical_number, search_failure_sets

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


class AnalysisNegative(Exception):
    """Report is printed, but the verdict is negative."""

    def __init__(self, message: str, report: dict):
        super().__init__(message)
        self.report = report


# --------------------------------------------------------------------------
# argument handling


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--alist", metavar="PATH", help="parity-check matrix in alist format")
    p.add_argument("--vars", metavar="i,j,k", help="0-based variable indices")
    p.add_argument("--algo", choices=["gallager-a", "bit-flip"], default="gallager-a")
    p.add_argument("--max-iter", type=int, default=100, metavar="M")
    p.add_argument("--rule", choices=["A", "B"], default="A")
    p.add_argument("--alpha", type=float, metavar="F")
    p.add_argument("--rho", type=int, metavar="R")
    p.add_argument("--n", type=int, metavar="N")
    p.add_argument("--seed", type=int, default=0, metavar="S")
    p.add_argument("--jobs", type=int, default=1, metavar="J")
    p.add_argument("--format", choices=["json", "csv", "text"], default="json")
    p.add_argument("--budget", type=int, metavar="B")
    p.add_argument("--max-weight", type=int, metavar="K")
    p.add_argument("--trace", metavar="PATH", help="write a JSON-lines message trace")
    p.add_argument("--print-schema", action="store_true", help="print the report schema and exit")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ldpc-trapping",
        description="Gallager A / bit-flipping decoders and trapping-set analysis for column-weight-3 LDPC codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = _common()

    def add(name, help_, path=True):
        sp = sub.add_parser(name, parents=[common], help=help_, description=help_)
        if path:
            sp.add_argument("path", nargs="?", help="alist file (same as --alist)")
        return sp

    add("girth", "Girth and one shortest cycle")
    add("decode", "Decode the indicator of --vars (all-zero codeword sent)")
    add("check-ts", "Structural trapping-set test for --vars")
    add("find-failures", "Search supports of weight <= --max-weight for decoding failures")
    add("critical-number", "Critical number of the trapping set --vars")
    add("guaranteed-failure", "Girth-dictated failure set, confirmed by simulation")
    add("bounds", "Girth upper bound and the block-length threshold", path=False)
    sp = add("sample-ensemble", "Sample (3, rho)-regular Tanner graphs", path=False)
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--girth-target", type=int, help="PEG construction with this girth floor")
    sp.add_argument("--out", metavar="DIR", help="also write each graph as an alist file")
    sp = add("gadget", "Describe a named gadget, optionally completed to a regular graph", path=False)
    sp.add_argument("name", help=f"one of {', '.join(GADGET_NAMES)} (cycle_g as cycle_<g>)")
    sp.add_argument("--complete", action="store_true")
    sp.add_argument("--out", metavar="PATH", help="write the completion as an alist file")
    sp = add("simulate", "Monte Carlo over a BSC with the all-zero codeword")
    sp.add_argument("--p", type=float, required=False, default=0.01, help="crossover probability")
    sp.add_argument("--trials", type=int, default=1000)
    sp.add_argument("--log-failures", action="store_true")
    sp = add("verify", "Run the acceptance suite", path=False)
    sp.add_argument("--criteria", metavar="i,j", help="run only these criteria")
    return parser


def _config(args) -> DecoderConfig:
    try:
        return DecoderConfig(args.max_iter, args.algo, args.rule)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _graph(args):
    path = args.alist or getattr(args, "path", None)
    if path is None:
        raise InputError("no parity-check matrix given (use --alist PATH)")
    try:
        return read_alist(path)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}") from None
    except AlistError as exc:
        raise InputError(f"{path}: {exc}") from None


def _vars(args, graph, required=True) -> list[int]:
    if args.vars is None:
        if required:
            raise InputError("--vars is required")
        return []
    text = args.vars.strip()
    if not text:
        return []
    try:
        out = sorted({int(x) for x in text.split(",")})
    except ValueError:
        raise InputError(f"--vars must be comma-separated integers, got {args.vars!r}") from None
    bad = [v for v in out if not 0 <= v < graph.n]
    if bad:
        raise InputError(f"--vars out of range [0, {graph.n}): {bad}")
    return out


def _need(value, flag):
    if value is None:
        raise InputError(f"{flag} is required")
    return value


def effective_config(args) -> dict:
    d = {k: v for k, v in sorted(vars(args).items()) if k != "print_schema"}
    return d


# --------------------------------------------------------------------------
# subcommands


def cmd_girth(args) -> dict:
    G = _graph(args)
    return girth(G).as_dict(G)


def cmd_decode(args) -> dict:
    G = _graph(args)
    T = _vars(args, G, required=False)
    cfg = _config(args)
    try:
        cfg = DecoderConfig(cfg.max_iterations, cfg.algorithm, cfg.decision_rule, trace=args.trace is not None)
        out = decode(G, word_from_support(G.n, T), cfg)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.trace:
        Path(args.trace).write_text(trace_jsonl(G, out), encoding="utf-8")
    report = {"config": cfg.as_dict(), "input": T, **out.as_dict()}
    if cfg.unanalyzed:
        report["unanalyzed"] = True
    if out.failure:
        raise AnalysisNegative("decoding failure", report)
    return report


def cmd_check_ts(args) -> dict:
    G = _graph(args)
    T = _vars(args, G)
    if not T:
        raise InputError("--vars must name at least one variable")
    verdict = check_trapping_conditions(G, T)
    report = verdict.as_dict()
    if not verdict.is_trapping:
        raise AnalysisNegative("not a trapping set", report)
    return report


def cmd_find_failures(args) -> dict:
    G = _graph(args)
    k = _need(args.max_weight, "--max-weight")
    if k < 1:
        raise InputError("--max-weight must be >= 1")
    pool = _vars(args, G, required=False) or None
    try:
        rep = search_failure_sets(
            G, k, _config(args), budget=args.budget or 1_000_000, seed=args.seed, jobs=args.jobs, variables=pool
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report = rep.as_dict()
    if not rep.failing_supports:
        raise AnalysisNegative("no failure set found", report)
    return report


def cmd_critical_number(args) -> dict:
    G = _graph(args)
    T = _vars(args, G)
    if not T:
        raise InputError("--vars must name at least one variable")
    cfg = _config(args)
    if cfg.unanalyzed:
        raise InputError("critical numbers are defined for decision rule A only")
    verdict = check_trapping_conditions(G, T)
    if not verdict.is_trapping:
        raise AnalysisNegative("not a trapping set", verdict.as_dict())
    rep = critical_number(G, T, cfg, budget=args.budget or 200_000)
    report = {**verdict.as_dict(), **rep.as_dict()}
    if rep.critical_number is None:
        raise AnalysisNegative("no subset ends up in T", report)
    return report


def cmd_guaranteed_failure(args) -> dict:
    G = _graph(args)
    cfg = _config(args)
    if cfg.unanalyzed:
        raise InputError("guaranteed failure sets are defined for decision rule A only")
    rep = find_guaranteed_failure(G, cfg, fallback_budget=args.budget or 100_000)
    report = {"report": rep.as_dict()}
    if args.max_weight is not None:
        report["shortCycleClaim"] = check_corollary1(G, args.max_weight, cfg).as_dict()
    if rep.confirmed is None:
        raise AnalysisNegative(rep.note or "no failure set confirmed", report)
    return report


def cmd_bounds(args) -> dict:
    rho = _need(args.rho, "--rho")
    if args.alpha is None and args.n is None:
        raise InputError("give --alpha (threshold) and/or --n (girth bound)")
    report: dict = {}
    try:
        if args.alpha is not None:
            report.update(theorem2_threshold(args.alpha, rho).as_dict())
        else:
            report["rho"] = rho
        if args.n is not None:
            report["n"] = args.n
            report["girthUpperBound"] = girth_upper_bound(args.n, rho)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return report


def cmd_sample_ensemble(args) -> dict:
    n = _need(args.n, "--n")
    rho = _need(args.rho, "--rho")
    if args.count < 1:
        raise InputError("--count must be >= 1")
    graphs = []
    for i in range(args.count):
        s = args.seed + i
        try:
            if args.girth_target is None:
                G = sample_regular_graph(n, rho, s)
            else:
                G = construct_girth_constrained(n, rho, args.girth_target, s)
        except GirthConstructionError as exc:
            raise AnalysisNegative(str(exc), {"n": n, "rho": rho, "seed": s, "achievedGirth": exc.achieved_girth}) from None
        except ValueError as exc:
            raise InputError(str(exc)) from None
        g = girth(G).girth
        text = write_alist(G)
        if args.out:
            Path(args.out).mkdir(parents=True, exist_ok=True)
            (Path(args.out) / f"n{n}_rho{rho}_seed{s}.alist").write_text(text, encoding="utf-8")
        graphs.append(
            {"seed": s, "m": G.m, "girth": "acyclic" if g is None else g, "hasParallelEdges": G.has_parallel_edges(), "alist": text}
        )
    method = "configuration-model" if args.girth_target is None else "peg"
    return {"n": n, "rho": rho, "seed": args.seed, "method": method, "graphs": graphs}


def cmd_gadget(args) -> dict:
    try:
        gadget = build_gadget(args.name)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report: dict = {"gadget": gadget.as_dict()}
    if args.complete or args.out:
        spec = CompletionSpec(rho=args.rho or 4, seed=args.seed, n=args.n)
        try:
            G = complete_to_regular(gadget, spec)
        except (CompletionError, ValueError) as exc:
            raise AnalysisNegative(str(exc), report) from None
        text = write_alist(G)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        g = girth(G).girth
        completion = {
            "n": G.n,
            "m": G.m,
            "rho": spec.rho,
            "seed": spec.seed,
            "girth": "acyclic" if g is None else g,
            "verdict": check_trapping_conditions(G, gadget.designated_T).as_dict(),
            "alist": text,
        }
        report["completion"] = completion
    return report


def cmd_simulate(args) -> dict:
    G = _graph(args)
    cfg = _config(args)
    try:
        stats = simulate_bsc(G, args.p, args.trials, args.seed, cfg, log_failures=args.log_failures, jobs=args.jobs)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return {"config": cfg.as_dict(), "seed": args.seed, **stats.as_dict()}


def cmd_verify(args) -> dict:
    from . import acceptance

    chosen = acceptance.CRITERIA
    if args.criteria:
        try:
            wanted = {int(x) for x in args.criteria.split(",")}
        except ValueError:
            raise InputError("--criteria must be comma-separated integers") from None
        if not wanted <= set(range(1, len(chosen) + 1)):
            raise InputError(f"criteria are numbered 1..{len(chosen)}")
        chosen = [c for i, c in enumerate(chosen, 1) if i in wanted]
    results = [c() for c in chosen]
    report = {"passed": all(r.passed for r in results), "criteria": [r.as_dict() for r in results]}
    if args.format == "text":
        report["_lines"] = [r.line(timing=False) for r in results]
    if not report["passed"]:
        raise AnalysisNegative("acceptance criteria failed", report)
    return report


COMMANDS = {
    "girth": cmd_girth,
    "decode": cmd_decode,
    "check-ts": cmd_check_ts,
    "find-failures": cmd_find_failures,
    "critical-number": cmd_critical_number,
    "guaranteed-failure": cmd_guaranteed_failure,
    "bounds": cmd_bounds,
    "sample-ensemble": cmd_sample_ensemble,
    "gadget": cmd_gadget,
    "simulate": cmd_simulate,
    "verify": cmd_verify,
}


# --------------------------------------------------------------------------
# rendering


def _json_default(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


def _dumps(obj, **kw) -> str:
    return json.dumps(obj, default=_json_default, **kw)


def render(command: str, report: dict, fmt: str) -> str:
    lines = report.pop("_lines", None)
    if fmt == "json":
        return _dumps(report, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        if command == "bounds" and "N" in report:
            cols = ["alpha", "rho", "N", "bound_at_N"]
        else:
            cols = list(report)
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        w.writerow([v if isinstance(v, (int, float, str)) or v is None else _dumps(v) for v in (report.get(c) for c in cols)])
        return buf.getvalue()
    if lines is not None:
        return "\n".join(lines) + "\n"
    if command == "girth":
        w = " ".join(report["witness"])
        return f"girth {report['girth']}" + (f"\nwitness {w}" if w else "") + "\n"
    out = []
    for k, v in report.items():
        out.append(f"{k}: {v if isinstance(v, (int, float, str)) or v is None else _dumps(v)}")
    return "\n".join(out) + "\n"


def _error(message: str, kind: str) -> None:
    sys.stderr.write(_dumps({"error": message, "kind": kind}) + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.print_schema:
        sys.stdout.write(_dumps(SCHEMAS[args.command], indent=2) + "\n")
        return EXIT_OK
    sys.stderr.write("effective-config: " + _dumps(effective_config(args), sort_keys=True) + "\n")
    try:
        report = COMMANDS[args.command](args)
        status = EXIT_OK
    except InputError as exc:
        _error(str(exc), "input")
        return EXIT_INPUT
    except AnalysisNegative as exc:
        report = exc.report
        _error(str(exc), "analysis")
        status = EXIT_NEGATIVE
    sys.stdout.write(render(args.command, report, args.format))
    return status


if __name__ == "__main__":
    raise SystemExit(main())
