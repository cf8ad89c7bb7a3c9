"""Command-line front end.

Subcommands: solve, verify, gen, bench. Exit codes are part of the
contract: 0 everything passed, 1 a requested check failed, 2 bad input,
3 an internal invariant broke (a bug, not a user error).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from dataclasses import dataclass

from .engine import solve
from .gen import GenParams, random_instance
from .model import ParseError, parse_instance, serialize_instance
from .oracle import SIZE_GUARD, max_critical_rsm
from .verify import check_structure, verification_report

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_INTERNAL = 3

_LOG_LEVELS = {"off": logging.WARNING, "info": logging.INFO, "trace": logging.DEBUG}


def _configure_logging() -> None:
    raw = os.environ.get("CRITICAL_MATCH_LOG", "off").strip().lower()
    if raw not in _LOG_LEVELS:
        print(f"warning: unknown CRITICAL_MATCH_LOG={raw!r}, using off", file=sys.stderr)
        raw = "off"
    logging.basicConfig(stream=sys.stderr, format="%(name)s: %(message)s")
    logging.getLogger("critmatch").setLevel(_LOG_LEVELS[raw])


def parse_matching(text: str) -> list[tuple[int, int]]:
    """Parse `pair <a> <b>` lines; '#' starts a comment."""
    pairs: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if tok[0] != "pair" or len(tok) != 3:
            raise ParseError(f"line {lineno}: expected 'pair <a> <b>', got {raw!r}")
        try:
            pairs.append((int(tok[1]), int(tok[2])))
        except ValueError:
            raise ParseError(f"line {lineno}: indices must be integers") from None
    return pairs


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_instance(path: str):
    return parse_instance(_read(path))


# ---------------------------------------------------------------- solve


def cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    leveled, stats = solve(inst)
    report = verification_report(inst, leveled.matching, leveled) if args.verify else None

    if args.format == "json":
        doc = {
            "pairs": [[a, b, lv.label()] for a, b, lv in leveled.sorted_pairs],
            "size": len(leveled),
            "stats": stats.to_dict(),
        }
        if report is not None:
            doc["report"] = report.to_dict()
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print(f"# instance {inst.n_a}x{inst.n_b}, {len(inst.edges)} edges, "
              f"s={inst.s} t={inst.t}")
        for a, b, lv in leveled.sorted_pairs:
            print(f"pair {a} {b}  # level {lv.label()}")
        print(f"# size {len(leveled)}")
        print(f"# proposals {stats.proposal_count}")
        if report is not None:
            for line in _report_lines(report):
                print(f"# {line}")

    if report is not None and not report.ok:
        # the solver guarantees its own output verifies; this is a bug
        print("internal invariant violated: solver output failed verification",
              file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


# ---------------------------------------------------------------- verify


def _report_lines(report) -> list[str]:
    sr = report.structure_report
    lines = [
        f"is_matching: {str(report.is_matching).lower()}",
        f"blocking_pairs: {[(bp.a, bp.b) for bp in report.blocking_pairs]}",
        f"unjustified: {[tuple(p) for p in report.unjustified]}",
        f"is_rsm: {str(report.is_rsm).lower()}",
        f"critical_covered: {report.critical_covered}",
        f"max_critical_coverage: {report.max_critical_coverage}",
        f"is_critical: {str(report.is_critical).lower()}",
    ]
    if sr is None:
        lines.append("structure: not checked (no levels supplied)")
    elif sr.ok:
        lines.append("structure: ok")
    else:
        lines.append(f"structure violations: {sr.to_dict()}")
    return lines


def cmd_verify(args) -> int:
    inst = _load_instance(args.instance)
    pairs = parse_matching(_read(args.matching))
    report = verification_report(inst, pairs)
    if not report.is_matching:
        print("error: the pair list is not a matching of this instance",
              file=sys.stderr)
        return EXIT_INPUT

    if args.format == "json":
        print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        for line in _report_lines(report):
            print(line)
    return EXIT_OK if (report.is_rsm and report.is_critical) else EXIT_CHECK_FAILED


# ---------------------------------------------------------------- gen


_PARAM_DEFAULTS = {
    "n_a": 5,
    "n_b": 5,
    "edge_probability": 0.5,
    "tie_density": 0.3,
    "critical_fraction_a": 0.3,
    "critical_fraction_b": 0.3,
    "seed": 1,
}


def _gen_params(args) -> GenParams:
    merged = dict(_PARAM_DEFAULTS)
    if args.params is not None:
        doc = json.loads(_read(args.params))
        if not isinstance(doc, dict):
            raise ParseError("params file must hold a JSON object")
        unknown = set(doc) - set(_PARAM_DEFAULTS)
        if unknown:
            raise ParseError(f"unknown generator parameters: {sorted(unknown)}")
        merged.update(doc)
    for key in _PARAM_DEFAULTS:
        flag = getattr(args, key, None)
        if flag is not None:
            merged[key] = flag
    try:
        return GenParams(**merged)
    except ValueError as e:
        raise ParseError(str(e)) from None


def cmd_gen(args) -> int:
    inst = random_instance(_gen_params(args))
    sys.stdout.write(serialize_instance(inst, fmt=args.format_inst))
    return EXIT_OK


# ---------------------------------------------------------------- bench


ROW_FIELDS = [
    "seed", "n_a", "n_b", "s", "t", "solver_size", "oracle_max_size",
    "ratio", "is_rsm", "is_critical", "structure_ok", "proposal_count",
    "elapsed_ms",
]


@dataclass(frozen=True)
class ExperimentRow:
    seed: int
    n_a: int
    n_b: int
    s: int
    t: int
    solver_size: int
    oracle_max_size: int | None
    ratio: str
    is_rsm: bool
    is_critical: bool
    structure_ok: bool
    proposal_count: int
    elapsed_ms: int

    def as_csv(self) -> list[str]:
        def cell(v) -> str:
            if v is None:
                return ""
            if isinstance(v, bool):
                return str(v).lower()
            return str(v)

        return [cell(getattr(self, f)) for f in ROW_FIELDS]


def run_experiment(params: GenParams, oracle_max: int) -> ExperimentRow:
    inst = random_instance(params)
    t0 = time.perf_counter()
    leveled, stats = solve(inst)
    elapsed = int(round((time.perf_counter() - t0) * 1000))
    report = verification_report(inst, leveled.matching, leveled)
    structure_ok = check_structure(inst, leveled).ok

    oracle_size: int | None = None
    ratio = ""
    if inst.n_a <= oracle_max and inst.n_b <= oracle_max:
        oracle_size = max_critical_rsm(inst).max_critical_rsm_size
        ratio = f"{len(leveled)}/{oracle_size}"

    return ExperimentRow(
        seed=params.seed,
        n_a=inst.n_a,
        n_b=inst.n_b,
        s=inst.s,
        t=inst.t,
        solver_size=len(leveled),
        oracle_max_size=oracle_size,
        ratio=ratio,
        is_rsm=report.is_rsm,
        is_critical=report.is_critical,
        structure_ok=structure_ok,
        proposal_count=stats.proposal_count,
        elapsed_ms=elapsed,
    )


def cmd_bench(args) -> int:
    base = _gen_params(args)
    if args.oracle_max > SIZE_GUARD:
        raise ParseError(f"--oracle-max cannot exceed {SIZE_GUARD}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ROW_FIELDS)
    for i in range(args.count):
        seed = (base.seed + i) % 2**64
        params = GenParams(
            n_a=base.n_a, n_b=base.n_b,
            edge_probability=base.edge_probability,
            tie_density=base.tie_density,
            critical_fraction_a=base.critical_fraction_a,
            critical_fraction_b=base.critical_fraction_b,
            seed=seed,
        )
        writer.writerow(run_experiment(params, args.oracle_max).as_csv())
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _add_gen_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n-a", dest="n_a", type=int, default=None)
    p.add_argument("--n-b", dest="n_b", type=int, default=None)
    p.add_argument("--edge-probability", dest="edge_probability",
                   type=float, default=None)
    p.add_argument("--tie-density", dest="tie_density", type=float, default=None)
    p.add_argument("--critical-fraction-a", dest="critical_fraction_a",
                   type=float, default=None)
    p.add_argument("--critical-fraction-b", dest="critical_fraction_b",
                   type=float, default=None)
    p.add_argument("--seed", dest="seed", type=int, default=None)
    p.add_argument("--params", default=None,
                   help="JSON file with generator parameters; flags override it")


def _parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="critmatch",
        description="Critical relaxed stable matchings with ties.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one instance file")
    p.add_argument("instance")
    p.add_argument("--verify", action="store_true",
                   help="append a verification report and fail on any breach")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="verify a matching against an instance")
    p.add_argument("instance")
    p.add_argument("matching", help="file of 'pair <a> <b>' lines")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="emit one random instance")
    _add_gen_flags(p)
    p.add_argument("--format", dest="format_inst", choices=["text", "json"],
                   default="text")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="batch experiment, CSV per instance")
    _add_gen_flags(p)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--oracle-max", dest="oracle_max", type=int, default=6,
                   help="run the exhaustive oracle when both sides fit")
    p.add_argument("--out", default=None, help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_bench)

    return top


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    _configure_logging()
    try:
        return args.func(args)
    except (ParseError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as e:
        print(f"internal invariant violated: {e}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
