"""Command-line harness.

Subcommands: solve, expand, oracle, diff, lemmas, matrix-dump, bench, trace.
Reports are JSON on stdout (CSV for matrices, traces, and bench records);
diagnostics go to stderr.  Exit codes: 0 = found/ok, 1 = not found,
2 = error, 3 = budget exhausted.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import statistics
import sys
import tempfile
import time
from dataclasses import asdict
from pathlib import Path
from typing import Optional

from . import oracle
from .formula import (
    ParseError,
    PosCnf,
    enumerate_small,
    generate_random,
    parse_pos3cnf,
    serialize,
    validate,
)
from .preprocess import expand
from .search import MODES, R_DECODES, SearchConfig, SearchStats, solve, two_dib_search

SCHEMA_VERSION = 1

EXIT_FOUND = 0
EXIT_NOT_FOUND = 1
EXIT_ERROR = 2
EXIT_BUDGET = 3

#: (mode, r_decode) combinations exercised by the differential runner.
ALL_VARIANTS = tuple((m, d) for m in MODES for d in R_DECODES)


def _emit(report: dict, out=None) -> None:
    print(json.dumps(report, indent=2, sort_keys=True), file=out or sys.stdout)


def _error(message: str, **extra) -> int:
    report = {"schema_version": SCHEMA_VERSION, "error": message, **extra}
    _emit(report)
    print(f"error: {message}", file=sys.stderr)
    return EXIT_ERROR


def _load_formula(path: str) -> PosCnf:
    text = Path(path).read_text(encoding="ascii")
    f = parse_pos3cnf(text)
    violations = validate(f)
    if violations:
        raise ValueError("; ".join(violations))
    return f


def _config_from_args(args) -> SearchConfig:
    return SearchConfig(
        mode=args.mode,
        r_decode=args.r_decode.replace("-", "_"),
        call_budget=args.call_budget,
        depth_budget=args.depth_budget,
    )


def _stats_dict(stats: SearchStats) -> dict:
    return asdict(stats)


def _resolve_corpus(args) -> Path:
    if getattr(args, "corpus", None):
        return Path(args.corpus)
    if getattr(args, "config", None):
        cfg = json.loads(Path(args.config).read_text())
        if "corpus" in cfg:
            return Path(cfg["corpus"])
    env = os.environ.get("ONE3PROBE_CORPUS")
    if env:
        return Path(env)
    return Path("corpus")


# ---------------------------------------------------------------- solve


def cmd_solve(args) -> int:
    try:
        psi = _load_formula(args.path)
    except (OSError, ParseError, ValueError) as exc:
        return _error(str(exc))
    cfg = _config_from_args(args)
    result = solve(psi, cfg)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "solve",
        "mode": cfg.mode,
        "r_decode": cfg.r_decode,
        "found": result.found,
        "stats": _stats_dict(result.stats),
        "k1": result.expansion.k1,
        "k2": result.expansion.k2,
        "m": result.expansion.m,
    }
    if result.witness is not None:
        report["witness"] = {
            "mask": result.witness.mask,
            "original_true_vars": list(result.witness_original.true_vars()),
            "aux_true_vars": list(result.aux_true_vars),
        }
    if args.check:
        truth = oracle.brute_force_one_in_three(psi)
        report["oracle_satisfiable"] = truth is not None
        report["agrees_with_oracle"] = (truth is not None) == result.found
    _emit(report)
    if result.stats.budget_exhausted:
        return EXIT_BUDGET
    return EXIT_FOUND if result.found else EXIT_NOT_FOUND


# ---------------------------------------------------------------- expand


def cmd_expand(args) -> int:
    try:
        psi = _load_formula(args.path)
    except (OSError, ParseError, ValueError) as exc:
        return _error(str(exc))
    exp = expand(psi)
    text = serialize(exp.phi)
    if args.json:
        _emit(
            {
                "schema_version": SCHEMA_VERSION,
                "command": "expand",
                "p3cnf": text,
                "k1": exp.k1,
                "k2": exp.k2,
                "m": exp.m,
                "rename": list(exp.rename),
                "target": exp.ef.target,
            }
        )
    else:
        sys.stdout.write(text)
    return EXIT_FOUND


# ---------------------------------------------------------------- oracle


def cmd_oracle(args) -> int:
    try:
        psi = _load_formula(args.path)
    except (OSError, ParseError, ValueError) as exc:
        return _error(str(exc))
    try:
        witness = oracle.brute_force_one_in_three(psi, allow_large=args.allow_large)
    except ValueError as exc:
        return _error(str(exc))
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "oracle",
        "satisfiable": witness is not None,
    }
    if witness is not None:
        report["witness"] = {"mask": witness.mask, "true_vars": list(witness.true_vars())}
    _emit(report)
    return EXIT_FOUND if witness is not None else EXIT_NOT_FOUND


# ---------------------------------------------------------------- lemmas


def lemma_report(psi: PosCnf, allow_large: bool = False) -> dict:
    exp = expand(psi)
    report: dict = {
        "schema_version": SCHEMA_VERSION,
        "command": "lemmas",
        "k1": exp.k1,
        "k2": exp.k2,
        "m": exp.m,
    }
    if exp.ef.k <= oracle.MATERIALIZE_MAX_VARS or allow_large:
        mm = oracle.materialize(exp.ef, allow_large=allow_large)
        for label, strict in (("strict", True), ("non_strict", False)):
            verdict = oracle.check_sortedness(mm, strict=strict)
            report[f"sortedness_{label}"] = {
                "holds": verdict.holds,
                "first_violation": _jsonable_violation(verdict.first_violation),
            }
    else:
        report["sortedness_strict"] = "skipped"
        report["sortedness_non_strict"] = "skipped"
    if exp.ef.k <= oracle.BRUTE_FORCE_MAX_VARS or allow_large:
        verdict = oracle.check_equivalence(psi, allow_large=allow_large)
        report["equivalence"] = {
            "holds": verdict.holds,
            "first_violation": verdict.first_violation,
        }
    else:
        report["equivalence"] = "skipped"
    verdict = oracle.check_dominance(exp.ef)
    report["dominance"] = {
        "holds": verdict.holds,
        "first_violation": verdict.first_violation,
    }
    return report


def _jsonable_violation(violation: Optional[dict]) -> Optional[dict]:
    if violation is None:
        return None
    out = dict(violation)
    for key in ("cell", "neighbor"):
        if key in out:
            out[key] = list(out[key])
    return out


def cmd_lemmas(args) -> int:
    try:
        psi = _load_formula(args.path)
    except (OSError, ParseError, ValueError) as exc:
        return _error(str(exc))
    _emit(lemma_report(psi, allow_large=args.allow_large))
    return EXIT_FOUND


# ---------------------------------------------------------------- matrix dump


def write_matrix_csv(mm: oracle.MaterializedMatrix, stream) -> None:
    writer = csv.writer(stream)
    writer.writerow([f"c{j}" for j in range(mm.cols)])
    for row in range(mm.rows):
        writer.writerow(mm.cells[row])


def cmd_matrix_dump(args) -> int:
    try:
        psi = _load_formula(args.path)
    except (OSError, ParseError, ValueError) as exc:
        return _error(str(exc))
    exp = expand(psi)
    try:
        mm = oracle.materialize(exp.ef, allow_large=args.allow_large)
    except ValueError as exc:
        return _error(str(exc))
    if args.out == "-":
        write_matrix_csv(mm, sys.stdout)
    else:
        with open(args.out, "w", newline="") as fh:
            write_matrix_csv(mm, fh)
    return EXIT_FOUND


# ---------------------------------------------------------------- diff


def _variant_name(mode: str, r_decode: str) -> str:
    return f"{mode}/{r_decode}"


def counterexample_record(
    psi: PosCnf,
    search_verdict: bool,
    oracle_verdict: bool,
    cfg: SearchConfig,
    stats: SearchStats,
    seed: Optional[int],
) -> dict:
    if search_verdict == oracle_verdict:
        raise ValueError("not a counterexample: verdicts agree")
    return {
        "schema_version": SCHEMA_VERSION,
        "formula": serialize(psi),
        "search_verdict": search_verdict,
        "oracle_verdict": oracle_verdict,
        "config": {
            "mode": cfg.mode,
            "r_decode": cfg.r_decode,
            "call_budget": cfg.call_budget,
            "depth_budget": cfg.depth_budget,
        },
        "seed": seed,
        "stats": _stats_dict(stats),
    }


def write_counterexample(record: dict, corpus_dir: Path) -> str:
    """Persist one record as a content-hashed p3cnf + JSON sidecar pair;
    writes are atomic (temp file + rename).  Returns the record stem."""
    corpus_dir.mkdir(parents=True, exist_ok=True)
    cfg = record["config"]
    key = record["formula"] + cfg["mode"] + cfg["r_decode"]
    stem = hashlib.sha256(key.encode()).hexdigest()[:16]
    for suffix, payload in (
        (".p3cnf", record["formula"]),
        (".json", json.dumps(record, indent=2, sort_keys=True) + "\n"),
    ):
        fd, tmp = tempfile.mkstemp(dir=corpus_dir, suffix=suffix + ".tmp")
        with os.fdopen(fd, "w") as fh:
            fh.write(payload)
        os.replace(tmp, corpus_dir / (stem + suffix))
    return stem


def replay_counterexample(record: dict) -> dict:
    """Re-run solve with the recorded config; returns fresh verdict/stats."""
    psi = parse_pos3cnf(record["formula"])
    cfg = SearchConfig(**record["config"])
    result = solve(psi, cfg)
    return {
        "search_verdict": result.found,
        "oracle_verdict": oracle.brute_force_one_in_three(psi) is not None,
        "stats": _stats_dict(result.stats),
    }


def run_diff(
    instances,
    cfg_base: SearchConfig,
    corpus_dir: Path,
    seed: Optional[int] = None,
    variants=ALL_VARIANTS,
) -> dict:
    """Run every variant plus the oracle on each instance; persist
    disagreements.  Returns the summary report."""
    disagreements = {_variant_name(m, d): 0 for m, d in variants}
    budget_exhausted = {_variant_name(m, d): 0 for m, d in variants}
    records = []
    instances_run = 0
    agreements = 0
    for psi in instances:
        instances_run += 1
        truth = oracle.brute_force_one_in_three(psi) is not None
        instance_agrees = True
        for mode, r_decode in variants:
            cfg = SearchConfig(
                mode=mode,
                r_decode=r_decode,
                call_budget=cfg_base.call_budget,
                depth_budget=cfg_base.depth_budget,
            )
            result = solve(psi, cfg)
            if result.stats.budget_exhausted:
                budget_exhausted[_variant_name(mode, r_decode)] += 1
            if result.found != truth:
                instance_agrees = False
                disagreements[_variant_name(mode, r_decode)] += 1
                record = counterexample_record(
                    psi, result.found, truth, cfg, result.stats, seed
                )
                records.append(write_counterexample(record, corpus_dir))
        if instance_agrees:
            agreements += 1
    repaired_clean = all(
        count == 0
        for name, count in disagreements.items()
        if name.startswith("repaired/")
    )
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "diff",
        "instances": instances_run,
        "agreements": agreements,
        "disagreements_by_variant": disagreements,
        "budget_exhausted_by_variant": budget_exhausted,
        "records_written": sorted(set(records)),
        "corpus_dir": str(corpus_dir),
        "repaired_modes_agree_with_oracle": repaired_clean,
    }


def cmd_diff(args) -> int:
    corpus_dir = _resolve_corpus(args)
    cfg_base = SearchConfig(call_budget=args.call_budget, depth_budget=args.depth_budget)
    if args.exhaustive is not None:
        try:
            instances = list(enumerate_small(args.exhaustive, clause_cap=args.clause_cap))
        except ValueError as exc:
            return _error(str(exc))
        seed = None
    elif args.random is not None:
        if args.k1 is None or args.m1 is None:
            return _error("--random requires --k1 and --m1")
        seed = args.seed
        rng_seeds = [seed + i for i in range(args.random)]
        try:
            instances = [generate_random(args.k1, args.m1, s) for s in rng_seeds]
        except ValueError as exc:
            return _error(str(exc))
    else:
        return _error("one of --exhaustive or --random is required")
    try:
        summary = run_diff(instances, cfg_base, corpus_dir, seed=seed)
    except OSError as exc:
        return _error(f"corpus directory not writable: {exc}")
    _emit(summary)
    if summary["repaired_modes_agree_with_oracle"]:
        print(
            "NOTE: zero disagreements between repaired-mode search and the "
            "brute-force oracle across this entire run.",
            file=sys.stderr,
        )
    return EXIT_FOUND


# ---------------------------------------------------------------- bench


def _fit_line(xs, ys) -> Optional[dict]:
    if len(set(xs)) < 2:
        return None
    slope, intercept = statistics.linear_regression(xs, ys)
    predicted = [intercept + slope * x for x in xs]
    residuals = [y - p for y, p in zip(ys, predicted)]
    ss_res = sum(r * r for r in residuals)
    mean_y = statistics.fmean(ys)
    ss_tot = sum((y - mean_y) ** 2 for y in ys)
    r2 = 1.0 if ss_tot == 0 else 1.0 - ss_res / ss_tot
    return {
        "slope": slope,
        "intercept": intercept,
        "r_squared": r2,
        "residuals": residuals,
    }


def run_bench(
    k1_min: int,
    k1_max: int,
    trials: int,
    seed: int,
    m1: Optional[int] = None,
    cfg: Optional[SearchConfig] = None,
) -> tuple[list[dict], dict]:
    """Benchmark repaired-mode solving on random instances; returns
    (records, fit summary).  No asymptotic verdict is asserted: both an
    exponential fit (log calls vs k1) and a power-law fit (log calls vs
    log k1) are reported with residuals, so growth shape is left to the
    reader of the report."""
    if cfg is None:
        cfg = SearchConfig()
    records = []
    for k1 in range(k1_min, k1_max + 1):
        m1_k = m1 if m1 is not None else max(2, min(k1, 8))
        for trial in range(trials):
            trial_seed = seed + 1_000_003 * k1 + trial
            psi = generate_random(k1, m1_k, trial_seed)
            start = time.perf_counter()
            result = solve(psi, cfg)
            wall = time.perf_counter() - start
            records.append(
                {
                    "k1": k1,
                    "k2": 3 * m1_k,
                    "m1": m1_k,
                    "trial": trial,
                    "seed": trial_seed,
                    "found": result.found,
                    "calls": result.stats.calls,
                    "max_depth": result.stats.max_depth,
                    "cells_evaluated": result.stats.cells_evaluated,
                    "budget_exhausted": result.stats.budget_exhausted,
                    "wall_time_s": wall,
                    "mode": cfg.mode,
                    "r_decode": cfg.r_decode,
                }
            )
    summary: dict = {
        "schema_version": SCHEMA_VERSION,
        "command": "bench",
        "records": len(records),
        "budget_exhausted_runs": sum(1 for r in records if r["budget_exhausted"]),
    }
    if records:
        xs = [r["k1"] for r in records]
        log_calls = [math.log(r["calls"]) for r in records]
        summary["fit_log_calls_vs_k1"] = _fit_line(xs, log_calls)
        summary["fit_log_calls_vs_log_k1"] = _fit_line(
            [math.log(x) for x in xs], log_calls
        )
        by_k1: dict[int, list[int]] = {}
        for r in records:
            by_k1.setdefault(r["k1"], []).append(r["calls"])
        summary["median_calls_by_k1"] = {
            str(k): statistics.median(v) for k, v in sorted(by_k1.items())
        }
    else:
        summary["fit_log_calls_vs_k1"] = None
        summary["fit_log_calls_vs_log_k1"] = None
    return records, summary


BENCH_FIELDS = [
    "k1", "k2", "m1", "trial", "seed", "found", "calls", "max_depth",
    "cells_evaluated", "budget_exhausted", "wall_time_s", "mode", "r_decode",
]


def cmd_bench(args) -> int:
    try:
        records, summary = run_bench(
            args.k1_min,
            args.k1_max,
            args.trials,
            args.seed,
            m1=args.m1,
            cfg=SearchConfig(call_budget=args.call_budget, depth_budget=args.depth_budget),
        )
    except ValueError as exc:
        return _error(str(exc))
    if args.records == "-":
        writer = csv.DictWriter(sys.stdout, fieldnames=BENCH_FIELDS)
        writer.writeheader()
        writer.writerows(records)
        _emit(summary, out=sys.stderr)
    else:
        with open(args.records, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=BENCH_FIELDS)
            writer.writeheader()
            writer.writerows(records)
        _emit(summary)
    return EXIT_FOUND


# ---------------------------------------------------------------- trace


def cmd_trace(args) -> int:
    try:
        psi = _load_formula(args.path)
    except (OSError, ParseError, ValueError) as exc:
        return _error(str(exc))
    cfg = _config_from_args(args)
    trace: list = []
    result = solve(psi, cfg, trace=trace, engine="pure")
    stream = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    try:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(["depth", "lo_row", "lo_col", "hi_row", "hi_col", "r", "s", "branch"])
        for row in trace:
            writer.writerow(
                [row.depth, row.lo_row, row.lo_col, row.hi_row, row.hi_col,
                 "" if row.r is None else row.r,
                 "" if row.s is None else row.s,
                 row.branch]
            )
    finally:
        if stream is not sys.stdout:
            stream.close()
    if result.stats.budget_exhausted:
        return EXIT_BUDGET
    return EXIT_FOUND if result.found else EXIT_NOT_FOUND


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="one3probe",
        description="Prober for a candidate positive 1-in-3-SAT decision "
        "procedure, tested differentially against brute-force oracles.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=MODES, default="repaired")
    common.add_argument(
        "--r-decode",
        choices=["f-consistent", "paper-literal", "f_consistent", "paper_literal"],
        default="f_consistent",
    )
    common.add_argument("--call-budget", type=int, default=10_000_000)
    common.add_argument("--depth-budget", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--corpus", default=None, help="counterexample corpus directory")
    common.add_argument("--config", default=None, help="JSON config file")
    common.add_argument("--json", action="store_true", help="force JSON output")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", parents=[common], help="decide one formula")
    p.add_argument("path")
    p.add_argument("--check", action="store_true", help="cross-check against the oracle")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("expand", parents=[common], help="emit the expanded formula")
    p.add_argument("path")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("oracle", parents=[common], help="brute-force ground truth")
    p.add_argument("path")
    p.add_argument("--allow-large", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("diff", parents=[common], help="differential run vs the oracle")
    p.add_argument("--exhaustive", type=int, default=None, metavar="K1MAX")
    p.add_argument("--clause-cap", type=int, default=4)
    p.add_argument("--random", type=int, default=None, metavar="N")
    p.add_argument("--k1", type=int, default=None)
    p.add_argument("--m1", type=int, default=None)
    p.set_defaults(func=cmd_diff)

    p = sub.add_parser("lemmas", parents=[common], help="run all claim checkers")
    p.add_argument("path")
    p.add_argument("--allow-large", action="store_true")
    p.set_defaults(func=cmd_lemmas)

    p = sub.add_parser("matrix-dump", parents=[common], help="materialize the matrix as CSV")
    p.add_argument("path")
    p.add_argument("--out", "--csv", dest="out", default="-")
    p.add_argument("--allow-large", action="store_true")
    p.set_defaults(func=cmd_matrix_dump)

    p = sub.add_parser("bench", parents=[common], help="growth measurement")
    p.add_argument("--k1-min", type=int, default=4)
    p.add_argument("--k1-max", type=int, default=12)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--m1", type=int, default=None)
    p.add_argument("--records", default="-", help="CSV output path ('-' for stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("trace", parents=[common], help="per-call search trace as CSV")
    p.add_argument("path")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_trace)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return EXIT_ERROR
    except Exception as exc:  # no command may crash on malformed input
        return _error(f"{type(exc).__name__}: {exc}")


if __name__ == "__main__":
    sys.exit(main())
