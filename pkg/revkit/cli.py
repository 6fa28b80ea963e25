"""
Command-line entry point.

    revkit assign    --scores S.csv --loads 2 --k 3 [--subsample 10 --jobs 4 --runs 5 --out alloc.json]
    revkit rrr       --scores S.csv --loads 2 --k 3 --order order.txt [--trace trace.txt]
    revkit check-ef1 --scores S.csv --loads 2 --k 3 --alloc alloc.json
    revkit metrics   --scores S.csv --loads 2 --k 3 --alloc alloc.json
    revkit oracle    --scores S.csv --loads 2 --k 3
    revkit estimate  --scores S.csv --loads 2 --k 3 --samples 1000 --seed 0
    revkit gen       --n 10 --m 40 --k 3 --capacity 2 --scores S.csv --loads L.csv

Exit status: 0 on success, 1 when validation or computation fails, 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time

from . import data, report
from .config import NegativeHandling, RunConfig, default_jobs, default_oracle_max, default_seed, load_env
from .errors import RevkitError
from .metrics import DEFAULT_FRACTIONS, full_report, summarize_runs
from .model import Instance, check_ef1, validate_allocation
from .rrr import reviewer_round_robin, usw
from .search import GrrrConfig, exhaustive_best_order, greedy_rrr_runs
from .submodular import EstimationConfig, estimate_alpha, estimate_gamma

logger = logging.getLogger("revkit")


def _add_instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scores", required=True, help="CSV of n rows (papers) by m columns (reviewers)")
    p.add_argument("--loads", required=True,
                   help="Reviewer capacity: one integer for everyone, or a CSV with m integers")
    p.add_argument("--k", type=int, required=True, help="Reviewers per paper")
    p.add_argument("--header", action="store_true", help="Skip a header row in the scores CSV")
    p.add_argument("--shift-negative", action="store_true",
                   help="Shift all scores up by the most negative one instead of rejecting negatives")


def _capacity(text: str) -> int | tuple[int, int]:
    try:
        if "-" in text:
            low, high = text.split("-", 1)
            return int(low), int(high)
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LOW-HIGH, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="revkit",
        description="Envy-free-up-to-one reviewer assignment with Reviewer Round Robin",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("assign", help="Greedy order search, then RRR on the found order")
    _add_instance_args(p)
    p.add_argument("--seed", type=int, default=None, help="Subsampling seed (default: REVKIT_SEED or 0)")
    p.add_argument("--subsample", type=int, default=None, help="Candidates evaluated per greedy step")
    p.add_argument("--jobs", type=int, default=None, help="Worker processes (default: REVKIT_JOBS or 1)")
    p.add_argument("--runs", type=int, default=1,
                   help="Repeat the search with seeds seed..seed+runs-1 and report mean and std per metric")
    p.add_argument("--out", help="Allocation JSON")
    p.add_argument("--order-out", help="Search result JSON (order, USW per step, settings)")
    p.add_argument("--metrics-out", help="Metrics JSON")
    p.add_argument("--report", help="Markdown report, or HTML when the name ends in .html")

    p = sub.add_parser("rrr", help="Run RRR on a given order")
    _add_instance_args(p)
    p.add_argument("--order", required=True, help="Text file of 1-based paper ids")
    p.add_argument("--trace", help="Write the attempt trace (round,paper,reviewer,outcome)")
    p.add_argument("--out", help="Allocation JSON")
    p.add_argument("--metrics-out", help="Metrics JSON")

    p = sub.add_parser("check-ef1", help="List ordered pairs (i, j) that violate EF1")
    _add_instance_args(p)
    p.add_argument("--alloc", required=True, help="Allocation JSON")
    p.add_argument("--out", help="Write the result as JSON")

    p = sub.add_parser("metrics", help="Welfare and inequality metrics of an allocation")
    _add_instance_args(p)
    p.add_argument("--alloc", required=True, help="Allocation JSON")
    p.add_argument("--out", help="Metrics JSON")
    p.add_argument("--report", help="Markdown report, or HTML when the name ends in .html")

    p = sub.add_parser("oracle", help="Best order by exhaustive search (small n only)")
    _add_instance_args(p)
    p.add_argument("--max-papers", type=int, default=None,
                   help="Refuse larger instances (default: REVKIT_ORACLE_MAX or 8)")
    p.add_argument("--out", help="Write the optimal order as text")

    p = sub.add_parser("estimate", help="Sampled alpha and gamma of the RRR set function")
    _add_instance_args(p)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--margin", type=float, default=0.01, help="Safety factor 1 + margin on the estimates")
    p.add_argument("--max-prefix", type=int, default=None, help="Cap on sampled set sizes")
    p.add_argument("--prefix-only", action="store_true",
                   help="Sample gamma on prefix-shaped sets only instead of arbitrary subsets")
    p.add_argument("--out", help="Write the estimates as JSON")

    p = sub.add_parser("gen", help="Write a seeded synthetic instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--capacity", type=_capacity, default=1, help="N, or an inclusive range LOW-HIGH")
    p.add_argument("--distribution", choices=data.DISTRIBUTIONS, default="uniform")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--scores", required=True, help="Output scores CSV")
    p.add_argument("--loads", required=True, help="Output loads CSV")
    return parser


def _load(args) -> tuple[Instance, float]:
    handling = NegativeHandling.SHIFT if args.shift_negative else NegativeHandling.REJECT
    files = data.InstanceFiles(args.scores, args.loads, args.k, header=args.header)
    return data.read_instance(files, handling)


def _seed(args) -> int:
    return default_seed() if args.seed is None else args.seed


def _write_json(payload: dict, path: str | None) -> None:
    if path:
        data.write_json(payload, path)
        logger.info("Wrote %s", path)


def _notes(shift: float, halted: bool) -> list[str]:
    notes = []
    if shift:
        notes.append(f"All scores were shifted by +{shift!r} to remove negatives.")
    if halted:
        notes.append("RRR halted early: some paper could not take any reviewer on its turn.")
    return notes


def _report_settings(cfg: RunConfig) -> dict:
    # results do not depend on the worker count
    settings = cfg.describe()
    settings.pop("parallelism")
    return settings


def cmd_assign(args) -> int:
    inst, shift = _load(args)
    cfg = RunConfig(
        seed=_seed(args),
        subsample_size=args.subsample,
        parallelism=default_jobs() if args.jobs is None else args.jobs,
        negative_handling=NegativeHandling.SHIFT if args.shift_negative else NegativeHandling.REJECT,
        out_path=args.out,
        metrics_path=args.metrics_out,
        report_path=args.report,
    )
    logger.info("Run settings: %s", json.dumps(cfg.describe()))
    results = greedy_rrr_runs(inst, GrrrConfig(cfg.subsample_size, cfg.seed, cfg.parallelism), args.runs)
    runs = []
    for result in results:
        alloc, _ = reviewer_round_robin(inst, result.order)
        runs.append((result, alloc, full_report(inst, alloc, DEFAULT_FRACTIONS)))
    # best run by USW, earliest seed on ties
    result, alloc, metrics = max(runs, key=lambda run: (run[0].usw, -run[0].config.seed))

    summary = None
    if len(runs) > 1:
        summary = summarize_runs([m for _, _, m in runs])
        for r, _, _ in runs:
            print(f"Run seed {r.config.seed}: USW {r.usw:g}")
        print(f"Best run: seed {result.config.seed}")
    print(f"Order: {','.join(str(p) for p in result.order.to_one_based())}")
    print(f"USW: {usw(inst, alloc):g}")
    if alloc.halted_early:
        print("RRR halted early")
    print(report.results_table({"GRRR": metrics}), end="")
    if summary:
        print(report.runs_table(summary), end="")

    _write_json(data.allocation_to_json(inst, alloc), cfg.out_path)
    _write_json(result.to_json(), args.order_out)
    if summary:
        _write_json({
            "runs": len(runs),
            "seeds": [r.config.seed for r, _, _ in runs],
            "summary": {name: {"mean": mean, "std": std} for name, (mean, std) in summary.items()},
            "per_run": [m.to_json() for _, _, m in runs],
        }, cfg.metrics_path)
    else:
        _write_json(metrics.to_json(), cfg.metrics_path)
    if cfg.report_path:
        run_info = {**_report_settings(cfg), "papers": inst.n, "reviewers": inst.m, "k": inst.k,
                    "order": ",".join(str(p) for p in result.order.to_one_based())}
        if summary:
            run_info = {**run_info, "runs": len(runs), "best seed": result.config.seed}
        text = report.markdown_report("Assignment report", {"GRRR": metrics}, run_info,
                                      _notes(shift, alloc.halted_early), summary)
        report.write_report(cfg.report_path, text)
    return 0


def cmd_rrr(args) -> int:
    inst, shift = _load(args)
    order = data.load_order(args.order)
    alloc, trace = reviewer_round_robin(inst, order)
    print(f"USW: {usw(inst, alloc):g}")
    if alloc.halted_early:
        print("RRR halted early")
    for paper, bundle in alloc.to_one_based().items():
        print(f"paper {paper}: {bundle}")
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as f:
            f.write(trace.to_text())
        logger.info("Wrote %d trace events to %s", len(trace.events), args.trace)
    _write_json(data.allocation_to_json(inst, alloc), args.out)
    if args.metrics_out:
        _write_json(full_report(inst, alloc).to_json(), args.metrics_out)
    return 0


def cmd_check_ef1(args) -> int:
    inst, _ = _load(args)
    alloc = data.load_allocation(args.alloc)
    result = check_ef1(inst, alloc)
    print(f"EF1 violations: {result.count}")
    for i, j in result.to_one_based():
        print(f"  paper {i} envies paper {j} beyond one reviewer")
    _write_json({"ef1_violations": result.count, "pairs": result.to_one_based()}, args.out)
    # violations are a finding, not a failure
    return 0


def cmd_metrics(args) -> int:
    inst, shift = _load(args)
    alloc = data.load_allocation(args.alloc)
    validation = validate_allocation(inst, alloc)
    if not validation.ok:
        for v in validation.violations:
            print(f"invalid allocation: {v.describe()}", file=sys.stderr)
        return 1
    metrics = full_report(inst, alloc)
    rows = {"Allocation": metrics}
    print(report.results_table(rows), end="")
    print(report.inequality_table(rows), end="")
    _write_json(metrics.to_json(), args.out)
    if args.report:
        text = report.markdown_report("Allocation metrics", rows, {"source": args.alloc},
                                      _notes(shift, alloc.halted_early))
        report.write_report(args.report, text, "Allocation metrics")
    return 0


def cmd_oracle(args) -> int:
    inst, _ = _load(args)
    bound = default_oracle_max() if args.max_papers is None else args.max_papers
    order, value = exhaustive_best_order(inst, bound)
    print(f"Optimal order: {','.join(str(p) for p in order.to_one_based())}")
    print(f"USW: {value:g}")
    if args.out:
        data.save_order(order, args.out)
    return 0


def cmd_estimate(args) -> int:
    inst, _ = _load(args)
    cfg = EstimationConfig(
        num_samples=args.samples,
        seed=_seed(args),
        max_prefix=args.max_prefix,
        margin=args.margin,
        arbitrary_subsets=not args.prefix_only,
    )
    alpha = estimate_alpha(inst, cfg)
    gamma, diag = estimate_gamma(inst, alpha, cfg)
    payload = {
        "alpha": alpha,
        "gamma": gamma,
        "samples": diag.samples,
        "skipped_zero_gain": diag.skipped_zero_gain,
        "margin": diag.margin,
        "seed": diag.seed,
    }
    print(json.dumps(payload, indent=2))
    _write_json(payload, args.out)
    return 0


def cmd_gen(args) -> int:
    inst = data.generate_synthetic(args.n, args.m, args.k, args.capacity, args.distribution, _seed(args))
    data.save_instance(inst, args.scores, args.loads)
    print(f"Wrote {inst.n}x{inst.m} instance to {args.scores} and loads to {args.loads}")
    return 0


COMMANDS = {
    "assign": cmd_assign,
    "rrr": cmd_rrr,
    "check-ef1": cmd_check_ef1,
    "metrics": cmd_metrics,
    "oracle": cmd_oracle,
    "estimate": cmd_estimate,
    "gen": cmd_gen,
}


def cli_main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 for --help
        return int(e.code or 0)

    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    load_env()

    start = time.perf_counter()
    try:
        status = COMMANDS[args.command](args)
    except RevkitError as e:
        print(f"revkit {args.command}: {e}", file=sys.stderr)
        status = 1
    except OSError as e:
        print(f"revkit {args.command}: {e}", file=sys.stderr)
        status = 1
    logger.info("%s finished in %.3fs with status %d", args.command, time.perf_counter() - start, status)
    return status


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
