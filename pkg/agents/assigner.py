from mcp.server.fastmcp import FastMCP

from revkit import data, report
from revkit.config import NegativeHandling
from revkit.errors import RevkitError
from revkit.metrics import full_report, summarize_runs
from revkit.rrr import reviewer_round_robin, usw
from revkit.search import GrrrConfig, greedy_rrr_runs


def _instance(scores_path: str, loads, k: int, shift_negative: bool):
    handling = NegativeHandling.SHIFT if shift_negative else NegativeHandling.REJECT
    return data.read_instance(data.InstanceFiles(scores_path, loads, k), handling)


def register(mcp: FastMCP):
    @mcp.tool(name="🧭 Assigner - Greedy Assignment")
    def assign_reviewers(
        scores_path: str,
        loads: str,
        k: int,
        subsample_size: int = None,
        seed: int = 0,
        jobs: int = 1,
        runs: int = 1,
        shift_negative: bool = False,
        output_path: str = None,
        report_path: str = None
    ) -> dict:
        """
        Searches a picking order greedily and assigns reviewers with Reviewer Round Robin

        Args:
            scores_path: CSV with one row per paper and one column per reviewer
            loads: One capacity for every reviewer, or a CSV path with m capacities
            k: Reviewers per paper
            subsample_size: Candidates evaluated per greedy step (all when omitted)
            seed: Seed for candidate subsampling
            jobs: Worker processes for candidate evaluation
            runs: Repeat the search with seeds seed, seed + 1, ... and keep the best order
            shift_negative: Shift scores up instead of rejecting negative values
            output_path: Where to save the allocation JSON (optional)
            report_path: Where to save a Markdown/HTML report (optional)

        Returns:
            A dictionary with the order, the allocation (1-based ids) and its metrics,
            plus mean and std per metric when runs > 1
        """
        try:
            inst, shift = _instance(scores_path, loads, k, shift_negative)
            results = greedy_rrr_runs(inst, GrrrConfig(subsample_size, seed, jobs), runs)
            outcomes = []
            for result in results:
                alloc, _ = reviewer_round_robin(inst, result.order)
                outcomes.append((result, alloc, full_report(inst, alloc)))
            result, alloc, metrics = max(outcomes, key=lambda o: (o[0].usw, -o[0].config.seed))
            summary = summarize_runs([o[2] for o in outcomes]) if runs > 1 else None

            if output_path:
                data.save_allocation(inst, alloc, output_path)
            if report_path:
                text = report.markdown_report(
                    "Assignment report", {"GRRR": metrics},
                    {"seed": seed, "subsample_size": subsample_size, "shift": shift},
                    runs=summary,
                )
                report.write_report(report_path, text)

            return {
                "status": "success",
                "message": f"Assigned {sum(len(b) for b in alloc.bundles)} reviewer slots to {inst.n} papers",
                "order": result.order.to_one_based(),
                "usw": usw(inst, alloc),
                "per_step_usw": list(result.per_step_usw),
                "halted_early": alloc.halted_early,
                "allocation": alloc.to_one_based(),
                "metrics": metrics.to_json(),
                "table": report.results_table({"GRRR": metrics}),
                "allocation_file": output_path,
                "report_file": report_path,
                "runs_summary": None if summary is None else {
                    name: {"mean": mean, "std": std} for name, (mean, std) in summary.items()
                },
            }
        except (RevkitError, OSError) as e:
            return {"status": "error", "message": str(e)}

    @mcp.tool(name="🧭 Assigner - Run RRR on Order")
    def run_rrr_on_order(
        scores_path: str,
        loads: str,
        k: int,
        order: list,
        shift_negative: bool = False,
        trace_path: str = None,
        output_path: str = None
    ) -> dict:
        """
        Runs Reviewer Round Robin on a fixed paper order

        Args:
            scores_path: CSV with one row per paper and one column per reviewer
            loads: One capacity for every reviewer, or a CSV path with m capacities
            k: Reviewers per paper
            order: 1-based paper ids in picking order (may be partial)
            shift_negative: Shift scores up instead of rejecting negative values
            trace_path: Where to save the attempt trace (optional)
            output_path: Where to save the allocation JSON (optional)

        Returns:
            A dictionary with the allocation, its USW and the number of trace events
        """
        try:
            inst, _ = _instance(scores_path, loads, k, shift_negative)
            alloc, trace = reviewer_round_robin(inst, [int(p) - 1 for p in order])
            if trace_path:
                with open(trace_path, "w", encoding="utf-8") as f:
                    f.write(trace.to_text())
            if output_path:
                data.save_allocation(inst, alloc, output_path)
            return {
                "status": "success",
                "usw": usw(inst, alloc),
                "halted_early": alloc.halted_early,
                "allocation": alloc.to_one_based(),
                "trace_events": len(trace.events),
                "trace_file": trace_path,
                "allocation_file": output_path,
            }
        except (RevkitError, OSError) as e:
            return {"status": "error", "message": str(e)}
