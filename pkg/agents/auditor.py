from mcp.server.fastmcp import FastMCP

from revkit import data, report
from revkit.config import NegativeHandling
from revkit.errors import InvalidAllocationError, RevkitError
from revkit.metrics import full_report
from revkit.model import check_ef1, validate_allocation


def register(mcp: FastMCP):
    def load(scores_path, loads, k, shift_negative, allocation_path):
        handling = NegativeHandling.SHIFT if shift_negative else NegativeHandling.REJECT
        inst, _ = data.read_instance(data.InstanceFiles(scores_path, loads, k), handling)
        return inst, data.load_allocation(allocation_path)

    @mcp.tool(name="🔎 Auditor - Check EF1")
    def check_allocation_ef1(
        scores_path: str,
        loads: str,
        k: int,
        allocation_path: str,
        shift_negative: bool = False
    ) -> dict:
        """
        Validates an allocation and lists every pair of papers that violates EF1

        Args:
            scores_path: CSV with one row per paper and one column per reviewer
            loads: One capacity for every reviewer, or a CSV path with m capacities
            k: Reviewers per paper
            allocation_path: Allocation JSON as written by the Assigner
            shift_negative: Shift scores up instead of rejecting negative values

        Returns:
            A dictionary with the violation count and the (envious, envied) pairs, 1-based
        """
        try:
            inst, alloc = load(scores_path, loads, k, shift_negative, allocation_path)
            result = check_ef1(inst, alloc)
            return {
                "status": "success",
                "ef1": result.count == 0,
                "ef1_violations": result.count,
                "pairs": result.to_one_based(),
            }
        except InvalidAllocationError as e:
            return {
                "status": "error",
                "message": str(e),
                "violations": [v.describe() for v in e.violations],
            }
        except (RevkitError, OSError) as e:
            return {"status": "error", "message": str(e)}

    @mcp.tool(name="🔎 Auditor - Metrics Report")
    def allocation_metrics(
        scores_path: str,
        loads: str,
        k: int,
        allocation_path: str,
        shift_negative: bool = False,
        report_path: str = None
    ) -> dict:
        """
        Computes welfare and inequality metrics for an allocation

        Args:
            scores_path: CSV with one row per paper and one column per reviewer
            loads: One capacity for every reviewer, or a CSV path with m capacities
            k: Reviewers per paper
            allocation_path: Allocation JSON as written by the Assigner
            shift_negative: Shift scores up instead of rejecting negative values
            report_path: Where to save a Markdown/HTML report (optional)

        Returns:
            A dictionary with the metrics and both text tables
        """
        try:
            inst, alloc = load(scores_path, loads, k, shift_negative, allocation_path)
            validation = validate_allocation(inst, alloc)
            if not validation.ok:
                return {
                    "status": "error",
                    "message": "Allocation violates the instance constraints",
                    "violations": [v.describe() for v in validation.violations],
                }
            metrics = full_report(inst, alloc)
            rows = {"Allocation": metrics}
            if report_path:
                text = report.markdown_report("Allocation metrics", rows, {"source": allocation_path})
                report.write_report(report_path, text, "Allocation metrics")
            return {
                "status": "success",
                "metrics": metrics.to_json(),
                "table": report.results_table(rows),
                "inequality_table": report.inequality_table(rows),
                "report_file": report_path,
            }
        except (RevkitError, OSError) as e:
            return {"status": "error", "message": str(e)}
