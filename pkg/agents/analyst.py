from mcp.server.fastmcp import FastMCP

from revkit import data
from revkit.config import NegativeHandling, default_oracle_max
from revkit.errors import RevkitError, UnboundedAlphaError
from revkit.search import exhaustive_best_order, greedy_rrr
from revkit.submodular import EstimationConfig, estimate_alpha, estimate_gamma


def _instance(scores_path: str, loads, k: int, shift_negative: bool):
    handling = NegativeHandling.SHIFT if shift_negative else NegativeHandling.REJECT
    return data.load_instance(data.InstanceFiles(scores_path, loads, k), handling)


def register(mcp: FastMCP):
    @mcp.tool(name="📐 Analyst - Estimate Alpha and Gamma")
    def estimate_constants(
        scores_path: str,
        loads: str,
        k: int,
        samples: int = 1000,
        seed: int = 0,
        margin: float = 0.01,
        max_prefix: int = None,
        prefix_only: bool = False,
        shift_negative: bool = False
    ) -> dict:
        """
        Estimates the monotonizing exponent alpha and the submodularity ratio gamma

        Args:
            scores_path: CSV with one row per paper and one column per reviewer
            loads: One capacity for every reviewer, or a CSV path with m capacities
            k: Reviewers per paper
            samples: Number of random samples for each estimate
            seed: Sampling seed
            margin: Safety factor 1 + margin applied to both estimates
            max_prefix: Cap on sampled set sizes (optional)
            prefix_only: Sample gamma on prefix-shaped sets instead of arbitrary subsets
            shift_negative: Shift scores up instead of rejecting negative values

        Returns:
            A dictionary with alpha, gamma and the sampling diagnostics
        """
        try:
            inst = _instance(scores_path, loads, k, shift_negative)
            cfg = EstimationConfig(samples, seed, max_prefix, margin, arbitrary_subsets=not prefix_only)
            alpha = estimate_alpha(inst, cfg)
            gamma, diag = estimate_gamma(inst, alpha, cfg)
            return {"status": "success", "alpha": alpha, "gamma": gamma, **diag.to_json()}
        except UnboundedAlphaError as e:
            return {
                "status": "error",
                "message": str(e),
                "order": [p + 1 for p in e.order],
                "paper": e.paper + 1,
            }
        except (RevkitError, OSError) as e:
            return {"status": "error", "message": str(e)}

    @mcp.tool(name="📐 Analyst - Optimal Order Oracle")
    def optimal_order(
        scores_path: str,
        loads: str,
        k: int,
        max_papers: int = None,
        shift_negative: bool = False
    ) -> dict:
        """
        Finds the best picking order by trying all of them, and compares it with the greedy order

        Args:
            scores_path: CSV with one row per paper and one column per reviewer
            loads: One capacity for every reviewer, or a CSV path with m capacities
            k: Reviewers per paper
            max_papers: Refuse instances with more papers (default REVKIT_ORACLE_MAX)
            shift_negative: Shift scores up instead of rejecting negative values

        Returns:
            A dictionary with the optimal order, its USW and the greedy USW
        """
        try:
            inst = _instance(scores_path, loads, k, shift_negative)
            bound = default_oracle_max() if max_papers is None else max_papers
            order, value = exhaustive_best_order(inst, bound)
            greedy = greedy_rrr(inst)
            return {
                "status": "success",
                "order": order.to_one_based(),
                "usw": value,
                "greedy_order": greedy.order.to_one_based(),
                "greedy_usw": greedy.usw,
                "greedy_ratio": greedy.usw / value if value else None,
            }
        except (RevkitError, OSError) as e:
            return {"status": "error", "message": str(e)}

    @mcp.tool(name="🧪 Analyst - Generate Synthetic Instance")
    def generate_instance(
        n: int,
        m: int,
        k: int,
        scores_path: str,
        loads_path: str,
        capacity: int = 1,
        distribution: str = "uniform",
        seed: int = 0
    ) -> dict:
        """
        Writes a seeded random instance as scores and loads CSV files

        Args:
            n: Number of papers
            m: Number of reviewers
            k: Reviewers per paper
            scores_path: Output scores CSV
            loads_path: Output loads CSV
            capacity: Load of every reviewer
            distribution: "uniform" or "exponential"
            seed: Random seed

        Returns:
            A dictionary with the written paths
        """
        try:
            inst = data.generate_synthetic(n, m, k, capacity, distribution, seed)
            data.save_instance(inst, scores_path, loads_path)
            return {"status": "success", "scores_file": scores_path, "loads_file": loads_path,
                    "n": inst.n, "m": inst.m, "k": inst.k}
        except (RevkitError, OSError) as e:
            return {"status": "error", "message": str(e)}
