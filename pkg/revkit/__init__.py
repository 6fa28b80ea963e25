"""revkit: EF1 reviewer assignment with Reviewer Round Robin and greedy order search."""
from .errors import *  # noqa: F401,F403
from .model import (
    Allocation,
    Ef1Report,
    Instance,
    Order,
    ValidationResult,
    Violation,
    ViolationKind,
    as_order,
    bundle_value,
    check_ef1,
    is_complete,
    new_instance,
    validate_allocation,
)
from .rrr import (
    Outcome,
    RrrTrace,
    TraceEvent,
    naive_round_robin,
    replay_trace,
    reviewer_round_robin,
    run_rrr,
    usw,
    usw_rrr,
)
from .search import (
    ApproximationReport,
    GrrrConfig,
    SearchResult,
    approximation_report,
    exhaustive_best_order,
    greedy_rrr,
    greedy_rrr_runs,
)
from .submodular import (
    EstimationConfig,
    GammaDiagnostics,
    TupleSet,
    estimate_alpha,
    estimate_gamma,
    exhaustive_alpha,
    exhaustive_gamma,
    f_value,
    is_independent,
    marginal_gain,
    set_to_order,
)
from .metrics import (
    MetricsReport,
    full_report,
    gini,
    nsw,
    percentile_block,
    summarize_runs,
    total_envy,
    usw_mean,
)
from .config import NegativeHandling, RunConfig
from .data import InstanceFiles, generate_synthetic, load_instance

__version__ = "0.1.0"
