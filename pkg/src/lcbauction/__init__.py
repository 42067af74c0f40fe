"""Multi-item VCG auctions driven by KDE confidence intervals."""

from .data import HistoricalDataset, IntervalMatrix
from .errors import SamplingError
from .estimation import (
    DensityEstimate,
    compute_bandwidth,
    confidence_interval,
    estimate_all_intervals,
    kde_evaluate,
    kde_supremum_bound,
    rejection_sample,
)
from .mechanism import (
    AuctionOutcome,
    EstimatedTypes,
    Provenance,
    allocate_vcg,
    classify_and_estimate,
    compute_n_star,
    compute_regret,
    run_mechanism,
    tune_d,
)
from .simulation import (
    METHOD1,
    METHOD2,
    METHOD3,
    METHODS,
    ScenarioConfig,
    SweepRecord,
    TrueWorld,
    generate_world,
    prepare_method,
    run_at_d,
    run_method,
    sweep,
)
from .theory import allocation_lower_bound, allocation_table, count_allocations_leq2
from .winnowing import WinnowResult, find_leader, is_linked, winnow, zero_neglected

__all__ = [
    "AuctionOutcome",
    "DensityEstimate",
    "EstimatedTypes",
    "HistoricalDataset",
    "IntervalMatrix",
    "METHOD1",
    "METHOD2",
    "METHOD3",
    "METHODS",
    "Provenance",
    "SamplingError",
    "ScenarioConfig",
    "SweepRecord",
    "TrueWorld",
    "WinnowResult",
    "allocate_vcg",
    "allocation_lower_bound",
    "allocation_table",
    "classify_and_estimate",
    "compute_bandwidth",
    "compute_n_star",
    "compute_regret",
    "confidence_interval",
    "count_allocations_leq2",
    "estimate_all_intervals",
    "find_leader",
    "generate_world",
    "is_linked",
    "kde_evaluate",
    "kde_supremum_bound",
    "prepare_method",
    "rejection_sample",
    "run_at_d",
    "run_mechanism",
    "run_method",
    "sweep",
    "tune_d",
    "winnow",
    "zero_neglected",
]

__version__ = "0.1.0"
