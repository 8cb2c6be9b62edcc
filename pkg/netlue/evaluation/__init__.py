from netlue.evaluation.moments import EvalReport, exact_moments
from netlue.evaluation.suite import EstimatorName, EstimatorSuite, six_estimators
from netlue.evaluation.sweep import (
    GridPoint,
    grid_points,
    iter_sweep,
    run_replicate,
    run_sweep,
    write_sweep_csv,
)

__all__ = [
    "EstimatorName",
    "EstimatorSuite",
    "EvalReport",
    "GridPoint",
    "exact_moments",
    "grid_points",
    "iter_sweep",
    "run_replicate",
    "run_sweep",
    "six_estimators",
    "write_sweep_csv",
]
