"""Simulation sweeps: average exact MSE of each estimator over random graphs."""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import TYPE_CHECKING, Any, Iterable, Iterator

import numpy as np
import pandas as pd

from netlue.core.config import DEFAULT_SOLVER_CONFIG, SolverConfig
from netlue.designs.design import bernoulli_design
from netlue.evaluation.moments import EvalReport, exact_moments
from netlue.evaluation.suite import EstimatorName, six_estimators
from netlue.graphs.generators import GraphFamily, generate
from netlue.models.kinds import ModelKind
from netlue.models.sampling import SamplingSpec, sample_params

if TYPE_CHECKING:
    from netlue.contracts.models import SweepConfig

LOGGER = logging.getLogger(__name__)


@dataclass(frozen=True)
class GridPoint:
    """One scenario setting; points with equal graph_index share their graphs."""

    keys: dict[str, Any]
    n: int
    family: GraphFamily
    param: float
    spec: SamplingSpec
    graph_index: int = 0


@dataclass
class ReplicateOutcome:
    reports: dict[EstimatorName, EvalReport] = field(default_factory=dict)
    failures: dict[EstimatorName, str] = field(default_factory=dict)


def grid_points(cfg: SweepConfig) -> list[GridPoint]:
    """Expand the scenario grid in a fixed order."""
    return _index_graphs(_expand(cfg))


def _index_graphs(points: list[GridPoint]) -> list[GridPoint]:
    settings: dict[tuple[GraphFamily, int, float], int] = {}
    return [
        replace(
            point,
            graph_index=settings.setdefault(
                (point.family, point.n, point.param), len(settings)
            ),
        )
        for point in points
    ]


def _expand(cfg: SweepConfig) -> list[GridPoint]:
    default_spec = SamplingSpec(beta_mean=cfg.beta_mean, gamma_mean=cfg.gamma_mean)
    if cfg.scenario == "vary_n_density":
        return [
            GridPoint(
                keys={"density": density, "n": n},
                n=n,
                family=GraphFamily.ERDOS_RENYI,
                param=0.5 if density == "dense" else 1.0 / n,
                spec=default_spec,
            )
            for density in cfg.densities
            for n in cfg.n_values
        ]
    if cfg.scenario == "vary_effects":
        return [
            GridPoint(
                keys={"beta_mean": beta_mean, "gamma_mean": gamma_mean},
                n=cfg.n,
                family=GraphFamily.ERDOS_RENYI,
                param=0.5,
                spec=SamplingSpec(beta_mean=beta_mean, gamma_mean=gamma_mean),
            )
            for beta_mean in cfg.beta_means
            for gamma_mean in cfg.gamma_means
        ]
    return [
        GridPoint(
            keys={"rho": rho},
            n=cfg.n,
            family=GraphFamily.PREF_ATTACH,
            param=rho,
            spec=default_spec,
        )
        for rho in cfg.rho_values
    ]


def _attempt(
    cfg: SweepConfig,
    point: GridPoint,
    seeds: np.ndarray,
    solver: SolverConfig,
) -> ReplicateOutcome:
    g = generate(point.family, point.n, seed=int(seeds[0]), param=point.param)
    d = bernoulli_design(
        point.n, 0.5, exclude_trivial=True, cap=cfg.support_cap, seed=int(seeds[1])
    )
    params = sample_params(ModelKind.SANIA, g, point.spec, seed=cfg.parameter_seed)
    suite = six_estimators(g, d, solver, include=cfg.estimators)
    outcome = ReplicateOutcome(failures=dict(suite.failures))
    for name, ws in suite.schemes.items():
        outcome.reports[name] = exact_moments(ws, d, ModelKind.SANIA, params, g)
    return outcome


def run_replicate(
    cfg: SweepConfig,
    point: GridPoint,
    replicate: int,
    solver: SolverConfig = DEFAULT_SOLVER_CONFIG,
) -> ReplicateOutcome:
    """Evaluate one random graph, resampling it while any estimator fails."""
    outcome = ReplicateOutcome()
    for attempt in range(cfg.max_resamples + 1):
        sequence = np.random.SeedSequence(
            (cfg.seed, point.graph_index, replicate, attempt)
        )
        outcome = _attempt(cfg, point, sequence.generate_state(2), solver)
        if not outcome.failures:
            return outcome
        LOGGER.warning(
            "Resampling replicate after estimator failure",
            extra={
                "scenario": cfg.scenario,
                "grid_point": point.keys,
                "replicate": replicate,
                "attempt": attempt,
                "estimator": ",".join(sorted(outcome.failures)),
            },
        )
    return outcome


def _average(values: list[float]) -> float:
    return float(np.mean(values)) if values else float("nan")


def _summarize(
    cfg: SweepConfig, point: GridPoint, outcomes: list[ReplicateOutcome]
) -> list[dict[str, Any]]:
    rows = []
    for name in cfg.estimators:
        reports = [o.reports[name] for o in outcomes if name in o.reports]
        reasons = [o.failures[name] for o in outcomes if name in o.failures]
        row: dict[str, Any] = {"scenario": cfg.scenario, **point.keys}
        row.update(
            estimator=str(name),
            replicates_used=len(reports),
            avg_mse=_average([r.mse for r in reports]),
            avg_bias2=_average([r.bias**2 for r in reports]),
            avg_variance=_average([r.variance for r in reports]),
            seed=cfg.seed,
            missing_reason=reasons[0] if reasons else "",
        )
        if reasons:
            LOGGER.warning(
                "Estimator missing on %s replicates",
                len(reasons),
                extra={
                    "scenario": cfg.scenario,
                    "grid_point": point.keys,
                    "estimator": str(name),
                },
            )
        rows.append(row)
    return rows


def iter_sweep(
    cfg: SweepConfig,
    jobs: int = 1,
    solver: SolverConfig = DEFAULT_SOLVER_CONFIG,
) -> Iterator[list[dict[str, Any]]]:
    """Yield the summary rows of each grid point in grid order."""
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as executor:
        for point in grid_points(cfg):
            futures = [
                executor.submit(run_replicate, cfg, point, replicate, solver)
                for replicate in range(cfg.replicates)
            ]
            outcomes = [future.result() for future in futures]
            LOGGER.info(
                "Finished grid point",
                extra={"scenario": cfg.scenario, "grid_point": point.keys},
            )
            yield _summarize(cfg, point, outcomes)


def run_sweep(
    cfg: SweepConfig,
    jobs: int = 1,
    solver: SolverConfig = DEFAULT_SOLVER_CONFIG,
) -> pd.DataFrame:
    rows = [row for chunk in iter_sweep(cfg, jobs, solver) for row in chunk]
    return pd.DataFrame(rows)


def write_sweep_csv(chunks: Iterable[list[dict[str, Any]]], path: Path) -> int:
    """Append each chunk of rows as it arrives; returns the number of rows written."""
    path.parent.mkdir(parents=True, exist_ok=True)
    written = 0
    for chunk in chunks:
        frame = pd.DataFrame(chunk)
        first = written == 0
        frame.to_csv(path, mode="w" if first else "a", header=first, index=False)
        written += len(frame)
    return written
