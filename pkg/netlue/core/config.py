"""Runtime configuration loaded from environment variables."""

from __future__ import annotations

import os
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class LoggingConfig:
    """Structured logging configuration."""

    level: str


@dataclass(frozen=True)
class SolverConfig:
    """Numerical tolerances and batching for the estimator solvers."""

    tol_unbiased: float
    tol_kkt: float
    singular_rtol: float
    dense_limit: int
    chunk_size: int

    def with_overrides(
        self, *, tol_unbiased: float | None = None, tol_kkt: float | None = None
    ) -> "SolverConfig":
        """Return a copy with CLI-supplied tolerances applied."""
        config = self
        if tol_unbiased is not None:
            config = replace(config, tol_unbiased=tol_unbiased)
        if tol_kkt is not None:
            config = replace(config, tol_kkt=tol_kkt)
        return config


@dataclass(frozen=True)
class HarnessConfig:
    """Simulation harness defaults."""

    jobs: int
    support_cap: int
    replicates: int
    max_resamples: int


@dataclass(frozen=True)
class AppConfig:
    """Top-level configuration."""

    logging: LoggingConfig
    solver: SolverConfig
    harness: HarnessConfig

    @staticmethod
    def from_env() -> "AppConfig":
        """Build config from process environment."""
        log_level = os.getenv("NETLUE_LOG_LEVEL", "INFO").strip() or "INFO"
        tol_unbiased = float(os.getenv("NETLUE_TOL_UNBIASED", "1e-8"))
        tol_kkt = float(os.getenv("NETLUE_TOL_KKT", "1e-6"))
        singular_rtol = float(os.getenv("NETLUE_SINGULAR_RTOL", "1e-10"))
        dense_limit = int(os.getenv("NETLUE_DENSE_LIMIT", "4000000"))
        chunk_size = int(os.getenv("NETLUE_CHUNK_SIZE", "256"))
        jobs = int(os.getenv("NETLUE_JOBS", "1"))
        support_cap = int(os.getenv("NETLUE_SUPPORT_CAP", "4096"))
        replicates = int(os.getenv("NETLUE_REPLICATES", "100"))
        max_resamples = int(os.getenv("NETLUE_MAX_RESAMPLES", "5"))

        return AppConfig(
            logging=LoggingConfig(level=log_level),
            solver=SolverConfig(
                tol_unbiased=tol_unbiased,
                tol_kkt=tol_kkt,
                singular_rtol=singular_rtol,
                dense_limit=dense_limit,
                chunk_size=max(1, chunk_size),
            ),
            harness=HarnessConfig(
                jobs=max(1, jobs),
                support_cap=max(2, support_cap),
                replicates=max(1, replicates),
                max_resamples=max(0, max_resamples),
            ),
        )


DEFAULT_SOLVER_CONFIG = SolverConfig(
    tol_unbiased=1e-8,
    tol_kkt=1e-6,
    singular_rtol=1e-10,
    dense_limit=4_000_000,
    chunk_size=256,
)
