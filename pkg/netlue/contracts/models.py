"""Pydantic models for the JSON documents read by the command line."""

from __future__ import annotations

from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from netlue.core.errors import ErrorCode, NetlueError
from netlue.evaluation.suite import EstimatorName
from netlue.models.kinds import InterferenceLayout, ModelKind
from netlue.models.params import ParamSet
from netlue.priors.prior import (
    DEFAULT_JITTER,
    PriorCov,
    PriorKind,
    custom_prior,
    sania_constant,
    sania_uncorrelated,
    sanasia_independent,
    sutva_constant,
    sutva_uncorrelated,
)

ScenarioName = Literal["vary_n_density", "vary_effects", "vary_degree_power"]
Density = Literal["dense", "sparse"]


class ErrorPayload(BaseModel):
    """Stable error envelope printed on failure."""

    error_code: str = Field(description="Machine-readable error code")
    message: str = Field(description="Human-readable error message")


class PriorSpec(BaseModel):
    """Covariance specification; unused keys for the chosen kind are ignored."""

    model_config = ConfigDict(extra="forbid")

    kind: PriorKind
    var_alpha: float | list[float] = Field(default=1.0, description="Var alpha_i")
    var_beta: float | list[float] = Field(default=1.0, description="Var beta_i")
    cov_alpha_beta: float = 0.0
    gamma_var_scale: float = Field(
        default=1.0, description="Var Gamma(d) = scale * d unless listed"
    )
    gamma_variances: list[float] | None = Field(
        default=None, description="Var Gamma(d) for d = 1, 2, ..."
    )
    delta_variances: list[float] | None = None
    var_gamma: float | None = Field(
        default=None, ge=0.0, description="Slope variance, defaults to 1/n"
    )
    diagonal_surrogate: bool = False
    jitter: float = Field(default=DEFAULT_JITTER, ge=0.0)
    blocks: dict[str, list[list[float]]] | None = None

    @model_validator(mode="after")
    def _custom_needs_blocks(self) -> "PriorSpec":
        if self.kind is PriorKind.CUSTOM and not self.blocks:
            raise ValueError("custom prior requires blocks")
        return self

    def build(self, n: int) -> PriorCov:
        if self.kind is PriorKind.SANIA_UNCORRELATED:
            return sania_uncorrelated(
                n,
                var_alpha=self.var_alpha,
                var_beta=self.var_beta,
                cov_alpha_beta=self.cov_alpha_beta,
                gamma_var_scale=self.gamma_var_scale,
                gamma_variances=self.gamma_variances,
                delta_variances=self.delta_variances,
            )
        if self.kind is PriorKind.SUTVA_UNCORRELATED:
            return sutva_uncorrelated(
                n,
                var_alpha=self.var_alpha,
                var_beta=self.var_beta,
                cov_alpha_beta=self.cov_alpha_beta,
            )
        if self.kind is PriorKind.SANIA_CONSTANT:
            return sania_constant(
                n,
                var_alpha=_scalar(self.var_alpha),
                var_beta=_scalar(self.var_beta),
                cov_alpha_beta=self.cov_alpha_beta,
                gamma_var_scale=self.gamma_var_scale,
                gamma_variances=self.gamma_variances,
                jitter=self.jitter,
            )
        if self.kind is PriorKind.SUTVA_CONSTANT:
            return sutva_constant(
                n,
                var_alpha=_scalar(self.var_alpha),
                var_beta=_scalar(self.var_beta),
                cov_alpha_beta=self.cov_alpha_beta,
                jitter=self.jitter,
            )
        if self.kind is PriorKind.SANASIA_INDEPENDENT:
            return sanasia_independent(
                n,
                var_alpha=self.var_alpha,
                var_beta=self.var_beta,
                var_gamma=self.var_gamma,
                diagonal_surrogate=self.diagonal_surrogate,
            )
        return custom_prior(
            n, {name: np.asarray(block) for name, block in (self.blocks or {}).items()}
        )


def _scalar(value: float | list[float]) -> float:
    if isinstance(value, list):
        raise NetlueError(
            ErrorCode.INVALID_PRIOR, "constant priors take scalar variances"
        )
    return value


class ParamFile(BaseModel):
    """Potential-outcome parameters; mask tables map bitmask strings to values."""

    model_config = ConfigDict(extra="forbid")

    kind: ModelKind
    alpha: list[float] = Field(min_length=1)
    beta: list[float] = Field(min_length=1)
    gamma: Any = None
    delta: Any = None

    def build(self) -> ParamSet:
        gamma, delta = self.gamma, self.delta
        if self.kind.layout is InterferenceLayout.MASK:
            gamma = _mask_tables(gamma)
            delta = _mask_tables(delta)
        return ParamSet(
            kind=self.kind, alpha=self.alpha, beta=self.beta, gamma=gamma, delta=delta
        )


def _mask_tables(raw: Any) -> Any:
    if raw is None:
        return None
    return [{int(mask): float(value) for mask, value in table.items()} for table in raw]


_EFFECT_GRID = [round(0.2 * step, 10) for step in range(10)]


class SweepConfig(BaseModel):
    """One simulation scenario with its grid and replicate settings."""

    model_config = ConfigDict(extra="forbid")

    scenario: ScenarioName
    n_values: list[int] = Field(default=[8, 10, 12], min_length=1)
    densities: list[Density] = Field(default=["dense", "sparse"], min_length=1)
    n: int = Field(default=12, ge=2, description="Units for the fixed-n scenarios")
    beta_means: list[float] = Field(default=[0.0, 2.0, 4.0], min_length=1)
    gamma_means: list[float] = Field(default=_EFFECT_GRID, min_length=1)
    rho_values: list[float] = Field(default=[0.0, 0.5, 1.0, 1.5, 2.0], min_length=1)
    beta_mean: float = Field(default=2.0, description="DTE mean outside vary_effects")
    gamma_mean: float = Field(default=1.0, description="IE mean outside vary_effects")
    replicates: int = Field(default=100, ge=1)
    seed: int = Field(default=0, ge=0)
    param_seed: int | None = Field(
        default=None, ge=0, description="Shared parameter seed, defaults to seed"
    )
    estimators: list[EstimatorName] = Field(
        default_factory=lambda: list(EstimatorName), min_length=1
    )
    support_cap: int = Field(default=4096, ge=2)
    max_resamples: int = Field(default=5, ge=0)

    @model_validator(mode="after")
    def _check_grid(self) -> "SweepConfig":
        if any(n < 2 for n in self.n_values):
            raise ValueError("n_values must be >= 2")
        if any(rho < 0 for rho in self.rho_values):
            raise ValueError("rho_values must be >= 0")
        return self

    @property
    def parameter_seed(self) -> int:
        return self.seed if self.param_seed is None else self.param_seed
