from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from netlue.designs.design import Design
from netlue.estimators.weights import WeightScheme
from netlue.graphs.graph import Graph
from netlue.models.kinds import ModelKind
from netlue.models.params import (
    ParamSet,
    check_params,
    estimand_beta_bar,
    potential_outcomes,
    upcast,
)


@dataclass(frozen=True)
class EvalReport:
    """Design-based moments of an estimator for fixed potential outcomes."""

    mean: float
    bias: float
    variance: float
    mse: float

    def to_record(self) -> dict[str, str]:
        return {
            "mean": f"{self.mean:.10g}",
            "bias": f"{self.bias:.10g}",
            "variance": f"{self.variance:.10g}",
            "mse": f"{self.mse:.10g}",
        }


def exact_moments(
    ws: WeightScheme, d: Design, kind: ModelKind, params: ParamSet, g: Graph
) -> EvalReport:
    """Exact mean, bias, variance and MSE over the design support.

    Parameters of a narrower kind are upcast to `kind` first.
    """
    ws.require_design(d)
    check_params(params, g)
    if params.kind != ModelKind(kind):
        params = upcast(params, ModelKind(kind), g)
    estimates = ws.estimates(potential_outcomes(params, g, d.support))
    mean = float(d.pmf @ estimates)
    variance = float(d.pmf @ (estimates - mean) ** 2)
    bias = mean - estimand_beta_bar(params)
    return EvalReport(mean=mean, bias=bias, variance=variance, mse=bias**2 + variance)
