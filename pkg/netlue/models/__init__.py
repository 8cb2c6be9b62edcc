from netlue.models.kinds import Assumption, InterferenceLayout, ModelKind
from netlue.models.params import (
    ParamSet,
    check_params,
    estimand_beta_bar,
    evaluate,
    potential_outcomes,
    upcast,
)
from netlue.models.sampling import SamplingSpec, sample_params

__all__ = [
    "Assumption",
    "InterferenceLayout",
    "ModelKind",
    "ParamSet",
    "SamplingSpec",
    "check_params",
    "estimand_beta_bar",
    "evaluate",
    "potential_outcomes",
    "sample_params",
    "upcast",
]
