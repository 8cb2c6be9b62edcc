from netlue.contracts.models import ErrorPayload, ParamFile, PriorSpec, SweepConfig

__all__ = ["ErrorPayload", "ParamFile", "PriorSpec", "SweepConfig"]
