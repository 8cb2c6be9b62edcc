from netlue.unbiasedness.constraints import (
    SUPPORTED_KINDS,
    ConstraintFamily,
    ConstraintLabel,
    ConstraintSystem,
    UnbiasednessVerdict,
    build_constraints,
    check_unbiased,
    constraint_residual,
)
from netlue.unbiasedness.existence import (
    ExistenceReport,
    exists_by_feasibility,
    exists_nia,
    exists_sania,
)

__all__ = [
    "SUPPORTED_KINDS",
    "ConstraintFamily",
    "ConstraintLabel",
    "ConstraintSystem",
    "ExistenceReport",
    "UnbiasednessVerdict",
    "build_constraints",
    "check_unbiased",
    "constraint_residual",
    "exists_by_feasibility",
    "exists_nia",
    "exists_sania",
]
