from netlue.priors.assembly import (
    assemble_sigma_stack,
    assemble_sigma_z,
    diagonal_variances,
    draw_outcomes,
    integrated_variance,
    is_diagonal,
    sample_prior_params,
    selectors,
    sigma_chunks,
)
from netlue.priors.prior import (
    ConstantPrior,
    CustomPrior,
    PriorCov,
    PriorKind,
    SanasiaPrior,
    UncorrelatedPrior,
    beta_total,
    custom_prior,
    family_count,
    sania_constant,
    sania_uncorrelated,
    sanasia_independent,
    scaled,
    sutva_constant,
    sutva_uncorrelated,
)

__all__ = [
    "ConstantPrior",
    "CustomPrior",
    "PriorCov",
    "PriorKind",
    "SanasiaPrior",
    "UncorrelatedPrior",
    "assemble_sigma_stack",
    "assemble_sigma_z",
    "beta_total",
    "custom_prior",
    "diagonal_variances",
    "draw_outcomes",
    "family_count",
    "integrated_variance",
    "is_diagonal",
    "sample_prior_params",
    "sania_constant",
    "sania_uncorrelated",
    "sanasia_independent",
    "scaled",
    "selectors",
    "sigma_chunks",
    "sutva_constant",
    "sutva_uncorrelated",
]
