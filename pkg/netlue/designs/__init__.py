from netlue.designs.design import (
    Design,
    bernoulli_design,
    bitstring,
    coloring_design,
    crd_design,
    full_cube,
    joint_propensity,
    marginal_propensity,
    mixture,
    orbit_design_ring,
    propensity_table,
)

__all__ = [
    "Design",
    "bernoulli_design",
    "bitstring",
    "coloring_design",
    "crd_design",
    "full_cube",
    "joint_propensity",
    "marginal_propensity",
    "mixture",
    "orbit_design_ring",
    "propensity_table",
]
