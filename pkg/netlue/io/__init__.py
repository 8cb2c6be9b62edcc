from netlue.io.formats import (
    load_params,
    load_prior_spec,
    load_sweep_config,
    read_design,
    read_graph,
    read_weight_metadata,
    read_weights,
    write_design,
    write_graph,
    write_weights,
)

__all__ = [
    "load_params",
    "load_prior_spec",
    "load_sweep_config",
    "read_design",
    "read_graph",
    "read_weight_metadata",
    "read_weights",
    "write_design",
    "write_graph",
    "write_weights",
]
