from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from netlue.core.errors import ErrorCode, NetlueError
from netlue.graphs.graph import (
    Graph,
    component_labels,
    shared_neighbor_graph,
    sorted_neighbors,
)
from netlue.models.kinds import InterferenceLayout, ModelKind
from netlue.models.params import ParamSet

_MAX_SAMPLED_NEIGHBORS = 16


@dataclass(frozen=True)
class SamplingSpec:
    """Independent normal draws per parameter family.

    Interference means scale with the number of treated neighbors: degree and
    pattern tables use mean `gamma_mean * d`, slope layouts use `gamma_mean`.
    Defaults match the first simulation study (beta ~ N(2, 1), Gamma(d) ~ N(d, 1)).
    """

    alpha_mean: float = 0.0
    alpha_var: float = 1.0
    beta_mean: float = 2.0
    beta_var: float = 1.0
    gamma_mean: float = 1.0
    gamma_var: float = 1.0
    delta_mean: float = 0.0
    delta_var: float = 0.0

    def __post_init__(self) -> None:
        for name in ("alpha_var", "beta_var", "gamma_var", "delta_var"):
            if getattr(self, name) < 0:
                raise NetlueError(ErrorCode.INVALID_PARAMS, f"{name} must be >= 0")


def _draw_block(
    layout: InterferenceLayout,
    g: Graph,
    kind: ModelKind,
    mean: float,
    var: float,
    rng: np.random.Generator,
) -> object:
    n = g.n
    scale = float(np.sqrt(var))
    if layout is InterferenceLayout.DEGREE:
        block = np.zeros((n, n), dtype=np.float64)
        if n > 1:
            degrees = np.arange(1, n, dtype=np.float64)
            block[:, 1:] = rng.normal(mean * degrees[None, :], scale, size=(n, n - 1))
        return block
    if layout is InterferenceLayout.MASK:
        table: list[dict[int, float]] = []
        for i in range(n):
            k = sorted_neighbors(g, i).size
            if k > _MAX_SAMPLED_NEIGHBORS:
                raise NetlueError(
                    ErrorCode.INVALID_PARAMS, f"unit {i} has too many neighbor patterns"
                )
            masks = np.arange(1, 1 << k, dtype=np.int64)
            counts = np.array([bin(int(m)).count("1") for m in masks], dtype=np.float64)
            values = rng.normal(mean * counts, scale) if masks.size else np.empty(0)
            table.append({int(m): float(v) for m, v in zip(masks, values)})
        return tuple(table)
    if layout is InterferenceLayout.EDGE:
        block = np.zeros((n, n), dtype=np.float64)
        sources, targets = np.nonzero(g.adj)
        block[sources, targets] = rng.normal(mean, scale, size=sources.size)
        return block
    if layout is InterferenceLayout.SENDER:
        return rng.normal(mean, scale, size=n)
    if kind.symmetric_sending:
        labels = component_labels(shared_neighbor_graph(g))
        per_component = rng.normal(mean, scale, size=int(labels.max()) + 1)
        return per_component[labels]
    return rng.normal(mean, scale, size=n)


def sample_params(
    kind: ModelKind, g: Graph, spec: SamplingSpec, seed: int
) -> ParamSet:
    """Draw a ParamSet of the given kind; deterministic in seed."""
    kind = ModelKind(kind)
    rng = np.random.default_rng(seed)
    alpha = rng.normal(spec.alpha_mean, np.sqrt(spec.alpha_var), size=g.n)
    beta = rng.normal(spec.beta_mean, np.sqrt(spec.beta_var), size=g.n)
    layout = kind.layout
    if layout is InterferenceLayout.NONE:
        return ParamSet(kind=kind, alpha=alpha, beta=beta)
    gamma = _draw_block(layout, g, kind, spec.gamma_mean, spec.gamma_var, rng)
    delta = (
        _draw_block(layout, g, kind, spec.delta_mean, spec.delta_var, rng)
        if kind.has_delta
        else None
    )
    return ParamSet(kind=kind, alpha=alpha, beta=beta, gamma=gamma, delta=delta)
