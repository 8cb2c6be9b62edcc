"""Parameter sets, potential-outcome evaluation and lattice upcasts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from netlue.core.errors import ErrorCode, NetlueError
from netlue.graphs.graph import (
    Graph,
    component_labels,
    shared_neighbor_graph,
    sorted_neighbors,
    treated_degrees,
)
from netlue.models.kinds import InterferenceLayout, ModelKind

MaskTable = tuple[dict[int, float], ...]

_MAX_MASK_NEIGHBORS = 62


def _zeros_for(layout: InterferenceLayout, n: int) -> Any:
    if layout is InterferenceLayout.NONE:
        return None
    if layout is InterferenceLayout.MASK:
        return tuple({} for _ in range(n))
    if layout in (InterferenceLayout.DEGREE, InterferenceLayout.EDGE):
        return np.zeros((n, n), dtype=np.float64)
    return np.zeros(n, dtype=np.float64)


def _normalize_block(layout: InterferenceLayout, value: Any, n: int, name: str) -> Any:
    if layout is InterferenceLayout.NONE:
        if value is not None:
            raise NetlueError(ErrorCode.INVALID_PARAMS, f"{name} given for SUTVA")
        return None
    if value is None:
        return _zeros_for(layout, n)
    if layout is InterferenceLayout.MASK:
        if len(value) != n:
            raise NetlueError(ErrorCode.INVALID_PARAMS, f"{name} needs {n} unit maps")
        table = []
        for unit_map in value:
            cleaned = {int(k): float(v) for k, v in dict(unit_map).items()}
            if cleaned.pop(0, 0.0) != 0.0:
                raise NetlueError(
                    ErrorCode.INVALID_PARAMS, f"{name} must vanish on the empty pattern"
                )
            table.append(cleaned)
        return tuple(table)
    arr = np.asarray(value, dtype=np.float64)
    if layout is InterferenceLayout.DEGREE:
        if arr.ndim != 2 or arr.shape[0] != n or arr.shape[1] > n:
            raise NetlueError(
                ErrorCode.INVALID_PARAMS, f"{name} must be n x (max degree + 1)"
            )
        if np.any(arr[:, 0] != 0.0):
            raise NetlueError(ErrorCode.INVALID_PARAMS, f"{name}(0) must be 0")
        padded = np.zeros((n, n), dtype=np.float64)
        padded[:, : arr.shape[1]] = arr
        return padded
    if layout is InterferenceLayout.EDGE:
        if arr.shape != (n, n):
            raise NetlueError(ErrorCode.INVALID_PARAMS, f"{name} must be n x n")
        return arr.copy()
    if arr.shape != (n,):
        raise NetlueError(ErrorCode.INVALID_PARAMS, f"{name} must have length {n}")
    return arr.copy()


@dataclass(frozen=True, eq=False)
class ParamSet:
    """Parameters of one potential-outcome model.

    `gamma` and `delta` follow the kind's layout: per-unit bitmask maps (MASK),
    n x n tables indexed [unit, degree] (DEGREE), n x n tables indexed
    [sender, receiver] (EDGE), per-sender vectors (SENDER) or per-unit slopes
    on the treated degree (SLOPE). `delta` exists only for kinds without
    additive main effects.
    """

    kind: ModelKind
    alpha: np.ndarray
    beta: np.ndarray
    gamma: Any = None
    delta: Any = None

    def __post_init__(self) -> None:
        alpha = np.asarray(self.alpha, dtype=np.float64).reshape(-1)
        beta = np.asarray(self.beta, dtype=np.float64).reshape(-1)
        if alpha.shape != beta.shape or alpha.size == 0:
            raise NetlueError(ErrorCode.INVALID_PARAMS, "alpha and beta must align")
        n = alpha.size
        kind = ModelKind(self.kind)
        gamma = _normalize_block(kind.layout, self.gamma, n, "gamma")
        if kind.has_delta:
            delta = _normalize_block(kind.layout, self.delta, n, "delta")
        elif self.delta is not None:
            raise NetlueError(
                ErrorCode.INVALID_PARAMS, f"{kind} has additive main effects, no delta"
            )
        else:
            delta = None
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "delta", delta)

    @property
    def n(self) -> int:
        return int(self.alpha.size)


def check_params(params: ParamSet, g: Graph) -> None:
    """Raise when params are not dimensioned for g or break component constancy."""
    if params.n != g.n:
        raise NetlueError(
            ErrorCode.INVALID_PARAMS, f"params have n={params.n}, graph has n={g.n}"
        )
    kind = params.kind
    if kind.layout is InterferenceLayout.MASK:
        for i in range(g.n):
            limit = 1 << sorted_neighbors(g, i).size
            for table in (params.gamma, params.delta or ()):
                if table and any(mask >= limit for mask in table[i]):
                    raise NetlueError(
                        ErrorCode.INVALID_PARAMS, f"pattern out of range for unit {i}"
                    )
    if kind.layout is InterferenceLayout.SLOPE and kind.symmetric_sending:
        labels = component_labels(shared_neighbor_graph(g))
        for block in (params.gamma, params.delta):
            if block is None:
                continue
            for label in np.unique(labels):
                values = block[labels == label]
                if np.ptp(values) > 0.0:
                    raise NetlueError(
                        ErrorCode.INVALID_PARAMS,
                        "slopes must be constant on shared-neighbor components",
                    )


def _pattern_codes(g: Graph, allocations: np.ndarray, i: int) -> np.ndarray:
    nbrs = sorted_neighbors(g, i)
    if nbrs.size > _MAX_MASK_NEIGHBORS:
        raise NetlueError(
            ErrorCode.INVALID_PARAMS, f"unit {i} has too many neighbors for bitmasks"
        )
    bits = np.left_shift(np.int64(1), np.arange(nbrs.size, dtype=np.int64))
    return allocations[:, nbrs].astype(np.int64) @ bits


def _lookup(table: dict[int, float], codes: np.ndarray) -> np.ndarray:
    values = np.zeros(codes.size, dtype=np.float64)
    if not table:
        return values
    unique, inverse = np.unique(codes, return_inverse=True)
    mapped = np.array([table.get(int(code), 0.0) for code in unique])
    return mapped[inverse.reshape(-1)]


def potential_outcomes(params: ParamSet, g: Graph, allocations: np.ndarray) -> np.ndarray:
    """Outcome matrix Y[z, i] for every row z of an allocation matrix."""
    if params.n != g.n:
        raise NetlueError(
            ErrorCode.INVALID_PARAMS, f"params have n={params.n}, graph has n={g.n}"
        )
    z = np.atleast_2d(np.asarray(allocations)).astype(np.float64)
    degrees = treated_degrees(g, z.astype(np.int64))
    adj = g.adj.astype(np.float64)
    outcomes = params.alpha[None, :] + params.beta[None, :] * z
    layout = params.kind.layout

    if layout is InterferenceLayout.NONE:
        return outcomes
    if layout is InterferenceLayout.DEGREE:
        units = np.arange(g.n)[None, :]
        outcomes = outcomes + params.gamma[units, degrees]
        if params.delta is not None:
            outcomes = outcomes + z * params.delta[units, degrees]
        return outcomes
    if layout is InterferenceLayout.MASK:
        zi = z.astype(np.int64)
        for i in range(g.n):
            codes = _pattern_codes(g, zi, i)
            outcomes[:, i] += _lookup(params.gamma[i], codes)
            if params.delta is not None:
                outcomes[:, i] += z[:, i] * _lookup(params.delta[i], codes)
        return outcomes
    if layout is InterferenceLayout.EDGE:
        outcomes = outcomes + z @ (params.gamma * adj)
        if params.delta is not None:
            outcomes = outcomes + z * (z @ (params.delta * adj))
        return outcomes
    if layout is InterferenceLayout.SENDER:
        outcomes = outcomes + z @ (params.gamma[:, None] * adj)
        if params.delta is not None:
            outcomes = outcomes + z * (z @ (params.delta[:, None] * adj))
        return outcomes
    outcomes = outcomes + params.gamma[None, :] * degrees
    if params.delta is not None:
        outcomes = outcomes + z * params.delta[None, :] * degrees
    return outcomes


def evaluate(
    kind: ModelKind,
    params: ParamSet,
    g: Graph,
    z: Sequence[int] | np.ndarray,
    i: int,
) -> float:
    """Potential outcome Y_i(z) under the given parameterization."""
    if ModelKind(kind) is not params.kind:
        raise NetlueError(
            ErrorCode.INVALID_PARAMS, f"params are {params.kind}, requested {kind}"
        )
    row = np.asarray(z)
    if row.shape != (g.n,):
        raise NetlueError(
            ErrorCode.INVALID_ALLOCATION, f"allocation length {row.size} != n={g.n}"
        )
    if not 0 <= i < g.n:
        raise NetlueError(ErrorCode.INVALID_ALLOCATION, f"unit {i} out of range")
    return float(potential_outcomes(params, g, row[None, :])[0, i])


def estimand_beta_bar(params: ParamSet) -> float:
    """Average direct treatment effect."""
    return float(params.beta.mean())


def _indicator_rows(n: int, on: Sequence[Sequence[int]]) -> np.ndarray:
    rows = np.zeros((len(on), n), dtype=np.uint8)
    for r, units in enumerate(on):
        rows[r, list(units)] = 1
    return rows


def upcast(params: ParamSet, target: ModelKind, g: Graph) -> ParamSet:
    """Re-express params in a larger model of the lattice.

    Target parameters are read off the source model's outcomes on allocations
    that treat a single unit, a neighbor, or both.
    """
    target = ModelKind(target)
    if not params.kind.is_submodel_of(target):
        raise NetlueError(
            ErrorCode.INVALID_PARAMS, f"{params.kind} is not a submodel of {target}"
        )
    if params.kind is target:
        return params
    check_params(params, g)
    n = g.n
    alpha = potential_outcomes(params, g, np.zeros((1, n), dtype=np.uint8))[0]
    own = potential_outcomes(params, g, np.eye(n, dtype=np.uint8))
    beta = np.diag(own) - alpha
    layout = target.layout
    gamma = _zeros_for(layout, n)
    delta = _zeros_for(layout, n) if target.has_delta else None

    def probe(i: int, sets: list[list[int]]) -> tuple[np.ndarray, np.ndarray]:
        rows = _indicator_rows(n, sets)
        without_i = potential_outcomes(params, g, rows)[:, i] - alpha[i]
        rows[:, i] = 1
        with_i = potential_outcomes(params, g, rows)[:, i] - alpha[i] - beta[i]
        return without_i, with_i - without_i

    for i in range(n):
        nbrs = sorted_neighbors(g, i).tolist()
        if not nbrs:
            continue
        if layout is InterferenceLayout.MASK:
            masks = range(1, 1 << len(nbrs))
            sets = [[nbrs[k] for k in range(len(nbrs)) if mask >> k & 1] for mask in masks]
            g_vals, d_vals = probe(i, sets)
            gamma[i].update({m: float(v) for m, v in zip(masks, g_vals) if v != 0.0})
            if delta is not None:
                delta[i].update({m: float(v) for m, v in zip(masks, d_vals) if v != 0.0})
        elif layout is InterferenceLayout.DEGREE:
            g_vals, d_vals = probe(i, [nbrs[:d] for d in range(1, len(nbrs) + 1)])
            gamma[i, 1 : len(nbrs) + 1] = g_vals
            if delta is not None:
                delta[i, 1 : len(nbrs) + 1] = d_vals
        elif layout is InterferenceLayout.EDGE:
            g_vals, d_vals = probe(i, [[j] for j in nbrs])
            gamma[nbrs, i] = g_vals
            if delta is not None:
                delta[nbrs, i] = d_vals
        elif layout is InterferenceLayout.SLOPE:
            g_vals, d_vals = probe(i, [[nbrs[0]]])
            gamma[i] = g_vals[0]
            if delta is not None:
                delta[i] = d_vals[0]

    if layout is InterferenceLayout.SENDER:
        for j in range(n):
            receivers = np.flatnonzero(g.adj[j])
            if receivers.size == 0:
                continue
            i = int(receivers[0])
            g_vals, d_vals = probe(i, [[j]])
            gamma[j] = g_vals[0]
            if delta is not None:
                delta[j] = d_vals[0]

    return ParamSet(kind=target, alpha=alpha, beta=beta, gamma=gamma, delta=delta)
