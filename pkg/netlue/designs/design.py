"""Explicit randomization designs over binary allocations."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from netlue.core.errors import ErrorCode, NetlueError
from netlue.graphs.graph import Coloring, Graph, treated_degrees

LOGGER = logging.getLogger(__name__)

PMF_TOLERANCE = 1e-12
_MAX_ENUMERATED_UNITS = 24


@dataclass(frozen=True, eq=False)
class Design:
    """Finite support of distinct allocations with positive probabilities.

    Rows are kept in canonical order: the integer value of the bitstring with
    unit 0 as the most significant bit.
    """

    support: np.ndarray
    pmf: np.ndarray

    def __post_init__(self) -> None:
        support = np.atleast_2d(np.asarray(self.support))
        pmf = np.asarray(self.pmf, dtype=np.float64).reshape(-1)
        if support.size == 0 or support.shape[0] != pmf.shape[0]:
            raise NetlueError(
                ErrorCode.INVALID_DESIGN,
                f"support rows {support.shape[0]} do not match pmf length {pmf.shape[0]}",
            )
        if not np.isin(support, (0, 1)).all():
            raise NetlueError(ErrorCode.INVALID_DESIGN, "allocations must be binary")
        if np.any(pmf <= 0) or not np.all(np.isfinite(pmf)):
            raise NetlueError(
                ErrorCode.INVALID_DESIGN, "probabilities must be strictly positive"
            )
        if abs(pmf.sum() - 1.0) > PMF_TOLERANCE:
            raise NetlueError(
                ErrorCode.INVALID_DESIGN, f"probabilities sum to {pmf.sum():.15g}"
            )
        support = support.astype(np.uint8)
        order = np.lexsort(support.T[::-1])
        support = support[order]
        pmf = pmf[order]
        if support.shape[0] > 1 and np.any(np.all(support[1:] == support[:-1], axis=1)):
            raise NetlueError(ErrorCode.INVALID_DESIGN, "duplicate allocations in support")
        support.setflags(write=False)
        pmf.setflags(write=False)
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "pmf", pmf)

    @property
    def n(self) -> int:
        return int(self.support.shape[1])

    @property
    def size(self) -> int:
        return int(self.support.shape[0])

    def index_of(self, z: Sequence[int] | np.ndarray) -> int:
        """Row index of allocation z in the support."""
        row = np.asarray(z, dtype=np.uint8)
        hits = np.flatnonzero(np.all(self.support == row, axis=1))
        if hits.size == 0:
            raise NetlueError(ErrorCode.INVALID_ALLOCATION, f"{row.tolist()} not supported")
        return int(hits[0])

    def has_trivial(self) -> bool:
        treated = self.support.sum(axis=1)
        return bool(np.any(treated == 0) or np.any(treated == self.n))


def bitstring(z: np.ndarray) -> str:
    return "".join("1" if bit else "0" for bit in np.asarray(z).tolist())


def full_cube(n: int) -> np.ndarray:
    """All 2**n allocations in canonical order."""
    if not 1 <= n <= _MAX_ENUMERATED_UNITS:
        raise NetlueError(
            ErrorCode.INVALID_DESIGN, f"cannot enumerate the cube for n={n}"
        )
    codes = np.arange(2**n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] >> shifts[None, :]) & 1).astype(np.uint8)


def _bernoulli_masses(rows: np.ndarray, q: float) -> np.ndarray:
    treated = rows.sum(axis=1).astype(np.float64)
    n = rows.shape[1]
    log_mass = treated * np.log(q) + (n - treated) * np.log1p(-q)
    mass = np.exp(log_mass - log_mass.max())
    return mass / mass.sum()


def bernoulli_design(
    n: int,
    q: float = 0.5,
    exclude_trivial: bool = True,
    cap: int = 2**13,
    seed: int = 0,
    reweight: bool = False,
) -> Design:
    """Bernoulli(q) trial, optionally without 0 and 1, capped at `cap` allocations.

    When the cube is too large the support is `cap` distinct allocations drawn
    uniformly; its pmf is uniform unless `reweight` asks for Bernoulli masses.
    """
    if not 0.0 < q < 1.0:
        raise NetlueError(ErrorCode.INVALID_DESIGN, f"q must be in (0, 1), got {q}")
    if cap < 2:
        raise NetlueError(ErrorCode.INVALID_DESIGN, f"cap must be >= 2, got {cap}")
    if n < 1:
        raise NetlueError(ErrorCode.INVALID_DESIGN, f"n must be >= 1, got {n}")
    if exclude_trivial and n < 2:
        raise NetlueError(ErrorCode.INVALID_DESIGN, "no non-trivial allocations for n=1")

    available = 2**n - (2 if exclude_trivial else 0)
    if available <= cap:
        rows = full_cube(n)
        if exclude_trivial:
            rows = rows[1:-1]
        return Design(rows, _bernoulli_masses(rows, q))

    rng = np.random.default_rng(seed)
    seen: set[bytes] = set()
    sampled: list[np.ndarray] = []
    while len(sampled) < cap:
        batch = rng.integers(0, 2, size=(cap, n), dtype=np.uint8)
        for row in batch:
            if exclude_trivial and (row.all() or not row.any()):
                continue
            key = row.tobytes()
            if key in seen:
                continue
            seen.add(key)
            sampled.append(row)
            if len(sampled) == cap:
                break
    rows = np.vstack(sampled)
    pmf = _bernoulli_masses(rows, q) if reweight else np.full(cap, 1.0 / cap)
    LOGGER.debug(
        "Subsampled Bernoulli support", extra={"support_size": cap}
    )
    return Design(rows, pmf)


def crd_design(n: int, k: int) -> Design:
    """Completely randomized design treating exactly k of n units."""
    if not 0 <= k <= n:
        raise NetlueError(ErrorCode.INVALID_DESIGN, f"k={k} out of range for n={n}")
    combos = list(itertools.combinations(range(n), k))
    rows = np.zeros((len(combos), n), dtype=np.uint8)
    for r, treated in enumerate(combos):
        rows[r, list(treated)] = 1
    return Design(rows, np.full(len(combos), 1.0 / len(combos)))


def mixture(designs: Sequence[Design], weights: Sequence[float]) -> Design:
    """Weighted mixture of designs with duplicate allocations merged."""
    if not designs or len(designs) != len(weights):
        raise NetlueError(ErrorCode.INVALID_DESIGN, "designs and weights must align")
    n = designs[0].n
    if any(d.n != n for d in designs):
        raise NetlueError(ErrorCode.INVALID_DESIGN, "mixture components differ in n")
    w = np.asarray(weights, dtype=np.float64)
    if np.any(w < 0) or abs(w.sum() - 1.0) > PMF_TOLERANCE:
        raise NetlueError(ErrorCode.INVALID_DESIGN, "mixture weights must be a pmf")

    rows = np.vstack([d.support for d, wt in zip(designs, w) if wt > 0])
    masses = np.concatenate([d.pmf * wt for d, wt in zip(designs, w) if wt > 0])
    unique_rows, inverse = np.unique(rows, axis=0, return_inverse=True)
    merged = np.bincount(inverse.reshape(-1), weights=masses)
    return Design(unique_rows, merged / merged.sum())


def coloring_design(coloring: Coloring) -> Design:
    """Uniform design over the all-control allocation and one per color class."""
    n = coloring.n
    classes = [members for members in coloring.classes if members]
    rows = np.zeros((len(classes) + 1, n), dtype=np.uint8)
    for r, members in enumerate(classes, start=1):
        rows[r, sorted(members)] = 1
    return Design(rows, np.full(rows.shape[0], 1.0 / rows.shape[0]))


def orbit_design_ring(n: int, base: Sequence[int] | np.ndarray) -> Design:
    """Uniform design over the distinct cyclic rotations of base."""
    base_row = np.asarray(base, dtype=np.uint8)
    if base_row.shape != (n,):
        raise NetlueError(
            ErrorCode.INVALID_ALLOCATION, f"base has length {base_row.size}, expected {n}"
        )
    rotations = np.unique(
        np.vstack([np.roll(base_row, shift) for shift in range(n)]), axis=0
    )
    return Design(rotations, np.full(rotations.shape[0], 1.0 / rotations.shape[0]))


def marginal_propensity(d: Design, i: int, z_val: int) -> float:
    """Pr[z_i = z_val] under the design."""
    if not 0 <= i < d.n:
        raise NetlueError(ErrorCode.INVALID_ALLOCATION, f"unit {i} out of range")
    return float(d.pmf[d.support[:, i] == z_val].sum())


def propensity_table(d: Design, g: Graph) -> np.ndarray:
    """Array P[z_val, i, deg] = Pr[z_i = z_val, d_i = deg]."""
    if g.n != d.n:
        raise NetlueError(ErrorCode.INVALID_DESIGN, "design and graph differ in n")
    degrees = treated_degrees(g, d.support)
    table = np.zeros((2, d.n, d.n), dtype=np.float64)
    units = np.broadcast_to(np.arange(d.n), degrees.shape)
    weights = np.broadcast_to(d.pmf[:, None], degrees.shape)
    np.add.at(
        table,
        (d.support.astype(np.int64).ravel(), units.ravel(), degrees.ravel()),
        weights.ravel(),
    )
    return table


def joint_propensity(d: Design, g: Graph, i: int, z_val: int, deg_val: int) -> float:
    """Pr[z_i = z_val, d_i = deg_val]; 0 when the event is unsupported."""
    if not 0 <= i < d.n:
        raise NetlueError(ErrorCode.INVALID_ALLOCATION, f"unit {i} out of range")
    degrees = treated_degrees(g, d.support)[:, i]
    mask = (d.support[:, i] == z_val) & (degrees == deg_val)
    return float(d.pmf[mask].sum())
