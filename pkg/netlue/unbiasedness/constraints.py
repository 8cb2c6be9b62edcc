"""Linear unbiasedness constraints on estimator weights."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from netlue._compat import StrEnum

import numpy as np
import scipy.sparse as sp

from netlue.core.errors import ErrorCode, NetlueError
from netlue.designs.design import Design
from netlue.estimators.weights import WeightScheme
from netlue.graphs.graph import (
    Graph,
    connected_components,
    shared_neighbor_graph,
    sorted_neighbors,
    treated_degrees,
)
from netlue.models.kinds import ModelKind

LOGGER = logging.getLogger(__name__)

SUPPORTED_KINDS = frozenset(
    {ModelKind.SUTVA, ModelKind.NIA, ModelKind.SNIA, ModelKind.SANIA, ModelKind.SANASIA}
)


class ConstraintFamily(StrEnum):
    """Which parameter's coefficient a row annihilates or pins."""

    TREATED = "treated"
    BASELINE = "baseline"
    PATTERN = "pattern"
    PATTERN_TREATED = "pattern_treated"
    DEGREE = "degree"
    DEGREE_TREATED = "degree_treated"
    COMPONENT = "component"


@dataclass(frozen=True)
class ConstraintLabel:
    family: ConstraintFamily
    unit: int | None
    key: int | None = None

    def __str__(self) -> str:
        parts = [str(self.family)]
        if self.unit is not None:
            parts.append(f"unit={self.unit}")
        if self.key is not None:
            parts.append(f"key={self.key}")
        return " ".join(parts)


@dataclass(frozen=True, eq=False)
class ConstraintSystem:
    """Rows over flattened weights w[z, i] -> column z * n + i.

    `coefficients` omit the design probabilities; `matrix` includes them, so
    unbiasedness reads matrix @ w == rhs.
    """

    kind: ModelKind
    design: Design
    coefficients: sp.csr_matrix
    rhs: np.ndarray
    labels: tuple[ConstraintLabel, ...]

    @property
    def n(self) -> int:
        return self.design.n

    @property
    def row_count(self) -> int:
        return int(self.coefficients.shape[0])

    @property
    def matrix(self) -> sp.csr_matrix:
        column_mass = np.repeat(self.design.pmf, self.design.n)
        return sp.csr_matrix(self.coefficients @ sp.diags(column_mass))

    def rows_for(self, family: ConstraintFamily) -> list[int]:
        return [r for r, label in enumerate(self.labels) if label.family == family]


class _RowBuilder:
    def __init__(self, m: int, n: int) -> None:
        self.m = m
        self.n = n
        self.row_ids: list[np.ndarray] = []
        self.col_ids: list[np.ndarray] = []
        self.values: list[np.ndarray] = []
        self.rhs: list[float] = []
        self.labels: list[ConstraintLabel] = []

    def add_unit_row(
        self, label: ConstraintLabel, unit: int, values: np.ndarray, rhs: float = 0.0
    ) -> None:
        cols = np.arange(self.m, dtype=np.int64) * self.n + unit
        self._add(label, cols, values.astype(np.float64), rhs)

    def add_block_row(
        self, label: ConstraintLabel, units: np.ndarray, values: np.ndarray
    ) -> None:
        cols = (np.arange(self.m, dtype=np.int64)[:, None] * self.n + units[None, :])
        self._add(label, cols.ravel(), values.astype(np.float64).ravel(), 0.0)

    def _add(
        self, label: ConstraintLabel, cols: np.ndarray, values: np.ndarray, rhs: float
    ) -> None:
        keep = values != 0.0
        if not keep.any() and rhs == 0.0:
            return
        row = len(self.rhs)
        self.row_ids.append(np.full(int(keep.sum()), row, dtype=np.int64))
        self.col_ids.append(cols[keep])
        self.values.append(values[keep])
        self.rhs.append(rhs)
        self.labels.append(label)

    def build(self, kind: ModelKind, design: Design) -> ConstraintSystem:
        shape = (len(self.rhs), self.m * self.n)
        if self.values:
            coefficients = sp.csr_matrix(
                (
                    np.concatenate(self.values),
                    (np.concatenate(self.row_ids), np.concatenate(self.col_ids)),
                ),
                shape=shape,
            )
        else:
            coefficients = sp.csr_matrix(shape)
        return ConstraintSystem(
            kind=kind,
            design=design,
            coefficients=coefficients,
            rhs=np.asarray(self.rhs, dtype=np.float64),
            labels=tuple(self.labels),
        )


def _pattern_rows(support: np.ndarray, nbrs: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Pattern index per allocation and the bitmask of each distinct pattern."""
    patterns, inverse = np.unique(support[:, nbrs], axis=0, return_inverse=True)
    bits = [1 << k for k in range(nbrs.size)]
    masks = [int(sum(b for b, on in zip(bits, row) if on)) for row in patterns.tolist()]
    return inverse.reshape(-1), masks


def build_constraints(kind: ModelKind, g: Graph, d: Design) -> ConstraintSystem:
    """Unbiasedness constraints for the average direct effect under `kind`.

    Rows are enumerated only over neighbor patterns, degrees and components
    that occur in the support; rows with no coefficients and zero rhs are
    dropped.
    """
    kind = ModelKind(kind)
    if kind not in SUPPORTED_KINDS:
        raise NetlueError(
            ErrorCode.UNSUPPORTED_KIND, f"no constraint builder for {kind}"
        )
    if g.n != d.n:
        raise NetlueError(ErrorCode.INVALID_DESIGN, "design and graph differ in n")

    n, m = d.n, d.size
    support = d.support.astype(np.int64)
    degrees = treated_degrees(g, support)
    builder = _RowBuilder(m, n)

    for i in range(n):
        treated = support[:, i]
        builder.add_unit_row(
            ConstraintLabel(ConstraintFamily.TREATED, i), i, treated, rhs=1.0 / n
        )
        builder.add_unit_row(
            ConstraintLabel(ConstraintFamily.BASELINE, i), i, np.ones(m)
        )
        if kind is ModelKind.NIA:
            nbrs = sorted_neighbors(g, i)
            if nbrs.size == 0:
                continue
            pattern_of, masks = _pattern_rows(support, nbrs)
            for idx, mask in enumerate(masks):
                if mask == 0:
                    continue
                hit = (pattern_of == idx).astype(np.float64)
                builder.add_unit_row(
                    ConstraintLabel(ConstraintFamily.PATTERN, i, mask), i, hit
                )
                builder.add_unit_row(
                    ConstraintLabel(ConstraintFamily.PATTERN_TREATED, i, mask),
                    i,
                    hit * treated,
                )
        elif kind in (ModelKind.SNIA, ModelKind.SANIA):
            for deg in np.unique(degrees[:, i]):
                if deg == 0:
                    continue
                hit = (degrees[:, i] == deg).astype(np.float64)
                builder.add_unit_row(
                    ConstraintLabel(ConstraintFamily.DEGREE, i, int(deg)), i, hit
                )
                if kind is ModelKind.SNIA:
                    builder.add_unit_row(
                        ConstraintLabel(ConstraintFamily.DEGREE_TREATED, i, int(deg)),
                        i,
                        hit * treated,
                    )

    if kind is ModelKind.SANASIA:
        for index, members in enumerate(connected_components(shared_neighbor_graph(g))):
            units = np.array(sorted(members), dtype=np.int64)
            builder.add_block_row(
                ConstraintLabel(ConstraintFamily.COMPONENT, None, index),
                units,
                degrees[:, units],
            )

    system = builder.build(kind, d)
    LOGGER.debug(
        "Built %s constraint rows for %s", system.row_count, kind,
        extra={"support_size": m},
    )
    return system


@dataclass(frozen=True)
class UnbiasednessVerdict:
    unbiased: bool
    max_violation: float
    worst_label: ConstraintLabel | None

    def to_record(self) -> dict[str, str]:
        return {
            "unbiased": str(self.unbiased).lower(),
            "max_violation": f"{self.max_violation:.3e}",
            "worst_row": str(self.worst_label) if self.worst_label else "",
        }


def constraint_residual(ws: WeightScheme, cs: ConstraintSystem) -> np.ndarray:
    ws.require_design(cs.design)
    return cs.matrix @ ws.flat() - cs.rhs


def check_unbiased(
    ws: WeightScheme, cs: ConstraintSystem, tol: float = 1e-8
) -> UnbiasednessVerdict:
    """Verify every constraint row within an absolute tolerance."""
    residual = np.abs(constraint_residual(ws, cs))
    if residual.size == 0:
        return UnbiasednessVerdict(unbiased=True, max_violation=0.0, worst_label=None)
    worst = int(np.argmax(residual))
    max_violation = float(residual[worst])
    return UnbiasednessVerdict(
        unbiased=max_violation <= tol,
        max_violation=max_violation,
        worst_label=cs.labels[worst],
    )
