"""Prior covariance specifications over outcome-model parameters.

Parameters are grouped into families indexed as
[alpha, beta, Gamma(0), ..., Gamma(n-1), Delta(0), ..., Delta(n-1)];
Gamma(0) and Delta(0) are identically zero and only keep the indexing flat.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from netlue._compat import StrEnum
from typing import Sequence, Union

import numpy as np

from netlue.core.errors import ErrorCode, NetlueError

PSD_TOLERANCE = 1e-10
DEFAULT_JITTER = 1e-4

ALPHA = 0
BETA = 1


def family_count(n: int) -> int:
    return 2 * n + 2


def gamma_index(d: int | np.ndarray) -> int | np.ndarray:
    return 2 + d


def delta_index(n: int, d: int | np.ndarray) -> int | np.ndarray:
    return 2 + n + d


class PriorKind(StrEnum):
    SANIA_UNCORRELATED = "sania_uncorrelated"
    SANIA_CONSTANT = "sania_constant"
    SANASIA_INDEPENDENT = "sanasia_independent"
    SUTVA_UNCORRELATED = "sutva_uncorrelated"
    SUTVA_CONSTANT = "sutva_constant"
    CUSTOM = "custom"


def _check_psd(matrix: np.ndarray, what: str) -> None:
    if not np.allclose(matrix, matrix.T, atol=1e-12):
        raise NetlueError(ErrorCode.INVALID_PRIOR, f"{what} is not symmetric")
    if matrix.size and np.linalg.eigvalsh(matrix).min() < -PSD_TOLERANCE * max(
        1.0, float(np.abs(np.trace(matrix)))
    ):
        raise NetlueError(ErrorCode.INVALID_PRIOR, f"{what} is not positive semidefinite")


def _check_zero_degree_families(block: np.ndarray, n: int, what: str) -> None:
    for idx in (gamma_index(0), delta_index(n, 0)):
        if np.any(block[..., idx, :] != 0.0) or np.any(block[..., :, idx] != 0.0):
            raise NetlueError(
                ErrorCode.INVALID_PRIOR, f"{what} gives variance to a zero-degree effect"
            )


def _check_no_interference(block: np.ndarray, n: int, what: str) -> None:
    if np.any(block[..., 2:, :] != 0.0) or np.any(block[..., :, 2:] != 0.0):
        raise NetlueError(
            ErrorCode.INVALID_PRIOR, f"{what} is a no-interference prior with Gamma terms"
        )


@dataclass(frozen=True, eq=False)
class UncorrelatedPrior:
    """Parameters independent across units; unit i has family covariance unit_blocks[i]."""

    unit_blocks: np.ndarray
    kind: PriorKind = PriorKind.SANIA_UNCORRELATED

    def __post_init__(self) -> None:
        blocks = np.asarray(self.unit_blocks, dtype=np.float64)
        if blocks.ndim != 3 or blocks.shape[1:] != (
            family_count(blocks.shape[0]),
            family_count(blocks.shape[0]),
        ):
            raise NetlueError(ErrorCode.INVALID_PRIOR, "unit blocks must be n x F x F")
        n = blocks.shape[0]
        for i in range(n):
            _check_psd(blocks[i], f"unit {i} covariance")
        _check_zero_degree_families(blocks, n, "uncorrelated prior")
        if self.kind is PriorKind.SUTVA_UNCORRELATED:
            _check_no_interference(blocks, n, "sutva prior")
        object.__setattr__(self, "unit_blocks", blocks)
        object.__setattr__(self, "kind", PriorKind(self.kind))

    @property
    def n(self) -> int:
        return int(self.unit_blocks.shape[0])

    def scaled(self, factor: float) -> "UncorrelatedPrior":
        return replace(self, unit_blocks=self.unit_blocks * factor)


@dataclass(frozen=True, eq=False)
class ConstantPrior:
    """Parameters equal across units almost surely, plus independent alpha jitter."""

    n: int
    block: np.ndarray
    jitter: float = DEFAULT_JITTER
    kind: PriorKind = PriorKind.SANIA_CONSTANT

    def __post_init__(self) -> None:
        block = np.asarray(self.block, dtype=np.float64)
        if block.shape != (family_count(self.n), family_count(self.n)):
            raise NetlueError(ErrorCode.INVALID_PRIOR, "constant block must be F x F")
        if self.jitter < 0:
            raise NetlueError(ErrorCode.INVALID_PRIOR, "jitter must be >= 0")
        _check_psd(block, "constant prior block")
        _check_zero_degree_families(block, self.n, "constant prior")
        if self.kind is PriorKind.SUTVA_CONSTANT:
            _check_no_interference(block, self.n, "sutva prior")
        object.__setattr__(self, "block", block)
        object.__setattr__(self, "kind", PriorKind(self.kind))

    def scaled(self, factor: float) -> "ConstantPrior":
        return replace(self, block=self.block * factor, jitter=self.jitter * factor)


@dataclass(frozen=True, eq=False)
class SanasiaPrior:
    """Independent alpha_i, beta_i and one interference slope per shared-neighbor component.

    With `diagonal_surrogate` the covariance of the slope term is replaced by
    the diagonal matrix d_i * sum_{j in C(i)} d_j, which dominates the exact
    outer product.
    """

    var_alpha: np.ndarray
    var_beta: np.ndarray
    var_gamma: float
    diagonal_surrogate: bool = False
    kind: PriorKind = field(default=PriorKind.SANASIA_INDEPENDENT, init=False)

    def __post_init__(self) -> None:
        var_alpha = np.asarray(self.var_alpha, dtype=np.float64).reshape(-1)
        var_beta = np.asarray(self.var_beta, dtype=np.float64).reshape(-1)
        if var_alpha.shape != var_beta.shape:
            raise NetlueError(ErrorCode.INVALID_PRIOR, "alpha and beta variances differ in n")
        if np.any(var_alpha < 0) or np.any(var_beta < 0) or self.var_gamma < 0:
            raise NetlueError(ErrorCode.INVALID_PRIOR, "variances must be >= 0")
        object.__setattr__(self, "var_alpha", var_alpha)
        object.__setattr__(self, "var_beta", var_beta)

    @property
    def n(self) -> int:
        return int(self.var_alpha.size)

    def surrogate(self) -> "SanasiaPrior":
        return replace(self, diagonal_surrogate=True)

    def scaled(self, factor: float) -> "SanasiaPrior":
        return replace(
            self,
            var_alpha=self.var_alpha * factor,
            var_beta=self.var_beta * factor,
            var_gamma=self.var_gamma * factor,
        )


@dataclass(frozen=True, eq=False)
class CustomPrior:
    """Per-family n x n covariance blocks; families are mutually uncorrelated.

    Keys are "alpha", "beta", "gamma:<d>" and "delta:<d>" with d >= 1.
    """

    n: int
    blocks: dict[str, np.ndarray]
    kind: PriorKind = field(default=PriorKind.CUSTOM, init=False)

    def __post_init__(self) -> None:
        cleaned: dict[str, np.ndarray] = {}
        for name, raw in self.blocks.items():
            family_position(self.n, name)
            block = np.asarray(raw, dtype=np.float64)
            if block.shape != (self.n, self.n):
                raise NetlueError(ErrorCode.INVALID_PRIOR, f"block {name} must be n x n")
            _check_psd(block, f"block {name}")
            cleaned[name] = block
        object.__setattr__(self, "blocks", cleaned)

    def scaled(self, factor: float) -> "CustomPrior":
        return replace(self, blocks={k: v * factor for k, v in self.blocks.items()})


PriorCov = Union[UncorrelatedPrior, ConstantPrior, SanasiaPrior, CustomPrior]


def family_position(n: int, name: str) -> int:
    """Flat family index for a custom block name."""
    if name == "alpha":
        return ALPHA
    if name == "beta":
        return BETA
    head, _, tail = name.partition(":")
    if head in ("gamma", "delta") and tail.isdigit() and 1 <= int(tail) < n:
        d = int(tail)
        return int(gamma_index(d) if head == "gamma" else delta_index(n, d))
    raise NetlueError(ErrorCode.INVALID_PRIOR, f"unknown parameter family {name!r}")


def _per_unit(value: float | Sequence[float] | np.ndarray, n: int, what: str) -> np.ndarray:
    arr = np.asarray(value, dtype=np.float64)
    if arr.ndim == 0:
        return np.full(n, float(arr))
    if arr.shape != (n,):
        raise NetlueError(ErrorCode.INVALID_PRIOR, f"{what} must be scalar or length {n}")
    return arr


def _degree_variances(
    n: int,
    scale: float,
    explicit: Sequence[float] | np.ndarray | None,
) -> np.ndarray:
    """Per-unit Gamma(d) variances for d = 1..n-1, shape (n, n-1)."""
    if explicit is None:
        row = scale * np.arange(1, n, dtype=np.float64)
        return np.tile(row, (n, 1))
    arr = np.asarray(explicit, dtype=np.float64)
    if arr.ndim == 1:
        if arr.size > n - 1:
            raise NetlueError(ErrorCode.INVALID_PRIOR, "too many degree variances")
        row = np.zeros(n - 1)
        row[: arr.size] = arr
        return np.tile(row, (n, 1))
    if arr.shape != (n, n - 1):
        raise NetlueError(ErrorCode.INVALID_PRIOR, "degree variances must be (n, n-1)")
    return arr


def sania_uncorrelated(
    n: int,
    var_alpha: float | Sequence[float] = 1.0,
    var_beta: float | Sequence[float] = 1.0,
    cov_alpha_beta: float | Sequence[float] = 0.0,
    gamma_var_scale: float = 1.0,
    gamma_variances: Sequence[float] | np.ndarray | None = None,
    delta_variances: Sequence[float] | np.ndarray | None = None,
    kind: PriorKind = PriorKind.SANIA_UNCORRELATED,
) -> UncorrelatedPrior:
    """Independent units; Var Gamma_i(d) = gamma_var_scale * d unless given explicitly."""
    size = family_count(n)
    blocks = np.zeros((n, size, size), dtype=np.float64)
    blocks[:, ALPHA, ALPHA] = _per_unit(var_alpha, n, "var_alpha")
    blocks[:, BETA, BETA] = _per_unit(var_beta, n, "var_beta")
    cross = _per_unit(cov_alpha_beta, n, "cov_alpha_beta")
    blocks[:, ALPHA, BETA] = cross
    blocks[:, BETA, ALPHA] = cross
    if kind is not PriorKind.SUTVA_UNCORRELATED and n > 1:
        degrees = np.arange(1, n)
        gamma_vars = _degree_variances(n, gamma_var_scale, gamma_variances)
        blocks[:, gamma_index(degrees), gamma_index(degrees)] = gamma_vars
        if delta_variances is not None:
            delta_vars = _degree_variances(n, 0.0, delta_variances)
            blocks[:, delta_index(n, degrees), delta_index(n, degrees)] = delta_vars
    return UncorrelatedPrior(unit_blocks=blocks, kind=kind)


def sutva_uncorrelated(
    n: int,
    var_alpha: float | Sequence[float] = 1.0,
    var_beta: float | Sequence[float] = 1.0,
    cov_alpha_beta: float | Sequence[float] = 0.0,
) -> UncorrelatedPrior:
    return sania_uncorrelated(
        n,
        var_alpha=var_alpha,
        var_beta=var_beta,
        cov_alpha_beta=cov_alpha_beta,
        kind=PriorKind.SUTVA_UNCORRELATED,
    )


def sania_constant(
    n: int,
    var_alpha: float = 1.0,
    var_beta: float = 1.0,
    cov_alpha_beta: float = 0.0,
    gamma_var_scale: float = 1.0,
    gamma_variances: Sequence[float] | np.ndarray | None = None,
    jitter: float = DEFAULT_JITTER,
    kind: PriorKind = PriorKind.SANIA_CONSTANT,
) -> ConstantPrior:
    """Shared alpha, beta and Gamma(d) across units; Gamma(d) independent across d."""
    size = family_count(n)
    block = np.zeros((size, size), dtype=np.float64)
    block[ALPHA, ALPHA] = var_alpha
    block[BETA, BETA] = var_beta
    block[ALPHA, BETA] = block[BETA, ALPHA] = cov_alpha_beta
    if kind is not PriorKind.SUTVA_CONSTANT and n > 1:
        degrees = np.arange(1, n)
        gamma_vars = _degree_variances(n, gamma_var_scale, gamma_variances)[0]
        block[gamma_index(degrees), gamma_index(degrees)] = gamma_vars
    return ConstantPrior(n=n, block=block, jitter=jitter, kind=kind)


def sutva_constant(
    n: int,
    var_alpha: float = 1.0,
    var_beta: float = 1.0,
    cov_alpha_beta: float = 0.0,
    jitter: float = DEFAULT_JITTER,
) -> ConstantPrior:
    return sania_constant(
        n,
        var_alpha=var_alpha,
        var_beta=var_beta,
        cov_alpha_beta=cov_alpha_beta,
        jitter=jitter,
        kind=PriorKind.SUTVA_CONSTANT,
    )


def sanasia_independent(
    n: int,
    var_alpha: float | Sequence[float] = 1.0,
    var_beta: float | Sequence[float] = 1.0,
    var_gamma: float | None = None,
    diagonal_surrogate: bool = False,
) -> SanasiaPrior:
    """Independent alpha_i, beta_i and gamma; Var gamma defaults to 1/n."""
    return SanasiaPrior(
        var_alpha=_per_unit(var_alpha, n, "var_alpha"),
        var_beta=_per_unit(var_beta, n, "var_beta"),
        var_gamma=1.0 / n if var_gamma is None else float(var_gamma),
        diagonal_surrogate=diagonal_surrogate,
    )


def custom_prior(n: int, blocks: dict[str, np.ndarray]) -> CustomPrior:
    return CustomPrior(n=n, blocks=dict(blocks))


def beta_total(prior: PriorCov) -> float:
    """Sum of all entries of Cov(beta)."""
    if isinstance(prior, UncorrelatedPrior):
        return float(prior.unit_blocks[:, BETA, BETA].sum())
    if isinstance(prior, ConstantPrior):
        return float(prior.n**2 * prior.block[BETA, BETA])
    if isinstance(prior, SanasiaPrior):
        return float(prior.var_beta.sum())
    block = prior.blocks.get("beta")
    return float(block.sum()) if block is not None else 0.0


def scaled(prior: PriorCov, factor: float) -> PriorCov:
    if factor <= 0:
        raise NetlueError(ErrorCode.INVALID_PRIOR, "scale factor must be positive")
    return prior.scaled(factor)
