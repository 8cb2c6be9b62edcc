"""Shared error types and helpers."""

from __future__ import annotations

from netlue._compat import StrEnum


class ErrorCode(StrEnum):
    """Machine-readable error codes."""

    INVALID_GRAPH = "INVALID_GRAPH"
    INVALID_DESIGN = "INVALID_DESIGN"
    INVALID_ALLOCATION = "INVALID_ALLOCATION"
    INVALID_PARAMS = "INVALID_PARAMS"
    INVALID_PRIOR = "INVALID_PRIOR"
    INVALID_CONFIG = "INVALID_CONFIG"
    PARSE_ERROR = "PARSE_ERROR"
    UNSUPPORTED_KIND = "UNSUPPORTED_KIND"
    INFEASIBLE = "INFEASIBLE"
    ZERO_PROPENSITY = "ZERO_PROPENSITY"
    SINGULAR_COVARIANCE = "SINGULAR_COVARIANCE"
    RESIDUAL_CHECK_FAILED = "RESIDUAL_CHECK_FAILED"
    PRECONDITION_FAILED = "PRECONDITION_FAILED"


class NetlueError(Exception):
    """Exception carrying a stable error code."""

    def __init__(self, error_code: ErrorCode, message: str) -> None:
        super().__init__(f"{error_code}: {message}")
        self.error_code = error_code
        self.message = message


def to_error_payload(exc: BaseException) -> dict[str, str]:
    """Normalize an exception into the stable error envelope."""
    if isinstance(exc, NetlueError):
        return {"error_code": str(exc.error_code), "message": exc.message}
    return {"error_code": "INTERNAL_ERROR", "message": str(exc) or type(exc).__name__}
