"""Plain-text graph, design and weight files plus the JSON inputs.

Graph files start with "n <count>" followed by one "i j" edge per line.
Design files hold "<bitstring> <probability>" lines. Weight files hold
"<bitstring> w_1 ... w_n" lines after optional "# key: value" metadata.
Blank lines and other "#" lines are ignored everywhere.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterator, TypeVar

import numpy as np
from pydantic import BaseModel, ValidationError

from netlue.contracts.models import ParamFile, PriorSpec, SweepConfig
from netlue.core.errors import ErrorCode, NetlueError
from netlue.designs.design import Design, bitstring
from netlue.estimators.weights import WeightScheme
from netlue.graphs.graph import Graph
from netlue.models.params import ParamSet

_Model = TypeVar("_Model", bound=BaseModel)


def _parse_error(path: Path, line_no: int, message: str) -> NetlueError:
    return NetlueError(ErrorCode.PARSE_ERROR, f"{path}:{line_no}: {message}")


def _content_lines(path: Path) -> Iterator[tuple[int, str]]:
    if not path.exists():
        raise NetlueError(ErrorCode.PARSE_ERROR, f"{path}: file not found")
    with path.open("r", encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.strip()
            if line and not line.startswith("#"):
                yield line_no, line


def _parse_bits(path: Path, line_no: int, token: str, n: int | None) -> np.ndarray:
    if not token or set(token) - {"0", "1"}:
        raise _parse_error(path, line_no, f"bad allocation {token!r}")
    if n is not None and len(token) != n:
        raise _parse_error(path, line_no, f"allocation has {len(token)} bits, expected {n}")
    return np.frombuffer(token.encode("ascii"), dtype=np.uint8) - ord("0")


def read_graph(path: Path, symmetrize: bool = False) -> Graph:
    lines = _content_lines(path)
    header = next(lines, None)
    if header is None:
        raise _parse_error(path, 1, "missing 'n <count>' header")
    line_no, text = header
    parts = text.split()
    if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit():
        raise _parse_error(path, line_no, "expected 'n <count>'")
    n = int(parts[1])
    edges: list[tuple[int, int]] = []
    for line_no, text in lines:
        parts = text.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise _parse_error(path, line_no, "expected 'i j'")
        source, target = int(parts[0]), int(parts[1])
        if source >= n or target >= n:
            raise _parse_error(path, line_no, f"unit out of range for n={n}")
        if source == target:
            raise _parse_error(path, line_no, "self loop")
        edges.append((source, target))
    return Graph.from_edges(n, edges, symmetrize=symmetrize)


def write_graph(g: Graph, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    sources, targets = np.nonzero(g.adj)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(f"n {g.n}\n")
        for source, target in zip(sources.tolist(), targets.tolist()):
            fh.write(f"{source} {target}\n")


def read_design(path: Path) -> Design:
    rows: list[np.ndarray] = []
    masses: list[float] = []
    n: int | None = None
    for line_no, text in _content_lines(path):
        parts = text.split()
        if len(parts) != 2:
            raise _parse_error(path, line_no, "expected '<bitstring> <probability>'")
        row = _parse_bits(path, line_no, parts[0], n)
        n = row.size
        try:
            mass = float(parts[1])
        except ValueError as exc:
            raise _parse_error(path, line_no, f"bad probability {parts[1]!r}") from exc
        rows.append(row)
        masses.append(mass)
    if not rows:
        raise _parse_error(path, 1, "design has no allocations")
    try:
        return Design(np.vstack(rows), np.asarray(masses))
    except NetlueError as exc:
        raise NetlueError(ErrorCode.PARSE_ERROR, f"{path}: {exc.message}") from exc


def write_design(d: Design, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for row, mass in zip(d.support, d.pmf):
            fh.write(f"{bitstring(row)} {mass:.17g}\n")


def write_weights(
    ws: WeightScheme, path: Path, metadata: dict[str, str] | None = None
) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for key, value in (metadata or {}).items():
            fh.write(f"# {key}: {value}\n")
        for row, weights in zip(ws.support, ws.weights):
            values = " ".join(format(float(w), ".17g") for w in weights)
            fh.write(f"{bitstring(row)} {values}\n")


def read_weight_metadata(path: Path) -> dict[str, str]:
    metadata: dict[str, str] = {}
    with path.open("r", encoding="utf-8") as fh:
        for raw in fh:
            line = raw.strip()
            if line.startswith("#") and ":" in line:
                key, _, value = line[1:].partition(":")
                metadata[key.strip()] = value.strip()
    return metadata


def read_weights(path: Path) -> WeightScheme:
    rows: list[np.ndarray] = []
    weights: list[np.ndarray] = []
    n: int | None = None
    for line_no, text in _content_lines(path):
        parts = text.split()
        row = _parse_bits(path, line_no, parts[0], n)
        n = row.size
        if len(parts) != n + 1:
            raise _parse_error(path, line_no, f"expected {n} weights")
        try:
            values = np.array([float(p) for p in parts[1:]])
        except ValueError as exc:
            raise _parse_error(path, line_no, "weights must be numbers") from exc
        rows.append(row)
        weights.append(values)
    if not rows:
        raise _parse_error(path, 1, "weight file has no allocations")
    return WeightScheme(np.vstack(rows), np.vstack(weights))


def _load_json(path: Path, model: type[_Model]) -> _Model:
    if not path.exists():
        raise NetlueError(ErrorCode.PARSE_ERROR, f"{path}: file not found")
    text = path.read_text(encoding="utf-8")
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise _parse_error(path, exc.lineno, exc.msg) from exc
    try:
        return model.model_validate(payload)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "document"
        raise NetlueError(
            ErrorCode.PARSE_ERROR, f"{path}: {where}: {first['msg']}"
        ) from exc


def load_prior_spec(path: Path) -> PriorSpec:
    return _load_json(path, PriorSpec)


def load_params(path: Path) -> ParamSet:
    return _load_json(path, ParamFile).build()


def load_sweep_config(path: Path) -> SweepConfig:
    return _load_json(path, SweepConfig)
