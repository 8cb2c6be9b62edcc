from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from netlue.core.errors import ErrorCode, NetlueError
from netlue.designs.design import crd_design
from netlue.estimators.baseline import naive_weights
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
from netlue.models.kinds import ModelKind
from netlue.priors.prior import PriorKind, UncorrelatedPrior
from tests.instances import tail_at_two


def _write(path: Path, text: str) -> Path:
    path.write_text(text, encoding="utf-8")
    return path


def test_graph_file_with_comments(tmp_path: Path) -> None:
    path = _write(tmp_path / "g.txt", "# tail\nn 3\n\n0 1\n1 2\n")

    g = read_graph(path)

    assert g.n == 3
    assert g.adj.tolist() == [[0, 1, 0], [0, 0, 1], [0, 0, 0]]
    assert read_graph(path, symmetrize=True).adj[1, 0] == 1


def test_written_graph_reads_back(tmp_path: Path) -> None:
    g = tail_at_two()
    path = tmp_path / "nested" / "g.txt"

    write_graph(g, path)

    assert np.array_equal(read_graph(path).adj, g.adj)
    assert path.read_text(encoding="utf-8").startswith("n 4\n")


@pytest.mark.parametrize(
    ("text", "line", "fragment"),
    [
        ("", 1, "missing 'n <count>' header"),
        ("nodes 3\n", 1, "expected 'n <count>'"),
        ("n 3\n0 1\n0 x\n", 3, "expected 'i j'"),
        ("n 3\n# ok\n0 3\n", 3, "out of range"),
        ("n 3\n1 1\n", 2, "self loop"),
    ],
)
def test_graph_parse_errors_name_the_line(
    tmp_path: Path, text: str, line: int, fragment: str
) -> None:
    path = _write(tmp_path / "g.txt", text)

    with pytest.raises(NetlueError) as exc:
        read_graph(path)

    assert exc.value.error_code is ErrorCode.PARSE_ERROR
    assert f"{path}:{line}:" in exc.value.message
    assert fragment in exc.value.message


def test_design_file(tmp_path: Path) -> None:
    path = _write(tmp_path / "d.txt", "0110 0.25\n1001 0.75\n")

    d = read_design(path)

    assert d.support.tolist() == [[0, 1, 1, 0], [1, 0, 0, 1]]
    assert d.pmf.tolist() == [0.25, 0.75]


def test_design_round_trip_keeps_probabilities(tmp_path: Path) -> None:
    d = crd_design(5, 2)
    path = tmp_path / "d.txt"

    write_design(d, path)
    back = read_design(path)

    assert np.array_equal(back.support, d.support)
    assert np.array_equal(back.pmf, d.pmf)


@pytest.mark.parametrize(
    ("text", "line"),
    [
        ("0110 0.5\n01 0.5\n", 2),
        ("0120 1.0\n", 1),
        ("0110 half\n", 1),
        ("0110\n", 1),
    ],
)
def test_design_parse_errors(tmp_path: Path, text: str, line: int) -> None:
    path = _write(tmp_path / "d.txt", text)

    with pytest.raises(NetlueError) as exc:
        read_design(path)

    assert exc.value.error_code is ErrorCode.PARSE_ERROR
    assert f"{path}:{line}:" in exc.value.message


def test_invalid_design_content_becomes_parse_error(tmp_path: Path) -> None:
    path = _write(tmp_path / "d.txt", "0110 0.5\n1001 0.2\n")

    with pytest.raises(NetlueError) as exc:
        read_design(path)

    assert exc.value.error_code is ErrorCode.PARSE_ERROR


def test_missing_file(tmp_path: Path) -> None:
    with pytest.raises(NetlueError) as exc:
        read_graph(tmp_path / "absent.txt")

    assert exc.value.error_code is ErrorCode.PARSE_ERROR
    assert "file not found" in exc.value.message


def test_weight_file_with_metadata(tmp_path: Path) -> None:
    ws = naive_weights(crd_design(4, 2))
    path = tmp_path / "w.txt"

    write_weights(ws, path, {"path_used": "general_pinv", "kkt_residual": "1e-12"})

    assert read_weight_metadata(path) == {
        "path_used": "general_pinv",
        "kkt_residual": "1e-12",
    }
    assert np.array_equal(read_weights(path).weights, ws.weights)
    assert path.read_text(encoding="utf-8").splitlines()[2].startswith("0011 ")


def test_weight_file_needs_one_weight_per_unit(tmp_path: Path) -> None:
    path = _write(tmp_path / "w.txt", "# note: x\n01 1.0\n")

    with pytest.raises(NetlueError) as exc:
        read_weights(path)

    assert "expected 2 weights" in exc.value.message
    assert f"{path}:2:" in exc.value.message


def test_prior_spec_builds_prior(tmp_path: Path) -> None:
    path = _write(
        tmp_path / "prior.json",
        json.dumps({"kind": "sania_uncorrelated", "var_alpha": 2.0, "var_beta": 0.5}),
    )

    spec = load_prior_spec(path)
    prior = spec.build(4)

    assert spec.kind is PriorKind.SANIA_UNCORRELATED
    assert isinstance(prior, UncorrelatedPrior)


def test_invalid_json_reports_its_line(tmp_path: Path) -> None:
    path = _write(tmp_path / "prior.json", '{\n  "kind": \n}\n')

    with pytest.raises(NetlueError) as exc:
        load_prior_spec(path)

    assert exc.value.error_code is ErrorCode.PARSE_ERROR
    assert f"{path}:3:" in exc.value.message


def test_unknown_keys_are_rejected(tmp_path: Path) -> None:
    path = _write(
        tmp_path / "sweep.json",
        json.dumps({"scenario": "vary_effects", "replicate": 3}),
    )

    with pytest.raises(NetlueError) as exc:
        load_sweep_config(path)

    assert exc.value.error_code is ErrorCode.PARSE_ERROR
    assert "replicate" in exc.value.message


def test_param_file_with_mask_tables(tmp_path: Path) -> None:
    path = _write(
        tmp_path / "params.json",
        json.dumps(
            {
                "kind": "NIA",
                "alpha": [0.0, 0.0],
                "beta": [1.0, 2.0],
                "gamma": [{"0": 0.0, "1": 0.5}, {"0": 0.0, "1": -0.5}],
            }
        ),
    )

    params = load_params(path)

    assert params.kind is ModelKind.NIA
    assert params.gamma[0][1] == 0.5
    assert params.gamma[1][1] == -0.5


def test_shipped_configs_load() -> None:
    root = Path(__file__).resolve().parents[1] / "configs"

    for name in ("vary_n_density", "vary_effects", "vary_degree_power"):
        assert load_sweep_config(root / f"sweep_{name}.json").scenario == name
    assert load_prior_spec(root / "prior_example_constant.json").build(4) is not None
