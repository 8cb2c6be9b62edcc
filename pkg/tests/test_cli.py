from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from netlue.cli import EXIT_ERROR, main
from netlue.designs.design import crd_design
from netlue.graphs.graph import is_undirected
from netlue.io.formats import (
    read_design,
    read_graph,
    read_weight_metadata,
    read_weights,
    write_design,
    write_graph,
)
from tests.instances import nontrivial_cube, tail_at_two


@pytest.fixture
def tail_files(tmp_path: Path) -> tuple[Path, Path, Path]:
    graph = tmp_path / "tail.txt"
    crd = tmp_path / "crd.txt"
    cube = tmp_path / "cube.txt"
    write_graph(tail_at_two(), graph)
    write_design(crd_design(4, 2), crd)
    write_design(nontrivial_cube(4), cube)
    return graph, crd, cube


def _record(text: str) -> dict[str, str]:
    pairs = (line.split(": ", 1) for line in text.splitlines() if ": " in line)
    return {key: value for key, value in pairs}


def test_check_reports_witness_unit(
    tail_files: tuple[Path, Path, Path], capsys: pytest.CaptureFixture[str]
) -> None:
    graph, crd, _ = tail_files

    code = main(
        ["check", "--graph", str(graph), "--design", str(crd), "--kind", "SANIA"]
    )
    blocks = capsys.readouterr().out.strip().split("\n\n")

    assert code == 0
    assert len(blocks) == 2
    first = _record(blocks[0])
    assert first["kind"] == "SANIA"
    assert first["exists"] == "false"
    assert first["witness_unit"] == "2"
    assert _record(blocks[1])["exists"] == "false"


def test_solve_writes_weights_with_metadata(
    tail_files: tuple[Path, Path, Path],
    tmp_path: Path,
    capsys: pytest.CaptureFixture[str],
) -> None:
    graph, _, cube = tail_files
    out = tmp_path / "weights.txt"

    code = main(
        [
            "solve",
            "--graph",
            str(graph),
            "--design",
            str(cube),
            "--kind",
            "SANIA",
            "--out",
            str(out),
        ]
    )
    printed = _record(capsys.readouterr().out)

    assert code == 0
    assert printed["path_used"] == "sania_uncorrelated"
    assert float(printed["kkt_residual"]) < 1e-6
    assert read_weight_metadata(out)["path_used"] == "sania_uncorrelated"
    assert read_weights(out).weights.shape == (14, 4)


def test_solve_with_prior_file_and_method(
    tail_files: tuple[Path, Path, Path],
    tmp_path: Path,
    capsys: pytest.CaptureFixture[str],
) -> None:
    graph, _, cube = tail_files
    prior = tmp_path / "prior.json"
    prior.write_text(json.dumps({"kind": "sania_constant", "jitter": 0.01}))
    out = tmp_path / "weights.txt"

    code = main(
        [
            "solve",
            "--graph",
            str(graph),
            "--design",
            str(cube),
            "--kind",
            "SANIA",
            "--prior",
            str(prior),
            "--method",
            "general",
            "--out",
            str(out),
        ]
    )

    assert code == 0
    assert _record(capsys.readouterr().out)["path_used"] == "general_pinv"


def test_solve_failure_prints_error_payload(
    tail_files: tuple[Path, Path, Path],
    tmp_path: Path,
    capsys: pytest.CaptureFixture[str],
) -> None:
    graph, crd, _ = tail_files

    code = main(
        [
            "solve",
            "--graph",
            str(graph),
            "--design",
            str(crd),
            "--kind",
            "SANIA",
            "--out",
            str(tmp_path / "w.txt"),
        ]
    )
    payload = json.loads(capsys.readouterr().out)

    assert code == EXIT_ERROR
    assert payload["error_code"] == "INFEASIBLE"
    assert "unit 2" in payload["message"]


def test_evaluate_named_estimator(
    tail_files: tuple[Path, Path, Path],
    tmp_path: Path,
    capsys: pytest.CaptureFixture[str],
) -> None:
    graph, crd, _ = tail_files
    params = tmp_path / "params.json"
    params.write_text(
        json.dumps({"kind": "SUTVA", "alpha": [0, 0, 0, 0], "beta": [1, 2, 3, 4]})
    )

    code = main(
        [
            "evaluate",
            "--graph",
            str(graph),
            "--design",
            str(crd),
            "--params",
            str(params),
            "--estimator",
            "naive",
        ]
    )
    record = _record(capsys.readouterr().out)

    assert code == 0
    assert float(record["bias"]) == pytest.approx(0.0, abs=1e-12)
    assert set(record) == {"mean", "bias", "variance", "mse"}


def test_evaluate_weights_file(
    tail_files: tuple[Path, Path, Path],
    tmp_path: Path,
    capsys: pytest.CaptureFixture[str],
) -> None:
    graph, _, cube = tail_files
    weights = tmp_path / "w.txt"
    params = tmp_path / "params.json"
    params.write_text(
        json.dumps({"kind": "SUTVA", "alpha": [1, 1, 1, 1], "beta": [2, 2, 2, 2]})
    )
    solve_args = ["--graph", str(graph), "--design", str(cube), "--kind", "SANIA"]
    assert main(["solve", *solve_args, "--out", str(weights)]) == 0
    capsys.readouterr()

    code = main(
        [
            "evaluate",
            "--graph",
            str(graph),
            "--design",
            str(cube),
            "--params",
            str(params),
            "--kind",
            "SANIA",
            "--weights",
            str(weights),
        ]
    )
    record = _record(capsys.readouterr().out)

    assert code == 0
    assert float(record["mean"]) == pytest.approx(2.0, abs=1e-8)


def test_parse_error_exit_code(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    graph = tmp_path / "bad.txt"
    graph.write_text("n 3\n0 9\n")
    design = tmp_path / "d.txt"
    write_design(crd_design(3, 1), design)

    code = main(
        ["check", "--graph", str(graph), "--design", str(design), "--kind", "NIA"]
    )
    payload = json.loads(capsys.readouterr().out)

    assert code == EXIT_ERROR
    assert payload["error_code"] == "PARSE_ERROR"
    assert f"{graph}:2:" in payload["message"]


def test_generators_write_files(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    graph = tmp_path / "ring.txt"
    bernoulli = tmp_path / "bern.txt"
    coloring = tmp_path / "color.txt"
    orbit = tmp_path / "orbit.txt"

    assert main(["gen-graph", "--family", "ring", "--n", "6", "--out", str(graph)]) == 0
    for extra in (
        ["--type", "bernoulli", "--n", "4", "--out", str(bernoulli)],
        ["--type", "coloring", "--graph", str(graph), "--out", str(coloring)],
        ["--type", "orbit", "--base", "1100", "--out", str(orbit)],
    ):
        assert main(["gen-design", *extra]) == 0
    capsys.readouterr()

    assert read_graph(graph).edge_count == 12
    assert read_design(bernoulli).size == 14
    assert np.all(read_design(coloring).support.sum(axis=0) >= 1)
    assert read_design(orbit).size == 4


def test_gen_design_requires_its_flags(
    tmp_path: Path, capsys: pytest.CaptureFixture[str]
) -> None:
    out = tmp_path / "d.txt"

    code = main(["gen-design", "--type", "crd", "--n", "4", "--out", str(out)])
    payload = json.loads(capsys.readouterr().out)

    assert code == EXIT_ERROR
    assert payload["error_code"] == "INVALID_CONFIG"
    assert "--k" in payload["message"]


def test_sweep_writes_csv(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    config = tmp_path / "sweep.json"
    config.write_text(
        json.dumps(
            {
                "scenario": "vary_n_density",
                "n_values": [4, 5],
                "densities": ["dense"],
                "replicates": 2,
                "estimators": ["naive"],
            }
        )
    )
    out = tmp_path / "results" / "sweep.csv"

    args = ["--config", str(config), "--out", str(out), "--seed", "3", "--jobs", "2"]

    code = main(["sweep", *args])
    printed = _record(capsys.readouterr().out)

    assert code == 0
    assert printed["rows"] == "2"
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("scenario,density,n,estimator")
    assert len(lines) == 3
    assert all(line.endswith(",3,") for line in lines[1:])


def test_sweep_fills_missing_keys_from_environment(
    tmp_path: Path, monkeypatch: pytest.MonkeyPatch, capsys: pytest.CaptureFixture[str]
) -> None:
    monkeypatch.setenv("NETLUE_REPLICATES", "1")
    monkeypatch.setenv("NETLUE_MAX_RESAMPLES", "0")
    implicit = tmp_path / "implicit.json"
    explicit = tmp_path / "explicit.json"
    fields = {
        "scenario": "vary_n_density",
        "n_values": [4],
        "densities": ["dense"],
        "estimators": ["naive"],
    }
    implicit.write_text(json.dumps(fields))
    explicit.write_text(json.dumps({**fields, "replicates": 3}))

    for config in (implicit, explicit):
        out = tmp_path / f"{config.stem}.csv"
        assert main(["sweep", "--config", str(config), "--out", str(out)]) == 0
    capsys.readouterr()

    used = {
        name: pd.read_csv(tmp_path / f"{name}.csv")["replicates_used"].tolist()
        for name in ("implicit", "explicit")
    }
    assert used == {"implicit": [1], "explicit": [3]}


def test_symmetrize_adds_reverse_edges_on_load(
    tail_files: tuple[Path, Path, Path],
    tmp_path: Path,
    capsys: pytest.CaptureFixture[str],
) -> None:
    graph, _, cube = tail_files
    upper = np.argwhere(np.triu(tail_at_two().adj))
    half = tmp_path / "half.txt"
    half.write_text("n 4\n" + "".join(f"{i} {j}\n" for i, j in upper.tolist()))
    full_out = tmp_path / "full_w.txt"
    half_out = tmp_path / "half_w.txt"

    for source, out, extra in (
        (graph, full_out, []),
        (half, half_out, ["--symmetrize"]),
    ):
        args = ["--graph", str(source), "--design", str(cube), "--kind", "SANIA"]
        assert main(["solve", *args, "--out", str(out), *extra]) == 0
    check = ["check", "--graph", str(half), "--design", str(cube), "--kind", "SANIA"]
    assert main([*check, "--symmetrize"]) == 0
    capsys.readouterr()

    assert np.allclose(read_weights(half_out).weights, read_weights(full_out).weights)
    assert not is_undirected(read_graph(half))
