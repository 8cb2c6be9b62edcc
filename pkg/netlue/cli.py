"""Command-line entry point: graphs, designs, existence checks, solves and sweeps."""

from __future__ import annotations

import argparse
import json
import logging
import uuid
from pathlib import Path
from typing import Callable, Sequence

from dotenv import load_dotenv

from netlue.contracts.models import ErrorPayload, SweepConfig
from netlue.core.config import AppConfig, HarnessConfig, SolverConfig
from netlue.core.errors import ErrorCode, NetlueError, to_error_payload
from netlue.core.logging import set_run_id, setup_logging
from netlue.designs.design import (
    Design,
    bernoulli_design,
    coloring_design,
    crd_design,
    orbit_design_ring,
)
from netlue.evaluation.moments import exact_moments
from netlue.evaluation.suite import EstimatorName, six_estimators
from netlue.evaluation.sweep import iter_sweep, write_sweep_csv
from netlue.graphs.generators import generate, parse_family
from netlue.graphs.graph import Graph, greedy_coloring
from netlue.io.formats import (
    load_params,
    load_prior_spec,
    load_sweep_config,
    read_design,
    read_graph,
    read_weights,
    write_design,
    write_graph,
    write_weights,
)
from netlue.models.kinds import ModelKind
from netlue.priors.prior import (
    PriorCov,
    sania_uncorrelated,
    sanasia_independent,
    sutva_uncorrelated,
)
from netlue.solver.closed_forms import (
    solve_nia_uncorrelated,
    solve_sania_uncorrelated,
    solve_sanasia,
)
from netlue.solver.general import solve_general, solve_nonsingular
from netlue.solver.report import SolveReport
from netlue.solver.routing import solve_auto
from netlue.solver.vertex_transitive import solve_vertex_transitive
from netlue.unbiasedness.existence import (
    ExistenceReport,
    exists_by_feasibility,
    exists_nia,
    exists_sania,
)

LOGGER = logging.getLogger(__name__)

EXIT_ERROR = 2

SolveMethod = Callable[[ModelKind, Graph, Design, PriorCov, SolverConfig], SolveReport]

_METHODS: dict[str, SolveMethod] = {
    "auto": solve_auto,
    "general": solve_general,
    "nonsingular": solve_nonsingular,
    "sania_uncorrelated": lambda k, g, d, p, c: solve_sania_uncorrelated(g, d, p, c),
    "nia_uncorrelated": lambda k, g, d, p, c: solve_nia_uncorrelated(g, d, p, c),
    "sanasia": lambda k, g, d, p, c: solve_sanasia(g, d, p, c),
    "vertex_transitive": lambda k, g, d, p, c: solve_vertex_transitive(g, d, p, c),
}


def _positive(raw: str) -> float:
    value = float(raw)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {raw}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    """Build the argument parser with one subparser per command."""
    parser = argparse.ArgumentParser(
        prog="netlue",
        description="Optimal linear unbiased estimators for network experiments.",
    )
    tolerances = argparse.ArgumentParser(add_help=False)
    tolerances.add_argument(
        "--tol-unbiased", type=_positive, help="Unbiasedness tolerance override."
    )
    tolerances.add_argument(
        "--tol-kkt", type=_positive, help="KKT residual tolerance override."
    )
    loading = argparse.ArgumentParser(add_help=False)
    loading.add_argument(
        "--symmetrize",
        action="store_true",
        help="Add the reverse of every edge read from the graph file.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen_graph = sub.add_parser("gen-graph", help="Generate a graph file.")
    gen_graph.add_argument(
        "--family", required=True, help="e.g. ring, erdos_renyi(0.5), pref_attach(1)."
    )
    gen_graph.add_argument("--n", type=int, required=True, help="Number of units.")
    gen_graph.add_argument("--seed", type=int, default=0, help="Generator seed.")
    gen_graph.add_argument("--out", type=Path, required=True, help="Output path.")

    gen_design = sub.add_parser(
        "gen-design", parents=[loading], help="Generate a design file."
    )
    gen_design.add_argument(
        "--type",
        dest="design_type",
        choices=["bernoulli", "crd", "coloring", "orbit"],
        required=True,
        help="Design constructor.",
    )
    gen_design.add_argument("--n", type=int, help="Number of units.")
    gen_design.add_argument("--k", type=int, help="Treated units for crd.")
    gen_design.add_argument("--q", type=float, default=0.5, help="Bernoulli rate.")
    gen_design.add_argument("--cap", type=int, help="Maximum support size.")
    gen_design.add_argument(
        "--keep-trivial",
        action="store_true",
        help="Keep the all-control and all-treated allocations.",
    )
    gen_design.add_argument("--base", help="Base bitstring for orbit designs.")
    gen_design.add_argument("--graph", type=Path, help="Graph file for coloring.")
    gen_design.add_argument("--seed", type=int, default=0, help="Sampling seed.")
    gen_design.add_argument("--out", type=Path, required=True, help="Output path.")

    check = sub.add_parser(
        "check",
        parents=[tolerances, loading],
        help="Decide whether an unbiased estimator exists.",
    )
    check.add_argument("--graph", type=Path, required=True, help="Graph file.")
    check.add_argument("--design", type=Path, required=True, help="Design file.")
    check.add_argument("--kind", type=ModelKind, required=True, help="Model kind.")

    solve = sub.add_parser(
        "solve", parents=[tolerances, loading], help="Solve for the optimal weights."
    )
    solve.add_argument("--graph", type=Path, required=True, help="Graph file.")
    solve.add_argument("--design", type=Path, required=True, help="Design file.")
    solve.add_argument("--kind", type=ModelKind, required=True, help="Model kind.")
    solve.add_argument("--prior", type=Path, help="Prior spec JSON.")
    solve.add_argument(
        "--method", choices=sorted(_METHODS), default="auto", help="Solver path."
    )
    solve.add_argument("--out", type=Path, required=True, help="Weights output path.")

    evaluate = sub.add_parser(
        "evaluate", parents=[tolerances, loading], help="Exact moments of an estimator."
    )
    evaluate.add_argument("--graph", type=Path, required=True, help="Graph file.")
    evaluate.add_argument("--design", type=Path, required=True, help="Design file.")
    evaluate.add_argument("--params", type=Path, required=True, help="Params JSON.")
    evaluate.add_argument("--kind", type=ModelKind, help="Evaluate under this kind.")
    source = evaluate.add_mutually_exclusive_group(required=True)
    source.add_argument("--weights", type=Path, help="Weights file.")
    source.add_argument(
        "--estimator", type=EstimatorName, help="Build a named baseline estimator."
    )

    sweep = sub.add_parser(
        "sweep", parents=[tolerances], help="Run a simulation sweep."
    )
    sweep.add_argument("--config", type=Path, required=True, help="Sweep JSON.")
    sweep.add_argument("--out", type=Path, required=True, help="CSV output path.")
    sweep.add_argument("--seed", type=int, help="Override the config seed.")
    sweep.add_argument("--jobs", type=int, help="Concurrent replicate workers.")
    return parser


def _print_record(record: dict[str, str]) -> None:
    for key, value in record.items():
        print(f"{key}: {value}")


def _default_prior(kind: ModelKind, n: int) -> PriorCov:
    if kind is ModelKind.SUTVA:
        return sutva_uncorrelated(n)
    if kind is ModelKind.SANASIA:
        return sanasia_independent(n, diagonal_surrogate=True)
    return sania_uncorrelated(n)


def _cmd_gen_graph(args: argparse.Namespace, config: AppConfig) -> None:
    family, param = parse_family(args.family)
    g = generate(family, args.n, seed=args.seed, param=param)
    write_graph(g, args.out)
    _print_record({"n": str(g.n), "edges": str(g.edge_count), "out": str(args.out)})


def _require(value: object, flag: str, design_type: str) -> None:
    if value is None:
        raise NetlueError(
            ErrorCode.INVALID_CONFIG, f"{design_type} design requires {flag}"
        )


def _cmd_gen_design(args: argparse.Namespace, config: AppConfig) -> None:
    design_type = args.design_type
    if design_type == "coloring":
        _require(args.graph, "--graph", design_type)
        g = read_graph(args.graph, symmetrize=args.symmetrize)
        d = coloring_design(greedy_coloring(g))
    elif design_type == "orbit":
        _require(args.base, "--base", design_type)
        base = [int(bit) for bit in args.base]
        d = orbit_design_ring(len(base), base)
    elif design_type == "crd":
        _require(args.n, "--n", design_type)
        _require(args.k, "--k", design_type)
        d = crd_design(args.n, args.k)
    else:
        _require(args.n, "--n", design_type)
        d = bernoulli_design(
            args.n,
            args.q,
            exclude_trivial=not args.keep_trivial,
            cap=args.cap or config.harness.support_cap,
            seed=args.seed,
        )
    write_design(d, args.out)
    _print_record({"n": str(d.n), "support_size": str(d.size), "out": str(args.out)})


def _existence_reports(kind: ModelKind, g: Graph, d: Design) -> list[ExistenceReport]:
    reports = []
    if kind is ModelKind.SUTVA:
        reports.append(exists_nia(Graph.from_edges(g.n, []), d))
    elif kind is ModelKind.NIA:
        reports.append(exists_nia(g, d))
    elif kind is ModelKind.SANIA:
        reports.append(exists_sania(g, d))
    reports.append(exists_by_feasibility(kind, g, d))
    return reports


def _cmd_check(args: argparse.Namespace, config: AppConfig) -> None:
    g = read_graph(args.graph, symmetrize=args.symmetrize)
    d = read_design(args.design)
    reports = _existence_reports(args.kind, g, d)
    for index, report in enumerate(reports):
        if index:
            print()
        _print_record({"kind": str(args.kind), **report.to_record()})


def _cmd_solve(args: argparse.Namespace, config: AppConfig) -> None:
    g = read_graph(args.graph, symmetrize=args.symmetrize)
    d = read_design(args.design)
    prior = (
        load_prior_spec(args.prior).build(g.n)
        if args.prior
        else _default_prior(args.kind, g.n)
    )
    report = _METHODS[args.method](args.kind, g, d, prior, config.solver)
    metadata = report.to_metadata()
    write_weights(report.weights, args.out, metadata)
    _print_record(
        {
            "path_used": metadata["path_used"],
            "kkt_residual": metadata["kkt_residual"],
            "out": str(args.out),
        }
    )


def _cmd_evaluate(args: argparse.Namespace, config: AppConfig) -> None:
    g = read_graph(args.graph, symmetrize=args.symmetrize)
    d = read_design(args.design)
    params = load_params(args.params)
    kind = args.kind or params.kind
    if args.weights:
        ws = read_weights(args.weights)
    else:
        suite = six_estimators(g, d, config.solver, include=[args.estimator])
        if args.estimator in suite.failures:
            raise NetlueError(
                ErrorCode.PRECONDITION_FAILED, suite.failures[args.estimator]
            )
        ws = suite.schemes[args.estimator]
    _print_record(exact_moments(ws, d, kind, params, g).to_record())


def _with_harness_defaults(cfg: SweepConfig, harness: HarnessConfig) -> SweepConfig:
    """Fill keys the sweep file leaves out from the environment."""
    defaults = {
        "replicates": harness.replicates,
        "max_resamples": harness.max_resamples,
        "support_cap": harness.support_cap,
    }
    unset = {
        key: value for key, value in defaults.items() if key not in cfg.model_fields_set
    }
    return SweepConfig.model_validate({**cfg.model_dump(exclude_unset=True), **unset})


def _cmd_sweep(args: argparse.Namespace, config: AppConfig) -> None:
    cfg = _with_harness_defaults(load_sweep_config(args.config), config.harness)
    if args.seed is not None:
        cfg = cfg.model_copy(update={"seed": args.seed})
    jobs = args.jobs or config.harness.jobs
    rows = write_sweep_csv(iter_sweep(cfg, jobs, config.solver), args.out)
    _print_record({"rows": str(rows), "out": str(args.out)})


_COMMANDS: dict[str, Callable[[argparse.Namespace, AppConfig], None]] = {
    "gen-graph": _cmd_gen_graph,
    "gen-design": _cmd_gen_design,
    "check": _cmd_check,
    "solve": _cmd_solve,
    "evaluate": _cmd_evaluate,
    "sweep": _cmd_sweep,
}


def main(argv: Sequence[str] | None = None) -> int:
    """Run one command; returns the process exit status."""
    load_dotenv()
    config = AppConfig.from_env()
    setup_logging(config.logging.level)
    set_run_id(uuid.uuid4().hex)

    args = _build_parser().parse_args(argv)
    config = AppConfig(
        logging=config.logging,
        solver=config.solver.with_overrides(
            tol_unbiased=getattr(args, "tol_unbiased", None),
            tol_kkt=getattr(args, "tol_kkt", None),
        ),
        harness=config.harness,
    )
    LOGGER.info("Running command", extra={"command": args.command})
    try:
        _COMMANDS[args.command](args, config)
    except NetlueError as exc:
        LOGGER.error("Command failed", extra={"command": args.command})
        payload = ErrorPayload(**to_error_payload(exc))
        print(json.dumps(payload.model_dump(), ensure_ascii=False))
        return EXIT_ERROR
    return 0
