from __future__ import annotations

import numpy as np
import pytest

from netlue.core.errors import ErrorCode, NetlueError
from netlue.designs.design import crd_design
from netlue.estimators.baseline import ht_weights
from netlue.graphs.generators import GraphFamily, generate
from netlue.models.kinds import ModelKind
from netlue.priors.prior import (
    UncorrelatedPrior,
    sania_constant,
    sania_uncorrelated,
    sanasia_independent,
)
from netlue.solver.closed_forms import (
    ht_scale,
    solve_nia_uncorrelated,
    solve_sania_uncorrelated,
    solve_sanasia,
)
from netlue.solver.general import solve_general
from netlue.solver.report import SolvePath
from netlue.unbiasedness.constraints import build_constraints, check_unbiased
from tests.instances import (
    empty,
    nontrivial_cube,
    random_graph,
    random_nontrivial_design,
    ring,
    tail_at_two,
    whole_cube,
)

_SEEDS = range(25)


def _random_uncorrelated(n: int, seed: int) -> UncorrelatedPrior:
    rng = np.random.default_rng(seed)
    return sania_uncorrelated(
        n,
        var_alpha=rng.uniform(0.5, 2.0, n),
        var_beta=rng.uniform(0.5, 2.0, n),
        gamma_var_scale=float(rng.uniform(0.2, 2.0)),
    )


@pytest.mark.parametrize("seed", _SEEDS)
def test_sania_closed_form_matches_general_solver(seed: int) -> None:
    n = 4 + seed % 2
    g = random_graph(n, seed)
    d = random_nontrivial_design(n, seed)
    prior = _random_uncorrelated(n, seed)

    closed = solve_sania_uncorrelated(g, d, prior)
    general = solve_general(ModelKind.SANIA, g, d, prior)

    assert closed.path_used is SolvePath.SANIA_UNCORRELATED
    assert np.allclose(closed.weights.weights, general.weights.weights, atol=1e-6)


@pytest.mark.parametrize("seed", _SEEDS)
def test_nia_closed_form_matches_general_solver(seed: int) -> None:
    n = 4
    g = random_graph(n, seed)
    d = whole_cube(n)
    prior = _random_uncorrelated(n, seed)

    closed = solve_nia_uncorrelated(g, d, prior)
    general = solve_general(ModelKind.NIA, g, d, prior)

    assert np.allclose(closed.weights.weights, general.weights.weights, atol=1e-6)


@pytest.mark.parametrize("seed", _SEEDS)
def test_sanasia_closed_form_matches_general_solver(seed: int) -> None:
    n = 4 + seed % 2
    g = random_graph(n, seed)
    d = random_nontrivial_design(n, seed)
    rng = np.random.default_rng(seed)
    prior = sanasia_independent(
        n,
        var_alpha=rng.uniform(0.5, 2.0, n),
        var_beta=rng.uniform(0.5, 2.0, n),
        var_gamma=float(rng.uniform(0.1, 1.0)),
        diagonal_surrogate=True,
    )

    closed = solve_sanasia(g, d, prior)
    general = solve_general(ModelKind.SANASIA, g, d, prior)

    assert closed.path_used is SolvePath.SANASIA_CLOSED
    assert closed.kkt_residual < 1e-6
    assert np.allclose(closed.weights.weights, general.weights.weights, atol=1e-6)


def test_sania_closed_form_on_ring_with_bernoulli() -> None:
    prior = sania_uncorrelated(4)

    closed = solve_sania_uncorrelated(ring(4), nontrivial_cube(4), prior)
    general = solve_general(ModelKind.SANIA, ring(4), nontrivial_cube(4), prior)

    assert np.allclose(closed.weights.weights, general.weights.weights, atol=1e-6)


def test_sania_closed_form_is_ht_on_empty_graph() -> None:
    d = random_nontrivial_design(4, seed=9)

    report = solve_sania_uncorrelated(empty(4), d, sania_uncorrelated(4))

    assert np.allclose(report.weights.weights, ht_weights(d).weights, atol=1e-10)


def test_sanasia_closed_form_rejects_complete_graph_with_crd() -> None:
    g = generate(GraphFamily.COMPLETE, 4)
    prior = sanasia_independent(4, diagonal_surrogate=True)

    with pytest.raises(NetlueError) as exc:
        solve_sanasia(g, crd_design(4, 2), prior)

    assert exc.value.error_code is ErrorCode.INFEASIBLE


def test_ht_scale_forms_agree() -> None:
    g = tail_at_two()
    d = random_nontrivial_design(4, seed=5)
    prior = _random_uncorrelated(4, 5)

    cells = ht_scale(prior, g, d, method="cells")
    support = ht_scale(prior, g, d, method="support")

    assert np.allclose(cells, support, rtol=1e-10)
    assert np.all(cells >= 0)
    assert np.all(cells.sum(axis=1) > 0)


def test_sania_closed_form_reports_witness_on_infeasible_design() -> None:
    with pytest.raises(NetlueError) as exc:
        solve_sania_uncorrelated(tail_at_two(), crd_design(4, 2), sania_uncorrelated(4))

    assert exc.value.error_code is ErrorCode.INFEASIBLE
    assert "unit 2" in exc.value.message


def test_closed_forms_check_their_prior() -> None:
    with pytest.raises(NetlueError) as sania:
        solve_sania_uncorrelated(tail_at_two(), nontrivial_cube(4), sania_constant(4))
    with pytest.raises(NetlueError) as nia:
        solve_nia_uncorrelated(tail_at_two(), whole_cube(4), sania_constant(4))

    assert sania.value.error_code is ErrorCode.PRECONDITION_FAILED
    assert nia.value.error_code is ErrorCode.PRECONDITION_FAILED


def test_closed_form_weights_are_unbiased() -> None:
    g = random_graph(5, 1)
    d = random_nontrivial_design(5, 1)
    report = solve_sania_uncorrelated(g, d, sania_uncorrelated(5))

    constraints = build_constraints(ModelKind.SANIA, g, d)

    assert check_unbiased(report.weights, constraints).unbiased
