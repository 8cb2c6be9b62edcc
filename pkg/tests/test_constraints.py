from __future__ import annotations

import numpy as np
import pytest

from netlue.core.errors import ErrorCode, NetlueError
from netlue.designs.design import crd_design
from netlue.estimators.baseline import naive_weights
from netlue.estimators.weights import WeightScheme
from netlue.graphs.generators import GraphFamily, generate
from netlue.models.kinds import ModelKind
from netlue.unbiasedness.constraints import (
    ConstraintFamily,
    build_constraints,
    check_unbiased,
    constraint_residual,
)
from tests.instances import (
    EXAMPLE_WEIGHTS,
    empty,
    nontrivial_cube,
    tail_at_two,
    tail_at_zero,
    whole_cube,
)


def _example_scheme() -> WeightScheme:
    d = nontrivial_cube(4)
    weights = np.array([EXAMPLE_WEIGHTS[tuple(row)] for row in d.support.tolist()])
    return WeightScheme.on(d, weights)


def test_sutva_has_two_rows_per_unit() -> None:
    cs = build_constraints(ModelKind.SUTVA, empty(2), whole_cube(2))

    assert cs.row_count == 4
    assert len(cs.rows_for(ConstraintFamily.TREATED)) == 2
    assert np.allclose(cs.rhs[cs.rows_for(ConstraintFamily.TREATED)], 0.5)


def test_sania_adds_one_row_per_attained_positive_degree() -> None:
    cs = build_constraints(ModelKind.SANIA, tail_at_two(), crd_design(4, 2))
    degree_rows = [cs.labels[r] for r in cs.rows_for(ConstraintFamily.DEGREE)]

    assert sorted(label.key for label in degree_rows if label.unit == 2) == [1, 2]
    assert sorted(label.key for label in degree_rows if label.unit == 3) == [1]


def test_snia_doubles_degree_rows() -> None:
    sania = build_constraints(ModelKind.SANIA, tail_at_two(), nontrivial_cube(4))
    snia = build_constraints(ModelKind.SNIA, tail_at_two(), nontrivial_cube(4))

    assert len(snia.rows_for(ConstraintFamily.DEGREE_TREATED)) == len(
        sania.rows_for(ConstraintFamily.DEGREE)
    )


def test_sanasia_on_connected_odd_cycle_has_one_component_row() -> None:
    g = generate(GraphFamily.COMPLETE, 4)
    cs = build_constraints(ModelKind.SANASIA, g, nontrivial_cube(4))

    assert len(cs.rows_for(ConstraintFamily.COMPONENT)) == 1
    assert cs.row_count == 2 * 4 + 1


def test_unsupported_kind_is_rejected() -> None:
    with pytest.raises(NetlueError) as exc:
        build_constraints(ModelKind.ANIA, tail_at_two(), nontrivial_cube(4))

    assert exc.value.error_code is ErrorCode.UNSUPPORTED_KIND


def test_naive_is_unbiased_without_interference_on_crd() -> None:
    d = crd_design(4, 2)
    verdict = check_unbiased(
        naive_weights(d), build_constraints(ModelKind.SUTVA, empty(4), d)
    )

    assert verdict.unbiased
    assert verdict.max_violation < 1e-12


def test_naive_is_biased_under_interference_with_bernoulli() -> None:
    d = nontrivial_cube(4)
    cs = build_constraints(ModelKind.SANIA, tail_at_two(), d)

    verdict = check_unbiased(naive_weights(d), cs)

    assert not verdict.unbiased
    assert verdict.worst_label is not None
    assert verdict.to_record()["unbiased"] == "false"


def test_published_example_weights_satisfy_constraints_to_rounding() -> None:
    ws = _example_scheme()
    cs = build_constraints(ModelKind.SANIA, tail_at_zero(), nontrivial_cube(4))

    assert check_unbiased(ws, cs, tol=0.1).unbiased


def test_constraint_residual_requires_matching_support() -> None:
    cs = build_constraints(ModelKind.SUTVA, empty(4), crd_design(4, 2))

    with pytest.raises(NetlueError) as exc:
        constraint_residual(_example_scheme(), cs)

    assert exc.value.error_code is ErrorCode.INVALID_DESIGN
