from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from netlue.designs.design import coloring_design, crd_design, mixture
from netlue.graphs.generators import GraphFamily, generate
from netlue.graphs.graph import greedy_coloring
from netlue.models.kinds import ModelKind
from netlue.unbiasedness.existence import (
    exists_by_feasibility,
    exists_nia,
    exists_sania,
)
from tests.instances import (
    random_graph,
    random_subset_design,
    tail_at_two,
    whole_cube,
)


def test_tail_graph_with_crd_has_no_unbiased_estimator() -> None:
    report = exists_sania(tail_at_two(), crd_design(4, 2))

    assert not report.exists
    assert report.witness == 2
    assert report.to_record() == {
        "condition": "sania",
        "exists": "false",
        "witness_unit": "2",
    }


def test_tail_graph_with_bernoulli_has_unbiased_estimator() -> None:
    assert exists_sania(tail_at_two(), whole_cube(4))
    assert exists_by_feasibility(ModelKind.SANIA, tail_at_two(), whole_cube(4))


def test_feasibility_agrees_on_tail_graph_with_crd() -> None:
    report = exists_by_feasibility(ModelKind.SANIA, tail_at_two(), crd_design(4, 2))

    assert not report.exists
    assert report.residual is not None and report.residual > 1e-3


def test_complete_graph_needs_more_than_crd() -> None:
    g = generate(GraphFamily.COMPLETE, 4)
    two_sizes = mixture([crd_design(4, 2), crd_design(4, 3)], [0.5, 0.5])

    assert not exists_nia(g, crd_design(4, 2))
    assert exists_nia(g, whole_cube(4))
    assert not exists_sania(g, crd_design(4, 2))
    assert exists_sania(g, two_sizes)


def test_sanasia_on_complete_graph_with_crd_is_infeasible() -> None:
    g = generate(GraphFamily.COMPLETE, 4)

    assert not exists_by_feasibility(ModelKind.SANASIA, g, crd_design(4, 2))


def test_coloring_design_supports_neighborhood_interference() -> None:
    for seed in range(5):
        g = random_graph(7, seed)
        d = coloring_design(greedy_coloring(g))

        assert exists_nia(g, d)
        assert exists_by_feasibility(ModelKind.NIA, g, d)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(3, 5))
def test_structural_conditions_agree_with_feasibility(seed: int, n: int) -> None:
    g = random_graph(n, seed)
    d = random_subset_design(n, seed + 1)

    sania = exists_by_feasibility(ModelKind.SANIA, g, d)
    nia = exists_by_feasibility(ModelKind.NIA, g, d)

    assert exists_sania(g, d).exists == sania.exists
    assert exists_nia(g, d).exists == nia.exists


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), n=st.integers(3, 5))
def test_nia_existence_implies_sania_existence(seed: int, n: int) -> None:
    g = random_graph(n, seed)
    d = random_subset_design(n, seed + 1)

    if exists_nia(g, d):
        assert exists_sania(g, d)
