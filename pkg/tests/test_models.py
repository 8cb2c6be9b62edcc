from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netlue.core.errors import ErrorCode, NetlueError
from netlue.designs.design import full_cube
from netlue.graphs.graph import Graph, sorted_neighbors, treated_degrees
from netlue.models.kinds import ModelKind
from netlue.models.params import (
    ParamSet,
    check_params,
    estimand_beta_bar,
    evaluate,
    potential_outcomes,
    upcast,
)
from netlue.models.sampling import SamplingSpec, sample_params
from tests.instances import random_graph, ring, tail_at_two


def _ten_per_neighbor() -> ParamSet:
    return ParamSet(
        kind=ModelKind.SANIA,
        alpha=np.zeros(4),
        beta=np.ones(4),
        gamma=np.tile(10.0 * np.arange(4), (4, 1)),
    )


def test_sania_outcomes_on_tail_graph() -> None:
    g = tail_at_two()
    params = _ten_per_neighbor()
    z = (1, 1, 0, 0)

    outcomes = [evaluate(ModelKind.SANIA, params, g, z, i) for i in range(4)]

    assert outcomes == [11.0, 11.0, 20.0, 0.0]
    assert estimand_beta_bar(params) == 1.0


def test_evaluate_rejects_mismatched_kind() -> None:
    with pytest.raises(NetlueError) as exc:
        evaluate(ModelKind.NIA, _ten_per_neighbor(), tail_at_two(), (1, 0, 0, 0), 0)

    assert exc.value.error_code is ErrorCode.INVALID_PARAMS


def test_degree_table_must_vanish_at_zero() -> None:
    with pytest.raises(NetlueError) as exc:
        ParamSet(kind=ModelKind.SANIA, alpha=[0.0], beta=[1.0], gamma=[[1.0]])

    assert exc.value.error_code is ErrorCode.INVALID_PARAMS


def test_additive_kinds_take_no_delta() -> None:
    with pytest.raises(NetlueError):
        ParamSet(
            kind=ModelKind.SANIA,
            alpha=np.zeros(2),
            beta=np.ones(2),
            delta=np.zeros((2, 2)),
        )


def test_symmetric_sending_slopes_must_be_constant_on_components() -> None:
    params = ParamSet(
        kind=ModelKind.SANASIA,
        alpha=np.zeros(4),
        beta=np.ones(4),
        gamma=np.array([0.5, 0.7, 0.6, 0.7]),
    )

    with pytest.raises(NetlueError) as exc:
        check_params(params, ring(4))

    assert exc.value.error_code is ErrorCode.INVALID_PARAMS


def test_mask_outcomes_depend_on_neighbor_pattern() -> None:
    g = tail_at_two()
    params = ParamSet(
        kind=ModelKind.NIA,
        alpha=np.zeros(4),
        beta=np.zeros(4),
        gamma=[{}, {}, {1: 1.0, 2: 5.0, 4: 7.0}, {}],
        delta=None,
    )
    rows = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [1, 1, 0, 0]])

    outcomes = potential_outcomes(params, g, rows)

    assert outcomes[:, 2].tolist() == [1.0, 5.0, 7.0, 0.0]


def test_sanasia_upcasts_to_equivalent_sania() -> None:
    g = ring(4)
    params = ParamSet(
        kind=ModelKind.SANASIA,
        alpha=np.array([0.1, -0.2, 0.3, 0.0]),
        beta=np.array([1.0, 2.0, 1.5, 0.5]),
        gamma=np.array([0.5, 0.7, 0.5, 0.7]),
    )
    cube = full_cube(4)

    lifted = upcast(params, ModelKind.SANIA, g)

    assert lifted.kind is ModelKind.SANIA
    assert np.allclose(
        potential_outcomes(lifted, g, cube), potential_outcomes(params, g, cube)
    )


def test_upcast_refuses_to_narrow() -> None:
    with pytest.raises(NetlueError) as exc:
        upcast(_ten_per_neighbor(), ModelKind.SANASIA, tail_at_two())

    assert exc.value.error_code is ErrorCode.INVALID_PARAMS


def test_kind_lattice_order() -> None:
    assert ModelKind.SUTVA.is_submodel_of(ModelKind.SANASIA)
    assert ModelKind.SANASIA.is_submodel_of(ModelKind.SANIA)
    assert ModelKind.SANIA.is_submodel_of(ModelKind.NIA)
    assert not ModelKind.NIA.is_submodel_of(ModelKind.SANIA)
    assert ModelKind.SNIA.has_delta and not ModelKind.SANIA.has_delta


@settings(max_examples=25, deadline=None)
@given(
    seed=st.integers(0, 10_000),
    source=st.sampled_from(
        [ModelKind.SUTVA, ModelKind.SANASIA, ModelKind.SANIA, ModelKind.SNIA]
    ),
)
def test_upcast_to_nia_preserves_outcomes(seed: int, source: ModelKind) -> None:
    g = random_graph(5, seed)
    spec = SamplingSpec(delta_var=1.0)
    params = sample_params(source, g, spec, seed)
    cube = full_cube(5)

    lifted = upcast(params, ModelKind.NIA, g)

    assert np.allclose(
        potential_outcomes(lifted, g, cube), potential_outcomes(params, g, cube)
    )


def test_sample_params_is_deterministic_in_seed() -> None:
    g = tail_at_two()
    first = sample_params(ModelKind.SANIA, g, SamplingSpec(), seed=5)
    second = sample_params(ModelKind.SANIA, g, SamplingSpec(), seed=5)
    other = sample_params(ModelKind.SANIA, g, SamplingSpec(), seed=6)

    assert np.array_equal(first.gamma, second.gamma)
    assert np.array_equal(first.beta, second.beta)
    assert not np.array_equal(first.beta, other.beta)
    assert np.all(first.gamma[:, 0] == 0.0)


def test_sampled_sanasia_slopes_respect_components() -> None:
    g = ring(6)
    params = sample_params(ModelKind.SANASIA, g, SamplingSpec(), seed=1)

    check_params(params, g)


_INTERACTING = SamplingSpec(delta_mean=0.5, delta_var=1.0)


def _directed_graph(n: int, seed: int) -> Graph:
    adj = (np.random.default_rng(seed).random((n, n)) < 0.4).astype(np.uint8)
    np.fill_diagonal(adj, 0)
    return Graph(adj)


def _bit(n: int, unit: int) -> int:
    return 1 << (n - 1 - unit)


def _cube_outcomes(kind: ModelKind, g: Graph, seed: int) -> np.ndarray:
    params = sample_params(kind, g, _INTERACTING, seed)
    return potential_outcomes(params, g, full_cube(g.n))


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(0, 10_000),
    n=st.integers(2, 5),
    kind=st.sampled_from(list(ModelKind)),
)
def test_outcomes_ignore_units_outside_the_neighborhood(
    seed: int, n: int, kind: ModelKind
) -> None:
    g = _directed_graph(n, seed)
    outcomes = _cube_outcomes(kind, g, seed)
    codes = np.arange(2**n)

    for i in range(n):
        outside = set(range(n)) - {i} - set(sorted_neighbors(g, i).tolist())
        for j in outside:
            flipped = codes ^ _bit(n, j)
            assert np.allclose(outcomes[flipped, i], outcomes[:, i])


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(0, 10_000),
    n=st.integers(2, 5),
    kind=st.sampled_from([k for k in ModelKind if k.symmetric_reception]),
)
def test_symmetric_reception_depends_on_treated_degree_only(
    seed: int, n: int, kind: ModelKind
) -> None:
    g = _directed_graph(n, seed)
    cube = full_cube(n)
    outcomes = _cube_outcomes(kind, g, seed)
    degrees = treated_degrees(g, cube)

    for i in range(n):
        keys = cube[:, i].astype(np.int64) * (n + 1) + degrees[:, i]
        for key in np.unique(keys):
            assert np.ptp(outcomes[keys == key, i]) < 1e-9


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(0, 10_000),
    n=st.integers(2, 5),
    kind=st.sampled_from([k for k in ModelKind if k.additive_main]),
)
def test_additive_main_effect_is_constant(seed: int, n: int, kind: ModelKind) -> None:
    g = _directed_graph(n, seed)
    params = sample_params(kind, g, _INTERACTING, seed)
    outcomes = potential_outcomes(params, g, full_cube(n))
    codes = np.arange(2**n)

    for i in range(n):
        bit = _bit(n, i)
        effect = outcomes[codes | bit, i] - outcomes[codes & ~bit, i]
        assert np.allclose(effect, params.beta[i])


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(0, 10_000),
    n=st.integers(2, 5),
    kind=st.sampled_from([k for k in ModelKind if k.additive_interference]),
)
def test_additive_interference_sums_single_neighbor_effects(
    seed: int, n: int, kind: ModelKind
) -> None:
    g = _directed_graph(n, seed)
    outcomes = _cube_outcomes(kind, g, seed)

    for i in range(n):
        nbr_bits = [_bit(n, j) for j in sorted_neighbors(g, i).tolist()]
        cleared = ~sum(nbr_bits)
        for code in range(2**n):
            base = code & cleared
            single = sum(
                outcomes[base | bit, i] - outcomes[base, i]
                for bit in nbr_bits
                if code & bit
            )
            assert outcomes[code, i] - outcomes[base, i] == pytest.approx(
                single, abs=1e-9
            )


@pytest.mark.parametrize(
    ("source", "target"),
    [(s, t) for s in ModelKind for t in ModelKind if s.is_submodel_of(t)],
    ids=str,
)
def test_submodels_upcast_to_every_larger_kind(
    source: ModelKind, target: ModelKind
) -> None:
    cube = full_cube(5)
    for seed in range(2):
        g = random_graph(5, seed)
        params = sample_params(source, g, _INTERACTING, seed)

        lifted = upcast(params, target, g)

        assert lifted.kind is target
        assert np.allclose(
            potential_outcomes(lifted, g, cube), potential_outcomes(params, g, cube)
        )


@pytest.mark.parametrize(
    ("source", "target"),
    [(s, t) for s in ModelKind for t in ModelKind if not s.is_submodel_of(t)],
    ids=str,
)
def test_upcast_rejects_kinds_outside_the_lattice_order(
    source: ModelKind, target: ModelKind
) -> None:
    g = random_graph(4, 0)
    params = sample_params(source, g, _INTERACTING, 0)

    with pytest.raises(NetlueError) as exc:
        upcast(params, target, g)

    assert exc.value.error_code is ErrorCode.INVALID_PARAMS
