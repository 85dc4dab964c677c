import math

import numpy as np
import pytest

from hitmix.errors import DimensionError, SolverError
from hitmix.graph.core import build_nonseed_index, graph_from_edges, make_seed_set, reachable_from
from hitmix.schemas.solver_data import CgConfig
from hitmix.solver.cg import conjugate_gradient
from hitmix.solver.operator import RestrictedOperator, apply_restricted_operator


def _operator(graph, seeds):
    index = build_nonseed_index(graph, seeds)
    report = reachable_from(graph, seeds)
    return RestrictedOperator(graph, index.restrict(report.reachable))


def test_apply_on_path(path3):
    op = _operator(*path3)
    y = apply_restricted_operator(op, np.array([1.0, 0.0]))
    assert np.allclose(y, [1.0, -1.0 / math.sqrt(2.0)], rtol=0, atol=1e-15)


def test_apply_rejects_wrong_length(path3):
    op = _operator(*path3)
    with pytest.raises(DimensionError):
        op.apply(np.ones(3))


def test_operator_is_symmetric(er_graph):
    op = _operator(er_graph, make_seed_set([0, 1, 2], er_graph.n_vertices))
    rng = np.random.default_rng(3)
    x, y = rng.standard_normal((2, op.shape[0]))
    assert abs(x @ op.apply(y) - y @ op.apply(x)) <= 1e-12 * np.linalg.norm(x) * np.linalg.norm(y)


def test_zero_degree_vertex_is_rejected():
    graph = graph_from_edges(3, [(0, 1)])
    seeds = make_seed_set([0], 3)
    with pytest.raises(DimensionError):
        RestrictedOperator(graph, build_nonseed_index(graph, seeds))


def test_cg_solves_path_system(path3):
    op = _operator(*path3)
    x, stats = conjugate_gradient(op, np.array([1.0, math.sqrt(2.0)]))
    assert np.allclose(x, [4.0, 3.0 * math.sqrt(2.0)], rtol=1e-10, atol=0)
    assert stats.converged
    assert stats.iterations <= 2


def test_cg_matches_dense_solve(er_graph):
    op = _operator(er_graph, make_seed_set([5], er_graph.n_vertices))
    b = np.random.default_rng(11).standard_normal(op.shape[0])
    x, stats = conjugate_gradient(op, b, CgConfig(rel_tol=1e-12))
    dense = np.eye(op.shape[0]) - op._normalized_block.toarray()
    assert stats.final_rel_residual <= 1e-12
    assert np.allclose(x, np.linalg.solve(dense, b), rtol=1e-8, atol=1e-10)


def test_cg_random_start_reaches_same_solution(path3):
    op = _operator(*path3)
    x, stats = conjugate_gradient(op, np.array([1.0, math.sqrt(2.0)]), CgConfig(start="random", seed=4))
    assert stats.converged
    assert np.allclose(x, [4.0, 3.0 * math.sqrt(2.0)], rtol=1e-9)


def test_cg_zero_rhs_returns_zero(path3):
    op = _operator(*path3)
    x, stats = conjugate_gradient(op, np.zeros(2))
    assert np.array_equal(x, np.zeros(2))
    assert stats.iterations == 0 and stats.converged


def test_cg_rejects_non_finite_rhs(path3):
    op = _operator(*path3)
    with pytest.raises(SolverError):
        conjugate_gradient(op, np.array([1.0, np.nan]))


def test_cg_iteration_cap_reports_non_convergence(er_graph):
    op = _operator(er_graph, make_seed_set([0], er_graph.n_vertices))
    _, stats = conjugate_gradient(op, np.ones(op.shape[0]), CgConfig(max_iters=1))
    assert stats.iterations == 1
    assert not stats.converged
    assert stats.final_rel_residual <= stats.initial_rel_residual


def test_unreachable_block_breaks_down():
    # 3 - 4 is cut off from the seed, so the unrestricted operator is singular there
    graph = graph_from_edges(5, [(0, 1), (1, 2), (3, 4)])
    seeds = make_seed_set([0], 5)
    op = RestrictedOperator(graph, build_nonseed_index(graph, seeds))
    b = np.array([0.0, 0.0, 1.0, 1.0])
    with pytest.raises(SolverError) as excinfo:
        conjugate_gradient(op, b)
    assert excinfo.value.stats is not None


def test_max_iters_default_scales_with_size():
    cfg = CgConfig()
    assert cfg.resolve_max_iters(10) == 1000
    assert cfg.resolve_max_iters(500) == 5000
    with pytest.raises(ValueError):
        CgConfig(rel_tol=1.5)
