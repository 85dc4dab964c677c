import io
import math

import numpy as np
import pandas as pd
import pytest

from hitmix.bench.sbm import sample_hitting_set, sample_sbm
from hitmix.bench.simulation import load_simulation_spec, parse_clusters, run_simulation, write_simulation_outputs
from hitmix.constants import OUT_BLOCK_BUDGET
from hitmix.errors import ConfigError, SeedSetError
from hitmix.mixture.hitmix import hitmix
from hitmix.schemas.mixture_data import HitmixConfig
from hitmix.schemas.sbm_data import SbmConfig, SimulationSpec


def test_zero_probabilities_give_empty_graph():
    graph, labels = sample_sbm(SbmConfig(n_blocks=3, block_size=4, p_in=0.0, p_out=0.0), np.random.default_rng(0))
    assert graph.n_vertices == 12
    assert graph.n_edges == 0
    assert labels.tolist() == [0] * 4 + [1] * 4 + [2] * 4


def test_full_in_block_probability_gives_cliques():
    graph, labels = sample_sbm(SbmConfig(n_blocks=2, block_size=5, p_in=1.0, p_out=0.0), np.random.default_rng(0))
    assert graph.n_edges == 2 * 10
    assert graph.degrees.tolist() == [4] * 10
    dense = graph.adjacency.toarray()
    assert np.all(dense[:5, 5:] == 0)
    assert np.all(dense.diagonal() == 0)


def test_sbm_is_reproducible():
    cfg = SbmConfig(n_blocks=2, block_size=30, p_in=0.3, p_out=0.05)
    first, _ = sample_sbm(cfg, np.random.default_rng([1, 2]))
    second, _ = sample_sbm(cfg, np.random.default_rng([1, 2]))
    assert (first.adjacency != second.adjacency).nnz == 0


def test_sbm_edge_density_matches_probabilities():
    cfg = SbmConfig(n_blocks=2, block_size=200, p_in=0.1, p_out=0.02)
    graph, _ = sample_sbm(cfg, np.random.default_rng(5))
    expected = 2 * (200 * 199 / 2) * 0.1 + 200 * 200 * 0.02
    assert graph.n_edges == pytest.approx(expected, rel=0.05)


def test_hitting_set_comes_from_goal_block():
    labels = np.repeat([0, 1], 10)
    seeds = sample_hitting_set(labels, 0, 4, np.random.default_rng(3))
    assert len(seeds.members) == 4
    assert all(labels[v] == 0 for v in seeds.members)
    with pytest.raises(SeedSetError):
        sample_hitting_set(labels, 0, 11, np.random.default_rng(3))


def test_parse_clusters():
    assert parse_clusters("auto") == [2, 3, 4, 5]
    assert parse_clusters("2, 3") == [2, 3]
    with pytest.raises(ConfigError):
        parse_clusters("two")


def test_load_simulation_spec():
    text = """
    # p_in sweep
    sweep = p_in
    values = 0.1, 0.2
    block_size = 50
    mc_samples = 3
    seed = 11
    samples_per_vertex = 10
    tau = 0.6
    """
    spec = load_simulation_spec(io.StringIO(text))
    assert spec.sweep == "p_in"
    assert spec.values == [0.1, 0.2]
    assert spec.block_size == 50
    assert spec.seed == 11
    assert spec.hitmix.m == 10
    assert spec.hitmix.tau == 0.6
    assert spec.hitmix.g_candidates == [2]


@pytest.mark.parametrize(
    "text",
    ["sweep = p_in\nvalues = 0.1\nbogus = 1\n", "sweep = p_in\nvalues\n", "sweep = n_blocks\nvalues = 1.5\n"],
)
def test_load_simulation_spec_rejects_bad_files(text):
    with pytest.raises(ConfigError):
        load_simulation_spec(io.StringIO(text))


def test_n_blocks_condition_spreads_out_block_budget():
    spec = SimulationSpec(sweep="n_blocks", values=[2, 5], p_out=0.05)
    cfg, size = spec.condition(5)
    assert cfg.n_blocks == 5
    assert cfg.p_out == pytest.approx(0.0125)
    assert size == spec.hitting_set_size


def _small_spec(**overrides):
    fields = dict(
        sweep="p_in",
        values=[0.4],
        n_blocks=2,
        block_size=30,
        p_out=0.02,
        hitting_set_size=5,
        mc_samples=3,
        seed=7,
        hitmix=HitmixConfig(m=10, g_candidates=[2]),
    )
    return SimulationSpec(**{**fields, **overrides})


def test_run_simulation_small_sweep():
    summary = run_simulation(_small_spec())
    assert summary.sweep == "p_in"
    assert len(summary.runs) == 3
    assert [r.run for r in summary.runs] == [0, 1, 2]
    condition = summary.conditions[0]
    assert condition.n_runs == 3
    finished = [r for r in summary.runs if not r.failed]
    assert len(finished) + condition.failures == 3
    for record in finished:
        assert -1.0 <= record.ari <= 1.0
        assert 0.0 <= record.f1 <= 1.0


def test_run_simulation_is_reproducible():
    first = run_simulation(_small_spec())
    second = run_simulation(_small_spec())
    np.testing.assert_array_equal([(r.ari, r.f1) for r in first.runs], [(r.ari, r.f1) for r in second.runs])


def test_run_simulation_worker_count_does_not_change_results():
    serial = run_simulation(_small_spec(mc_samples=2))
    parallel = run_simulation(_small_spec(mc_samples=2, workers=2))
    np.testing.assert_array_equal([(r.ari, r.f1) for r in serial.runs], [(r.ari, r.f1) for r in parallel.runs])


def test_write_simulation_outputs(tmp_path):
    summary = run_simulation(_small_spec(mc_samples=2))
    runs_path, summary_path = write_simulation_outputs(summary, tmp_path)
    runs = pd.read_csv(runs_path)
    table = pd.read_csv(summary_path)
    assert list(runs.columns) == ["condition", "run", "ari", "f1"]
    assert list(table.columns) == ["condition", "ari_mean", "ari_p5", "ari_p95", "f1_mean", "f1_p5", "f1_p95"]
    assert len(runs) == 2 and len(table) == 1


def test_simulation_csvs_are_byte_identical_across_reruns(tmp_path):
    spec = _small_spec(values=[0.3, 0.4], mc_samples=2, workers=2)
    first = write_simulation_outputs(run_simulation(spec), tmp_path / "first")
    second = write_simulation_outputs(run_simulation(spec), tmp_path / "second")
    for left, right in zip(first, second):
        assert left.read_bytes() == right.read_bytes()


def test_run_records_carry_em_checks():
    summary = run_simulation(_small_spec(mc_samples=2))
    for record in summary.runs:
        assert record.failed or (record.em_monotone and record.rows_normalized)


def _scaled_spec(**fields):
    """Scaled Monte Carlo settings: 50 runs per condition, two components, 25 pseudo-samples per vertex."""
    return SimulationSpec(
        mc_samples=50,
        seed=20240521,
        workers=4,
        hitmix=HitmixConfig(m=25, g_candidates=[2]),
        **fields,
    )


def _condition_means(summary):
    finished = [r for r in summary.runs if not r.failed]
    assert finished
    assert all(r.em_monotone for r in finished)
    assert all(r.rows_normalized for r in finished)
    means = [c.ari_mean for c in summary.conditions]
    assert not any(math.isnan(x) for x in means)
    return means


@pytest.mark.slow
def test_ari_falls_as_in_block_probability_drops():
    spec = _scaled_spec(sweep="p_in", values=[0.20, 0.12, 0.06], block_size=100, p_out=0.05, hitting_set_size=10)
    strong, middle, weak = _condition_means(run_simulation(spec))
    assert strong > middle > weak
    assert weak <= 0.15


@pytest.mark.slow
def test_ari_falls_as_hitting_set_shrinks():
    spec = _scaled_spec(sweep="hitting_set_size", values=[50, 25, 10, 5, 1], block_size=100, p_in=0.15, p_out=0.05)
    means = _condition_means(run_simulation(spec))
    for larger, smaller in zip(means, means[1:]):
        assert smaller <= larger + 0.05
    assert means[-1] <= 0.2
    assert means[0] > means[-1] + 0.3


@pytest.mark.slow
def test_more_blocks_with_fixed_out_budget():
    spec = _scaled_spec(
        sweep="n_blocks",
        values=[2, 4, 6],
        block_size=200,
        p_in=0.15,
        p_out=OUT_BLOCK_BUDGET,
        hitting_set_size=20,
    )
    two, four, six = _condition_means(run_simulation(spec))
    # Spreading the fixed out-block budget over more blocks sharpens the goal block
    assert six > two + 0.2
    assert four > two
    assert six >= 0.25


@pytest.mark.slow
def test_hitmix_handles_a_large_sbm():
    rng = np.random.default_rng(0)
    graph, labels = sample_sbm(SbmConfig(n_blocks=2, block_size=2500, p_in=0.01, p_out=0.001), rng)
    seeds = sample_hitting_set(labels, 0, 50, rng)
    result = hitmix(graph, seeds, HitmixConfig(g_candidates=[2], rng_seed=1))
    assert len(result.vertices) == 5000 - 50
    assert np.all(np.isfinite(result.posterior))
