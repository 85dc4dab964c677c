import logging
import math
import time
from multiprocessing import Pool
from pathlib import Path
from typing import Iterable

import numpy as np
import pandas as pd
from pydantic import ValidationError

from hitmix.bench.sbm import sample_hitting_set, sample_sbm
from hitmix.constants import (
    EM_MONOTONE_SLACK,
    G_CANDIDATES,
    REPORT_PERCENTILES,
    ROW_SUM_TOL,
    RUNS_FILE,
    SBM_G_CANDIDATES,
    SBM_GOAL_BLOCK,
    SUMMARY_FILE,
)
from hitmix.errors import ConfigError, GraphFormatError
from hitmix.io.inputs import numbered_lines
from hitmix.io.outputs import write_table
from hitmix.metrics.evaluation import adjusted_rand_index, percentiles, precision_recall_f1
from hitmix.mixture.hitmix import hitmix
from hitmix.schemas.mixture_data import HitmixConfig
from hitmix.schemas.sbm_data import ConditionSummary, McSummary, RunRecord, SimulationSpec

# Set up logging
logger = logging.getLogger(__name__)

SPEC_KEYS = {
    "sweep", "values", "n_blocks", "block_size", "p_in", "p_out",
    "hitting_set_size", "mc_samples", "seed", "workers",
}
HITMIX_KEYS = {
    "samples_per_vertex": "m",
    "clusters": "g_candidates",
    "tau": "tau",
    "em_tol": "em_rel_tol",
    "em_max_iters": "em_max_iters",
}


def parse_clusters(text: str) -> list[int]:
    if text.strip().lower() == "auto":
        return list(G_CANDIDATES)
    try:
        return [int(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise ConfigError(f"clusters must be 'auto' or a comma list of integers, got {text!r}")


def load_simulation_spec(lines: Iterable[str | bytes]) -> SimulationSpec:
    """Parse a 'key = value' experiment file; '#' starts a comment."""
    try:
        return _parse_simulation_spec(lines)
    except GraphFormatError as e:
        raise ConfigError(str(e))


def _parse_simulation_spec(lines: Iterable[str | bytes]) -> SimulationSpec:
    fields: dict[str, object] = {}
    hitmix_fields: dict[str, object] = {}
    for line_number, line in numbered_lines(lines):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {line_number}: expected 'key = value', got {stripped!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key == "values":
            fields[key] = [token.strip() for token in value.split(",") if token.strip()]
        elif key == "clusters":
            hitmix_fields["g_candidates"] = parse_clusters(value)
        elif key in HITMIX_KEYS:
            hitmix_fields[HITMIX_KEYS[key]] = value
        elif key in SPEC_KEYS:
            fields[key] = value
        else:
            raise ConfigError(f"line {line_number}: unknown key {key!r}")

    try:
        if hitmix_fields:
            fields["hitmix"] = HitmixConfig(**{"g_candidates": SBM_G_CANDIDATES, **hitmix_fields})
        return SimulationSpec(**fields)
    except ValidationError as e:
        raise ConfigError(f"invalid simulation config: {e}")


def _run_one(task: tuple[SimulationSpec, int, float, int]) -> RunRecord:
    spec, condition_index, value, run_index = task
    rng = np.random.default_rng([spec.seed, condition_index, run_index])
    try:
        sbm_cfg, size = spec.condition(value)
        graph, labels = sample_sbm(sbm_cfg, rng)
        seeds = sample_hitting_set(labels, SBM_GOAL_BLOCK, size, rng)
        cfg = spec.hitmix.model_copy(update={"rng_seed": int(rng.integers(2**31))})
        result = hitmix(graph, seeds, cfg)

        truth = labels[result.vertices] == SBM_GOAL_BLOCK
        ari = adjusted_rand_index(truth.astype(int), result.labels.astype(int))
        _, _, f1 = precision_recall_f1(
            result.vertices[result.labels].tolist(),
            result.vertices[truth].tolist(),
            sbm_cfg.n_vertices,
        )
        trace = np.asarray(result.fit.log_likelihood_trace)
        return RunRecord(
            condition=value,
            run=run_index,
            ari=ari,
            f1=f1,
            unreachable=len(result.unreachable),
            em_monotone=bool(np.all(np.diff(trace) >= -EM_MONOTONE_SLACK)),
            rows_normalized=bool(np.all(np.abs(result.fit.responsibilities.sum(axis=1) - 1.0) <= ROW_SUM_TOL)),
        )
    except Exception as e:
        logger.warning(f"[FAILED] condition {value} run {run_index}: {e}")
        return RunRecord(condition=value, run=run_index, ari=math.nan, f1=math.nan, failed=True, error=str(e))


def _summarize(value: float, records: list[RunRecord]) -> ConditionSummary:
    finished = [r for r in records if not r.failed]
    if finished:
        ari = [r.ari for r in finished]
        f1 = [r.f1 for r in finished]
        ari_p5, ari_p95 = percentiles(ari, REPORT_PERCENTILES)
        f1_p5, f1_p95 = percentiles(f1, REPORT_PERCENTILES)
        ari_mean, f1_mean = float(np.mean(ari)), float(np.mean(f1))
    else:
        ari_mean = ari_p5 = ari_p95 = f1_mean = f1_p5 = f1_p95 = math.nan
    return ConditionSummary(
        condition=value,
        ari_mean=ari_mean,
        ari_p5=ari_p5,
        ari_p95=ari_p95,
        f1_mean=f1_mean,
        f1_p5=f1_p5,
        f1_p95=f1_p95,
        failures=len(records) - len(finished),
        unreachable_runs=sum(1 for r in finished if r.unreachable),
        n_runs=len(records),
    )


def run_simulation(spec: SimulationSpec) -> McSummary:
    """Monte Carlo sweep: every (condition, run) pair gets its own seeded stream."""
    tasks = [
        (spec, condition_index, float(value), run_index)
        for condition_index, value in enumerate(spec.values)
        for run_index in range(spec.mc_samples)
    ]
    logger.info(f"Running {len(tasks)} SBM runs over {spec.sweep} = {spec.values} with {spec.workers} workers")

    start_time = time.perf_counter()
    if spec.workers > 1:
        with Pool(processes=spec.workers) as pool:
            records = pool.map(_run_one, tasks)
    else:
        records = [_run_one(task) for task in tasks]

    conditions = []
    for condition_index, value in enumerate(spec.values):
        chunk = records[condition_index * spec.mc_samples:(condition_index + 1) * spec.mc_samples]
        summary = _summarize(float(value), chunk)
        logger.info(
            f"{spec.sweep}={value}: ARI {summary.ari_mean:.3f} ({summary.ari_p5:.3f}, {summary.ari_p95:.3f}), "
            f"F1 {summary.f1_mean:.3f}, failures {summary.failures}, runs with unreachable vertices {summary.unreachable_runs}"
        )
        conditions.append(summary)

    elapsed_ms = int((time.perf_counter() - start_time) * 1000)
    logger.info(f"Simulation finished in {elapsed_ms}ms")
    return McSummary(sweep=spec.sweep, conditions=conditions, runs=records)


def runs_frame(summary: McSummary) -> pd.DataFrame:
    return pd.DataFrame(
        [{"condition": r.condition, "run": r.run, "ari": r.ari, "f1": r.f1} for r in summary.runs],
        columns=["condition", "run", "ari", "f1"],
    )


def summary_frame(summary: McSummary) -> pd.DataFrame:
    columns = ["condition", "ari_mean", "ari_p5", "ari_p95", "f1_mean", "f1_p5", "f1_p95"]
    return pd.DataFrame([c.model_dump(include=set(columns)) for c in summary.conditions], columns=columns)


def write_simulation_outputs(summary: McSummary, out_dir: Path) -> tuple[Path, Path]:
    runs_path = write_table(runs_frame(summary), Path(out_dir) / RUNS_FILE, sep=",")
    summary_path = write_table(summary_frame(summary), Path(out_dir) / SUMMARY_FILE, sep=",")
    return runs_path, summary_path
