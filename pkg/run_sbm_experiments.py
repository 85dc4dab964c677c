import logging
import os
from pathlib import Path

from hitmix.bench.simulation import run_simulation, write_simulation_outputs
from hitmix.constants import LOG_FORMAT, OUT_BLOCK_BUDGET
from hitmix.schemas.mixture_data import HitmixConfig
from hitmix.schemas.sbm_data import SimulationSpec

logging.basicConfig(level=logging.INFO, format=LOG_FORMAT)
logger = logging.getLogger(__name__)

OUTPUT_DIR = Path("results/sbm")

MC_SAMPLES = 50
MASTER_SEED = 20240521
WORKERS = os.cpu_count() or 1
SAMPLES_PER_VERTEX = 25

# Desk-scale versions of the three SBM sweeps
SIMULATIONS = {
    "blocks": dict(
        sweep="n_blocks",
        values=[2, 3, 4, 5, 6],
        block_size=200,
        p_in=0.15,
        p_out=OUT_BLOCK_BUDGET,
        hitting_set_size=20,
    ),
    "p_in": dict(
        sweep="p_in",
        values=[0.05, 0.06, 0.08, 0.10, 0.12, 0.15, 0.20],
        n_blocks=2,
        block_size=100,
        p_out=0.05,
        hitting_set_size=10,
    ),
    "hitting_set": dict(
        sweep="hitting_set_size",
        values=[1, 5, 10, 25, 50],
        n_blocks=2,
        block_size=100,
        p_in=0.15,
        p_out=0.05,
    ),
}


def run_experiments():
    logger.info(f"Starting SBM experiments with {MC_SAMPLES} Monte Carlo samples per condition")

    for name, settings in SIMULATIONS.items():
        spec = SimulationSpec(
            **settings,
            mc_samples=MC_SAMPLES,
            seed=MASTER_SEED,
            workers=WORKERS,
            hitmix=HitmixConfig(m=SAMPLES_PER_VERTEX, g_candidates=[2]),
        )
        logger.info(f"[RUN] {name}: {spec.sweep} over {spec.values}")
        summary = run_simulation(spec)
        runs_path, summary_path = write_simulation_outputs(summary, OUTPUT_DIR / name)

        for condition in summary.conditions:
            logger.info(
                f"{name} {spec.sweep}={condition.condition}: "
                f"ARI {condition.ari_mean:.3f} ({condition.ari_p5:.3f}, {condition.ari_p95:.3f}) "
                f"F1 {condition.f1_mean:.3f} ({condition.f1_p5:.3f}, {condition.f1_p95:.3f})"
            )
        logger.info(f"[DONE] {name}: {runs_path}, {summary_path}")


if __name__ == "__main__":
    run_experiments()
