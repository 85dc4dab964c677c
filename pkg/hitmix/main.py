import json
import logging
import secrets
import sys
import time
from pathlib import Path
from typing import Annotated, Optional

import click
import typer
from pydantic import ValidationError

from hitmix.bench.simulation import load_simulation_spec, parse_clusters, run_simulation, write_simulation_outputs
from hitmix.constants import (
    CG_REL_TOL,
    EM_MAX_ITERS,
    EM_REL_TOL,
    LOG_FORMAT,
    MEMBERSHIP_FILE,
    MEMBERSHIP_SIDECAR,
    MOMENT_ORDER,
    MOMENTS_FILE,
    RELABEL_EDGES_FILE,
    RELABEL_MAPPING_FILE,
    RELABEL_SEEDS_FILE,
    SAMPLES_PER_VERTEX,
    TAU,
)
from hitmix.errors import ConfigError, HitmixError
from hitmix.graph.core import load_edge_list, load_seed_file, make_seed_set
from hitmix.graph.relabel import relabel_edge_list, relabel_seeds
from hitmix.io.inputs import read_label_table
from hitmix.io.outputs import write_json, write_table, write_text_atomic
from hitmix.metrics.evaluation import adjusted_rand_index, precision_recall_f1
from hitmix.mixture.hitmix import hitmix
from hitmix.moments.hitting_moments import compute_moments
from hitmix.schemas.graph_data import Graph, SeedSet
from hitmix.schemas.mixture_data import HitmixConfig
from hitmix.schemas.run_config import RunConfig
from hitmix.schemas.sbm_data import SimulationSpec
from hitmix.schemas.solver_data import CgConfig

logger = logging.getLogger(__name__)

app = typer.Typer(add_completion=False, no_args_is_help=True, help="Seed-set expansion by hitting-time moments.")


def _validated(model, **fields):
    try:
        return model(**fields)
    except ValidationError as e:
        raise click.UsageError(str(e))


def _resolve_seed(seed: int | None) -> int:
    if seed is None:
        seed = secrets.randbelow(2**31)
        typer.echo(f"No --seed given; using seed {seed}", err=True)
    return seed


def _load_inputs(config: RunConfig) -> tuple[Graph, SeedSet]:
    with open(config.graph, "rb") as handle:
        graph = load_edge_list(handle)
    with open(config.seeds, "rb") as handle:
        seeds = make_seed_set(load_seed_file(handle), graph.n_vertices)
    return graph, seeds


@app.command()
def moments(
    graph: Annotated[Path, typer.Option("--graph", help="Edge list, one 'u v' pair per line")],
    seeds: Annotated[Path, typer.Option("--seeds", help="Seed vertex ids, one per line")],
    out: Annotated[Path, typer.Option("--out", help="Output directory")] = Path("."),
    order: Annotated[int, typer.Option("--order", help="Highest raw moment to compute")] = MOMENT_ORDER,
    cg_tol: Annotated[float, typer.Option("--cg-tol")] = CG_REL_TOL,
):
    """Hitting-time mean and variance for every non-seed vertex."""
    config = _validated(
        RunConfig, subcommand="moments", graph=graph, seeds=seeds, out=out,
        overrides={"order": order, "cg_tol": cg_tol},
    )
    if order < 2:
        raise click.UsageError(f"--order must be at least 2, got {order}")
    cg_cfg = _validated(CgConfig, rel_tol=cg_tol)

    start_time = time.perf_counter()
    loaded_graph, seed_set = _load_inputs(config)
    table = compute_moments(loaded_graph, seed_set, order=order, cfg=cg_cfg)
    for m, stats in enumerate(table.cg_stats, start=1):
        logger.info(f"Moment {m}: {stats.iterations} CG iterations, relative residual {stats.final_rel_residual:.3e}")
    write_table(table.to_frame(), config.out / MOMENTS_FILE)
    logger.info(f"moments finished in {int((time.perf_counter() - start_time) * 1000)}ms")


@app.command()
def expand(
    graph: Annotated[Path, typer.Option("--graph", help="Edge list, one 'u v' pair per line")],
    seeds: Annotated[Path, typer.Option("--seeds", help="Seed vertex ids, one per line")],
    out: Annotated[Path, typer.Option("--out", help="Output directory")] = Path("."),
    tau: Annotated[float, typer.Option("--tau")] = TAU,
    samples_per_vertex: Annotated[int, typer.Option("--samples-per-vertex")] = SAMPLES_PER_VERTEX,
    clusters: Annotated[str, typer.Option("--clusters", help="Comma list of g values or 'auto'")] = "auto",
    cg_tol: Annotated[float, typer.Option("--cg-tol")] = CG_REL_TOL,
    em_tol: Annotated[float, typer.Option("--em-tol")] = EM_REL_TOL,
    em_max_iters: Annotated[int, typer.Option("--em-max-iters")] = EM_MAX_ITERS,
    bic_n: Annotated[str, typer.Option("--bic-n", help="'observations' or 'vertices'")] = "observations",
    seed: Annotated[Optional[int], typer.Option("--seed")] = None,
    workers: Annotated[int, typer.Option("--workers", help="Threads for the per-g mixture fits")] = 1,
):
    """Goal-set membership probabilities and labels for every non-seed vertex."""
    seed = _resolve_seed(seed)
    try:
        g_candidates = parse_clusters(clusters)
    except ConfigError as e:
        raise click.UsageError(str(e))
    config = _validated(
        RunConfig, subcommand="expand", graph=graph, seeds=seeds, out=out, seed=seed, workers=workers,
        overrides={"tau": tau, "clusters": g_candidates},
    )
    cfg = _validated(
        HitmixConfig,
        m=samples_per_vertex,
        g_candidates=g_candidates,
        tau=tau,
        em_max_iters=em_max_iters,
        em_rel_tol=em_tol,
        rng_seed=seed,
        bic_n=bic_n,
        fit_workers=workers,
    )
    cg_cfg = _validated(CgConfig, rel_tol=cg_tol)

    start_time = time.perf_counter()
    loaded_graph, seed_set = _load_inputs(config)
    result = hitmix(loaded_graph, seed_set, cfg, cg_cfg)

    write_table(result.to_frame(), config.out / MEMBERSHIP_FILE)
    write_json({**result.summary(), "seed": seed, "samples_per_vertex": cfg.m}, config.out / MEMBERSHIP_SIDECAR)
    logger.info(f"expand finished in {int((time.perf_counter() - start_time) * 1000)}ms")


@app.command("sbm-sim")
def sbm_sim(
    config_path: Annotated[Path, typer.Option("--config", help="key = value experiment file")],
    out: Annotated[Path, typer.Option("--out", help="Output directory")] = Path("."),
    seed: Annotated[Optional[int], typer.Option("--seed")] = None,
    workers: Annotated[Optional[int], typer.Option("--workers")] = None,
):
    """Monte Carlo SBM experiment: per-run and summary CSVs."""
    if not config_path.exists():
        raise click.UsageError(f"--config file not found: {config_path}")
    with open(config_path, "rb") as handle:
        spec = load_simulation_spec(handle)

    if seed is None and "seed" not in spec.model_fields_set:
        seed = _resolve_seed(None)
    overrides = {key: value for key, value in (("seed", seed), ("workers", workers)) if value is not None}
    spec = _validated(SimulationSpec, **{**spec.model_dump(), **overrides})
    config = _validated(RunConfig, subcommand="sbm-sim", config=config_path, out=out, seed=spec.seed, workers=spec.workers)

    summary = run_simulation(spec)
    write_simulation_outputs(summary, config.out)


@app.command("eval")
def evaluate(
    predicted: Annotated[Path, typer.Option("--predicted", help="TSV with vertex_id and label columns")],
    truth: Annotated[Path, typer.Option("--truth", help="TSV with vertex_id and label columns")],
):
    """ARI, precision, recall and F1 of predicted labels against true labels (label 1 = goal)."""
    for name, path in (("--predicted", predicted), ("--truth", truth)):
        if not path.exists():
            raise click.UsageError(f"{name} file not found: {path}")
    predicted_labels = read_label_table(predicted)
    true_labels = read_label_table(truth)

    common = predicted_labels.index.intersection(true_labels.index).sort_values()
    if len(common) < len(predicted_labels) or len(common) < len(true_labels):
        logger.warning(f"Scoring the {len(common)} vertices present in both files")
    pred = predicted_labels.loc[common]
    true = true_labels.loc[common]

    ari = adjusted_rand_index(true.to_numpy(), pred.to_numpy())
    universe = int(common.max()) + 1
    precision, recall, f1 = precision_recall_f1(
        common[pred.to_numpy() == 1].tolist(), common[true.to_numpy() == 1].tolist(), universe
    )
    typer.echo(json.dumps({"ari": ari, "precision": precision, "recall": recall, "f1": f1, "n_vertices": len(common)}))


@app.command()
def relabel(
    graph: Annotated[Path, typer.Option("--graph", help="Edge list with arbitrary vertex names")],
    out: Annotated[Path, typer.Option("--out", help="Output directory")] = Path("."),
    seeds: Annotated[Optional[Path], typer.Option("--seeds", help="Seed names, one per line")] = None,
):
    """Rewrite an edge list with dense integer ids and emit the name-to-id mapping."""
    config = _validated(RunConfig, subcommand="relabel", graph=graph, seeds=seeds, out=out)
    with open(config.graph, "rb") as handle:
        edge_lines, mapping = relabel_edge_list(handle)
    write_text_atomic(config.out / RELABEL_EDGES_FILE, "\n".join(edge_lines) + "\n")
    mapping_lines = ["name\tvertex_id"] + [f"{name}\t{vertex}" for name, vertex in mapping.items()]
    write_text_atomic(config.out / RELABEL_MAPPING_FILE, "\n".join(mapping_lines) + "\n")
    if config.seeds is not None:
        with open(config.seeds, "rb") as handle:
            seed_ids = relabel_seeds(handle, mapping)
        write_text_atomic(config.out / RELABEL_SEEDS_FILE, "\n".join(str(v) for v in seed_ids) + "\n")


def run(argv: list[str] | None = None) -> int:
    """Entry point: 0 on success, 1 on usage errors, 2 on runtime errors."""
    logging.basicConfig(level=logging.INFO, format=LOG_FORMAT, stream=sys.stderr)
    command = typer.main.get_command(app)
    try:
        status = command.main(args=argv, prog_name="hitmix", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return 1
    except click.exceptions.Abort:
        return 1
    except ConfigError as e:
        logger.error(f"Invalid configuration: {e}")
        return 1
    except (HitmixError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return 2
    return status if isinstance(status, int) else 0


if __name__ == "__main__":
    sys.exit(run())
