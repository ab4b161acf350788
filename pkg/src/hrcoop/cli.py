"""Command line entry points.

``plan`` enumerates the cooperation paths of a graph, ``train`` builds
gesture models (from trial CSV directories or the bundled synthetic
templates), ``run`` replays a scripted scenario, ``metrics`` re-derives the
timing split from a stored trace, and ``serve`` starts the HTTP service.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .andor import GraphError, generate_all_paths, load_graph
from .assets import asset_path


@click.group()
def main():
    """Flexible human-robot cooperation toolkit."""


@main.command()
@click.option("--graph", "graph_ref", required=True, help="graph document (path or bundled asset name)")
@click.option("--as-json", is_flag=True, help="emit the path set as JSON")
def plan(graph_ref: str, as_json: bool):
    """Enumerate every cooperation path with its initial cost."""
    try:
        path = Path(graph_ref) if Path(graph_ref).exists() else asset_path(graph_ref)
        doc = json.loads(path.read_text())
        graph = load_graph(doc)
    except (GraphError, OSError, json.JSONDecodeError, FileNotFoundError) as exc:
        raise click.ClickException(f"cannot load graph: {exc}")
    paths = generate_all_paths(graph)
    for tag in doc.get("path_tags", []):
        for p in paths:
            if set(p.arc_ids) == set(tag.get("arcs", [])):
                p.color_tag = tag.get("tag")
    if as_json:
        click.echo(json.dumps([p.to_dict() for p in paths], indent=2))
        return
    click.echo(f"graph: {len(graph.nodes)} nodes, {len(graph.arcs)} hyper-arcs")
    click.echo(f"{'id':>3}  {'tag':<8} {'cost':>7}  {'nodes':>5}  {'arcs':>4}  actions")
    for p in sorted(paths, key=lambda q: (q.cost, q.id)):
        actions = []
        for arc_id in p.arc_ids:
            actions += [a.name for a in graph.arcs[arc_id].actions]
        shown = ", ".join(actions[:4]) + (", ..." if len(actions) > 4 else "")
        click.echo(
            f"{p.id:>3}  {p.color_tag or '-':<8} {p.cost:>7.2f}  "
            f"{len(p.node_ids):>5}  {len(p.arc_ids):>4}  {shown}"
        )


@main.command()
@click.option("--out", "out_dir", required=True, type=click.Path(path_type=Path))
@click.option("--trials", "trials_dir", type=click.Path(exists=True, path_type=Path),
              help="directory of per-gesture subdirectories of trial CSV files (t,ax,ay,az)")
@click.option("--synthetic", is_flag=True,
              help="train the four built-in desk gestures from synthetic trials")
@click.option("--trial-count", default=10, show_default=True)
@click.option("--noise", default=0.25, show_default=True, help="training noise, m/s^2")
@click.option("--seed", default=0, show_default=True)
def train(out_dir: Path, trials_dir: Path | None, synthetic: bool,
          trial_count: int, noise: float, seed: int):
    """Train gesture models and write one archive per gesture."""
    from .gestures import (
        TEMPLATE_NAMES,
        TrainingConfig,
        TrainingError,
        extract_features,
        read_stream_csv,
        save_model,
        template_stream,
        train_model,
    )

    jobs: list[tuple[str, list]] = []
    if synthetic:
        for name in TEMPLATE_NAMES:
            streams = [
                template_stream(name, noise, seed * 10_000 + 1000 + i)
                for i in range(trial_count)
            ]
            jobs.append((name, streams))
    elif trials_dir is not None:
        for sub in sorted(p for p in trials_dir.iterdir() if p.is_dir()):
            files = sorted(sub.glob("*.csv"))
            if not files:
                continue
            jobs.append((sub.name, [read_stream_csv(f) for f in files]))
    else:
        raise click.ClickException("pass --synthetic or --trials DIR")
    if not jobs:
        raise click.ClickException("no training data found")

    out_dir.mkdir(parents=True, exist_ok=True)
    for i, (name, streams) in enumerate(jobs):
        try:
            trials = [extract_features(s) for s in streams]
            model = train_model(name, trials, TrainingConfig(seed=seed))
        except TrainingError as exc:
            raise click.ClickException(str(exc))
        target = save_model(model, out_dir / f"gesture_{i}.npz")
        click.echo(
            f"trained {name!r}: {len(trials)} trials, {model.n_gaussians} gaussians, "
            f"{model.native_frames} frames -> {target}"
        )


@main.command()
@click.option("--scenario", "scenario_ref", required=True)
@click.option("--models", "models_dir", type=click.Path(path_type=Path))
@click.option("--trace", "trace_path", type=click.Path(path_type=Path))
@click.option("--quiet", is_flag=True)
def run(scenario_ref: str, models_dir: Path | None, trace_path: Path | None, quiet: bool):
    """Run a scripted scenario to completion and print the outcome."""
    from .session import ScenarioError, run_scenario

    try:
        session = run_scenario(
            scenario_ref, models_dir=models_dir, trace_path=trace_path
        )
    except (ScenarioError, GraphError) as exc:
        raise click.ClickException(str(exc))
    metrics = session.metrics()
    if not quiet:
        click.echo(f"scenario: {session.scenario.name}  mode: {session.mode}")
        if session.mode_reason and session.mode != "solved":
            click.echo(f"reason: {session.mode_reason}")
        click.echo(
            f"simulated {metrics['total_time']:.2f}s  actions: {metrics['n_actions']}"
            f"  switches: {metrics['k_switches']}"
        )
        click.echo(
            f"time split  reasoning: {metrics['pct_ao']:.3f}%  "
            f"human: {metrics['pct_h']:.2f}%  robot: {metrics['pct_r']:.2f}%"
        )
        if trace_path:
            click.echo(f"trace: {trace_path}")
    sys.exit(0 if session.mode == "solved" else 2)


@main.command()
@click.option("--trace", "trace_path", required=True, type=click.Path(exists=True, path_type=Path))
def metrics(trace_path: Path):
    """Recompute the timing split from a trace and check the stored one."""
    from .session.trace import recompute_metrics

    try:
        stored, recomputed = recompute_metrics(trace_path)
    except (ValueError, json.JSONDecodeError) as exc:
        raise click.ClickException(str(exc))
    click.echo(f"{'quantity':<12} {'stored':>14} {'recomputed':>14}")
    for key in ("t_ao", "t_h_bar", "t_h", "t_r", "total_time", "pct_ao", "pct_h", "pct_r"):
        click.echo(f"{key:<12} {stored[key]:>14.6f} {recomputed[key]:>14.6f}")
    if stored != recomputed:
        raise click.ClickException("stored accumulators do not match the recomputation")
    click.echo("identity holds: recomputed metrics equal the in-run accumulators")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True, envvar="HRCOOP_HOST")
@click.option("--port", default=8000, show_default=True, envvar="HRCOOP_PORT")
@click.option("--models", "models_dir", type=click.Path(path_type=Path))
@click.option("--trace-dir", type=click.Path(path_type=Path))
@click.option("--ui", "ui_dir", type=click.Path(path_type=Path),
              help="directory of built console assets served under /ui")
def serve(host: str, port: int, models_dir: Path | None,
          trace_dir: Path | None, ui_dir: Path | None):
    """Start the cooperation service (HTTP + WebSocket event streams)."""
    import uvicorn

    from .api import create_app

    app = create_app(
        trace_dir=trace_dir,
        models_dir=str(models_dir) if models_dir else None,
        ui_dir=ui_dir,
    )
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
