"""Command line: compile/exec scripts, run prompts, eval suites, serve."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .evalharness.datasets import load_dataset
from .evalharness.report import emit_report
from .evalharness.runner import run_sequential_suite, run_single_suite
from .pipeline.config import PRESETS, resolve_config
from .pipeline.orchestrate import Pipeline
from .providers.adapters import LiveProvider, provider_from_spec
from .retrieval.catalog import FixtureProviders, load_catalog
from .retrieval.retriever import Retriever
from .runtime.entities import Scene
from .runtime.serialize import scene_hash, serialize_hierarchy
from .script.compiler import compile_script
from .script.executor import run_script
from .store.scenefile import export_scene, import_scene


@click.group()
def main() -> None:
    """scenesmith: prompt-driven interactive 3D scenes."""


@main.command("compile")
@click.argument("script", type=click.Path(exists=True))
def compile_cmd(script: str) -> None:
    """Check a .scenescript file; print machine-readable diagnostics."""
    result = compile_script(Path(script).read_text(encoding="utf-8"))
    if result.ok:
        click.echo(f"ok: {len(result.program.commands)} statements")
        return
    for err in result.errors:
        click.echo(json.dumps(err.to_record()))
    sys.exit(1)


@main.command("exec")
@click.argument("script", type=click.Path(exists=True))
@click.option("--scene", "scene_path", type=click.Path(exists=True), help="Scene file to run against.")
@click.option("--out", "out_path", type=click.Path(), help="Where to write the resulting scene file.")
def exec_cmd(script: str, scene_path: str | None, out_path: str | None) -> None:
    """Compile and execute a script against a scene."""
    scene = import_scene(scene_path) if scene_path else Scene()
    outcome = run_script(Path(script).read_text(encoding="utf-8"), scene)
    click.echo(f"status: {outcome.status.value}")
    for err in outcome.errors:
        click.echo(f"  {err}")
    if outcome.ok and out_path:
        export_scene(outcome.scene_after, out_path)
        click.echo(f"scene written to {out_path}")
    if not outcome.ok:
        sys.exit(1)


@main.command("run")
@click.option("--prompt", required=True, help="The request to fulfil.")
@click.option("--config", "config_spec", default="full LLMR", show_default=True,
              help=f"Preset ({', '.join(PRESETS)}) or config file.")
@click.option("--provider", "provider_spec", required=True,
              help="replay:<fixture>, scripted:<file>, or live:<endpoint>[,model,<id>]")
@click.option("--scene", "scene_path", type=click.Path(exists=True))
@click.option("--out", "out_path", type=click.Path())
@click.option("--planner/--no-planner", default=None, help="Override the preset's planner flag.")
def run_cmd(prompt: str, config_spec: str, provider_spec: str, scene_path: str | None,
            out_path: str | None, planner: bool | None) -> None:
    """Run one request through the full pipeline."""
    config = resolve_config(config_spec)
    if planner is not None:
        config.enable_planner = planner
    provider = provider_from_spec(provider_spec, window=config.window)
    scene = import_scene(scene_path) if scene_path else Scene()

    def ask(question: str) -> str:
        return click.prompt(f"[planner] {question}")

    pipeline = Pipeline(provider, config)
    result = pipeline.run_request(prompt, scene, ask_user=ask if sys.stdin.isatty() else None)
    for i, episode in enumerate(result.episodes, start=1):
        click.echo(f"step {i}/{len(result.episodes)}: {episode.outcome.status.value} "
                   f"({len(episode.attempts)} attempt(s)) - {episode.instruction.text}")
    for warning in result.warnings:
        click.echo(f"warning: {warning}", err=True)
    click.echo(f"final scene hash: {scene_hash(result.final_scene)}")
    if out_path:
        export_scene(result.final_scene, out_path)
        click.echo(f"scene written to {out_path}")
    else:
        click.echo(serialize_hierarchy(result.final_scene))


@main.command("eval")
@click.option("--dataset", "dataset_path", required=True, type=click.Path(exists=True))
@click.option("--config", "config_spec", default="full LLMR", show_default=True)
@click.option("--runs", default=1, show_default=True, type=int)
@click.option("--out", "out_path", type=click.Path(), help="Report file (machine-readable JSON).")
@click.option("--provider", "provider_spec", default=None,
              help="Provider spec; required unless --live is given.")
@click.option("--live", is_flag=True, help="Use a live endpoint from SCENESMITH_ENDPOINT.")
@click.option("--kind", type=click.Choice(["single", "sequential"]), default=None,
              help="Force the dataset kind instead of inferring from ';'.")
@click.option("--scene", "scene_path", type=click.Path(exists=True),
              help="Initial scene file for every prompt.")
@click.option("--human", is_flag=True, help="Also print the human-readable table.")
def eval_cmd(dataset_path: str, config_spec: str, runs: int, out_path: str | None,
             provider_spec: str | None, live: bool, kind: str | None,
             scene_path: str | None, human: bool) -> None:
    """Run an evaluation suite and emit a metrics report."""
    import os

    config = resolve_config(config_spec)
    if live:
        endpoint = os.environ.get("SCENESMITH_ENDPOINT")
        if not endpoint:
            raise click.UsageError("--live requires SCENESMITH_ENDPOINT")
        model = os.environ.get("SCENESMITH_MODEL", "gpt-4")
        provider_factory = lambda: LiveProvider(endpoint, model_id=model, window=config.window)
    elif provider_spec:
        provider_factory = lambda: provider_from_spec(provider_spec, window=config.window)
    else:
        raise click.UsageError("provide --provider or --live")

    dataset = load_dataset(dataset_path, kind=kind, initial_scene=scene_path)
    if dataset.kind == "single":
        report = run_single_suite(dataset, config, provider_factory, runs=runs)
    else:
        report = run_sequential_suite(dataset, config, provider_factory, runs=runs)
    text = emit_report([report], fmt="machine", path=out_path)
    if out_path:
        click.echo(f"report written to {out_path}")
    else:
        click.echo(text)
    if human:
        click.echo(emit_report([report], fmt="human"))


@main.command("retrieve")
@click.option("--label", required=True)
@click.option("--catalog", "catalog_path", required=True, type=click.Path(exists=True))
@click.option("--targets", "targets_path", required=True, type=click.Path(exists=True))
@click.option("--k", default=5, show_default=True, type=int)
@click.option("--cache-dir", type=click.Path(), default=None)
def retrieve_cmd(label: str, catalog_path: str, targets_path: str, k: int,
                 cache_dir: str | None) -> None:
    """Pick the best catalog asset for a label."""
    retriever = Retriever(load_catalog(catalog_path), FixtureProviders(targets_path),
                          cache_dir=cache_dir)
    result = retriever.retrieve(label, k=k)
    click.echo(json.dumps(
        {
            "chosen": result.chosen.id,
            "payload_ref": result.chosen.payload_ref,
            "language_top_k": [e.id for e in result.language_top_k],
            "cache_hit": result.cache_hit,
        },
        indent=1,
    ))


@main.command("serve")
@click.option("--port", default=8000, show_default=True, type=int)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--config", "config_spec", default="full LLMR", show_default=True)
@click.option("--provider", "provider_spec", required=True)
@click.option("--store-root", default="./generations", show_default=True, type=click.Path())
@click.option("--tick-rate", default=20.0, show_default=True, type=float,
              help="Auto-tick rate while clients are subscribed; 0 disables.")
def serve_cmd(port: int, host: str, config_spec: str, provider_spec: str,
              store_root: str, tick_rate: float) -> None:
    """Serve the session API for the console UI."""
    import uvicorn

    from .service.app import create_app

    config = resolve_config(config_spec)  # fail fast on a bad preset/file

    def provider_factory():
        return provider_from_spec(provider_spec, window=config.window)

    app = create_app(provider_factory, store_root, tick_rate=tick_rate)
    click.echo(f"serving on http://{host}:{port} (config preset: {config.name})")
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
