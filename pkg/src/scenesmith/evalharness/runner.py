"""Suite runners: execute a dataset under a configuration and score it."""

from __future__ import annotations

import logging
import re
import time
from typing import Callable, Optional

from ..pipeline.config import PipelineConfig
from ..pipeline.orchestrate import Pipeline
from ..providers.base import ChatContext, ChatProvider, Message, ProviderError
from ..runtime.entities import Scene
from ..script.diagnostics import Status
from ..store.scenefile import import_scene
from .datasets import PromptDataset
from .report import MetricsReport, RunRecord, difficulty_bucket, mean_sd

log = logging.getLogger("scenesmith.eval")

ProviderFactory = Callable[[], ChatProvider]

_NUMBER_RE = re.compile(r"\d+(?:\.\d+)?")


class AllRepliesUnparseable(Exception):
    pass


def _fresh_scene(dataset: PromptDataset) -> Scene:
    if dataset.initial_scene:
        return import_scene(dataset.initial_scene)
    return Scene()


def _episode_failed(episode) -> bool:
    return episode.outcome.status is not Status.SUCCESS


def run_single_suite(
    dataset: PromptDataset,
    config: PipelineConfig,
    provider_factory: ProviderFactory,
    runs: int = 1,
) -> MetricsReport:
    """Each prompt runs against a fresh copy of the initial scene; a
    prompt counts as failed when any of its episodes (after all
    inspection rounds) ends CompileFailed or RuntimeFailed."""
    assert dataset.kind == "single"
    records: list[RunRecord] = []
    per_run_error: list[float] = []
    for run_index in range(runs):
        failures = 0
        for pi, prompt in enumerate(dataset.prompts):
            record = _run_one(prompt, [prompt], dataset, config, provider_factory, run_index)
            if dataset.difficulties:
                record.difficulty = dataset.difficulties[pi]
            records.append(record)
            if record.status != "Success":
                failures += 1
        per_run_error.append(failures / len(dataset.prompts))
    error_mean, error_sd = mean_sd(per_run_error)
    time_mean, time_sd = mean_sd([r.duration for r in records])
    return MetricsReport(
        config_name=config.name,
        config_fingerprint=config.fingerprint(),
        kind="single",
        runs=runs,
        run_count=len(records),
        error_rate=error_mean,
        error_rate_sd=error_sd,
        mean_time=time_mean,
        time_sd=time_sd,
        per_difficulty_error=_per_difficulty(records),
        records=records,
    )


def run_sequential_suite(
    dataset: PromptDataset,
    config: PipelineConfig,
    provider_factory: ProviderFactory,
    runs: int = 1,
) -> MetricsReport:
    """Sequences run step by step against an evolving scene. Metrics:
    error rate over all individual steps; completion = successful steps /
    length per sequence, averaged; fulfilled = sequences completed start
    to finish."""
    assert dataset.kind == "sequential"
    records: list[RunRecord] = []
    per_run_error: list[float] = []
    per_run_completion: list[float] = []
    per_run_fulfilled: list[float] = []
    for run_index in range(runs):
        step_fail = step_total = 0
        completions: list[float] = []
        fulfilled = 0
        for si, steps in enumerate(dataset.prompts):
            record = _run_one("; ".join(steps), steps, dataset, config, provider_factory, run_index)
            if dataset.difficulties:
                record.difficulty = dataset.difficulties[si]
            records.append(record)
            ok_steps = sum(1 for s in record.step_statuses if s == "Success")
            step_total += len(steps)
            step_fail += len(steps) - ok_steps
            completion = ok_steps / len(steps)
            completions.append(completion)
            if completion == 1.0:
                fulfilled += 1
        per_run_error.append(step_fail / step_total)
        per_run_completion.append(sum(completions) / len(completions))
        per_run_fulfilled.append(fulfilled / len(dataset.prompts))
    error_mean, error_sd = mean_sd(per_run_error)
    completion_mean, _ = mean_sd(per_run_completion)
    fulfilled_mean, _ = mean_sd(per_run_fulfilled)
    time_mean, time_sd = mean_sd([r.duration for r in records])
    return MetricsReport(
        config_name=config.name,
        config_fingerprint=config.fingerprint(),
        kind="sequential",
        runs=runs,
        run_count=len(records),
        error_rate=error_mean,
        error_rate_sd=error_sd,
        avg_completion=completion_mean,
        pct_fulfilled=fulfilled_mean,
        mean_time=time_mean,
        time_sd=time_sd,
        per_difficulty_error=_per_difficulty(records),
        records=records,
    )


def _run_one(
    prompt_text: str,
    steps: list[str],
    dataset: PromptDataset,
    config: PipelineConfig,
    provider_factory: ProviderFactory,
    run_index: int,
) -> RunRecord:
    """One prompt (or one sequence) on a fresh scene and pipeline."""
    pipeline = Pipeline(provider_factory(), config)
    scene = _fresh_scene(dataset)
    step_statuses: list[str] = []
    attempts = 0
    started = time.time()
    for step in steps:
        try:
            result = pipeline.run_request(step, scene)
        except ProviderError as exc:
            # Provider failures are scored as failures, tagged distinctly.
            log.warning("provider failure on %r: %s", step, exc)
            step_statuses.append("ProviderFailed")
            continue
        scene = result.final_scene
        for episode in result.episodes:
            attempts += len(episode.attempts)
        failed = any(_episode_failed(e) for e in result.episodes)
        step_statuses.append("Success" if not failed else result.episodes[-1].outcome.status.value)
    duration = time.time() - started
    overall = "Success" if all(s == "Success" for s in step_statuses) else next(
        s for s in step_statuses if s != "Success"
    )
    return RunRecord(
        prompt=prompt_text,
        config_name=config.name,
        status=overall,
        attempts=attempts,
        duration=duration,
        step_statuses=step_statuses,
        run_index=run_index,
    )


def _per_difficulty(records: list[RunRecord]) -> dict:
    buckets: dict[str, list[int]] = {}
    for record in records:
        if record.difficulty is None:
            continue
        name = difficulty_bucket(record.difficulty)
        buckets.setdefault(name, []).append(0 if record.status == "Success" else 1)
    return {name: sum(v) / len(v) for name, v in sorted(buckets.items())}


def rate_difficulty(
    prompt: str,
    provider: ChatProvider,
    repeats: int = 10,
    template: Optional[str] = None,
) -> tuple[float, float]:
    """Ask an uncontextualized model (no metaprompt) to rate one prompt's
    difficulty 1-10, ``repeats`` times; non-numeric replies are skipped
    with a warning. Returns (mean, sample standard deviation)."""
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    template = template or _default_rater_template()
    ratings: list[float] = []
    for _ in range(repeats):
        reply = provider.complete(ChatContext([Message("user", template.format(prompts=prompt))]))
        value = _first_rating(reply)
        if value is None:
            log.warning("unparseable difficulty reply %r; skipped", reply[:60])
            continue
        ratings.append(value)
    if not ratings:
        raise AllRepliesUnparseable(f"no numeric rating in {repeats} replies for {prompt!r}")
    return mean_sd(ratings)


def rate_difficulties_batch(
    prompts: list[str],
    provider: ChatProvider,
    repeats: int = 10,
    template: Optional[str] = None,
) -> list[tuple[float, float]]:
    """Batch mode (the default protocol): every prompt is shown at once,
    numbered, and each reply line 'N. rating' scores prompt N."""
    template = template or _default_rater_template()
    listing = "\n".join(f"{i + 1}. {p}" for i, p in enumerate(prompts))
    collected: list[list[float]] = [[] for _ in prompts]
    for _ in range(repeats):
        reply = provider.complete(ChatContext([Message("user", template.format(prompts=listing))]))
        for line in reply.splitlines():
            m = re.match(r"\s*(\d+)[.):]\s*(\d+(?:\.\d+)?)", line)
            if not m:
                continue
            idx = int(m.group(1)) - 1
            if 0 <= idx < len(prompts):
                collected[idx].append(float(m.group(2)))
    out = []
    for i, ratings in enumerate(collected):
        if not ratings:
            raise AllRepliesUnparseable(f"no ratings collected for prompt {i + 1}")
        out.append(mean_sd(ratings))
    return out


def with_difficulties(
    dataset: PromptDataset,
    provider: ChatProvider,
    repeats: int = 10,
) -> PromptDataset:
    """Return a copy of the dataset with difficulty labels filled in by
    the batch rater, so suite reports can bucket error rates by level."""
    prompts = (
        dataset.prompts
        if dataset.kind == "single"
        else ["; ".join(steps) for steps in dataset.prompts]
    )
    rated = rate_difficulties_batch(prompts, provider, repeats=repeats)
    return PromptDataset(
        kind=dataset.kind,
        prompts=dataset.prompts,
        difficulties=[mean for mean, _sd in rated],
        initial_scene=dataset.initial_scene,
    )


def _first_rating(reply: str) -> Optional[float]:
    m = _NUMBER_RE.search(reply)
    if m is None:
        return None
    value = float(m.group(0))
    return value if 1.0 <= value <= 10.0 else None


def _default_rater_template() -> str:
    from importlib import resources

    return resources.files("scenesmith.pipeline").joinpath(
        "metaprompts", "difficulty_rater.txt"
    ).read_text(encoding="utf-8")
