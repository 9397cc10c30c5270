"""Shared test helpers: scene builders, random generators, provider spies."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

from scenesmith.pipeline.config import MODULES, PipelineConfig
from scenesmith.providers.base import ChatContext
from scenesmith.runtime.commands import (
    AttachBehavior,
    AttachHandler,
    Create,
    Set,
    _apply_into,
)
from scenesmith.runtime.entities import SHAPES, Scene
from scenesmith.script.executor import run_script

DATA_DIR = Path(__file__).parent / "data"
FIXTURES_DIR = Path(__file__).parent.parent / "fixtures"


def build_scene(script: str) -> Scene:
    """Run a script against an empty scene, asserting success."""
    outcome = run_script(script, Scene())
    assert outcome.ok, outcome.error_text()
    return outcome.scene_after


def random_scene(rng: random.Random, max_entities: int = 20) -> Scene:
    """A structurally valid random scene with full-precision floats.

    Uses the internal mutate-in-place hook for speed; the public
    copy-on-write contract is covered by the runtime tests.
    """
    scene = Scene()
    n = rng.randint(1, max_entities)
    names = []
    for i in range(n):
        name = f"e{i}"
        parent = rng.choice(names) if names and rng.random() < 0.5 else None
        _apply_into(scene, Create(name=name, shape=rng.choice(SHAPES), parent=parent))
        _apply_into(
            scene,
            Set(
                name=name,
                updates={
                    "position": tuple(rng.uniform(-50, 50) for _ in range(3)),
                    "rotation": tuple(rng.uniform(-180, 180) for _ in range(3)),
                    "scale": tuple(rng.uniform(0.05, 10) for _ in range(3)),
                    "color": tuple(rng.randrange(256) for _ in range(3)),
                },
            ),
        )
        names.append(name)
    for name in names:
        roll = rng.random()
        if roll < 0.15:
            _apply_into(
                scene,
                AttachBehavior(
                    name=name,
                    kind="spin",
                    params={"axis": _random_axis(rng), "speed": rng.uniform(-360, 360)},
                ),
            )
        elif roll < 0.25:
            _apply_into(
                scene,
                AttachBehavior(
                    name=name,
                    kind="oscillate",
                    params={
                        "axis": _random_axis(rng),
                        "amplitude": rng.uniform(0.1, 5),
                        "period": rng.uniform(0.5, 10),
                    },
                ),
            )
        elif roll < 0.35 and len(names) > 1:
            other = rng.choice([m for m in names if m != name])
            kind = rng.choice(["orbit", "follow"])
            params = (
                {"center": other, "radius": rng.uniform(0.5, 10), "speed": rng.uniform(-180, 180)}
                if kind == "orbit"
                else {"target": other, "speed": rng.uniform(0, 5)}
            )
            _apply_into(scene, AttachBehavior(name=name, kind=kind, params=params))
        if rng.random() < 0.2:
            _apply_into(
                scene,
                AttachHandler(
                    name=name,
                    body=(Set(name="self", updates={"color": tuple(rng.randrange(256) for _ in range(3))}),),
                ),
            )
    scene.clock = rng.uniform(0, 100)
    return scene


def _random_axis(rng: random.Random) -> tuple:
    while True:
        axis = tuple(rng.uniform(-1, 1) for _ in range(3))
        if any(abs(c) > 1e-3 for c in axis):
            return axis


def classify_call(config: PipelineConfig, context: ChatContext) -> str:
    """Attribute a provider call to its pipeline module by metaprompt."""
    if not context.messages or context.messages[0].role != "system":
        return "uncontextualized"
    system = context.messages[0].content
    for module in MODULES:
        if system.startswith(config.metaprompt(module)):
            return module
    return "unknown"


def episode_count_in_context(context: ChatContext) -> int:
    """Prior episodes appear as (user, assistant) turn pairs; counting
    assistant messages counts episodes."""
    return sum(1 for m in context.messages if m.role == "assistant")


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240811)
