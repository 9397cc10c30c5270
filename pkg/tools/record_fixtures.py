#!/usr/bin/env python3
"""Regenerate the replay fixtures shipped under fixtures/replays/.

Each scenario drives the real pipeline against a scripted provider while
a recorder captures every request/response pair; the resulting files
replay byte-for-byte offline. Run from the repository root:

    python tools/record_fixtures.py

Also rewrites fixtures/scenes/kitchen.scene.json and tests/data/pins.json
(the frozen determinism pins the acceptance suite asserts against).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from scenesmith.evalharness.datasets import load_dataset
from scenesmith.evalharness.runner import run_sequential_suite, run_single_suite
from scenesmith.pipeline import Pipeline, config_from_preset
from scenesmith.providers import RecordingProvider, ScriptedProvider
from scenesmith.runtime import Scene, scene_hash
from scenesmith.script import run_script
from scenesmith.store import export_scene

REPLAYS = ROOT / "fixtures" / "replays"
SCENES = ROOT / "fixtures" / "scenes"
DATASETS = ROOT / "fixtures" / "datasets"
PINS = ROOT / "tests" / "data" / "pins.json"


def fresh(path: Path, responses: list[str]) -> RecordingProvider:
    if path.exists():
        path.unlink()
    return RecordingProvider(ScriptedProvider(responses), path)


def box_scene() -> Scene:
    outcome = run_script("create box shape=cube", Scene())
    assert outcome.ok
    return outcome.scene_after


def record_fig4_loop() -> None:
    responses = [
        "The scene holds a single default cube named box at the origin with scale (1,1,1).\nRELEVANT: box",
        "none",
        "```\ncreate box_large shape=cube\nset box_large scale=(2,2,2)\n```",
        "FAIL\nThe instruction asks to resize the existing entity named box; "
        "set its scale to (2,2,2) instead of creating a new one.",
        "```\nset box scale=(2,2,2)\n```",
        "PASS",
    ]
    provider = fresh(REPLAYS / "fig4_loop.json", responses)
    pipeline = Pipeline(provider, config_from_preset("full LLMR"))
    result = pipeline.run_request("Make the box twice as big", box_scene())
    episode = result.episodes[0]
    assert episode.outcome.ok and len(episode.attempts) == 2
    assert [a.verdict for a in episode.attempts] == ["fail", "pass"]
    print("fig4_loop: ok")


def record_always_fail() -> None:
    responses = [
        "The scene holds a single default cube named box at the origin with scale (1,1,1).\nRELEVANT: box",
        "none",
    ]
    for k in range(3):
        responses.append(f"```\ncreate attempt_{k} shape=cube\n```")
        responses.append("FAIL\nThis still does not resize the existing box; set box scale=(2,2,2).")
    provider = fresh(REPLAYS / "always_fail.json", responses)
    pipeline = Pipeline(provider, config_from_preset("full LLMR"))
    result = pipeline.run_request("Make the box twice as big", box_scene())
    episode = result.episodes[0]
    assert episode.unverified and len(episode.attempts) == 3
    print("always_fail: ok")


def record_memory_session() -> None:
    responses = []
    for k in range(1, 6):
        crates = "empty" if k == 1 else f"crates 1..{k - 1}"
        responses += [
            f"The scene currently holds: {crates}.\nRELEVANT: none",
            "none",
            f"```\ncreate crate{k} shape=cube\nset crate{k} position=({k},0.5,0)\n```",
            "PASS",
        ]
    provider = fresh(REPLAYS / "memory_5prompts.json", responses)
    pipeline = Pipeline(provider, config_from_preset("full LLMR"))
    scene = Scene()
    for k in range(1, 6):
        result = pipeline.run_request(f"add crate number {k} to the line", scene)
        assert result.episodes[0].outcome.ok
        scene = result.final_scene
    assert len(scene.entities) == 5
    print("memory_5prompts: ok")


KITCHEN_PLAN = [
    "lay the kitchen floor and raise three boundary walls",
    "build the counter run with a sink basin and two base cabinets",
    "build the stove block with four burners",
    "place the fridge with its door and a tall pantry",
    "assemble the dining table with four chairs",
    "add finishing touches: a fruit bowl, an interactive faucet, and a ceiling lamp",
]

KITCHEN_STEPS = [
    # step 1: floor + walls (4 entities)
    """```
create floor shape=plane
set floor scale=(6,1,6) color=#D8CBB3
create wall_back shape=cube
set wall_back position=(0,1.5,-3) scale=(6,3,0.1) color=#EFE8DA
create wall_left shape=cube
set wall_left position=(-3,1.5,0) scale=(0.1,3,6) color=#EFE8DA
create wall_right shape=cube
set wall_right position=(3,1.5,0) scale=(0.1,3,6) color=#EFE8DA
```""",
    # step 2: counter + sink + cabinets (5)
    """```
create counter shape=cube
set counter position=(-1.2,0.45,-2.6) scale=(3,0.9,0.7) color=#B0A18C
create sink shape=cube
set sink position=(-1.2,0.95,-2.6) scale=(0.8,0.15,0.5) color=#C9CED2
create cabinet_a shape=cube
set cabinet_a position=(-2.2,0.4,-2.6) scale=(0.9,0.8,0.65) color=#8A7358
create cabinet_b shape=cube
set cabinet_b position=(-0.2,0.4,-2.6) scale=(0.9,0.8,0.65) color=#8A7358
create counter_top shape=cube
set counter_top position=(-1.2,0.92,-2.6) scale=(3.05,0.06,0.75) color=#5C5148
create shelf_low shape=cube
set shelf_low position=(-1.2,1.7,-2.85) scale=(2.4,0.06,0.3) color=#8A7358
create shelf_high shape=cube
set shelf_high position=(-1.2,2.2,-2.85) scale=(2.4,0.06,0.3) color=#8A7358
```""",
    # step 3: stove + burners (5)
    """```
create stove shape=cube
set stove position=(1.6,0.45,-2.6) scale=(1.2,0.9,0.7) color=#4A4A4F
repeat i 1..4 {
  create burner$i shape=cylinder
  set burner$i scale=(0.18,0.03,0.18) color=#1B1B1D
}
set burner1 position=(1.35,0.93,-2.75)
set burner2 position=(1.85,0.93,-2.75)
set burner3 position=(1.35,0.93,-2.45)
set burner4 position=(1.85,0.93,-2.45)
```""",
    # step 4: fridge + door + pantry (3)
    """```
create fridge shape=cube
set fridge position=(2.55,1,-1.2) scale=(0.9,2,0.8) color=#DDE3E8
create fridge_door shape=cube parent=fridge
set fridge_door position=(2.55,1,-0.75) scale=(0.85,1.9,0.08) color=#C7CED6
create pantry shape=cube
set pantry position=(-2.6,1.1,-1.2) scale=(0.8,2.2,0.8) color=#7A6852
```""",
    # step 5: table + chairs (13)
    """```
create table_top shape=cube
set table_top position=(0.4,0.75,0.8) scale=(1.6,0.08,1) color=#9A7B4F
repeat i 1..4 {
  create table_leg$i shape=cylinder
  set table_leg$i scale=(0.07,0.75,0.07) color=#7C6240
}
set table_leg1 position=(-0.3,0.37,0.4)
set table_leg2 position=(1.1,0.37,0.4)
set table_leg3 position=(-0.3,0.37,1.2)
set table_leg4 position=(1.1,0.37,1.2)
repeat i 1..4 {
  create chair$i shape=cube
  set chair$i scale=(0.45,0.5,0.45) color=#6E5437
}
set chair1 position=(-0.35,0.25,0.1)
set chair2 position=(1.15,0.25,0.1)
set chair3 position=(-0.35,0.25,1.5)
set chair4 position=(1.15,0.25,1.5)
```""",
    # step 6: details (6) + interactivity
    """```
create fruit_bowl shape=cylinder
set fruit_bowl position=(0.4,0.85,0.8) scale=(0.3,0.1,0.3) color=#4E6E58
create apple shape=sphere parent=fruit_bowl
set apple position=(0.33,0.93,0.74) scale=(0.1,0.1,0.1) color=#C23B22
create orange shape=sphere parent=fruit_bowl
set orange position=(0.48,0.93,0.85) scale=(0.1,0.1,0.1) color=#E48B2C
create banana shape=capsule parent=fruit_bowl
set banana position=(0.4,0.93,0.88) rotation=(0,0,70) scale=(0.06,0.18,0.06) color=#E8D44D
create kettle shape=sphere
set kettle position=(-0.2,1.02,-2.6) scale=(0.18,0.18,0.18) color=#9A3B3B
create faucet shape=cylinder
set faucet position=(-1.2,1.15,-2.85) rotation=(45,0,0) scale=(0.05,0.3,0.05) color=#AEB6BD
create lamp shape=sphere
set lamp position=(0.4,2.6,0.8) scale=(0.3,0.3,0.3) color=#F2E6B8
on_interact faucet { create water_jet shape=cylinder parent=faucet set water_jet position=(-1.2,0.98,-2.72) scale=(0.04,0.25,0.04) color=#7FBDE4 }
behavior lamp oscillate axis=(0,1,0) amplitude=0.03 period=4
```""",
]


def kitchen_responses() -> list[str]:
    plan_text = "\n".join(f"{i + 1}. {s}" for i, s in enumerate(KITCHEN_PLAN))
    responses = [
        "The scene is empty; everything must be created from scratch.\nRELEVANT: none",  # overview
        plan_text,
    ]
    summaries = [
        "The scene is empty; nothing has been built yet.\nRELEVANT: none",
        "A floor and three walls enclose the room.\nRELEVANT: floor, wall_back",
        "The room has a counter with a sink between two cabinets along the back wall.\nRELEVANT: counter, counter_top",
        "Counters and a stove with four burners line the back wall.\nRELEVANT: wall_right",
        "Appliances are in place: counter, sink, stove, fridge and pantry.\nRELEVANT: floor",
        "The kitchen now has appliances and a dining table with four chairs.\nRELEVANT: table_top, counter",
    ]
    for i, step_code in enumerate(KITCHEN_STEPS):
        responses.append(summaries[i])
        responses.append("interaction-tools" if i == 5 else "none")
        responses.append(step_code)
        responses.append("PASS")
    return responses


def record_kitchen() -> dict:
    config = config_from_preset("full LLMR")
    config.enable_planner = True
    provider = fresh(REPLAYS / "kitchen.json", kitchen_responses())
    pipeline = Pipeline(provider, config)
    result = pipeline.run_request("build a kitchen from primitives", Scene())
    statuses = [e.outcome.status.value for e in result.episodes]
    assert statuses == ["Success"] * len(KITCHEN_PLAN), statuses
    scene = result.final_scene
    export_scene(scene, SCENES / "kitchen.scene.json")
    info = {
        "kitchen_final_hash": scene_hash(scene),
        "kitchen_entity_count": len(scene.entities),
        "kitchen_steps": len(KITCHEN_PLAN),
    }
    print(f"kitchen: ok ({info['kitchen_entity_count']} entities, hash {info['kitchen_final_hash'][:16]}...)")
    return info


OK_CODE = "```\ncreate artifact_{i} shape=cube\nset artifact_{i} position=(1,0.5,0)\n```"
BROKEN_CODE = "```\ncreate artifact_{i} shape=tesseract\n```"
SINGLE_FAIL_AT = (2, 5, 8)


def record_eval_single() -> None:
    dataset = load_dataset(DATASETS / "single_10.txt")
    path = REPLAYS / "eval_single.json"
    if path.exists():
        path.unlink()
    responses = iter(
        (BROKEN_CODE if i in SINGLE_FAIL_AT else OK_CODE).format(i=i)
        for i in range(len(dataset.prompts))
    )

    # The suite builds one pipeline per prompt; each recorder re-reads the
    # fixture file, so the records accumulate in order.
    def factory():
        return RecordingProvider(ScriptedProvider([next(responses)]), path)

    report = run_single_suite(dataset, config_from_preset("few-shot"), factory, runs=1)
    assert abs(report.error_rate - 0.30) < 1e-12, report.error_rate
    print("eval_single: ok (error rate 0.30)")


SEQ_PATTERN = [("ok", "ok"), ("ok", "fail", "ok"), ("fail",)]


def record_eval_sequential() -> None:
    dataset = load_dataset(DATASETS / "sequential_3.txt")
    assert [len(s) for s in dataset.prompts] == [len(p) for p in SEQ_PATTERN]
    counter = iter(range(100))
    per_sequence = [
        [
            (OK_CODE if kind == "ok" else BROKEN_CODE).format(i=f"s{next(counter)}")
            for kind in pattern
        ]
        for pattern in SEQ_PATTERN
    ]
    # One recording file, one lazily-built recorder per sequence.
    path = REPLAYS / "eval_sequential.json"
    if path.exists():
        path.unlink()
    feeds = iter(per_sequence)

    def factory():
        return RecordingProvider(ScriptedProvider(next(feeds)), path)

    report = run_sequential_suite(dataset, config_from_preset("few-shot"), factory, runs=1)
    assert abs(report.error_rate - 2 / 6) < 1e-12
    assert abs(report.avg_completion - 5 / 9) < 1e-12
    assert abs(report.pct_fulfilled - 1 / 3) < 1e-12
    print("eval_sequential: ok (2/6, 5/9, 1/3)")


def record_clarify() -> None:
    responses = [
        "The scene is empty.\nRELEVANT: none",
        "QUESTION: what color should the cube be?",
        "1. create a red cube named crimson at the origin",
        "The scene is empty.\nRELEVANT: none",
        "none",
        "```\ncreate crimson shape=cube\nset crimson color=#FF0000\n```",
        "PASS",
    ]
    provider = fresh(REPLAYS / "clarify.json", responses)
    config = config_from_preset("full LLMR")
    config.enable_planner = True
    pipeline = Pipeline(provider, config)
    result = pipeline.run_request("make me a cube", Scene(), ask_user=lambda q: "red")
    assert result.plan == ["create a red cube named crimson at the origin"]
    assert result.episodes[0].outcome.ok
    print("clarify: ok")


def main() -> None:
    REPLAYS.mkdir(parents=True, exist_ok=True)
    SCENES.mkdir(parents=True, exist_ok=True)
    record_fig4_loop()
    record_always_fail()
    record_memory_session()
    pins = record_kitchen()
    record_eval_single()
    record_eval_sequential()
    record_clarify()
    PINS.parent.mkdir(parents=True, exist_ok=True)
    PINS.write_text(json.dumps(pins, indent=1))
    print(f"pins written to {PINS}")


if __name__ == "__main__":
    main()
