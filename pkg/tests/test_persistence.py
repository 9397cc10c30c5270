"""Saved generations and scene files."""

import random
import time

import pytest

from scenesmith.runtime import Scene, serialize_hierarchy
from scenesmith.script import Status
from scenesmith.store import (
    GenerationStore,
    SaveRejected,
    UnknownId,
    VersionMismatch,
    export_scene,
    export_scene_text,
    import_scene,
    import_scene_text,
)

from conftest import build_scene, random_scene

CAR_SCRIPT = """\
create car_body shape=cube
set car_body position=(0,0.5,0) scale=(2,0.6,1) color=#CC2222
repeat i 1..4 { create wheel$i shape=cylinder set wheel$i scale=(0.4,0.2,0.4) color=#222222 }
set wheel1 position=(-0.7,0.2,-0.5)
set wheel2 position=(0.7,0.2,-0.5)
set wheel3 position=(-0.7,0.2,0.5)
set wheel4 position=(0.7,0.2,0.5)
"""


class TestGenerationStore:
    def test_save_and_list(self, tmp_path):
        store = GenerationStore(tmp_path, session="s1")
        gen_id = store.save(CAR_SCRIPT, "A small red car with four wheels.")
        listed = store.list()
        assert [g.id for g in listed] == [gen_id]
        assert listed[0].summary == "A small red car with four wheels."
        assert listed[0].source_text == CAR_SCRIPT

    def test_save_rejects_non_compiling(self, tmp_path):
        store = GenerationStore(tmp_path)
        with pytest.raises(SaveRejected) as exc_info:
            store.save("create car shape=tesseract", "impossible car")
        assert exc_info.value.errors

    def test_survives_restart(self, tmp_path):
        GenerationStore(tmp_path, session="s1").save(CAR_SCRIPT, "car")
        reopened = GenerationStore(tmp_path, session="s1")
        assert len(reopened.list()) == 1

    def test_reload_into_empty_scene(self, tmp_path):
        store = GenerationStore(tmp_path)
        gen_id = store.save(CAR_SCRIPT, "car")
        started = time.monotonic()
        outcome = store.reload(gen_id, Scene())
        assert time.monotonic() - started < 10.0
        assert outcome.status is Status.SUCCESS
        names = {e.name for e in outcome.scene_after.entities.values()}
        assert "car_body" in names and "wheel4" in names

    def test_reload_collision_is_runtime_failure(self, tmp_path):
        store = GenerationStore(tmp_path)
        gen_id = store.save(CAR_SCRIPT, "car")
        occupied = build_scene("create car_body shape=sphere")
        before = serialize_hierarchy(occupied)
        outcome = store.reload(gen_id, occupied)
        assert outcome.status is Status.RUNTIME_FAILED
        assert outcome.errors[0].kind == "DuplicateName"
        assert serialize_hierarchy(outcome.scene_after) == before

    def test_reload_unknown_id(self, tmp_path):
        with pytest.raises(UnknownId):
            GenerationStore(tmp_path).reload("nope", Scene())

    def test_cross_scene_transfer(self, tmp_path):
        store = GenerationStore(tmp_path)
        gen_id = store.save(CAR_SCRIPT, "car")
        moonscape = build_scene("create regolith shape=plane\nset regolith scale=(50,1,50) color=#888888")
        outcome = store.reload(gen_id, moonscape)
        assert outcome.ok
        names = {e.name for e in outcome.scene_after.entities.values()}
        assert {"regolith", "car_body"} <= names


class TestSceneFiles:
    def test_empty_scene_round_trip(self):
        scene = import_scene_text(export_scene_text(Scene()))
        assert serialize_hierarchy(scene) == "[]"
        assert scene.clock == 0.0

    def test_random_scene_round_trip_identical_hierarchies(self):
        for seed in range(25):
            scene = random_scene(random.Random(seed), max_entities=50)
            rebuilt = import_scene_text(export_scene_text(scene))
            assert serialize_hierarchy(rebuilt) == serialize_hierarchy(scene)
            assert abs(rebuilt.clock - scene.clock) <= 1e-9

    def test_version_mismatch(self):
        with pytest.raises(VersionMismatch):
            import_scene_text('{"scene_format": 99, "hierarchy": []}')
        with pytest.raises(VersionMismatch):
            import_scene_text('{"hierarchy": []}')

    def test_malformed_file_reports_line(self):
        with pytest.raises(ValueError) as exc_info:
            import_scene_text('{"scene_format": 1,\n  "hierarchy": [oops]}')
        assert "line 2" in str(exc_info.value)

    def test_file_round_trip(self, tmp_path, rng):
        scene = random_scene(rng, max_entities=20)
        path = export_scene(scene, tmp_path / "scene.json")
        assert serialize_hierarchy(import_scene(path)) == serialize_hierarchy(scene)
