"""Scene export/import: the hierarchy document plus a version header."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from ..runtime.entities import Scene
from ..runtime.formatting import fmt_number
from ..runtime.serialize import parse_hierarchy, serialize_hierarchy

SCENE_FORMAT = 1


class VersionMismatch(Exception):
    pass


def export_scene_text(scene: Scene) -> str:
    doc = {
        "scene_format": SCENE_FORMAT,
        "clock": fmt_number(scene.clock),
        "hierarchy": json.loads(serialize_hierarchy(scene)),
    }
    return json.dumps(doc, indent=1)


def import_scene_text(text: str) -> Scene:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed scene file at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict) or "scene_format" not in doc:
        raise VersionMismatch("not a scene file: missing scene_format header")
    if doc["scene_format"] != SCENE_FORMAT:
        raise VersionMismatch(
            f"scene_format {doc['scene_format']!r} not supported (expected {SCENE_FORMAT})"
        )
    scene = parse_hierarchy(json.dumps(doc.get("hierarchy", [])))
    scene.clock = float(doc.get("clock", 0.0))
    return scene


def export_scene(scene: Scene, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(export_scene_text(scene), encoding="utf-8")
    return path


def import_scene(path: Union[str, Path]) -> Scene:
    return import_scene_text(Path(path).read_text(encoding="utf-8"))
