"""Hierarchy document: the nested JSON view of a scene.

This is the single text form of the world: the scene analyzer reads it,
snapshots hand it to clients, scene export wraps it with a version
header, and tests hash it. It is a pure function of the scene.

Per-entity fields, in fixed order: name, shape, position, rotation,
scale, color, behaviors, handlers, children. Handler bodies render as
one script line each; numbers carry at most 10 decimal places.
"""

from __future__ import annotations

import hashlib
import json

from .commands import render_command
from .entities import Behavior, Entity, InteractionHandler, Scene, Transform
from .formatting import color_hex, fmt_number, parse_color_hex

_VEC_PARAMS = ("axis", "origin")


def serialize_hierarchy(scene: Scene) -> str:
    doc = [_entity_doc(scene, eid) for eid in scene.roots]
    return json.dumps(doc, indent=1)


def _entity_doc(scene: Scene, eid: int) -> dict:
    ent = scene.entities[eid]
    return {
        "name": ent.name,
        "shape": ent.shape,
        "position": [fmt_number(v) for v in ent.transform.position],
        "rotation": [fmt_number(v) for v in ent.transform.rotation],
        "scale": [fmt_number(v) for v in ent.transform.scale],
        "color": color_hex(ent.color),
        "behaviors": [_behavior_doc(b) for b in ent.behaviors],
        "handlers": ["; ".join(render_command(c) for c in h.body) for h in ent.handlers],
        "children": [_entity_doc(scene, c) for c in ent.children],
    }


def _behavior_doc(beh: Behavior) -> dict:
    doc: dict = {"kind": beh.kind}
    for key in sorted(beh.params):
        value = beh.params[key]
        if key in _VEC_PARAMS:
            doc[key] = [fmt_number(v) for v in value]
        elif isinstance(value, str):
            doc[key] = value
        else:
            doc[key] = fmt_number(value)
    return doc


def scene_hash(scene: Scene) -> str:
    return hashlib.sha256(serialize_hierarchy(scene).encode("utf-8")).hexdigest()


def parse_hierarchy(text: str) -> Scene:
    """Rebuild a scene from a hierarchy document.

    Entity ids are assigned fresh in document order; re-serializing the
    result reproduces the document (numbers were already rounded when it
    was written).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"malformed hierarchy document at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, list):
        raise ValueError("hierarchy document must be a JSON array")
    scene = Scene()
    for obj in doc:
        _build_entity(scene, obj, None)
    return scene


def _build_entity(scene: Scene, obj: dict, parent_id: int | None) -> None:
    name = obj["name"]
    if name in scene.names:
        raise ValueError(f"duplicate entity name {name!r} in document")
    ent = Entity(
        id=scene.allocate_id(),
        name=name,
        shape=obj["shape"],
        transform=Transform(
            position=tuple(float(v) for v in obj["position"]),
            rotation=tuple(float(v) for v in obj["rotation"]),
            scale=tuple(float(v) for v in obj["scale"]),
        ),
        color=parse_color_hex(obj["color"]),
        parent=parent_id,
    )
    ent.transform.validate()
    scene.entities[ent.id] = ent
    scene.names[name] = ent.id
    if parent_id is None:
        scene.roots.append(ent.id)
    else:
        scene.entities[parent_id].children.append(ent.id)
    for bdoc in obj.get("behaviors", []):
        params = {}
        for key, value in bdoc.items():
            if key == "kind":
                continue
            if key in _VEC_PARAMS:
                params[key] = tuple(float(v) for v in value)
            elif isinstance(value, str):
                params[key] = value
            else:
                params[key] = float(value)
        ent.behaviors.append(Behavior(kind=bdoc["kind"], params=params))
    for line in obj.get("handlers", []):
        ent.handlers.append(InteractionHandler(owner=ent.id, body=_parse_handler_line(name, line)))
    for child in obj.get("children", []):
        _build_entity(scene, child, ent.id)


def _parse_handler_line(owner: str, line: str) -> list:
    # Handler bodies are stored as script text; reuse the compiler on a
    # wrapped on_interact so 'self' stays legal. Imported lazily to keep
    # the runtime importable without the script package.
    from ..script import compile_script
    from .commands import AttachHandler

    result = compile_script(f"on_interact {owner} {{ {line} }}")
    if result.errors:
        raise ValueError(f"unparseable handler body {line!r}: {result.errors[0].message}")
    cmd = result.program.commands[0]
    assert isinstance(cmd, AttachHandler)
    return list(cmd.body)
