"""The runtime's mutation primitives and their copy-on-write entry point.

Commands arrive pre-validated from the script compiler: shapes, behavior
kinds, and value shapes are already checked, so the only failures left
here are name and structure errors (missing entity, duplicate name,
parenting cycle, handler trouble).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Union

from .entities import (
    SELF_NAME,
    Behavior,
    CycleError,
    DuplicateName,
    Entity,
    HandlerError,
    InteractionHandler,
    Scene,
    SceneError,
)
from .formatting import color_hex, fmt_number_str
from .geometry import vadd, vnorm, vscale, vsub, vunit, rotate_euler

log = logging.getLogger("scenesmith.runtime")


@dataclass(frozen=True)
class Create:
    name: str
    shape: str
    parent: Optional[str] = None


@dataclass(frozen=True)
class Set:
    name: str
    updates: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Delete:
    name: str


@dataclass(frozen=True)
class AttachBehavior:
    name: str
    kind: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class AttachHandler:
    name: str
    body: tuple = ()  # Create/Set/Delete commands only


Command = Union[Create, Set, Delete, AttachBehavior, AttachHandler]


def apply_command(scene: Scene, command: Command) -> Scene:
    """Apply one command to a copy of ``scene`` and return the copy.

    Raises EntityNotFound / DuplicateName / CycleError; on failure the
    input scene is untouched (we only ever mutate the copy).
    """
    work = scene.clone()
    _apply_into(work, command)
    return work


def _apply_into(scene: Scene, command: Command) -> None:
    if isinstance(command, Create):
        _create(scene, command)
    elif isinstance(command, Set):
        _set(scene, command)
    elif isinstance(command, Delete):
        _delete(scene, command)
    elif isinstance(command, AttachBehavior):
        _attach_behavior(scene, command)
    elif isinstance(command, AttachHandler):
        _attach_handler(scene, command)
    else:
        raise TypeError(f"unknown command {command!r}")


def _create(scene: Scene, cmd: Create) -> None:
    if scene.has(cmd.name):
        raise DuplicateName(f"entity {cmd.name!r} already exists")
    parent_id = None
    if cmd.parent is not None:
        parent_id = scene.lookup(cmd.parent).id
    ent = Entity(id=scene.allocate_id(), name=cmd.name, shape=cmd.shape, parent=parent_id)
    scene.entities[ent.id] = ent
    scene.names[ent.name] = ent.id
    if parent_id is None:
        scene.roots.append(ent.id)
    else:
        scene.entities[parent_id].children.append(ent.id)


def _set(scene: Scene, cmd: Set) -> None:
    ent = scene.lookup(cmd.name)
    for prop, value in cmd.updates.items():
        if prop == "position":
            ent.transform.position = tuple(value)
            for beh in ent.behaviors:
                # Re-anchor oscillation so 'set position' stays meaningful.
                if beh.kind == "oscillate":
                    beh.params["origin"] = tuple(value)
        elif prop == "rotation":
            ent.transform.rotation = tuple(value)
        elif prop == "scale":
            ent.transform.scale = tuple(value)
            ent.transform.validate()
        elif prop == "color":
            ent.color = tuple(value)
        elif prop == "parent":
            _reparent(scene, ent, value)
        else:
            raise ValueError(f"unknown property {prop!r}")


def _reparent(scene: Scene, ent: Entity, parent_name: str) -> None:
    new_parent = scene.lookup(parent_name)
    if scene.is_ancestor(ent.id, new_parent.id):
        raise CycleError(
            f"cannot parent {ent.name!r} under {parent_name!r}: would create a cycle"
        )
    if ent.parent is None:
        scene.roots.remove(ent.id)
    else:
        scene.entities[ent.parent].children.remove(ent.id)
    ent.parent = new_parent.id
    new_parent.children.append(ent.id)


def _delete(scene: Scene, cmd: Delete) -> None:
    ent = scene.lookup(cmd.name)
    doomed: list[int] = []
    stack = [ent.id]
    while stack:
        eid = stack.pop()
        doomed.append(eid)
        stack.extend(scene.entities[eid].children)
    if ent.parent is None:
        scene.roots.remove(ent.id)
    else:
        scene.entities[ent.parent].children.remove(ent.id)
    for eid in doomed:
        victim = scene.entities.pop(eid)
        del scene.names[victim.name]


def _attach_behavior(scene: Scene, cmd: AttachBehavior) -> None:
    ent = scene.lookup(cmd.name)
    params = dict(cmd.params)
    if "axis" in params:
        params["axis"] = vunit(tuple(params["axis"]))
    if cmd.kind == "orbit":
        center = scene.lookup(params["center"])
        if "angle" not in params:
            dx = ent.transform.position[0] - center.transform.position[0]
            dz = ent.transform.position[2] - center.transform.position[2]
            params["angle"] = math.degrees(math.atan2(dz, dx)) if (dx or dz) else 0.0
    elif cmd.kind == "follow":
        scene.lookup(params["target"])
    elif cmd.kind == "oscillate":
        params.setdefault("origin", ent.transform.position)
    ent.behaviors.append(Behavior(kind=cmd.kind, params=params))


def _attach_handler(scene: Scene, cmd: AttachHandler) -> None:
    ent = scene.lookup(cmd.name)
    ent.handlers.append(InteractionHandler(owner=ent.id, body=list(cmd.body)))


def tick(scene: Scene, dt: float) -> Scene:
    """Advance the clock and every behavior by ``dt`` seconds.

    Behaviors referencing deleted entities are skipped with a logged
    warning, never a crash. Entities update in creation order reading
    live positions, so the result is fully deterministic.
    """
    if not (dt > 0) or dt != dt or dt == float("inf"):
        raise ValueError("dt must be finite and > 0")
    work = scene.clone()
    work.clock += dt
    for ent in work.entities.values():
        for beh in ent.behaviors:
            _advance(work, ent, beh, dt)
    return work


def _advance(scene: Scene, ent: Entity, beh: Behavior, dt: float) -> None:
    p = beh.params
    if beh.kind == "spin":
        ent.transform.rotation = rotate_euler(ent.transform.rotation, p["axis"], p["speed"] * dt)
    elif beh.kind == "orbit":
        center_id = scene.names.get(p["center"])
        if center_id is None:
            log.warning("orbit on %r skipped: center %r no longer exists", ent.name, p["center"])
            return
        center = scene.entities[center_id].transform.position
        p["angle"] = p["angle"] + p["speed"] * dt
        a = math.radians(p["angle"])
        r = p["radius"]
        ent.transform.position = (
            center[0] + r * math.cos(a),
            ent.transform.position[1],
            center[2] + r * math.sin(a),
        )
    elif beh.kind == "oscillate":
        offset = p["amplitude"] * math.sin(2.0 * math.pi * scene.clock / p["period"])
        ent.transform.position = vadd(tuple(p["origin"]), vscale(p["axis"], offset))
    elif beh.kind == "follow":
        target_id = scene.names.get(p["target"])
        if target_id is None:
            log.warning("follow on %r skipped: target %r no longer exists", ent.name, p["target"])
            return
        goal = scene.entities[target_id].transform.position
        delta = vsub(goal, ent.transform.position)
        dist = vnorm(delta)
        if dist > 0:
            step = min(p["speed"] * dt, dist)
            ent.transform.position = vadd(ent.transform.position, vscale(delta, step / dist))


def interact(scene: Scene, name: str) -> Scene:
    """Fire every handler on the named entity, in order.

    Each handler is all-or-nothing: an error inside one raises
    HandlerError carrying the handler index, and the caller's scene is
    left exactly as it was.
    """
    ent = scene.lookup(name)
    work = scene.clone()
    for hi, handler in enumerate(work.entities[ent.id].handlers):
        owner_name = work.entities[handler.owner].name
        trial = work.clone()
        try:
            for cmd in handler.body:
                _apply_into(trial, resolve_self(cmd, owner_name))
        except SceneError as exc:
            raise HandlerError(f"handler {hi} on {name!r} failed: {exc}", hi) from exc
        work = trial
    return work


def resolve_self(cmd: Command, owner: str) -> Command:
    """Substitute the reserved name 'self' with the handler's owner."""

    def sub(n: Optional[str]) -> Optional[str]:
        return owner if n == SELF_NAME else n

    if isinstance(cmd, Create):
        return Create(name=sub(cmd.name), shape=cmd.shape, parent=sub(cmd.parent))
    if isinstance(cmd, Set):
        updates = dict(cmd.updates)
        if "parent" in updates:
            updates["parent"] = sub(updates["parent"])
        return Set(name=sub(cmd.name), updates=updates)
    if isinstance(cmd, Delete):
        return Delete(name=sub(cmd.name))
    return cmd


def render_command(cmd: Command) -> str:
    """Canonical one-line script form of a command (used in serialized
    handler bodies and execution logs); parseable back by the compiler."""
    if isinstance(cmd, Create):
        out = f"create {cmd.name} shape={cmd.shape}"
        if cmd.parent is not None:
            out += f" parent={cmd.parent}"
        return out
    if isinstance(cmd, Set):
        parts = [f"set {cmd.name}"]
        for prop, value in cmd.updates.items():
            parts.append(f"{prop}={render_value(prop, value)}")
        return " ".join(parts)
    if isinstance(cmd, Delete):
        return f"delete {cmd.name}"
    if isinstance(cmd, AttachBehavior):
        parts = [f"behavior {cmd.name} {cmd.kind}"]
        for key in sorted(cmd.params):
            if key in ("angle", "origin"):
                continue  # runtime state, not user-facing arguments
            parts.append(f"{key}={render_value(key, cmd.params[key])}")
        return " ".join(parts)
    if isinstance(cmd, AttachHandler):
        inner = "; ".join(render_command(c) for c in cmd.body)
        return f"on_interact {cmd.name} {{ {inner} }}"
    raise TypeError(f"unknown command {cmd!r}")


def render_value(prop: str, value) -> str:
    if prop == "color":
        return color_hex(tuple(value))
    if isinstance(value, (tuple, list)):
        return "(" + ",".join(fmt_number_str(v) for v in value) + ")"
    if isinstance(value, str):
        return value
    return fmt_number_str(value)
