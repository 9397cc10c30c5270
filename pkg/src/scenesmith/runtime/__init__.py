"""Deterministic in-memory scene runtime."""

from .commands import (
    AttachBehavior,
    AttachHandler,
    Command,
    Create,
    Delete,
    Set,
    apply_command,
    interact,
    render_command,
    tick,
)
from .entities import (
    BEHAVIOR_KINDS,
    SHAPES,
    Behavior,
    CycleError,
    DuplicateName,
    Entity,
    EntityNotFound,
    HandlerError,
    InteractionHandler,
    Scene,
    SceneError,
    Transform,
)
from .serialize import parse_hierarchy, scene_hash, serialize_hierarchy

__all__ = [
    "AttachBehavior",
    "AttachHandler",
    "BEHAVIOR_KINDS",
    "Behavior",
    "Command",
    "Create",
    "CycleError",
    "Delete",
    "DuplicateName",
    "Entity",
    "EntityNotFound",
    "HandlerError",
    "InteractionHandler",
    "SHAPES",
    "Scene",
    "SceneError",
    "Set",
    "Transform",
    "apply_command",
    "interact",
    "parse_hierarchy",
    "render_command",
    "scene_hash",
    "serialize_hierarchy",
    "tick",
]
