"""World state: entities, transforms, behaviors, interaction handlers.

A :class:`Scene` is a hierarchical graph of named entities. All public
mutation goes through :func:`scenesmith.runtime.commands.apply_command`,
which works on a copy, so callers holding a Scene never see it change
under them.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import Optional

from .geometry import Vec3

SHAPES = ("cube", "sphere", "cylinder", "plane", "capsule")
BEHAVIOR_KINDS = ("spin", "orbit", "oscillate", "follow")

DEFAULT_COLOR = (255, 255, 255)

# Reserved inside interaction-handler bodies; resolved to the owning entity.
SELF_NAME = "self"


class SceneError(Exception):
    """Base class for runtime-level scene failures."""

    kind = "SceneError"


class EntityNotFound(SceneError):
    kind = "EntityNotFound"


class DuplicateName(SceneError):
    kind = "DuplicateName"


class CycleError(SceneError):
    kind = "CycleError"


class HandlerError(SceneError):
    kind = "HandlerError"

    def __init__(self, message: str, handler_index: int):
        super().__init__(message)
        self.handler_index = handler_index


@dataclass
class Transform:
    position: Vec3 = (0.0, 0.0, 0.0)
    rotation: Vec3 = (0.0, 0.0, 0.0)  # Euler degrees, applied Z, then X, then Y
    scale: Vec3 = (1.0, 1.0, 1.0)

    def validate(self) -> None:
        for v in (*self.position, *self.rotation, *self.scale):
            if not _finite(v):
                raise ValueError("transform components must be finite")
        if any(s <= 0 for s in self.scale):
            raise ValueError("scale components must be > 0")


def _finite(x: float) -> bool:
    return x == x and x not in (float("inf"), float("-inf"))


@dataclass
class Behavior:
    """One tick-driven motion. ``params`` holds both the user-supplied
    arguments (axis already normalized by whoever constructed the
    behavior) and the per-behavior runtime state (oscillate origin,
    orbit angle), so a serialized scene resumes exactly where it left
    off."""

    kind: str
    params: dict

    def __post_init__(self) -> None:
        if self.kind not in BEHAVIOR_KINDS:
            raise ValueError(f"unknown behavior kind {self.kind!r}")
        if self.kind == "oscillate" and self.params.get("period", 1.0) <= 0:
            raise ValueError("oscillate period must be > 0")
        if self.kind == "follow" and self.params.get("speed", 0.0) < 0:
            raise ValueError("follow speed must be >= 0")


@dataclass
class InteractionHandler:
    """A click handler: an ordered body of set/create/delete commands.

    Bodies may not contain repeat blocks or nested handlers; the script
    checker enforces this before a handler ever reaches the runtime.
    """

    owner: int
    body: list  # list of runtime commands (see commands.py)


@dataclass
class Entity:
    id: int
    name: str
    shape: str
    transform: Transform = field(default_factory=Transform)
    color: tuple[int, int, int] = DEFAULT_COLOR
    parent: Optional[int] = None
    children: list[int] = field(default_factory=list)
    behaviors: list[Behavior] = field(default_factory=list)
    handlers: list[InteractionHandler] = field(default_factory=list)


@dataclass
class Scene:
    entities: dict[int, Entity] = field(default_factory=dict)
    roots: list[int] = field(default_factory=list)
    clock: float = 0.0
    next_id: int = 0
    names: dict[str, int] = field(default_factory=dict)

    def clone(self) -> "Scene":
        return copy.deepcopy(self)

    def lookup(self, name: str) -> Entity:
        eid = self.names.get(name)
        if eid is None:
            raise EntityNotFound(f"no entity named {name!r}")
        return self.entities[eid]

    def has(self, name: str) -> bool:
        return name in self.names

    def allocate_id(self) -> int:
        eid = self.next_id
        self.next_id += 1
        return eid

    def is_ancestor(self, ancestor: int, node: int) -> bool:
        cur: Optional[int] = node
        while cur is not None:
            if cur == ancestor:
                return True
            cur = self.entities[cur].parent
        return False

    def check_invariants(self) -> None:
        """Sanity sweep used by tests: names unique, links consistent, acyclic."""
        seen: dict[str, int] = {}
        for eid, ent in self.entities.items():
            assert ent.id == eid
            assert ent.name not in seen, f"duplicate name {ent.name}"
            seen[ent.name] = eid
            if ent.parent is not None:
                assert eid in self.entities[ent.parent].children
            for child in ent.children:
                assert self.entities[child].parent == eid
        assert seen == self.names
        assert [e for e in self.entities if self.entities[e].parent is None] == self.roots
        for eid in self.entities:
            hops, cur = 0, self.entities[eid].parent
            while cur is not None:
                hops += 1
                assert hops <= len(self.entities), "parent cycle"
                cur = self.entities[cur].parent
