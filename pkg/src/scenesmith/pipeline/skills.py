"""The skill registry: one-line summaries for selection, full usage
details handed to the builder only when a skill is picked."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..providers.base import estimate_tokens


class DuplicateSkillId(Exception):
    pass


@dataclass(frozen=True)
class Skill:
    id: str
    summary: str
    details: str

    def __post_init__(self) -> None:
        if len(self.summary) > 200:
            raise ValueError("skill summaries must stay within 200 characters")

    @property
    def token_cost(self) -> int:
        return estimate_tokens(self.details)


class SkillRegistry:
    def __init__(self) -> None:
        self._skills: dict[str, Skill] = {}

    def register(self, skill: Skill) -> None:
        if skill.id in self._skills:
            raise DuplicateSkillId(f"skill {skill.id!r} already registered")
        self._skills[skill.id] = skill

    def __contains__(self, skill_id: str) -> bool:
        return skill_id in self._skills

    def __len__(self) -> int:
        return len(self._skills)

    def ids(self) -> list[str]:
        return list(self._skills)

    def get(self, skill_id: str) -> Skill:
        return self._skills[skill_id]

    def summary_lines(self) -> str:
        return "\n".join(f"- {s.id}: {s.summary}" for s in self._skills.values())

    def expand(self, ids: list[str]) -> str:
        return "\n\n".join(self._skills[i].details for i in ids if i in self._skills)


def load_default_registry() -> SkillRegistry:
    raw = resources.files("scenesmith.pipeline").joinpath("skills.json").read_text(encoding="utf-8")
    return registry_from_records(json.loads(raw))


def load_registry(path: str | Path) -> SkillRegistry:
    return registry_from_records(json.loads(Path(path).read_text(encoding="utf-8")))


def registry_from_records(records: list[dict]) -> SkillRegistry:
    registry = SkillRegistry()
    for rec in records:
        registry.register(Skill(id=rec["id"], summary=rec["summary"], details=rec["details"]))
    return registry
