"""Pipeline configuration, memory modes, and the ablation presets."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Optional

MODULES = ("planner", "scene_analyzer", "skill_library", "builder", "inspector")


@dataclass(frozen=True)
class MemoryMode:
    kind: str  # "full" | "limited" | "memoryless"
    n: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in ("full", "limited", "memoryless"):
            raise ValueError(f"unknown memory mode {self.kind!r}")
        if self.kind == "limited" and (self.n is None or self.n < 1):
            raise ValueError("limited memory requires a positive N")

    @classmethod
    def full(cls) -> "MemoryMode":
        return cls("full")

    @classmethod
    def limited(cls, n: int) -> "MemoryMode":
        return cls("limited", n)

    @classmethod
    def memoryless(cls) -> "MemoryMode":
        return cls("memoryless")


def default_memory_modes() -> dict[str, MemoryMode]:
    # Builder keeps the last episode; everything else starts fresh each call.
    return {
        "planner": MemoryMode.memoryless(),
        "scene_analyzer": MemoryMode.memoryless(),
        "builder": MemoryMode.limited(1),
        "inspector": MemoryMode.memoryless(),
        "skill_library": MemoryMode.memoryless(),
    }


DEFAULT_METAPROMPT_FILES = {
    "planner": "planner.txt",
    "scene_analyzer": "scene_analyzer.txt",
    "skill_library": "skill_library.txt",
    "builder": "builder_few_shot.txt",
    "inspector": "inspector.txt",
}


@dataclass
class PipelineConfig:
    name: str = "full LLMR"
    enable_planner: bool = False
    enable_scene_analyzer: bool = True
    enable_skill_library: bool = True
    enable_inspector: bool = True
    max_inspections: int = 3  # T
    halt_on_failure: bool = False
    window: int = 8000
    hierarchy_token_budget: int = 2000
    model_id: str = "default"
    temperature: float = 0.0
    max_output_tokens: int = 1024
    memory_modes: dict[str, MemoryMode] = field(default_factory=default_memory_modes)
    metaprompt_files: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_METAPROMPT_FILES))
    metaprompt_dir: Optional[str] = None  # overrides the packaged prompt files

    def __post_init__(self) -> None:
        if self.max_inspections < 1:
            raise ValueError("max_inspections must be >= 1")

    def metaprompt(self, module: str) -> str:
        filename = self.metaprompt_files[module]
        if self.metaprompt_dir is not None:
            return (Path(self.metaprompt_dir) / filename).read_text(encoding="utf-8")
        return resources.files("scenesmith.pipeline").joinpath("metaprompts", filename).read_text(
            encoding="utf-8"
        )

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "enable_planner": self.enable_planner,
            "enable_scene_analyzer": self.enable_scene_analyzer,
            "enable_skill_library": self.enable_skill_library,
            "enable_inspector": self.enable_inspector,
            "max_inspections": self.max_inspections,
            "halt_on_failure": self.halt_on_failure,
            "window": self.window,
            "hierarchy_token_budget": self.hierarchy_token_budget,
            "model_id": self.model_id,
            "temperature": self.temperature,
            "max_output_tokens": self.max_output_tokens,
            "memory_modes": {
                m: {"kind": mode.kind, "n": mode.n} for m, mode in sorted(self.memory_modes.items())
            },
            "metaprompt_files": dict(sorted(self.metaprompt_files.items())),
        }

    def fingerprint(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


# The ablation ladder: each preset adds one module on top of the last.
PRESETS = ("zero-shot", "few-shot", "+SA", "+SA+SL", "+SA+I", "full LLMR")


def config_from_preset(name: str) -> PipelineConfig:
    key = name.strip().lower().replace("_", "-").replace(" ", "-")
    base = PipelineConfig(
        name=name,
        enable_planner=False,
        enable_scene_analyzer=False,
        enable_skill_library=False,
        enable_inspector=False,
    )
    if key == "zero-shot":
        base.metaprompt_files["builder"] = "builder_zero_shot.txt"
        return base
    if key == "few-shot":
        return base
    if key == "+sa":
        base.enable_scene_analyzer = True
        return base
    if key == "+sa+sl":
        base.enable_scene_analyzer = True
        base.enable_skill_library = True
        return base
    if key == "+sa+i":
        base.enable_scene_analyzer = True
        base.enable_inspector = True
        return base
    if key in ("full-llmr", "full"):
        base.enable_scene_analyzer = True
        base.enable_skill_library = True
        base.enable_inspector = True
        base.name = "full LLMR"
        return base
    raise KeyError(f"unknown preset {name!r} (expected one of {', '.join(PRESETS)})")


def config_from_file(path: str | Path) -> PipelineConfig:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    preset = data.pop("preset", None)
    cfg = config_from_preset(preset) if preset else PipelineConfig()
    if "memory_modes" in data:
        cfg.memory_modes = {
            m: MemoryMode(v["kind"], v.get("n")) for m, v in data.pop("memory_modes").items()
        }
    if "metaprompt_files" in data:
        cfg.metaprompt_files.update(data.pop("metaprompt_files"))
    for key, value in data.items():
        if not hasattr(cfg, key):
            raise KeyError(f"unknown config field {key!r}")
        setattr(cfg, key, value)
    return cfg


def resolve_config(spec: str) -> PipelineConfig:
    """Accept either a preset name or a JSON config file path."""
    try:
        return config_from_preset(spec)
    except KeyError:
        if Path(spec).exists():
            return config_from_file(spec)
        raise
