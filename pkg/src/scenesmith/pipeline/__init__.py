"""Request pipeline: planning, scene analysis, skills, build-inspect loop."""

from .config import (
    MODULES,
    PRESETS,
    MemoryMode,
    PipelineConfig,
    config_from_file,
    config_from_preset,
    default_memory_modes,
    resolve_config,
)
from .episodes import Attempt, Episode, EpisodeStore, Instruction, Request, SceneSummary, trim_memory
from .orchestrate import (
    ClarifyingQuestion,
    GenerationResult,
    NoCodeBlock,
    Pipeline,
    RunResult,
    Verdict,
)
from .skills import DuplicateSkillId, Skill, SkillRegistry, load_default_registry, load_registry

__all__ = [
    "Attempt",
    "ClarifyingQuestion",
    "DuplicateSkillId",
    "Episode",
    "EpisodeStore",
    "GenerationResult",
    "Instruction",
    "MODULES",
    "MemoryMode",
    "NoCodeBlock",
    "PRESETS",
    "Pipeline",
    "PipelineConfig",
    "Request",
    "RunResult",
    "SceneSummary",
    "Skill",
    "SkillRegistry",
    "Verdict",
    "config_from_file",
    "config_from_preset",
    "default_memory_modes",
    "load_default_registry",
    "load_registry",
    "resolve_config",
    "trim_memory",
]
