"""Durable storage: saved generations and scene files."""

from .generations import GenerationStore, SavedGeneration, SaveRejected, UnknownId
from .scenefile import (
    SCENE_FORMAT,
    VersionMismatch,
    export_scene,
    export_scene_text,
    import_scene,
    import_scene_text,
)

__all__ = [
    "GenerationStore",
    "SCENE_FORMAT",
    "SaveRejected",
    "SavedGeneration",
    "UnknownId",
    "VersionMismatch",
    "export_scene",
    "export_scene_text",
    "import_scene",
    "import_scene_text",
]
