"""Asset catalogs and the providers that embed labels and target images.

The fixture implementations read precomputed vectors from plain JSON
files, so retrieval runs fully offline; live image-generation and
embedding services would slot in behind the same two calls.

Catalog file: {"version": str, "entries": [{id, label, language_embedding,
visual_embedding, payload_ref}, ...]}. Targets file: {"targets":
{label: {language_embedding, target_visual_embedding}, ...}}.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .embeddings import Embedding


class ProviderFailure(Exception):
    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    label: str
    language_embedding: Embedding
    visual_embedding: Embedding
    payload_ref: str = ""  # script snippet path or inline reference


@dataclass
class Catalog:
    entries: list[CatalogEntry]
    version: str = ""

    def __post_init__(self) -> None:
        ids = [e.id for e in self.entries]
        if len(set(ids)) != len(ids):
            raise ValueError("catalog entry ids must be unique")
        if not self.version:
            blob = json.dumps(sorted(ids))
            self.version = hashlib.sha256(blob.encode()).hexdigest()[:12]

    def __len__(self) -> int:
        return len(self.entries)


def load_catalog(path: str | Path) -> Catalog:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    entries = [
        CatalogEntry(
            id=rec["id"],
            label=rec["label"],
            language_embedding=Embedding(tuple(rec["language_embedding"]), "language"),
            visual_embedding=Embedding(tuple(rec["visual_embedding"]), "visual"),
            payload_ref=rec.get("payload_ref", ""),
        )
        for rec in data["entries"]
    ]
    return Catalog(entries=entries, version=data.get("version", ""))


class EmbeddingProviders:
    """Interface the retriever needs: embed a query label in language
    space, and produce the visual embedding of a generated target image
    for that label."""

    def language_embedding(self, label: str) -> Embedding:
        raise NotImplementedError

    def target_visual_embedding(self, label: str) -> Embedding:
        raise NotImplementedError


class FixtureProviders(EmbeddingProviders):
    """Serves precomputed query vectors from a targets file."""

    def __init__(self, targets_path: str | Path):
        data = json.loads(Path(targets_path).read_text(encoding="utf-8"))
        self.targets: dict[str, dict] = data["targets"]

    def language_embedding(self, label: str) -> Embedding:
        rec = self.targets.get(label)
        if rec is None or "language_embedding" not in rec:
            raise ProviderFailure("language-embedding", f"no stored vector for label {label!r}")
        return Embedding(tuple(rec["language_embedding"]), "language")

    def target_visual_embedding(self, label: str) -> Embedding:
        rec = self.targets.get(label)
        if rec is None or "target_visual_embedding" not in rec:
            raise ProviderFailure("image-generation", f"no stored target for label {label!r}")
        return Embedding(tuple(rec["target_visual_embedding"]), "visual")


class InMemoryProviders(EmbeddingProviders):
    def __init__(self, language: dict[str, Embedding], visual: dict[str, Embedding]):
        self.language = language
        self.visual = visual
        self.calls = 0

    def language_embedding(self, label: str) -> Embedding:
        self.calls += 1
        if label not in self.language:
            raise ProviderFailure("language-embedding", f"unknown label {label!r}")
        return self.language[label]

    def target_visual_embedding(self, label: str) -> Embedding:
        self.calls += 1
        if label not in self.visual:
            raise ProviderFailure("image-generation", f"unknown label {label!r}")
        return self.visual[label]
