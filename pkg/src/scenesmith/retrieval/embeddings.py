"""Embeddings and cosine similarity, space-checked."""

from __future__ import annotations

import math
from dataclasses import dataclass

SPACES = ("language", "visual")


class EmbeddingError(Exception):
    pass


class SpaceMismatch(EmbeddingError):
    pass


class DimMismatch(EmbeddingError):
    pass


class ZeroVector(EmbeddingError):
    pass


@dataclass(frozen=True)
class Embedding:
    vector: tuple[float, ...]
    space: str  # "language" | "visual"

    def __post_init__(self) -> None:
        if self.space not in SPACES:
            raise ValueError(f"unknown embedding space {self.space!r}")
        if not self.vector:
            raise ValueError("embedding vector must be non-empty")

    @property
    def dim(self) -> int:
        return len(self.vector)


def cosine_similarity(a: Embedding, b: Embedding) -> float:
    """Standard cosine similarity; only defined within one space."""
    if a.space != b.space:
        raise SpaceMismatch(f"cannot compare {a.space} with {b.space} embeddings")
    if a.dim != b.dim:
        raise DimMismatch(f"dimension mismatch: {a.dim} vs {b.dim}")
    na = math.sqrt(sum(x * x for x in a.vector))
    nb = math.sqrt(sum(x * x for x in b.vector))
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("cosine similarity is undefined for a zero vector")
    dot = sum(x * y for x, y in zip(a.vector, b.vector))
    return max(-1.0, min(1.0, dot / (na * nb)))
