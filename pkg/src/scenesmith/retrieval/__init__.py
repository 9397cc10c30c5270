"""Embedding-based asset retrieval."""

from .catalog import (
    Catalog,
    CatalogEntry,
    EmbeddingProviders,
    FixtureProviders,
    InMemoryProviders,
    ProviderFailure,
    load_catalog,
)
from .embeddings import (
    DimMismatch,
    Embedding,
    EmbeddingError,
    SpaceMismatch,
    ZeroVector,
    cosine_similarity,
)
from .retriever import EmptyCatalog, RetrievalResult, Retriever

__all__ = [
    "Catalog",
    "CatalogEntry",
    "DimMismatch",
    "Embedding",
    "EmbeddingError",
    "EmbeddingProviders",
    "EmptyCatalog",
    "FixtureProviders",
    "InMemoryProviders",
    "ProviderFailure",
    "RetrievalResult",
    "Retriever",
    "SpaceMismatch",
    "ZeroVector",
    "cosine_similarity",
    "load_catalog",
]
