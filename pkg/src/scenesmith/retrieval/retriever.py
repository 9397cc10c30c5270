"""Two-stage asset retrieval: top-k by language similarity, then the
visually closest of those to a generated target image.

Results are cached by (label, catalog version): a repeated lookup is
served without touching the providers at all. The stage order can be
flipped (visual shortlist first, language argmax second) via a flag;
language-first is the default.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from .catalog import Catalog, CatalogEntry, EmbeddingProviders
from .embeddings import cosine_similarity

CACHE_FORMAT = 1  # bump when the cached record layout changes


class EmptyCatalog(Exception):
    pass


@dataclass
class RetrievalResult:
    chosen: CatalogEntry
    language_top_k: list[CatalogEntry]
    scores: dict[str, dict[str, float]]  # entry id -> {language_score, visual_score}
    cache_hit: bool = False


class Retriever:
    def __init__(
        self,
        catalog: Catalog,
        providers: EmbeddingProviders,
        cache_dir: Optional[str | Path] = None,
        visual_first: bool = False,
    ):
        self.catalog = catalog
        self.providers = providers
        self.visual_first = visual_first
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self._cache: dict[tuple[str, str], RetrievalResult] = {}

    def retrieve(self, label: str, k: int = 5) -> RetrievalResult:
        if len(self.catalog) == 0:
            raise EmptyCatalog("cannot retrieve from an empty catalog")
        if k < 1:
            raise ValueError("k must be >= 1")
        key = (label, self.catalog.version)
        cached = self._cache.get(key)
        if cached is None:
            cached = self._disk_get(label)
        if cached is not None:
            self._cache[key] = cached
            return replace(cached, cache_hit=True)

        query_lang = self.providers.language_embedding(label)
        target = self.providers.target_visual_embedding(label)

        lang_scores = {
            e.id: cosine_similarity(query_lang, e.language_embedding) for e in self.catalog.entries
        }
        visual_scores = {
            e.id: cosine_similarity(target, e.visual_embedding) for e in self.catalog.entries
        }
        if self.visual_first:
            shortlist = self._top_k(self.catalog.entries, visual_scores, k)
            chosen = self._argmax(shortlist, lang_scores)
        else:
            shortlist = self._top_k(self.catalog.entries, lang_scores, k)
            chosen = self._argmax(shortlist, visual_scores)

        result = RetrievalResult(
            chosen=chosen,
            language_top_k=shortlist,
            scores={
                e.id: {"language_score": lang_scores[e.id], "visual_score": visual_scores[e.id]}
                for e in self.catalog.entries
            },
            cache_hit=False,
        )
        self._cache[key] = result
        self._disk_put(label, result)
        return result

    @staticmethod
    def _top_k(entries: list[CatalogEntry], scores: dict[str, float], k: int) -> list[CatalogEntry]:
        # Highest score first; ties broken by ascending id.
        ranked = sorted(entries, key=lambda e: (-scores[e.id], e.id))
        return ranked[:k]

    @staticmethod
    def _argmax(entries: list[CatalogEntry], scores: dict[str, float]) -> CatalogEntry:
        return min(entries, key=lambda e: (-scores[e.id], e.id))

    # -- optional on-disk cache: <dir>/v<fmt>/<catalog version>/<label>.json --

    def _cache_path(self, label: str) -> Optional[Path]:
        if self.cache_dir is None:
            return None
        safe = "".join(c if c.isalnum() or c in "-_" else "_" for c in label)
        return self.cache_dir / f"v{CACHE_FORMAT}" / self.catalog.version / f"{safe}.json"

    def _disk_get(self, label: str) -> Optional[RetrievalResult]:
        path = self._cache_path(label)
        if path is None or not path.exists():
            return None
        data = json.loads(path.read_text(encoding="utf-8"))
        by_id = {e.id: e for e in self.catalog.entries}
        try:
            return RetrievalResult(
                chosen=by_id[data["chosen"]],
                language_top_k=[by_id[i] for i in data["language_top_k"]],
                scores=data["scores"],
                cache_hit=False,
            )
        except KeyError:
            return None  # catalog changed under the cache; recompute

    def _disk_put(self, label: str, result: RetrievalResult) -> None:
        path = self._cache_path(label)
        if path is None:
            return
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(
            json.dumps(
                {
                    "chosen": result.chosen.id,
                    "language_top_k": [e.id for e in result.language_top_k],
                    "scores": result.scores,
                },
                indent=1,
            ),
            encoding="utf-8",
        )
