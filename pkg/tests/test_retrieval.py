"""Asset retrieval: cosine, two-stage selection, oracle agreement, cache."""

import random

import pytest

from scenesmith.retrieval import (
    Catalog,
    CatalogEntry,
    DimMismatch,
    Embedding,
    EmptyCatalog,
    FixtureProviders,
    InMemoryProviders,
    ProviderFailure,
    Retriever,
    SpaceMismatch,
    ZeroVector,
    cosine_similarity,
    load_catalog,
)

from conftest import FIXTURES_DIR
from oracles.retrieval_oracle import best_asset

# Frozen from the standalone oracle over the shipped clock catalog.
CLOCK_FIXTURE_WINNER = "clock-02"


def lang(v):
    return Embedding(tuple(v), "language")


def vis(v):
    return Embedding(tuple(v), "visual")


def make_catalog(rng: random.Random, size: int, dim: int) -> Catalog:
    entries = [
        CatalogEntry(
            id=f"a{i:03d}",
            label=f"asset {i}",
            language_embedding=lang([rng.uniform(-1, 1) for _ in range(dim)]),
            visual_embedding=vis([rng.uniform(-1, 1) for _ in range(dim)]),
        )
        for i in range(size)
    ]
    return Catalog(entries=entries, version=f"r{size}x{dim}")


def make_providers(rng: random.Random, dim: int, label: str) -> InMemoryProviders:
    return InMemoryProviders(
        language={label: lang([rng.uniform(-1, 1) for _ in range(dim)])},
        visual={label: vis([rng.uniform(-1, 1) for _ in range(dim)])},
    )


class TestCosine:
    def test_identity(self):
        assert cosine_similarity(lang([1, 0]), lang([1, 0])) == pytest.approx(1.0)

    def test_orthogonal(self):
        assert cosine_similarity(lang([1, 0]), lang([0, 1])) == pytest.approx(0.0)

    def test_hand_value_inverse_sqrt2(self):
        assert cosine_similarity(lang([1, 1]), lang([1, 0])) == pytest.approx(0.7071067, abs=1e-6)

    def test_symmetry(self):
        a, b = lang([0.3, -0.4, 0.5]), lang([-0.1, 0.9, 0.2])
        assert cosine_similarity(a, b) == cosine_similarity(b, a)

    def test_errors(self):
        with pytest.raises(SpaceMismatch):
            cosine_similarity(lang([1, 0]), vis([1, 0]))
        with pytest.raises(DimMismatch):
            cosine_similarity(lang([1, 0]), lang([1, 0, 0]))
        with pytest.raises(ZeroVector):
            cosine_similarity(lang([0, 0]), lang([1, 0]))


class TestRetrieve:
    def test_single_entry_forced_choice(self, rng):
        catalog = make_catalog(rng, size=1, dim=4)
        providers = make_providers(rng, 4, "anything")
        result = Retriever(catalog, providers).retrieve("anything")
        assert result.chosen.id == "a000"

    def test_matches_oracle_on_random_catalogs(self):
        for seed in range(30):
            rng = random.Random(seed)
            size = rng.randint(1, 50)
            dim = rng.randint(4, 16)
            catalog = make_catalog(rng, size, dim)
            providers = make_providers(rng, dim, "thing")
            got = Retriever(catalog, providers).retrieve("thing").chosen.id
            expected = best_asset(
                list(providers.language["thing"].vector),
                list(providers.visual["thing"].vector),
                [
                    {"id": e.id, "lang": list(e.language_embedding.vector),
                     "vis": list(e.visual_embedding.vector)}
                    for e in catalog.entries
                ],
                k=5,
            )
            assert got == expected, f"seed {seed}"

    def test_two_stage_dominance(self):
        # The globally best visual match sits outside the language top-k
        # and must be ignored; the winner maximizes visual score *within*
        # the shortlist.
        target = vis([1.0, 0.0])
        query = lang([1.0, 0.0])
        entries = [
            CatalogEntry(id="in-a", label="", language_embedding=lang([1.0, 0.0]),
                         visual_embedding=vis([0.8, 0.6])),
            CatalogEntry(id="in-b", label="", language_embedding=lang([0.99, 0.1]),
                         visual_embedding=vis([0.9, 0.435889894354])),
            CatalogEntry(id="outsider", label="", language_embedding=lang([-1.0, 0.0]),
                         visual_embedding=vis([1.0, 0.0])),  # perfect visual match
        ]
        catalog = Catalog(entries=entries, version="dominance")
        providers = InMemoryProviders(language={"q": query}, visual={"q": target})
        result = Retriever(catalog, providers).retrieve("q", k=2)
        assert result.chosen.id == "in-b"
        assert [e.id for e in result.language_top_k] == ["in-a", "in-b"]
        visual_scores = {i: s["visual_score"] for i, s in result.scores.items()}
        assert visual_scores["outsider"] > visual_scores["in-b"]  # and yet it lost

    def test_tie_breaks_ascending_id(self):
        same_lang = [1.0, 0.0]
        same_vis = [0.0, 1.0]
        entries = [
            CatalogEntry(id=f"tied-{i}", label="", language_embedding=lang(same_lang),
                         visual_embedding=vis(same_vis))
            for i in (3, 1, 2)
        ]
        catalog = Catalog(entries=entries, version="ties")
        providers = InMemoryProviders(language={"q": lang([1, 0])}, visual={"q": vis([0, 1])})
        result = Retriever(catalog, providers).retrieve("q", k=2)
        assert result.chosen.id == "tied-1"
        assert [e.id for e in result.language_top_k] == ["tied-1", "tied-2"]

    def test_cache_hit_skips_providers(self, rng):
        catalog = make_catalog(rng, 10, 8)
        providers = make_providers(rng, 8, "lamp")
        retriever = Retriever(catalog, providers)
        first = retriever.retrieve("lamp")
        calls_after_first = providers.calls
        second = retriever.retrieve("lamp")
        assert providers.calls == calls_after_first  # zero further provider calls
        assert second.cache_hit and not first.cache_hit
        assert second.chosen.id == first.chosen.id
        assert second.scores == first.scores

    def test_disk_cache_round_trip(self, rng, tmp_path):
        catalog = make_catalog(rng, 10, 8)
        providers = make_providers(rng, 8, "lamp")
        first = Retriever(catalog, providers, cache_dir=tmp_path).retrieve("lamp")
        fresh = Retriever(catalog, make_providers(random.Random(1), 8, "lamp"), cache_dir=tmp_path)
        again = fresh.retrieve("lamp")
        assert again.chosen.id == first.chosen.id
        assert fresh.providers.calls == 0

    def test_k_at_least_catalog_means_pure_visual_argmax(self, rng):
        catalog = make_catalog(rng, 6, 8)
        providers = make_providers(rng, 8, "q")
        result = Retriever(catalog, providers).retrieve("q", k=100)
        assert len(result.language_top_k) == 6
        best_visual = max(
            catalog.entries,
            key=lambda e: (cosine_similarity(providers.visual["q"], e.visual_embedding), )
        )
        assert result.chosen.id == best_visual.id

    def test_empty_catalog(self):
        providers = InMemoryProviders(language={}, visual={})
        with pytest.raises(EmptyCatalog):
            Retriever(Catalog(entries=[], version="none"), providers).retrieve("x")

    def test_provider_failure_names_stage(self, rng):
        catalog = make_catalog(rng, 3, 4)
        providers = InMemoryProviders(language={}, visual={})
        with pytest.raises(ProviderFailure) as exc_info:
            Retriever(catalog, providers).retrieve("x")
        assert exc_info.value.stage == "language-embedding"

    def test_visual_first_flag_flips_stages(self):
        target = vis([1.0, 0.0])
        query = lang([1.0, 0.0])
        entries = [
            CatalogEntry(id="lang-star", label="", language_embedding=lang([1.0, 0.0]),
                         visual_embedding=vis([-1.0, 0.0])),
            CatalogEntry(id="vis-star", label="", language_embedding=lang([-1.0, 0.0]),
                         visual_embedding=vis([1.0, 0.0])),
            CatalogEntry(id="middle", label="", language_embedding=lang([0.7, 0.714142842854]),
                         visual_embedding=vis([0.7, 0.714142842854])),
        ]
        catalog = Catalog(entries=entries, version="flip")
        providers = InMemoryProviders(language={"q": query}, visual={"q": target})
        language_first = Retriever(catalog, providers).retrieve("q", k=2).chosen.id
        visual_first = Retriever(catalog, providers, visual_first=True).retrieve("q", k=2).chosen.id
        assert language_first == "middle"  # shortlist {lang-star, middle}, visual argmax
        assert visual_first == "middle"  # shortlist {vis-star, middle}, language argmax
        # The flag changes which shortlist the outsiders are excluded from.
        assert language_first == visual_first  # same winner here, via different routes


class TestClockFixture:
    def test_shipped_catalog_matches_oracle(self):
        catalog = load_catalog(FIXTURES_DIR / "catalogs" / "clocks.json")
        providers = FixtureProviders(FIXTURES_DIR / "catalogs" / "clock_targets.json")
        result = Retriever(catalog, providers).retrieve("clock")
        assert result.chosen.id == CLOCK_FIXTURE_WINNER
        assert len(result.language_top_k) == 5
        assert result.chosen in result.language_top_k
