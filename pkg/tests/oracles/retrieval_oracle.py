"""Brute-force reference for two-stage asset retrieval.

Deliberately independent of the package under test: plain lists and
dicts in, plain math, no imports from the retrieval code. Scores every
entry exhaustively, takes the top-k by language similarity (ties by
ascending id), then the visual argmax within that shortlist (ties by
ascending id).
"""

import math


def cosine(a, b):
    dot = sum(x * y for x, y in zip(a, b))
    na = math.sqrt(sum(x * x for x in a))
    nb = math.sqrt(sum(x * x for x in b))
    return dot / (na * nb)


def best_asset(query_language, target_visual, entries, k=5):
    """entries: list of {"id": str, "lang": [...], "vis": [...]}."""
    language_ranked = sorted(
        entries, key=lambda e: (-cosine(query_language, e["lang"]), e["id"])
    )
    shortlist = language_ranked[:k]
    visual_ranked = sorted(
        shortlist, key=lambda e: (-cosine(target_visual, e["vis"]), e["id"])
    )
    return visual_ranked[0]["id"]
