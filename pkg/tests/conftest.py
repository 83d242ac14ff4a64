"""Shared fixtures: hand-built dump lines and synthetic random networks."""

from __future__ import annotations

import json
import random

import pytest

from abductive_qa import kb


def dump_line(rel: str, start: str, end: str, weight: float, meta: dict | None = None) -> str:
    """One ConceptNet 5.x assertion record (tab-separated, JSON metadata)."""
    payload = {"dataset": "/d/test", "license": "cc:by/4.0", "weight": weight}
    if meta:
        payload.update(meta)
    edge_uri = f"/a/[/r/{rel}/,/c/{start}/,/c/{end}/]"
    return "\t".join(
        [edge_uri, f"/r/{rel}", f"/c/{start}", f"/c/{end}", json.dumps(payload)]
    )


# The running woman-plays-piano vignette: woman and piano are grounded,
# music is the hypothesis concept, person and instrument bridge the
# deficient pairs. Distractor vocabulary rides along.
PIANO_LINES = [
    dump_line("IsA", "en/woman", "en/person", 2.0),
    dump_line("IsA", "en/piano", "en/instrument", 2.0),
    dump_line("UsedFor", "en/piano", "en/music", 1.0),
    dump_line("CapableOf", "en/person", "en/music", 1.0),
    dump_line("UsedFor", "en/instrument", "en/music", 1.5),
    dump_line("RelatedTo", "en/woman", "en/instrument", 0.8),
    dump_line("IsA", "en/man", "en/person", 1.8),
    dump_line("IsA", "en/dog", "en/animal", 1.0),
    dump_line("RelatedTo", "en/food", "en/animal", 0.5),
]

# Ten lines for the ingestion fixture: eight retained, one French line and
# one self-loop skipped.
KB_FIXTURE_LINES = [
    dump_line("IsA", "en/piano", "en/instrument", 2.0),
    dump_line("UsedFor", "en/piano", "en/music", 1.0),
    dump_line("CapableOf", "en/woman", "en/play_music", 0.5),
    dump_line("IsA", "en/woman", "en/person", 2.0),
    dump_line("NotCapableOf", "en/dog", "en/fly", 1.0),
    dump_line("Antonym", "en/hot", "en/cold", 2.5),
    dump_line("IsA", "fr/chien", "fr/animal", 1.0),
    dump_line("HasA", "en/piano", "en/key", 1.0),
    dump_line("IsA", "en/piano", "en/piano", 1.0),
    dump_line("AtLocation", "en/piano", "en/living_room", 1.5),
]


@pytest.fixture(scope="session")
def piano_network() -> kb.SemanticNetwork:
    return kb.build_network(PIANO_LINES)


@pytest.fixture(scope="session")
def kb_fixture_network() -> kb.SemanticNetwork:
    return kb.build_network(KB_FIXTURE_LINES)


def random_network(
    rng: random.Random,
    max_concepts: int = 15,
    max_edges: int = 40,
    weight_range: tuple[float, float] = (-2.0, 2.0),
) -> kb.SemanticNetwork:
    """Small random semantic network for oracle and property tests."""
    n = rng.randint(4, max_concepts)
    relations = ["IsA", "UsedFor", "RelatedTo", "CapableOf", "AtLocation"]
    lines = []
    seen = set()
    for _ in range(rng.randint(3, max_edges)):
        a, b = rng.sample(range(n), 2)
        rel = rng.choice(relations)
        if (a, b, rel) in seen:
            continue
        seen.add((a, b, rel))
        w = rng.uniform(*weight_range)
        lines.append(dump_line(rel, f"en/c{a}", f"en/c{b}", round(w, 6)))
    return kb.build_network(lines)


def sample_concepts(rng: random.Random, network: kb.SemanticNetwork, count: int) -> list[int]:
    ids = list(range(network.concept_count))
    rng.shuffle(ids)
    return ids[:count]
