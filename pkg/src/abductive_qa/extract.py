"""Grounding natural-language text to concept generators.

Deterministic, vocabulary-driven pipeline: lowercase, strip punctuation,
greedy longest multiword match against the network vocabulary, stopword
filter on leftover single tokens, then suffix-rule lemmatization gated on
vocabulary membership. No taggers, no embeddings.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from abductive_qa.kb import SemanticNetwork

_TOKEN_RE = re.compile(r"[a-z0-9']+")


def _load_packaged_lines(name: str) -> list[str]:
    text = resources.files("abductive_qa").joinpath("data", name).read_text("utf-8")
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


def default_stopwords() -> frozenset[str]:
    return frozenset(_load_packaged_lines("stopwords.txt"))


def default_suffix_rules() -> tuple[tuple[str, str], ...]:
    rules = []
    for line in _load_packaged_lines("suffix_rules.txt"):
        parts = line.split()
        rules.append((parts[0], parts[1] if len(parts) > 1 else ""))
    return tuple(rules)


def load_stopwords(path: str) -> frozenset[str]:
    with open(path, encoding="utf-8") as f:
        return frozenset(
            w.strip().lower() for w in f if w.strip() and not w.startswith("#")
        )


def load_suffix_rules(path: str) -> tuple[tuple[str, str], ...]:
    rules = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            rules.append((parts[0], parts[1] if len(parts) > 1 else ""))
    return tuple(rules)


@dataclass(frozen=True)
class ExtractionConfig:
    stopwords: frozenset[str] = field(default_factory=default_stopwords)
    max_phrase_tokens: int = 3
    suffix_rules: tuple[tuple[str, str], ...] = field(
        default_factory=default_suffix_rules
    )
    # Suffix lemmatization is what surfaces verbs ("playing" -> "play"); turn
    # off to ground only verbatim vocabulary hits.
    lemmatize: bool = True

    def __post_init__(self):
        if self.max_phrase_tokens < 1:
            raise ValueError("max_phrase_tokens must be >= 1")
        bad = [w for w in self.stopwords if w != w.lower()]
        if bad:
            raise ValueError(f"stopwords must be lowercase: {bad[:3]}")


def tokenize(text: str) -> list[str]:
    """Lowercased, punctuation-stripped word tokens."""
    tokens = _TOKEN_RE.findall(text.lower())
    return [t.strip("'") for t in tokens if t.strip("'")]


def normalize_token(
    token: str, network: SemanticNetwork, config: Optional[ExtractionConfig] = None
) -> str:
    """Lemma of `token` under the suffix rules, verbatim when no rule lands.

    A rewrite is accepted only if the result is a known vocabulary term, so
    unknown words pass through unchanged.
    """
    config = config or ExtractionConfig()
    cleaned = tokenize(token)
    base = cleaned[0] if cleaned else ""
    if not base:
        return ""
    if network.vocab_id(base) is not None:
        return base
    for suffix, replacement in config.suffix_rules:
        if base.endswith(suffix) and len(base) > len(suffix):
            candidate = base[: -len(suffix)] + replacement
            if candidate and network.vocab_id(candidate) is not None:
                return candidate
    return base


def extract_concepts(
    text: str, network: SemanticNetwork, config: Optional[ExtractionConfig] = None
) -> list[int]:
    """Grounded concept ids for `text`, deduplicated, first-occurrence order.

    Greedy longest-match consumes tokens left to right: multiword vocabulary
    phrases (underscore-joined) win over their prefixes; single tokens must
    survive the stopword filter and may fall back to a suffix-rule lemma.
    """
    config = config or ExtractionConfig()
    tokens = tokenize(text)
    found: list[int] = []
    seen: set[int] = set()

    def emit(concept: int) -> None:
        if concept not in seen:
            seen.add(concept)
            found.append(concept)

    i = 0
    n = len(tokens)
    while i < n:
        matched = False
        max_len = min(config.max_phrase_tokens, n - i)
        for length in range(max_len, 1, -1):
            phrase = "_".join(tokens[i : i + length])
            concept = network.vocab_id(phrase)
            if concept is not None:
                emit(concept)
                i += length
                matched = True
                break
        if matched:
            continue
        token = tokens[i]
        i += 1
        if token in config.stopwords:
            continue
        concept = network.vocab_id(token)
        if concept is not None:
            emit(concept)
            continue
        if config.lemmatize:
            lemma = normalize_token(token, network, config)
            if lemma != token:
                concept = network.vocab_id(lemma)
                if concept is not None:
                    emit(concept)
    return found
