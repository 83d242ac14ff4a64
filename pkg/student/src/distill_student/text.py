"""Tokenization and word vectors for the bag-of-embeddings scorer."""

from __future__ import annotations

import hashlib
import re

import numpy as np

_TOKEN_RE = re.compile(r"[a-z0-9']+")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class WordVectors:
    """Embedding lookup with mean pooling over token lists.

    Vectors come from a word2vec-format text file when given; otherwise each
    word gets a deterministic pseudo-random unit vector derived from a
    keyed hash, so runs are reproducible without any download.
    """

    def __init__(self, dim: int = 64, seed: int = 0, path: str | None = None):
        self.dim = dim
        self.seed = seed
        self._table: dict[str, np.ndarray] = {}
        if path:
            self._load_word2vec(path)

    def _load_word2vec(self, path: str) -> None:
        with open(path, encoding="utf-8") as f:
            first = f.readline().split()
            # Optional "count dim" header line.
            if len(first) == 2 and all(p.isdigit() for p in first):
                self.dim = int(first[1])
            else:
                self._add_line(first)
            for line in f:
                self._add_line(line.split())

    def _add_line(self, parts: list[str]) -> None:
        if len(parts) < 2:
            return
        vec = np.array([float(x) for x in parts[1:]], dtype=np.float64)
        self.dim = len(vec)
        self._table[parts[0]] = vec

    def _hashed(self, word: str) -> np.ndarray:
        digest = hashlib.blake2b(
            word.encode("utf-8"), key=str(self.seed).encode(), digest_size=8
        ).digest()
        rng = np.random.default_rng(int.from_bytes(digest, "little"))
        vec = rng.standard_normal(self.dim)
        return vec / np.linalg.norm(vec)

    def vector(self, word: str) -> np.ndarray:
        vec = self._table.get(word)
        if vec is None:
            vec = self._hashed(word)
            self._table[word] = vec
        return vec

    def pool(self, text: str) -> np.ndarray:
        """Mean over token vectors; zero vector for empty text."""
        tokens = tokenize(text)
        if not tokens:
            return np.zeros(self.dim)
        return np.mean([self.vector(t) for t in tokens], axis=0)
