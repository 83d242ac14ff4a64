"""Bilinear compatibility scorer over mean-pooled embeddings."""

from __future__ import annotations

import numpy as np

from distill_student.text import WordVectors


def softmax(scores: np.ndarray, temperature: float = 1.0) -> np.ndarray:
    z = scores / temperature
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


class BilinearScorer:
    """score(context, choice_i) = u^T W v_i with u, v mean-pooled embeddings."""

    def __init__(self, vectors: WordVectors, seed: int = 0, init_scale: float = 0.01):
        self.vectors = vectors
        rng = np.random.default_rng(seed)
        self.W = rng.standard_normal((vectors.dim, vectors.dim)) * init_scale

    def embed(self, context: str, choices: tuple[str, ...]) -> tuple[np.ndarray, np.ndarray]:
        u = self.vectors.pool(context)
        v = np.stack([self.vectors.pool(c) for c in choices])
        return u, v

    def scores(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        return v @ (self.W.T @ u)

    def predict_proba(
        self, context: str, choices: tuple[str, ...], temperature: float = 1.0
    ) -> np.ndarray:
        u, v = self.embed(context, choices)
        return softmax(self.scores(u, v), temperature)

    def predict(self, context: str, choices: tuple[str, ...]) -> int:
        u, v = self.embed(context, choices)
        return int(np.argmax(self.scores(u, v)))
