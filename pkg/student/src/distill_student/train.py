"""Training loop: cross-entropy against teacher soft labels, nothing else.

The student never reads gold annotations; the only targets are the teacher's
temperature-softened probabilities. Gradients are plain minibatch SGD on the
bilinear form. No hard-label loss term exists, so no temperature-squared
gradient rescaling is applied.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from distill_student.data import LabelRecord, Question, align
from distill_student.model import BilinearScorer, softmax
from distill_student.text import WordVectors


@dataclass(frozen=True)
class DistillConfig:
    # None adopts the label file's temperature; a value overrides it.
    temperature: Optional[float] = None
    epochs: int = 30
    learning_rate: float = 1.0
    batch_size: int = 32
    dim: int = 64
    seed: int = 0
    vectors_path: Optional[str] = None
    architecture: str = "bilinear-boe"

    def __post_init__(self):
        if self.temperature is not None and self.temperature <= 0:
            raise ValueError("temperature must be > 0")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be >= 1")


@dataclass
class TrainingLog:
    temperature: float
    n_questions: int
    epoch_losses: list[float] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {
                "temperature": self.temperature,
                "n_questions": self.n_questions,
                "epoch_losses": [round(x, 12) for x in self.epoch_losses],
                "config": self.config,
            },
            sort_keys=True,
        )


def _cross_entropy(p: np.ndarray, targets: np.ndarray) -> float:
    return float(-np.sum(targets * np.log(np.clip(p, 1e-300, None))))


def train_student(
    labels: list[LabelRecord],
    dataset: list[Question],
    config: DistillConfig = DistillConfig(),
) -> tuple[BilinearScorer, TrainingLog]:
    """Fit the scorer to the teacher distribution; returns (model, log)."""
    pairs = align(dataset, labels)
    temperature = (
        config.temperature
        if config.temperature is not None
        else pairs[0][1].temperature
    )

    vectors = WordVectors(dim=config.dim, seed=config.seed, path=config.vectors_path)
    model = BilinearScorer(vectors, seed=config.seed)

    # Pool embeddings once; only W changes during training.
    pooled = []
    for question, record in pairs:
        u, v = model.embed(question.context, question.choices)
        pooled.append((u, v, np.asarray(record.probs)))

    log = TrainingLog(
        temperature=temperature,
        n_questions=len(pairs),
        config=dataclasses.asdict(config),
    )
    rng = np.random.default_rng(config.seed)
    n = len(pooled)
    for _ in range(config.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, config.batch_size):
            batch = order[start : start + config.batch_size]
            grad = np.zeros_like(model.W)
            for i in batch:
                u, v, targets = pooled[i]
                p = softmax(model.scores(u, v), temperature)
                epoch_loss += _cross_entropy(p, targets)
                coeffs = (p - targets) / temperature
                grad += np.outer(u, coeffs @ v)
            model.W -= config.learning_rate * grad / len(batch)
        log.epoch_losses.append(epoch_loss / n)
    return model, log
