"""Inference to the best explanation: pairwise ranking and pseudo-labels.

Hypothesis configurations are compared pairwise by their probabilities,
P(i beats j) = e^(-E_i) / (e^(-E_i) + e^(-E_j)), evaluated as a logistic of
the energy difference so extreme energies cannot overflow. The full ranking
is the ascending-energy order; near-ties are resolved in favor of the
hypothesis with more grounded support, the rest by index. Soft labels are a
temperature softmax over negated energies.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


class TooFewHypotheses(ValueError):
    """Ranking needs at least two hypotheses."""


class InvalidTemperature(ValueError):
    """Softmax temperature must be strictly positive."""


@dataclass(frozen=True)
class HypothesisScore:
    index: int
    energy: float
    grounded_energy: float = 0.0
    bond_count: int = 0


@dataclass
class Ranking:
    order: list[int]  # best hypothesis first
    preference: np.ndarray  # preference[i, j] = P(H_i beats H_j)
    tie_broken: bool  # grounded-support rule decided the winner
    indifferent: bool  # top two hypotheses had equal energy


@dataclass
class SoftLabelRecord:
    question_id: str
    energies: list[float]
    probabilities: list[float]
    chosen: int
    temperature: float
    degenerate: bool = False

    def to_json(self) -> str:
        return json.dumps(
            {
                "id": self.question_id,
                "energies": self.energies,
                "probs": self.probabilities,
                "chosen": self.chosen,
                "temperature": self.temperature,
                **({"degenerate": True} if self.degenerate else {}),
            }
        )

    @classmethod
    def from_json(cls, line: str) -> "SoftLabelRecord":
        d = json.loads(line)
        return cls(
            d["id"],
            list(d["energies"]),
            list(d["probs"]),
            d["chosen"],
            d["temperature"],
            d.get("degenerate", False),
        )


def _logistic(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def pairwise_preference(energy_i: float, energy_j: float) -> float:
    """Probability that hypothesis i beats j under their configuration energies."""
    if not (math.isfinite(energy_i) and math.isfinite(energy_j)):
        raise ValueError("energies must be finite")
    return _logistic(energy_j - energy_i)


def rank_hypotheses(
    scores: Sequence[HypothesisScore], tie_epsilon: float = 1e-9
) -> Ranking:
    """Best-first ranking with the grounded-support tie rule.

    Equivalent to the round-robin of pairwise comparisons: the lower-energy
    hypothesis wins every matchup, so sorting by energy reproduces the
    tournament order. Energies within `tie_epsilon` count as indifferent and
    the hypothesis with the larger grounded bond-strength sum (the smaller
    grounded energy) ranks first; remaining ties fall back to input order.
    """
    n = len(scores)
    if n < 2:
        raise TooFewHypotheses(f"need >= 2 hypotheses, got {n}")
    if sorted(s.index for s in scores) != list(range(n)):
        raise ValueError("hypothesis indices must be 0..n-1")
    by_energy = sorted(scores, key=lambda s: s.energy)

    # Chain epsilon-close energies into tie groups, then reorder each group.
    groups: list[list[HypothesisScore]] = [[by_energy[0]]]
    for score in by_energy[1:]:
        if abs(score.energy - groups[-1][-1].energy) < tie_epsilon:
            groups[-1].append(score)
        else:
            groups.append([score])
    tie_broken = any(len(g) > 1 for g in groups)
    order: list[int] = []
    for group in groups:
        if len(group) > 1:
            group = sorted(group, key=lambda s: (s.grounded_energy, s.index))
        order.extend(s.index for s in group)

    energy_of = {s.index: s.energy for s in scores}
    preference = np.zeros((n, n))
    for a in range(n):
        for b in range(n):
            if a != b:
                preference[a, b] = pairwise_preference(energy_of[a], energy_of[b])
    indifferent = len(groups[0]) > 1
    return Ranking(order, preference, tie_broken, indifferent)


def soft_labels(
    energies: Sequence[float],
    temperature: float,
    question_id: str = "",
    grounded_energies: Optional[Sequence[float]] = None,
    degenerate: bool = False,
) -> SoftLabelRecord:
    """Temperature-softened distillation targets from configuration energies.

    Logits are the negated energies (the log unnormalized configuration
    probabilities); at T=1 this is exactly the normalized configuration
    distribution. The softmax subtracts the max logit first, so any finite
    energies are safe.
    """
    if not temperature > 0:
        raise InvalidTemperature(f"temperature must be > 0, got {temperature}")
    e = np.asarray(energies, dtype=np.float64)
    if e.ndim != 1 or len(e) == 0:
        raise ValueError("energies must be a non-empty vector")
    if not np.all(np.isfinite(e)):
        raise ValueError("energies must be finite")
    logits = -e / temperature
    logits -= logits.max()
    weights = np.exp(logits)
    probs = weights / weights.sum()

    if grounded_energies is not None:
        scores = [
            HypothesisScore(i, float(e[i]), float(grounded_energies[i]))
            for i in range(len(e))
        ]
        chosen = rank_hypotheses(scores).order[0] if len(e) >= 2 else 0
    else:
        chosen = int(np.argmin(e))
    return SoftLabelRecord(
        question_id,
        [float(x) for x in e],
        [float(p) for p in probs],
        chosen,
        float(temperature),
        degenerate,
    )
