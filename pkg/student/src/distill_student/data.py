"""Readers for the teacher's file interfaces.

Two inputs: the generic dataset JSONL ({"id", "context", "choices", "gold"?})
and the soft-label JSONL ({"id", "energies", "probs", "chosen",
"temperature"}). Training pairs them by id.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional


class IdMismatch(ValueError):
    """Label ids and dataset ids do not align."""


class EmptyLabels(ValueError):
    """The label file contains no records."""


class MissingGold(ValueError):
    """Evaluation needs gold indices."""


@dataclass(frozen=True)
class Question:
    id: str
    context: str
    choices: tuple[str, ...]
    gold: Optional[int] = None


@dataclass(frozen=True)
class LabelRecord:
    id: str
    probs: tuple[float, ...]
    chosen: int
    temperature: float


def read_dataset(path: str, drop_gold: bool = False) -> list[Question]:
    out = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if not line.strip():
                continue
            row = json.loads(line)
            gold = None if drop_gold else row.get("gold")
            out.append(
                Question(
                    str(row["id"]),
                    row["context"],
                    tuple(row["choices"]),
                    int(gold) if gold is not None else None,
                )
            )
    return out


def read_labels(path: str) -> list[LabelRecord]:
    out = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            if not line.strip():
                continue
            row = json.loads(line)
            out.append(
                LabelRecord(
                    str(row["id"]),
                    tuple(float(p) for p in row["probs"]),
                    int(row["chosen"]),
                    float(row["temperature"]),
                )
            )
    if not out:
        raise EmptyLabels("label file has no records")
    return out


def align(
    questions: list[Question], labels: list[LabelRecord]
) -> list[tuple[Question, LabelRecord]]:
    """Pair questions with their label records by id, order per the dataset."""
    by_id = {r.id: r for r in labels}
    missing = [q.id for q in questions if q.id not in by_id]
    if missing:
        raise IdMismatch(f"{len(missing)} dataset ids have no labels: {missing[:3]}")
    pairs = []
    for q in questions:
        record = by_id[q.id]
        if len(record.probs) != len(q.choices):
            raise IdMismatch(
                f"question {q.id}: {len(q.choices)} choices but "
                f"{len(record.probs)} label probabilities"
            )
        pairs.append((q, record))
    return pairs
