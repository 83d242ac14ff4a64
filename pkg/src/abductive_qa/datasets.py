"""Multiple-choice dataset ingestion: SWAG CSV, HellaSWAG JSONL, generic JSONL.

Everything normalizes to QuestionInstance. The generic format is one JSON
object per line: {"id", "context", "choices": [...], "gold"?}.
"""

from __future__ import annotations

import csv
import gzip
import io
import json
from dataclasses import dataclass
from typing import Iterator, Optional

FORMATS = ("swag", "hellaswag", "generic")


class MalformedRecord(ValueError):
    """A dataset row that cannot be normalized; carries the record index."""

    def __init__(self, message: str, record_index: int = -1):
        super().__init__(message)
        self.record_index = record_index


class UnknownFormat(ValueError):
    pass


@dataclass(frozen=True)
class QuestionInstance:
    id: str
    context: str
    choices: tuple[str, ...]
    gold: Optional[int] = None

    def __post_init__(self):
        if len(self.choices) < 2:
            raise ValueError(f"question {self.id!r} needs >= 2 choices")
        if self.gold is not None and not 0 <= self.gold < len(self.choices):
            raise ValueError(f"question {self.id!r} gold index out of range")


def _open_text(path: str):
    f = open(path, "rb")
    head = f.read(2)
    f.seek(0)
    if head == b"\x1f\x8b":
        return io.TextIOWrapper(gzip.open(f), encoding="utf-8")
    return io.TextIOWrapper(f, encoding="utf-8")


def _iter_swag(path: str, context_field: str) -> Iterator[QuestionInstance]:
    with _open_text(path) as f:
        reader = csv.DictReader(f)
        for i, row in enumerate(reader):
            try:
                choices = tuple(row[f"ending{j}"] for j in range(4))
                label = row.get("label", "")
                gold = int(label) if label not in ("", None) else None
                qid = row.get("video-id") or str(i)
                fold = row.get("fold-ind")
                if fold:
                    qid = f"{qid}-{fold}"
                yield QuestionInstance(qid, row[context_field], choices, gold)
            except (KeyError, TypeError, ValueError) as exc:
                raise MalformedRecord(f"swag row {i}: {exc}", i) from None


def _iter_hellaswag(path: str) -> Iterator[QuestionInstance]:
    with _open_text(path) as f:
        for i, line in enumerate(f):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
                endings = tuple(row["endings"])
                gold = row.get("label")
                gold = int(gold) if gold is not None and gold != "" else None
                qid = str(row.get("ind", row.get("source_id", i)))
                yield QuestionInstance(qid, row["ctx"], endings, gold)
            except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
                raise MalformedRecord(f"hellaswag line {i}: {exc}", i) from None


def _iter_generic(path: str) -> Iterator[QuestionInstance]:
    with _open_text(path) as f:
        for i, line in enumerate(f):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
                gold = row.get("gold")
                gold = int(gold) if gold is not None else None
                yield QuestionInstance(
                    str(row["id"]), row["context"], tuple(row["choices"]), gold
                )
            except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
                raise MalformedRecord(f"record {i}: {exc}", i) from None


def load_dataset(
    path: str, format: str = "generic", swag_context: str = "startphrase"
) -> Iterator[QuestionInstance]:
    """Stream normalized questions from `path`.

    swag_context picks the SWAG evidence text: the full startphrase
    (sent1 + partial sent2, the default) or just "sent2".
    """
    if format == "swag":
        if swag_context not in ("startphrase", "sent1", "sent2"):
            raise ValueError(f"bad swag_context {swag_context!r}")
        return _iter_swag(path, swag_context)
    if format == "hellaswag":
        return _iter_hellaswag(path)
    if format == "generic":
        return _iter_generic(path)
    raise UnknownFormat(f"format must be one of {FORMATS}, got {format!r}")


def write_generic(instances, path: str) -> None:
    """Write questions in the generic JSONL schema."""
    with open(path, "w", encoding="utf-8") as f:
        for q in instances:
            record = {"id": q.id, "context": q.context, "choices": list(q.choices)}
            if q.gold is not None:
                record["gold"] = q.gold
            f.write(json.dumps(record) + "\n")
