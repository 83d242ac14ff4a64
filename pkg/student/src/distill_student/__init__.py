"""Distillation student: learns multiple-choice answers from teacher soft labels.

Consumes the teacher's soft-label JSONL and the generic dataset JSONL, trains
a bilinear bag-of-embeddings scorer against temperature-softened targets, and
reports accuracy, teacher agreement, and retention. Gold labels are never
read during training.
"""

from distill_student.data import (
    EmptyLabels,
    IdMismatch,
    LabelRecord,
    MissingGold,
    Question,
    align,
    read_dataset,
    read_labels,
)
from distill_student.model import BilinearScorer
from distill_student.train import DistillConfig, TrainingLog, train_student
from distill_student.evaluate import eval_student

__version__ = "0.1.0"

__all__ = [
    "BilinearScorer",
    "DistillConfig",
    "EmptyLabels",
    "IdMismatch",
    "LabelRecord",
    "MissingGold",
    "Question",
    "TrainingLog",
    "align",
    "eval_student",
    "read_dataset",
    "read_labels",
    "train_student",
]
