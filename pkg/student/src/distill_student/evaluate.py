"""Student metrics: accuracy, agreement with the teacher, retention."""

from __future__ import annotations

from typing import Optional

from distill_student.data import LabelRecord, MissingGold, Question, align
from distill_student.model import BilinearScorer


def eval_student(
    model: BilinearScorer,
    dataset: list[Question],
    labels: list[LabelRecord],
) -> dict:
    """Score the student against gold and against the teacher's choices.

    retention = student accuracy / teacher accuracy on the same split (None
    when the teacher scored zero).
    """
    if any(q.gold is None for q in dataset):
        raise MissingGold("every instance needs a gold index")
    pairs = align(dataset, labels)

    n = len(pairs)
    student_correct = 0
    teacher_correct = 0
    agree = 0
    for question, record in pairs:
        pred = model.predict(question.context, question.choices)
        student_correct += pred == question.gold
        teacher_correct += record.chosen == question.gold
        agree += pred == record.chosen

    accuracy = student_correct / n
    teacher_accuracy = teacher_correct / n
    retention: Optional[float] = (
        accuracy / teacher_accuracy if teacher_accuracy > 0 else None
    )
    return {
        "n": n,
        "accuracy": accuracy,
        "teacher_accuracy": teacher_accuracy,
        "agreement": agree / n,
        "retention": retention,
    }
