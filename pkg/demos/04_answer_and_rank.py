"""Answer a multiple-choice question end to end and emit soft labels.

Each choice gets its own interpretation; choices are ranked by configuration
energy through pairwise comparison, and the energies are softened into
temperature-controlled pseudo-labels for distillation.

Run:  python demos/04_answer_and_rank.py
"""

import json
import tempfile

from abductive_qa import kb
from abductive_qa.datasets import QuestionInstance
from abductive_qa.harness import RunParams, answer_question, emit_labels, evaluate


def dump_line(rel, start, end, weight):
    return f"/a/x\t/r/{rel}\t/c/{start}\t/c/{end}\t" + json.dumps({"weight": weight})


net = kb.build_network(
    [
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
)

question = QuestionInstance(
    "demo",
    "A woman is playing the piano.",
    (
        "The dog runs.",
        "She is making music.",
        "A man is sleeping.",
        "The food is cold.",
    ),
    gold=1,
)

print("== answer one question ==")
prediction = answer_question(net, question)
for i, choice in enumerate(question.choices):
    marker = "<- chosen" if i == prediction.chosen else ""
    print(
        f"  [{i}] E={prediction.energies[i]:+8.4f} "
        f"p={prediction.probabilities[i]:.4f}  {choice!r} {marker}"
    )
print(f"  gold={question.gold} correct={prediction.correct}")

print("\n== temperature sweep on the same energies ==")
from abductive_qa.ibe import soft_labels

for t in (0.5, 1.0, 2.0, 100.0):
    probs = soft_labels(prediction.energies, t).probabilities
    print(f"  T={t:6.1f} -> {[round(p, 4) for p in probs]}")

print("\n== evaluate a tiny dataset and emit labels ==")
dataset = [
    question,
    QuestionInstance(
        "demo2",
        "A man sits near the piano.",
        ("He starts making music.", "The food is cold.", "A dog walks by.", "Nothing happens."),
        gold=0,
    ),
]
report = evaluate(net, dataset)
print(f"  accuracy={report.accuracy:.2f} tie_rate={report.tie_rate:.2f} "
      f"indifference_rate={report.indifference_rate:.2f}")
print(f"  fingerprint={report.fingerprint}")

with tempfile.NamedTemporaryFile(suffix=".jsonl", mode="r") as tmp:
    emit_labels(net, dataset, RunParams(temperature=2.0), tmp.name)
    print("  soft-label records:")
    for line in open(tmp.name):
        print("   ", line.rstrip())
