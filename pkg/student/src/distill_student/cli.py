"""Command line: train on a label file, evaluate against gold, write metrics."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from distill_student.data import read_dataset, read_labels
from distill_student.evaluate import eval_student
from distill_student.model import BilinearScorer
from distill_student.text import WordVectors
from distill_student.train import DistillConfig, train_student


def save_model(model: BilinearScorer, config: DistillConfig, path: str) -> None:
    np.savez(
        path,
        W=model.W,
        dim=model.vectors.dim,
        seed=config.seed,
        vectors_path=config.vectors_path or "",
    )


def load_model(path: str) -> BilinearScorer:
    blob = np.load(path, allow_pickle=False)
    vectors_path = str(blob["vectors_path"]) or None
    vectors = WordVectors(
        dim=int(blob["dim"]), seed=int(blob["seed"]), path=vectors_path
    )
    model = BilinearScorer(vectors, seed=int(blob["seed"]))
    model.W = blob["W"]
    return model


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="distill-student")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train on teacher soft labels")
    p.add_argument("--labels", required=True, help="soft-label JSONL from the teacher")
    p.add_argument("--data", required=True, help="generic dataset JSONL")
    p.add_argument("--model-out", required=True)
    p.add_argument("--log-out", default=None, help="write the training log JSON here")
    p.add_argument("--temp", type=float, default=None)
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--lr", type=float, default=1.0)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--dim", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vectors", default=None, help="word2vec-format text file")

    p = sub.add_parser("eval", help="evaluate a trained model; writes metrics JSON")
    p.add_argument("--model", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--metrics-out", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "train":
        config = DistillConfig(
            temperature=args.temp,
            epochs=args.epochs,
            learning_rate=args.lr,
            batch_size=args.batch_size,
            dim=args.dim,
            seed=args.seed,
            vectors_path=args.vectors,
        )
        labels = read_labels(args.labels)
        dataset = read_dataset(args.data)
        model, log = train_student(labels, dataset, config)
        save_model(model, config, args.model_out)
        if args.log_out:
            with open(args.log_out, "w", encoding="utf-8") as f:
                f.write(log.to_json())
        print(
            f"trained on {log.n_questions} questions; "
            f"final loss {log.epoch_losses[-1]:.4f}"
        )
        return 0

    model = load_model(args.model)
    labels = read_labels(args.labels)
    dataset = read_dataset(args.data)
    metrics = eval_student(model, dataset, labels)
    metrics["config"] = {"model": args.model, "labels": args.labels}
    with open(args.metrics_out, "w", encoding="utf-8") as f:
        json.dump(metrics, f, indent=2)
    print(json.dumps(metrics, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
