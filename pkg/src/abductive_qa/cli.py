"""Command-line front end.

Subcommands: ingest, extract, answer, eval, emit-labels, explain.
Exit codes: 0 success, 1 usage error, 2 data error, 3 index error.
"""

from __future__ import annotations

import argparse
import json
import sys

from abductive_qa import datasets, harness, kb
from abductive_qa.datasets import MalformedRecord, UnknownFormat, QuestionInstance
from abductive_qa.dot_export import export_dot
from abductive_qa.extract import ExtractionConfig, extract_concepts
from abductive_qa.harness import MissingGold, RunParams
from abductive_qa.kb import CorruptIndex, IngestConfig, UnknownConcept, VersionMismatch

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INDEX = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _load_network(path: str) -> kb.SemanticNetwork:
    return kb.load_index(path)


def _parse_question(raw: str) -> QuestionInstance:
    try:
        d = json.loads(raw)
        return QuestionInstance(
            str(d.get("id", "q0")),
            d["context"],
            tuple(d["choices"]),
            d.get("gold"),
        )
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise MalformedRecord(f"bad question JSON: {exc}") from None


def _run_params(args) -> RunParams:
    return RunParams(
        k=args.k,
        temperature=args.temp,
        contextualize=not args.no_context,
        include_direct=not getattr(args, "no_direct", False),
    )


def _add_scoring_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=3, help="max cues per deficient pair")
    p.add_argument("--temp", type=float, default=2.0, help="soft-label temperature")
    p.add_argument(
        "--no-context", action="store_true", help="disable contextualization cues"
    )
    p.add_argument(
        "--no-direct", action="store_true", help="drop direct evidence-choice bonds"
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="abductive-qa")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="index a ConceptNet assertion dump")
    p.add_argument("--dump", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--lang", default="en")
    p.add_argument("--max-edges", type=int, default=None)

    p = sub.add_parser("extract", help="ground a sentence to concept uris")
    p.add_argument("--index", required=True)
    p.add_argument("--text", required=True)

    p = sub.add_parser("answer", help="answer one question given as JSON")
    p.add_argument("--index", required=True)
    p.add_argument("--question", required=True, help="generic-schema JSON object")
    _add_scoring_args(p)

    p = sub.add_parser("eval", help="score a gold-labeled dataset")
    p.add_argument("--index", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--format", choices=datasets.FORMATS, default="generic")
    p.add_argument("--limit", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--repeats", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--swag-context", default="startphrase")
    p.add_argument("--out", default=None, help="write the full JSON report here")
    _add_scoring_args(p)

    p = sub.add_parser("emit-labels", help="write soft-label JSONL for a dataset")
    p.add_argument("--index", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--format", choices=datasets.FORMATS, default="generic")
    p.add_argument("--out", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--swag-context", default="startphrase")
    _add_scoring_args(p)

    p = sub.add_parser("explain", help="export one choice's interpretation as DOT")
    p.add_argument("--index", required=True)
    p.add_argument("--question", required=True)
    p.add_argument("--choice", type=int, required=True)
    p.add_argument("--out", required=True)
    _add_scoring_args(p)

    return parser


def _cmd_ingest(args) -> int:
    config = IngestConfig(language=args.lang, max_edges=args.max_edges)
    network = kb.build_network(kb.open_dump(args.dump), config)
    kb.persist_index(network, args.out)
    print(json.dumps(network.stats, sort_keys=True))
    return EXIT_OK


def _cmd_extract(args) -> int:
    network = _load_network(args.index)
    for concept in extract_concepts(args.text, network, ExtractionConfig()):
        print(network.concept_uri(concept))
    return EXIT_OK


def _cmd_answer(args) -> int:
    network = _load_network(args.index)
    question = _parse_question(args.question)
    prediction = harness.answer_question(network, question, _run_params(args))
    print(json.dumps(prediction.to_dict(), indent=2))
    return EXIT_OK


def _cmd_eval(args) -> int:
    network = _load_network(args.index)
    data = list(
        datasets.load_dataset(args.data, args.format, swag_context=args.swag_context)
    )
    report = harness.evaluate(
        network,
        data,
        _run_params(args),
        limit=args.limit,
        seed=args.seed,
        repeats=args.repeats,
        workers=args.workers,
    )
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(report.to_json(indent=2))
    print(json.dumps(report.to_dict(with_predictions=False), indent=2))
    return EXIT_OK


def _cmd_emit_labels(args) -> int:
    network = _load_network(args.index)
    data = list(
        datasets.load_dataset(args.data, args.format, swag_context=args.swag_context)
    )
    count = harness.emit_labels(
        network, data, _run_params(args), args.out, workers=args.workers
    )
    print(f"wrote {count} label records to {args.out}")
    return EXIT_OK


def _cmd_explain(args) -> int:
    network = _load_network(args.index)
    question = _parse_question(args.question)
    if not 0 <= args.choice < len(question.choices):
        raise MalformedRecord(
            f"choice {args.choice} out of range for {len(question.choices)} choices"
        )
    prediction = harness.answer_question(network, question, _run_params(args))
    dot = export_dot(prediction.configurations[args.choice])
    with open(args.out, "w", encoding="utf-8") as f:
        f.write(dot)
    print(f"wrote {args.out}")
    return EXIT_OK


_COMMANDS = {
    "ingest": _cmd_ingest,
    "extract": _cmd_extract,
    "answer": _cmd_answer,
    "eval": _cmd_eval,
    "emit-labels": _cmd_emit_labels,
    "explain": _cmd_explain,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except (VersionMismatch, CorruptIndex) as exc:
        print(f"index error: {exc}", file=sys.stderr)
        return EXIT_INDEX
    except FileNotFoundError as exc:
        missing = str(exc.filename)
        if args.command != "ingest" and missing == getattr(args, "index", None):
            print(f"index error: {exc}", file=sys.stderr)
            return EXIT_INDEX
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (MalformedRecord, UnknownFormat, MissingGold, UnknownConcept) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
