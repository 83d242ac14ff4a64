"""End-to-end question answering, evaluation, and pseudo-label emission.

One question is scored by grounding its context and each answer choice,
building one contextualized interpretation per choice, ranking the choices
by configuration energy, and softening the energies into labels. Batches
fan out over a forked worker pool; the network is immutable and shared.
"""

from __future__ import annotations

import concurrent.futures
import dataclasses
import hashlib
import json
import multiprocessing
import random
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from abductive_qa.contextualize import (
    DegenerateInput,
    InterpretationParams,
    build_interpretation,
)
from abductive_qa.datasets import QuestionInstance
from abductive_qa.extract import ExtractionConfig, extract_concepts
from abductive_qa.ibe import HypothesisScore, rank_hypotheses, soft_labels
from abductive_qa.kb import SemanticNetwork
from abductive_qa.pattern import (
    Configuration,
    Generator,
    Grounding,
    Level,
    make_configuration,
)


class MissingGold(ValueError):
    """Evaluation requires a gold index on every instance."""


@dataclass(frozen=True)
class RunParams:
    """Everything that can change a prediction, minus the network itself."""

    k: int = 3
    temperature: float = 2.0
    contextualize: bool = True
    include_direct: bool = True
    include_evidence_evidence: bool = False
    tie_epsilon: float = 1e-9

    def interpretation_params(self) -> InterpretationParams:
        return InterpretationParams(
            k=self.k,
            contextualize=self.contextualize,
            include_direct=self.include_direct,
            include_evidence_evidence=self.include_evidence_evidence,
        )


@dataclass
class Prediction:
    question_id: str
    chosen: int
    energies: list[float]
    grounded_energies: list[float]
    probabilities: list[float]
    temperature: float
    degenerate_choices: list[bool]
    degenerate: bool
    tie_broken: bool
    indifferent: bool
    gold: Optional[int] = None
    correct: Optional[bool] = None
    configurations: Optional[list[Configuration]] = None

    def to_dict(self, with_configurations: bool = False) -> dict:
        out = {
            "id": self.question_id,
            "chosen": self.chosen,
            "energies": self.energies,
            "grounded_energies": self.grounded_energies,
            "probs": self.probabilities,
            "temperature": self.temperature,
            "degenerate_choices": self.degenerate_choices,
            "degenerate": self.degenerate,
            "tie_broken": self.tie_broken,
            "indifferent": self.indifferent,
        }
        if self.gold is not None:
            out["gold"] = self.gold
            out["correct"] = self.correct
        if with_configurations and self.configurations is not None:
            out["configurations"] = [c.to_dict() for c in self.configurations]
        return out


def _degenerate_configuration(
    network: SemanticNetwork, evidence: Sequence[int], hypothesis: Sequence[int]
) -> Configuration:
    generators = [
        Generator(c, network.concept_uri(c), Grounding.GROUNDED, Level.EVIDENCE)
        for c in dict.fromkeys(evidence)
    ]
    generators += [
        Generator(c, network.concept_uri(c), Grounding.GROUNDED, Level.HYPOTHESIS)
        for c in dict.fromkeys(hypothesis)
    ]
    return make_configuration(generators, [], degenerate=True)


def answer_question(
    network: SemanticNetwork,
    instance: QuestionInstance,
    params: RunParams = RunParams(),
    extraction: Optional[ExtractionConfig] = None,
    keep_configurations: bool = True,
) -> Prediction:
    """Score every choice and pick the most plausible one.

    A choice whose text grounds to no concepts (or an instance whose context
    grounds to none) is scored at energy zero with a degenerate flag rather
    than aborting the batch.
    """
    extraction = extraction or ExtractionConfig()
    iparams = params.interpretation_params()
    evidence = extract_concepts(instance.context, network, extraction)

    configurations: list[Configuration] = []
    flags: list[bool] = []
    for choice in instance.choices:
        hypothesis = extract_concepts(choice, network, extraction)
        try:
            config = build_interpretation(network, evidence, hypothesis, iparams)
        except DegenerateInput:
            config = _degenerate_configuration(network, evidence, hypothesis)
        configurations.append(config)
        flags.append(config.degenerate)

    energies = [c.energy for c in configurations]
    grounded = [c.energy_grounded for c in configurations]
    scores = [
        HypothesisScore(i, energies[i], grounded[i], len(configurations[i].bonds))
        for i in range(len(configurations))
    ]
    ranking = rank_hypotheses(scores, params.tie_epsilon)
    record = soft_labels(
        energies,
        params.temperature,
        question_id=instance.id,
        grounded_energies=grounded,
        degenerate=all(flags),
    )
    return Prediction(
        question_id=instance.id,
        chosen=ranking.order[0],
        energies=[float(e) for e in energies],
        grounded_energies=[float(g) for g in grounded],
        probabilities=record.probabilities,
        temperature=params.temperature,
        degenerate_choices=flags,
        degenerate=all(flags),
        tie_broken=ranking.tie_broken,
        indifferent=ranking.indifferent,
        gold=instance.gold,
        correct=None if instance.gold is None else ranking.order[0] == instance.gold,
        configurations=configurations if keep_configurations else None,
    )


# -- parallel scoring -----------------------------------------------------

_POOL_STATE: dict = {}


def _score_one(instance: QuestionInstance) -> Prediction:
    return answer_question(
        _POOL_STATE["network"],
        instance,
        _POOL_STATE["params"],
        _POOL_STATE["extraction"],
        keep_configurations=False,
    )


def _score_batch(
    network: SemanticNetwork,
    instances: Sequence[QuestionInstance],
    params: RunParams,
    extraction: Optional[ExtractionConfig],
    workers: int,
) -> list[Prediction]:
    if workers <= 1 or len(instances) < 2:
        return [
            answer_question(network, q, params, extraction, keep_configurations=False)
            for q in instances
        ]
    _POOL_STATE.update(
        network=network, params=params, extraction=extraction or ExtractionConfig()
    )
    try:
        # Fork shares the immutable network with workers copy-on-write;
        # map() preserves input order, so batch order never affects results.
        ctx = multiprocessing.get_context("fork")
        with concurrent.futures.ProcessPoolExecutor(
            max_workers=workers, mp_context=ctx
        ) as pool:
            return list(pool.map(_score_one, instances, chunksize=16))
    finally:
        _POOL_STATE.clear()


# -- evaluation -----------------------------------------------------------


@dataclass
class EvalReport:
    accuracy: float
    total: int
    correct: int
    tie_rate: float
    indifference_rate: float
    degenerate_rate: float
    elapsed_seconds: float
    fingerprint: str
    params: dict
    predictions: list[dict] = field(default_factory=list)
    repeat_accuracies: list[float] = field(default_factory=list)

    def to_dict(self, with_predictions: bool = True) -> dict:
        out = dataclasses.asdict(self)
        if not with_predictions:
            out.pop("predictions")
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _extraction_fingerprint(extraction: ExtractionConfig) -> dict:
    return {
        "stopwords": hashlib.sha256(
            "\n".join(sorted(extraction.stopwords)).encode()
        ).hexdigest()[:16],
        "suffix_rules": list(map(list, extraction.suffix_rules)),
        "max_phrase_tokens": extraction.max_phrase_tokens,
        "lemmatize": extraction.lemmatize,
    }


def run_fingerprint(
    network: SemanticNetwork,
    params: RunParams,
    extraction: Optional[ExtractionConfig] = None,
    extra: Optional[dict] = None,
) -> str:
    """Hash of every knob that determines a run's output."""
    payload = {
        "index_checksum": network.checksum,
        "params": dataclasses.asdict(params),
        "extraction": _extraction_fingerprint(extraction or ExtractionConfig()),
        "extra": extra or {},
    }
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True).encode()
    ).hexdigest()[:32]


def subsample(
    instances: Sequence[QuestionInstance], limit: Optional[int], seed: int
) -> list[QuestionInstance]:
    """Seeded uniform subsample, original order preserved."""
    if limit is None or limit >= len(instances):
        return list(instances)
    rng = random.Random(seed)
    keep = sorted(rng.sample(range(len(instances)), limit))
    return [instances[i] for i in keep]


def evaluate(
    network: SemanticNetwork,
    dataset: Iterable[QuestionInstance],
    params: RunParams = RunParams(),
    extraction: Optional[ExtractionConfig] = None,
    limit: Optional[int] = None,
    seed: int = 0,
    repeats: int = 1,
    workers: int = 1,
) -> EvalReport:
    """Accuracy and diagnostics over a gold-labeled dataset.

    `limit`/`seed` select a reproducible uniform subset; `repeats` averages
    over successive seeds (seed, seed+1, ...) for low-resource protocols.
    """
    instances = list(dataset)
    missing = [q.id for q in instances if q.gold is None]
    if missing:
        raise MissingGold(f"{len(missing)} instances lack gold labels: {missing[:3]}")
    if not instances:
        raise ValueError("empty dataset")

    start = time.perf_counter()
    all_predictions: list[Prediction] = []
    repeat_accuracies: list[float] = []
    for rep in range(max(1, repeats)):
        subset = subsample(instances, limit, seed + rep)
        predictions = _score_batch(network, subset, params, extraction, workers)
        n_correct = sum(1 for p in predictions if p.correct)
        repeat_accuracies.append(n_correct / len(predictions))
        all_predictions.extend(predictions)

    total = len(all_predictions)
    correct = sum(1 for p in all_predictions if p.correct)
    elapsed = time.perf_counter() - start
    fingerprint = run_fingerprint(
        network,
        params,
        extraction,
        extra={"limit": limit, "seed": seed, "repeats": repeats},
    )
    return EvalReport(
        accuracy=sum(repeat_accuracies) / len(repeat_accuracies),
        total=total,
        correct=correct,
        tie_rate=sum(1 for p in all_predictions if p.tie_broken) / total,
        indifference_rate=sum(1 for p in all_predictions if p.indifferent) / total,
        degenerate_rate=sum(1 for p in all_predictions if p.degenerate) / total,
        elapsed_seconds=elapsed,
        fingerprint=fingerprint,
        params=dataclasses.asdict(params),
        predictions=[p.to_dict() for p in all_predictions],
        repeat_accuracies=repeat_accuracies,
    )


def emit_labels(
    network: SemanticNetwork,
    dataset: Iterable[QuestionInstance],
    params: RunParams,
    out_path: str,
    extraction: Optional[ExtractionConfig] = None,
    workers: int = 1,
) -> int:
    """Write one soft-label JSON line per instance; returns the line count.

    Gold labels are not consulted; emission is the teacher side of the
    distillation interface.
    """
    instances = list(dataset)
    predictions = _score_batch(network, instances, params, extraction, workers)
    count = 0
    with open(out_path, "w", encoding="utf-8") as f:
        for p in predictions:
            record = {
                "id": p.question_id,
                "energies": p.energies,
                "probs": p.probabilities,
                "chosen": p.chosen,
                "temperature": p.temperature,
            }
            if p.degenerate:
                record["degenerate"] = True
            f.write(json.dumps(record) + "\n")
            count += 1
    return count
