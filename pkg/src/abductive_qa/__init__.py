"""Commonsense multiple-choice QA by abductive reasoning over a semantic network.

The pipeline: ingest a ConceptNet assertion dump into an immutable indexed
network (`kb`), ground question/answer text to concept generators (`extract`),
assemble energy-scored interpretation graphs with contextualization cues
(`pattern`, `contextualize`), rank answer hypotheses pairwise and emit
temperature-softened pseudo-labels (`ibe`), and run datasets end to end
(`harness`, `cli`).
"""

from abductive_qa.kb import (
    Assertion,
    IngestConfig,
    SemanticNetwork,
    build_network,
    load_index,
    parse_assertion_line,
    persist_index,
)
from abductive_qa.extract import ExtractionConfig, extract_concepts, normalize_token
from abductive_qa.pattern import (
    Bond,
    Configuration,
    Generator,
    Grounding,
    Level,
    bond_energy,
    config_energy,
    config_log_weight,
)
from abductive_qa.contextualize import (
    CueCandidate,
    InterpretationParams,
    brute_force_best_interpretation,
    build_interpretation,
    find_cues,
)
from abductive_qa.ibe import (
    HypothesisScore,
    SoftLabelRecord,
    pairwise_preference,
    rank_hypotheses,
    soft_labels,
)
from abductive_qa.datasets import QuestionInstance, load_dataset
from abductive_qa.harness import EvalReport, answer_question, emit_labels, evaluate
from abductive_qa.dot_export import export_dot

__version__ = "0.1.0"

__all__ = [
    "Assertion",
    "Bond",
    "Configuration",
    "CueCandidate",
    "EvalReport",
    "ExtractionConfig",
    "Generator",
    "Grounding",
    "HypothesisScore",
    "IngestConfig",
    "InterpretationParams",
    "Level",
    "QuestionInstance",
    "SemanticNetwork",
    "SoftLabelRecord",
    "answer_question",
    "bond_energy",
    "brute_force_best_interpretation",
    "build_interpretation",
    "build_network",
    "config_energy",
    "config_log_weight",
    "emit_labels",
    "evaluate",
    "export_dot",
    "extract_concepts",
    "find_cues",
    "load_dataset",
    "load_index",
    "normalize_token",
    "pairwise_preference",
    "parse_assertion_line",
    "persist_index",
    "rank_hypotheses",
    "soft_labels",
]
