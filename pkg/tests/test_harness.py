"""End-to-end answering, evaluation, subsampling, and label emission."""

from __future__ import annotations

import json
import random
from pathlib import Path

import pytest

from abductive_qa.datasets import QuestionInstance, load_dataset
from abductive_qa.harness import (
    MissingGold,
    RunParams,
    answer_question,
    emit_labels,
    evaluate,
    run_fingerprint,
    subsample,
)

DATA = Path(__file__).parent / "data"

PIANO_QUESTION = QuestionInstance(
    "piano-demo",
    "A woman is playing the piano.",
    ("The dog runs.", "She is making music.", "A man is sleeping.", "The food is cold."),
    gold=1,
)


class TestAnswerQuestion:
    def test_gold_choice_wins_on_fixture(self, piano_network):
        prediction = answer_question(piano_network, PIANO_QUESTION)
        assert prediction.chosen == 1
        assert prediction.correct is True
        assert prediction.energies[1] == min(prediction.energies)
        assert len(prediction.configurations) == 4

    def test_all_degenerate_choices(self, piano_network):
        question = QuestionInstance(
            "junk",
            "A woman is playing the piano.",
            ("Qwxy zzyzx.", "Vvqq ww.", "Zzz xx.", "Qq ww."),
            gold=0,
        )
        prediction = answer_question(piano_network, question)
        assert prediction.degenerate
        assert all(prediction.degenerate_choices)
        assert prediction.chosen == 0
        for p in prediction.probabilities:
            assert p == pytest.approx(0.25, abs=1e-12)

    def test_degenerate_context(self, piano_network):
        question = QuestionInstance(
            "noctx", "Zzyzx qwxy.", ("The dog runs.", "She is making music."), gold=0
        )
        prediction = answer_question(piano_network, question)
        assert prediction.degenerate
        assert prediction.energies == [0.0, 0.0]

    def test_contextualization_off_raises_gold_energy(self, piano_network):
        on = answer_question(piano_network, PIANO_QUESTION)
        off = answer_question(
            piano_network, PIANO_QUESTION, RunParams(contextualize=False)
        )
        assert off.energies[1] >= on.energies[1]

    def test_partial_degenerate_flagged_not_fatal(self, piano_network):
        question = QuestionInstance(
            "partial",
            "A woman is playing the piano.",
            ("She is making music.", "Zzyzx qwxy."),
            gold=0,
        )
        prediction = answer_question(piano_network, question)
        assert prediction.degenerate_choices == [False, True]
        assert not prediction.degenerate
        assert prediction.chosen == 0


class TestEvaluate:
    def test_fixture_dataset_fully_correct(self, piano_network):
        data = list(load_dataset(str(DATA / "mini_generic.jsonl"), "generic"))
        report = evaluate(piano_network, data)
        assert report.total == 3
        assert report.accuracy == 1.0
        assert report.correct == 3

    def test_constant_answer_near_chance_on_random_gold(self, piano_network):
        # No choice text grounds to anything, so every prediction is the
        # tie-broken index 0; accuracy converges to the gold-0 fraction.
        rng = random.Random(31)
        data = [
            QuestionInstance(
                f"q{i}",
                "A woman is playing the piano.",
                ("Zz qq.", "Xx ww.", "Vv uu.", "Tt ss."),
                gold=rng.randrange(4),
            )
            for i in range(400)
        ]
        report = evaluate(piano_network, data)
        assert report.accuracy == pytest.approx(0.25, abs=0.06)
        assert report.degenerate_rate == 1.0

    def test_missing_gold_rejected(self, piano_network):
        data = [QuestionInstance("q", "x", ("a", "b"))]
        with pytest.raises(MissingGold):
            evaluate(piano_network, data)

    def test_deterministic_reports(self, piano_network):
        data = list(load_dataset(str(DATA / "mini_generic.jsonl"), "generic"))
        r1 = evaluate(piano_network, data, seed=5)
        r2 = evaluate(piano_network, data, seed=5)
        assert r1.fingerprint == r2.fingerprint
        d1, d2 = r1.to_dict(), r2.to_dict()
        d1.pop("elapsed_seconds"), d2.pop("elapsed_seconds")
        assert d1 == d2

    def test_fingerprint_tracks_params(self, piano_network):
        fp1 = run_fingerprint(piano_network, RunParams())
        fp2 = run_fingerprint(piano_network, RunParams(k=5))
        assert fp1 != fp2

    def test_parallel_matches_serial(self, piano_network):
        data = list(load_dataset(str(DATA / "mini_generic.jsonl"), "generic")) * 4
        serial = evaluate(piano_network, data, workers=1)
        parallel = evaluate(piano_network, data, workers=2)
        assert serial.accuracy == parallel.accuracy
        assert [p["chosen"] for p in serial.predictions] == [
            p["chosen"] for p in parallel.predictions
        ]

    def test_tie_and_indifference_rates(self, piano_network):
        # Dog/food distractors both score zero on the fixture question:
        # ties exist below the top, but the winner is unambiguous.
        report = evaluate(piano_network, [PIANO_QUESTION])
        assert report.tie_rate == 1.0
        assert report.indifference_rate == 0.0


class TestSubsample:
    def test_same_seed_same_subset(self):
        data = [QuestionInstance(f"q{i}", "x", ("a", "b"), 0) for i in range(100)]
        a = subsample(data, 10, seed=3)
        b = subsample(data, 10, seed=3)
        assert [q.id for q in a] == [q.id for q in b]

    def test_different_seed_different_subset(self):
        data = [QuestionInstance(f"q{i}", "x", ("a", "b"), 0) for i in range(100)]
        a = subsample(data, 10, seed=3)
        b = subsample(data, 10, seed=4)
        assert [q.id for q in a] != [q.id for q in b]

    def test_limit_beyond_size_keeps_all(self):
        data = [QuestionInstance(f"q{i}", "x", ("a", "b"), 0) for i in range(5)]
        assert subsample(data, 50, seed=0) == data

    def test_repeats_average(self, piano_network):
        data = list(load_dataset(str(DATA / "mini_generic.jsonl"), "generic"))
        report = evaluate(piano_network, data, limit=2, seed=7, repeats=3)
        assert len(report.repeat_accuracies) == 3
        assert report.accuracy == pytest.approx(
            sum(report.repeat_accuracies) / 3, abs=1e-12
        )


class TestEmitLabels:
    def test_three_lines_normalized(self, piano_network, tmp_path):
        data = list(load_dataset(str(DATA / "mini_generic.jsonl"), "generic"))
        out = tmp_path / "labels.jsonl"
        count = emit_labels(piano_network, data, RunParams(), str(out))
        assert count == 3
        lines = out.read_text().strip().splitlines()
        assert len(lines) == 3
        for line in lines:
            record = json.loads(line)
            assert sum(record["probs"]) == pytest.approx(1.0, abs=1e-9)
            assert set(record) >= {"id", "energies", "probs", "chosen", "temperature"}

    def test_temperature_changes_probs_not_chosen(self, piano_network, tmp_path):
        data = list(load_dataset(str(DATA / "mini_generic.jsonl"), "generic"))
        out1, out2 = tmp_path / "t1.jsonl", tmp_path / "t2.jsonl"
        emit_labels(piano_network, data, RunParams(temperature=1.0), str(out1))
        emit_labels(piano_network, data, RunParams(temperature=2.0), str(out2))
        r1 = [json.loads(x) for x in out1.read_text().splitlines()]
        r2 = [json.loads(x) for x in out2.read_text().splitlines()]
        assert [a["chosen"] for a in r1] == [b["chosen"] for b in r2]
        assert any(a["probs"] != b["probs"] for a, b in zip(r1, r2))

    def test_degenerate_question_flagged_uniform(self, piano_network, tmp_path):
        data = [
            QuestionInstance("junk", "Zzyzx qwxy.", ("Aa bb.", "Cc dd.", "Ee ff."))
        ]
        out = tmp_path / "labels.jsonl"
        emit_labels(piano_network, data, RunParams(), str(out))
        record = json.loads(out.read_text())
        assert record["degenerate"] is True
        for p in record["probs"]:
            assert p == pytest.approx(1 / 3, abs=1e-12)
