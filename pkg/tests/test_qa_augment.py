"""QA augmentation: the four fixed queries, training files, accuracy scoring."""

import json
import logging

import pytest

from eigenkit import (
    AccuracyReport,
    BadRequest,
    EmptyInput,
    Hop,
    InputError,
    MissingPrediction,
    Passage,
    QASample,
    RelationKind,
    ScriptedGenerator,
    TrainerConfig,
    augment_queries,
    augment_sample,
    dump_predictions,
    dump_qa_samples,
    emit_training_files,
    load_predictions,
    load_qa_samples,
    render_query,
    score_predictions,
)


@pytest.fixture
def qa_sample(sunlight_passage):
    return QASample(
        "q-1",
        sunlight_passage,
        "more sunlight",
        "plants grow taller",
        "helps",
        hop_count=1,
        question_type="in-para",
    )


def script_for(sample):
    q1, q2, q3, q4 = augment_queries(sample)
    return {
        q1: "plants trap sunlight",
        q2: "less shade on the ground",
        q3: "more photosynthesis",
        q4: "cloudy skies",
    }


class TestQASample:
    def test_rejects_unknown_label(self, sunlight_passage):
        with pytest.raises(ValueError):
            QASample("q", sunlight_passage, "a", "b", "maybe")

    def test_rejects_blank_event(self, sunlight_passage):
        with pytest.raises(ValueError):
            QASample("q", sunlight_passage, " ", "b", "helps")

    def test_rejects_out_of_range_hop(self, sunlight_passage):
        with pytest.raises(ValueError):
            QASample("q", sunlight_passage, "a", "b", "helps", hop_count=4)

    def test_rejects_unknown_question_type(self, sunlight_passage):
        with pytest.raises(ValueError):
            QASample("q", sunlight_passage, "a", "b", "helps", question_type="weird")


class TestAugmentQueries:
    def test_exact_order_and_content(self, qa_sample, sunlight_passage):
        hop = Hop(1)
        assert augment_queries(qa_sample) == (
            render_query(sunlight_passage, "more sunlight", RelationKind.HELPS, hop),
            render_query(sunlight_passage, "more sunlight", RelationKind.HURTS, hop),
            render_query(sunlight_passage, "plants grow taller", RelationKind.HELPED_BY, hop),
            render_query(sunlight_passage, "plants grow taller", RelationKind.HURT_BY, hop),
        )

    def test_all_queries_are_one_hop(self, qa_sample):
        assert all(q.endswith(" at 1-hop?") for q in augment_queries(qa_sample))


class TestAugmentSample:
    def test_issues_exactly_four_calls_in_order(self, qa_sample):
        gen = ScriptedGenerator(script_for(qa_sample))
        augment_sample(qa_sample, gen, max_new_tokens=12, top_p=0.8)
        assert [r.prompt for r in gen.calls] == list(augment_queries(qa_sample))
        assert all(r.max_new_tokens == 12 and r.top_p == 0.8 for r in gen.calls)

    def test_sequences(self, qa_sample, sunlight_passage):
        out = augment_sample(qa_sample, ScriptedGenerator(script_for(qa_sample)))
        passage_text = " ".join(sunlight_passage.sentences)
        assert out.primary_sequence == f"{passage_text} more sunlight plants grow taller"
        assert out.augmented_sequence == (
            "plants trap sunlight less shade on the ground more photosynthesis "
            "cloudy skies more sunlight plants grow taller"
        )
        assert out.generated == (
            "plants trap sunlight",
            "less shade on the ground",
            "more photosynthesis",
            "cloudy skies",
        )

    def test_failure_names_query_index(self, qa_sample):
        script = script_for(qa_sample)
        del script[augment_queries(qa_sample)[2]]
        with pytest.raises(BadRequest, match=r"question 'q-1': query 3 of 4 failed"):
            augment_sample(qa_sample, ScriptedGenerator(script))

    def test_empty_generation_kept_with_warning(self, qa_sample, caplog):
        script = script_for(qa_sample)
        script[augment_queries(qa_sample)[1]] = "  "
        with caplog.at_level(logging.WARNING):
            out = augment_sample(qa_sample, ScriptedGenerator(script))
        assert out.generated[1] == ""
        assert len(out.generated) == 4
        assert "query 2 of 4" in caplog.text
        # empty slot leaves no doubled spaces in the sequence
        assert "  " not in out.augmented_sequence


class TestTrainingFiles:
    def test_emits_train_file_and_sidecar(self, qa_sample, tmp_path):
        augmented = augment_sample(qa_sample, ScriptedGenerator(script_for(qa_sample)))
        train_path, config_path = emit_training_files(
            [augmented], TrainerConfig(), tmp_path / "out"
        )
        assert train_path.name == "qa_train.jsonl"
        assert config_path.name == "trainer_config.json"
        record = json.loads(train_path.read_text().splitlines()[0])
        assert record["question_id"] == "q-1"
        assert record["label"] == "helps"
        assert record["primary_sequence"] == augmented.primary_sequence
        assert record["augmented_sequence"] == augmented.augmented_sequence
        assert json.loads(config_path.read_text()) == {"alpha": 1.0, "beta": 0.9}

    def test_custom_weights_land_in_sidecar(self, qa_sample, tmp_path):
        augmented = augment_sample(qa_sample, ScriptedGenerator(script_for(qa_sample)))
        _, config_path = emit_training_files(
            [augmented], TrainerConfig(alpha=0.5, beta=0.25), tmp_path
        )
        assert json.loads(config_path.read_text()) == {"alpha": 0.5, "beta": 0.25}

    def test_rejects_empty_sample_list(self, tmp_path):
        with pytest.raises(EmptyInput):
            emit_training_files([], TrainerConfig(), tmp_path)

    def test_negative_weights_rejected(self):
        with pytest.raises(ValueError):
            TrainerConfig(alpha=-1.0)


def gold_samples(passage):
    return [
        QASample("q1", passage, "a", "b", "helps", hop_count=1, question_type="in-para"),
        QASample("q2", passage, "a", "b", "hurts", hop_count=2, question_type="in-para"),
        QASample("q3", passage, "a", "b", "no_effect", hop_count=1, question_type="out-of-para"),
        QASample("q4", passage, "a", "b", "helps", hop_count=3, question_type="exogenous"),
    ]


class TestScorePredictions:
    def test_three_of_four(self, sunlight_passage):
        gold = gold_samples(sunlight_passage)
        predictions = {"q1": "helps", "q2": "helps", "q3": "no_effect", "q4": "helps"}
        report = score_predictions(predictions, gold)
        assert report.overall == pytest.approx(75.0)
        assert report.by_hop == {1: pytest.approx(100.0), 2: pytest.approx(0.0), 3: pytest.approx(100.0)}
        assert report.by_type == {
            "in-para": pytest.approx(50.0),
            "out-of-para": pytest.approx(100.0),
            "exogenous": pytest.approx(100.0),
        }
        assert report.total == 4

    def test_missing_prediction_listed(self, sunlight_passage):
        gold = gold_samples(sunlight_passage)
        with pytest.raises(MissingPrediction) as info:
            score_predictions({"q1": "helps"}, gold)
        assert info.value.question_ids == ("q2", "q3", "q4")

    def test_rejects_empty_gold(self):
        with pytest.raises(EmptyInput):
            score_predictions({}, [])

    def test_unannotated_gold_skips_breakdowns(self, sunlight_passage):
        gold = [QASample("q1", sunlight_passage, "a", "b", "helps")]
        report = score_predictions({"q1": "helps"}, gold)
        assert report.by_hop == {}
        assert report.by_type == {}

    def test_render_text(self, sunlight_passage):
        report = score_predictions(
            {"q1": "helps", "q2": "hurts", "q3": "no_effect", "q4": "hurts"},
            gold_samples(sunlight_passage),
        )
        text = report.render_text()
        assert text.startswith("overall accuracy: 75.00  (4 questions)")
        assert "1-hop: 100.00" in text
        assert "exogenous: 0.00" in text

    def test_as_dict_round_trips_through_json(self, sunlight_passage):
        report = score_predictions(
            {"q1": "helps", "q2": "hurts", "q3": "no_effect", "q4": "helps"},
            gold_samples(sunlight_passage),
        )
        data = json.loads(json.dumps(report.as_dict()))
        assert data["overall"] == 100.0
        assert data["by_hop"] == {"1": 100.0, "2": 100.0, "3": 100.0}


class TestFiles:
    def test_qa_sample_round_trip(self, tmp_path, sunlight_passage):
        samples = gold_samples(sunlight_passage) + [
            QASample("q5", sunlight_passage, "a", "b", "helps")
        ]
        path = tmp_path / "qa.jsonl"
        dump_qa_samples(path, samples)
        assert load_qa_samples(path) == samples

    def test_bad_qa_record_has_line_number(self, tmp_path):
        path = tmp_path / "qa.jsonl"
        path.write_text('{"question_id": "q"}\n')
        with pytest.raises(InputError, match="qa.jsonl:1"):
            load_qa_samples(path)

    def test_prediction_round_trip(self, tmp_path):
        path = tmp_path / "pred.jsonl"
        dump_predictions(path, {"q1": "helps", "q2": "no_effect"})
        assert load_predictions(path) == {"q1": "helps", "q2": "no_effect"}

    def test_duplicate_prediction_rejected(self, tmp_path):
        path = tmp_path / "pred.jsonl"
        path.write_text(
            '{"question_id": "q1", "label": "helps"}\n'
            '{"question_id": "q1", "label": "hurts"}\n'
        )
        with pytest.raises(InputError, match="duplicate"):
            load_predictions(path)
