"""Augment cause-effect QA samples with generated influence context.

Each QA sample triggers exactly four 1-hop generation queries, always in the
same order: what the cause event helps, what it hurts, what helps the effect
event, and what hurts it. The concatenated generations form an augmented
input sequence written alongside the plain passage sequence for downstream
training.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from os import PathLike
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from ._jsonl import read_records, write_records
from .backend import DEFAULT_STOP_TOKEN, BackendError, GenerationRequest, Generator
from .derivation import Passage
from .errors import InputError, IoFailure
from .graph import Hop, RelationKind
from .metrics import EmptyInput
from .templating import render_query

logger = logging.getLogger(__name__)

LABELS = ("helps", "hurts", "no_effect")
QUESTION_TYPES = ("in-para", "out-of-para", "exogenous")


class MissingPrediction(InputError):
    def __init__(self, question_ids: Sequence[str]):
        shown = ", ".join(question_ids[:10])
        suffix = ", ..." if len(question_ids) > 10 else ""
        super().__init__(f"{len(question_ids)} gold question(s) lack predictions: {shown}{suffix}")
        self.question_ids = tuple(question_ids)


@dataclass(frozen=True)
class QASample:
    question_id: str
    passage: Passage
    cause_event: str
    effect_event: str
    label: str
    hop_count: int | None = None
    question_type: str | None = None

    def __post_init__(self) -> None:
        if self.label not in LABELS:
            raise ValueError(f"label must be one of {LABELS}, got {self.label!r}")
        if not self.cause_event.strip() or not self.effect_event.strip():
            raise ValueError(f"question {self.question_id!r} has an empty event")
        if self.hop_count is not None and not 1 <= self.hop_count <= 3:
            raise ValueError(f"hop_count must be 1..3, got {self.hop_count}")
        if self.question_type is not None and self.question_type not in QUESTION_TYPES:
            raise ValueError(f"question_type must be one of {QUESTION_TYPES}, got {self.question_type!r}")


@dataclass(frozen=True)
class AugmentedQASample:
    base: QASample
    generated: tuple[str, str, str, str]
    primary_sequence: str
    augmented_sequence: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "generated", tuple(self.generated))
        if len(self.generated) != 4:
            raise ValueError("augmentation always carries exactly four generations")


@dataclass(frozen=True)
class TrainerConfig:
    """Loss weights consumed by downstream trainers: primary alpha, augmented beta."""

    alpha: float = 1.0
    beta: float = 0.9

    def __post_init__(self) -> None:
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("loss weights must be >= 0")


@dataclass(frozen=True)
class AccuracyReport:
    overall: float
    by_hop: Mapping[int, float]
    by_type: Mapping[str, float]
    total: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "by_hop", dict(self.by_hop))
        object.__setattr__(self, "by_type", dict(self.by_type))

    def render_text(self) -> str:
        lines = [f"overall accuracy: {self.overall:.2f}  ({self.total} questions)"]
        if self.by_hop:
            lines.append("by hop:")
            for hop in sorted(self.by_hop):
                lines.append(f"  {hop}-hop: {self.by_hop[hop]:.2f}")
        if self.by_type:
            lines.append("by question type:")
            for kind in QUESTION_TYPES:
                if kind in self.by_type:
                    lines.append(f"  {kind}: {self.by_type[kind]:.2f}")
        return "\n".join(lines) + "\n"

    def as_dict(self) -> dict:
        return {"overall": self.overall, "by_hop": dict(self.by_hop), "by_type": dict(self.by_type), "total": self.total}


def augment_queries(sample: QASample) -> tuple[str, str, str, str]:
    """The four 1-hop prompts for one sample, in emission order:

    1. cause event, helps      2. cause event, hurts
    3. effect event, is helped by      4. effect event, is hurt by
    """
    hop = Hop(1)
    return (
        render_query(sample.passage, sample.cause_event, RelationKind.HELPS, hop),
        render_query(sample.passage, sample.cause_event, RelationKind.HURTS, hop),
        render_query(sample.passage, sample.effect_event, RelationKind.HELPED_BY, hop),
        render_query(sample.passage, sample.effect_event, RelationKind.HURT_BY, hop),
    )


def _join(parts: Iterable[str]) -> str:
    return " ".join(" ".join(part.split()) for part in parts if part.strip())


def augment_sample(
    sample: QASample,
    generator: Generator,
    *,
    max_new_tokens: int = 48,
    top_p: float = 0.9,
    temperature: float = 1.0,
    stop_token: str = DEFAULT_STOP_TOKEN,
) -> AugmentedQASample:
    """Run the four fixed queries and assemble both training sequences.

    An empty generation is kept as "" (the list stays length four) with a
    warning; backend errors propagate annotated with the failing query index.
    """
    generated: list[str] = []
    for index, query in enumerate(augment_queries(sample), start=1):
        request = GenerationRequest(
            query,
            max_new_tokens=max_new_tokens,
            top_p=top_p,
            temperature=temperature,
            stop_token=stop_token,
        )
        try:
            result = generator.generate(request)
        except BackendError as exc:
            raise type(exc)(f"question {sample.question_id!r}: query {index} of 4 failed: {exc}") from exc
        text = result.text.strip()
        if not text:
            logger.warning("question %r: query %d of 4 produced empty text", sample.question_id, index)
        generated.append(text)

    passage_text = " ".join(" ".join(s.split()) for s in sample.passage.sentences)
    primary = _join([passage_text, sample.cause_event, sample.effect_event])
    augmented = _join(list(generated) + [sample.cause_event, sample.effect_event])
    return AugmentedQASample(sample, tuple(generated), primary, augmented)


def emit_training_files(
    samples: Iterable[AugmentedQASample],
    config: TrainerConfig,
    out_dir: str | PathLike[str],
) -> tuple[Path, Path]:
    """Write qa_train.jsonl plus the trainer_config.json sidecar; returns both paths."""
    samples = list(samples)
    if not samples:
        raise EmptyInput("no augmented samples to write")
    out = Path(out_dir)
    train_path = out / "qa_train.jsonl"
    config_path = out / "trainer_config.json"
    try:
        out.mkdir(parents=True, exist_ok=True)
        write_records(
            train_path,
            (
                {
                    "question_id": s.base.question_id,
                    "label": s.base.label,
                    "primary_sequence": s.primary_sequence,
                    "augmented_sequence": s.augmented_sequence,
                }
                for s in samples
            ),
        )
        config_path.write_text(
            json.dumps({"alpha": config.alpha, "beta": config.beta}) + "\n", encoding="utf-8"
        )
    except OSError as exc:
        raise IoFailure(f"could not write training files under {out}: {exc}") from exc
    return train_path, config_path


def score_predictions(
    predictions: Mapping[str, str],
    gold: Sequence[QASample],
) -> AccuracyReport:
    """Accuracy overall and broken down by hop count and question type."""
    gold = list(gold)
    if not gold:
        raise EmptyInput("no gold samples to score")
    missing = sorted(s.question_id for s in gold if s.question_id not in predictions)
    if missing:
        raise MissingPrediction(missing)

    def accuracy(samples: Sequence[QASample]) -> float:
        hits = sum(1 for s in samples if predictions[s.question_id] == s.label)
        return 100.0 * hits / len(samples)

    by_hop: dict[int, list[QASample]] = {}
    by_type: dict[str, list[QASample]] = {}
    for sample in gold:
        if sample.hop_count is not None:
            by_hop.setdefault(sample.hop_count, []).append(sample)
        if sample.question_type is not None:
            by_type.setdefault(sample.question_type, []).append(sample)

    return AccuracyReport(
        accuracy(gold),
        {hop: accuracy(samples) for hop, samples in sorted(by_hop.items())},
        {kind: accuracy(samples) for kind, samples in by_type.items()},
        len(gold),
    )


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------


def load_qa_samples(path: str | PathLike[str]) -> list[QASample]:
    samples: list[QASample] = []
    for lineno, record in read_records(path):
        try:
            passage = Passage(
                str(record["passage"]["passage_id"]),
                tuple(str(s) for s in record["passage"]["sentences"]),
            )
            hop_count = record.get("hop_count")
            samples.append(
                QASample(
                    str(record["question_id"]),
                    passage,
                    str(record["cause_event"]),
                    str(record["effect_event"]),
                    str(record["label"]),
                    int(hop_count) if hop_count is not None else None,
                    record.get("question_type"),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{path}:{lineno}: bad QA record ({exc})") from exc
    return samples


def dump_qa_samples(path: str | PathLike[str], samples: Iterable[QASample]) -> None:
    records = []
    for s in samples:
        record = {
            "question_id": s.question_id,
            "passage": {"passage_id": s.passage.passage_id, "sentences": list(s.passage.sentences)},
            "cause_event": s.cause_event,
            "effect_event": s.effect_event,
            "label": s.label,
        }
        if s.hop_count is not None:
            record["hop_count"] = s.hop_count
        if s.question_type is not None:
            record["question_type"] = s.question_type
        records.append(record)
    write_records(path, records)


def load_predictions(path: str | PathLike[str]) -> dict[str, str]:
    predictions: dict[str, str] = {}
    for lineno, record in read_records(path):
        try:
            question_id = str(record["question_id"])
            label = str(record["label"])
        except KeyError as exc:
            raise InputError(f"{path}:{lineno}: prediction record missing {exc}") from exc
        if question_id in predictions:
            raise InputError(f"{path}:{lineno}: duplicate prediction for {question_id!r}")
        predictions[question_id] = label
    return predictions


def dump_predictions(path: str | PathLike[str], predictions: Mapping[str, str]) -> None:
    write_records(path, ({"question_id": qid, "label": label} for qid, label in predictions.items()))
