"""Fine-tune a causal LM to answer influence queries.

The corpus is the derivation toolkit's samples file, one JSON record per
line with passage_id, source, relation, hop and target fields, optionally
accompanied by a passages file mapping passage_id to sentences. Each sample
is rendered into the query wording the service will later be asked with,

    <passage sentences> what does <source> <relation> at <hop>-hop?

followed by the target and the tokenizer's end-of-text symbol. The loss is
next-token cross-entropy over the target span only; query tokens are masked
out so the model is trained to answer, not to recite the question.
"""

import json
import random
from dataclasses import asdict
from os import PathLike
from pathlib import Path

import torch

from .config import BridgeConfig
from .decoding import load_model_and_tokenizer, set_dropout
from .errors import CorpusError

RELATIONS = ("helps", "hurts", "is helped by", "is hurt by")

TRAINING_LOG = "training_log.json"


def _read_records(path: str | PathLike[str]):
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from exc
            if not isinstance(record, dict):
                raise CorpusError(f"{path}:{lineno}: record is not an object")
            yield lineno, record


def load_samples(path: str | PathLike[str]) -> list[dict]:
    """Read a samples file; every record is checked field by field."""
    samples = []
    for lineno, record in _read_records(path):
        try:
            source = str(record["source"])
            relation = str(record["relation"])
            hop = int(record["hop"])
            target = str(record["target"])
            passage_id = str(record["passage_id"])
        except (KeyError, TypeError, ValueError) as exc:
            raise CorpusError(f"{path}:{lineno}: bad sample record ({exc!r})") from exc
        if relation not in RELATIONS:
            raise CorpusError(f"{path}:{lineno}: unknown relation {relation!r}")
        if hop < 1:
            raise CorpusError(f"{path}:{lineno}: hop must be at least 1, got {hop}")
        if not source.strip() or not target.strip():
            raise CorpusError(f"{path}:{lineno}: source and target must be nonempty")
        samples.append(
            {"passage_id": passage_id, "source": source, "relation": relation, "hop": hop, "target": target}
        )
    if not samples:
        raise CorpusError(f"{path}: corpus holds no samples")
    return samples


def load_passages(path: str | PathLike[str]) -> dict[str, str]:
    """Read a passages file into passage_id -> joined sentence text."""
    passages: dict[str, str] = {}
    for lineno, record in _read_records(path):
        try:
            passage_id = str(record["passage_id"])
            sentences = [str(s) for s in record["sentences"]]
        except (KeyError, TypeError) as exc:
            raise CorpusError(f"{path}:{lineno}: bad passage record ({exc!r})") from exc
        if passage_id in passages:
            raise CorpusError(f"{path}:{lineno}: duplicate passage id {passage_id!r}")
        passages[passage_id] = " ".join(sentences)
    return passages


def render_example(sample: dict, passage_text: str | None) -> tuple[str, str]:
    query = f"what does {sample['source']} {sample['relation']} at {sample['hop']}-hop?"
    if passage_text:
        query = f"{passage_text} {query}"
    return query, sample["target"]


def _encode_example(tokenizer, query: str, target: str, context_limit: int):
    # the end symbol closes every target so the model learns when to stop
    query_ids = tokenizer(query).input_ids
    target_ids = tokenizer(" " + target).input_ids + [tokenizer.eos_token_id]
    overflow = len(query_ids) + len(target_ids) - context_limit
    if overflow > 0:
        query_ids = query_ids[overflow:]  # trim the passage side, keep the question
    input_ids = torch.tensor([query_ids + target_ids])
    labels = torch.tensor([[-100] * len(query_ids) + target_ids])
    return input_ids, labels


def finetune(
    samples_path: str | PathLike[str],
    out_dir: str | PathLike[str],
    config: BridgeConfig | None = None,
    *,
    passages_path: str | PathLike[str] | None = None,
    model_source: str | None = None,
) -> dict:
    """Train on a rendered corpus and write a checkpoint directory.

    The checkpoint is loadable by the serving side (model weights plus
    tokenizer files saved in the standard pretrained layout) and carries a
    training_log.json with one loss entry per optimization step. Returns the
    log as a dict.
    """
    config = config or BridgeConfig()
    samples = load_samples(samples_path)
    passages = load_passages(passages_path) if passages_path is not None else {}

    if config.seed is not None:
        torch.manual_seed(config.seed)
        random.seed(config.seed)

    model, tokenizer = load_model_and_tokenizer(model_source or config.model_name)
    if tokenizer.eos_token_id is None:
        raise CorpusError("tokenizer defines no end-of-text token; cannot mark target ends")
    set_dropout(model, config.dropout)
    model.train()
    optimizer = torch.optim.Adam(
        model.parameters(), lr=config.learning_rate, weight_decay=config.weight_decay
    )

    context_limit = getattr(model.config, "n_positions", None) or 1024
    rendered = [render_example(s, passages.get(s["passage_id"])) for s in samples]
    encoded = [_encode_example(tokenizer, query, target, context_limit) for query, target in rendered]

    steps: list[dict] = []
    step = 0
    order = list(range(len(encoded)))
    for epoch in range(config.epochs):
        random.shuffle(order)
        for index in order:
            input_ids, labels = encoded[index]
            loss = model(input_ids=input_ids, labels=labels).loss
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            steps.append({"step": step, "epoch": epoch, "loss": float(loss.item())})
            step += 1

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out)
    tokenizer.save_pretrained(out)
    log = {
        "model": model_source or config.model_name,
        "config": asdict(config),
        "samples": len(samples),
        "steps": steps,
    }
    (out / TRAINING_LOG).write_text(json.dumps(log, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return log
