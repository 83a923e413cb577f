"""Command-line interface.

Subcommands: derive, stats, render, build-graph, evaluate, augment-qa,
score-qa. Exit codes: 0 on success, 1 on input/validation errors, 2 on
backend transport errors. Diagnostics go to stderr; data goes to files or
stdout. Every run that writes files drops a manifest.json beside them.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import sys
from datetime import datetime, timezone
from pathlib import Path as FilePath
from typing import Sequence

from . import __version__
from .backend import Generator, RemoteGenerator, load_mock_script
from .derivation import (
    DerivationConfig,
    StatsTable,
    derive_corpus,
    dump_samples,
    load_passages,
    load_samples,
    stats,
)
from ._jsonl import read_records, write_records
from .errors import BackendError, EigenkitError, InputError
from .graph import Direction, Hop, RelationKind, dump_graphs, load_graphs
from .graph_builder import BuildSpec, adjacency_text, build_graph
from .metrics import DEFAULT_LEXICON, PolarityLexicon, evaluate_corpus, report_dict, report_text
from .qa_augment import (
    TrainerConfig,
    augment_sample,
    emit_training_files,
    load_predictions,
    load_qa_samples,
    score_predictions,
)
from .templating import render_query

BACKEND_URL_ENV = "EIGENKIT_BACKEND_URL"


def lexicon_hash(lexicon: PolarityLexicon = DEFAULT_LEXICON) -> str:
    canon = ",".join(sorted(lexicon.increasing)) + "|" + ",".join(sorted(lexicon.decreasing))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]


def _ensure_out(path: str) -> FilePath:
    out = FilePath(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_manifest(out: FilePath, command: str, inputs: dict, config: dict) -> None:
    manifest = {
        "command": command,
        "inputs": inputs,
        "config": config,
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True, ensure_ascii=False) + "\n", encoding="utf-8"
    )


def _make_generator(args: argparse.Namespace) -> Generator:
    if args.mock:
        return load_mock_script(args.mock)
    url = args.backend or os.environ.get(BACKEND_URL_ENV)
    if not url:
        raise InputError(
            f"no backend configured: pass --backend URL or --mock FILE, or set {BACKEND_URL_ENV}"
        )
    return RemoteGenerator(url, max_attempts=args.retries, timeout=args.timeout)


def _close_generator(generator: Generator) -> None:
    close = getattr(generator, "close", None)
    if callable(close):
        close()


def _sampling_config(args: argparse.Namespace) -> dict:
    return {
        "max_new_tokens": args.max_new_tokens,
        "top_p": args.top_p,
        "temperature": args.temperature,
    }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_derive(args: argparse.Namespace) -> int:
    graphs = load_graphs(args.graphs)
    passages = load_passages(args.passages)
    config = DerivationConfig(
        max_hop=Hop(args.max_hop),
        include_paragraph=not args.no_para,
        include_reverse=not args.no_rev,
        include_hop=not args.no_hop,
    )
    inputs = []
    for graph, split in graphs:
        passage = passages.get(graph.passage_id)
        if passage is None:
            raise InputError(f"no passage found for graph {graph.passage_id!r}")
        inputs.append((graph, passage, split or "train"))
    bundle = derive_corpus(inputs, config)
    out = _ensure_out(args.out)
    dump_samples(out / "samples.jsonl", bundle.all_samples())
    (out / "stats.txt").write_text(stats(bundle).render_text(), encoding="utf-8")
    _write_manifest(
        out,
        "derive",
        {"graphs": str(args.graphs), "passages": str(args.passages)},
        {
            "max_hop": args.max_hop,
            "include_paragraph": not args.no_para,
            "include_reverse": not args.no_rev,
            "include_hop": not args.no_hop,
        },
    )
    print(f"wrote {len(bundle)} samples to {out / 'samples.jsonl'}", file=sys.stderr)
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    table = StatsTable.from_samples(load_samples(args.samples))
    text = table.render_text()
    if args.out:
        out = _ensure_out(args.out)
        (out / "stats.txt").write_text(text, encoding="utf-8")
        _write_manifest(out, "stats", {"samples": str(args.samples)}, {})
    else:
        print(text, end="")
    return 0


def cmd_render(args: argparse.Namespace) -> int:
    samples = load_samples(args.samples)
    passages = load_passages(args.passages) if args.passages else {}
    if args.no_rev:
        samples = [s for s in samples if s.relation.direction is Direction.FORWARD]
    records = []
    for index, sample in enumerate(samples, start=1):
        passage = None
        if not args.no_para:
            passage = passages.get(sample.passage_id)
            if passage is None:
                raise InputError(
                    f"sample {index}: no passage for {sample.passage_id!r} (pass --passages or use --no-para)"
                )
        hop = None if args.no_hop else sample.hop
        records.append(
            {
                "query": render_query(passage, sample.source_text, sample.relation, hop),
                "target": sample.target_text,
                "passage_id": sample.passage_id,
                "relation": sample.relation.surface,
                "hop": sample.hop.count,
                "split": sample.split,
            }
        )
    out = _ensure_out(args.out)
    write_records(out / "queries.jsonl", records)
    _write_manifest(
        out,
        "render",
        {"samples": str(args.samples), "passages": str(args.passages) if args.passages else None},
        {"include_paragraph": not args.no_para, "include_reverse": not args.no_rev, "include_hop": not args.no_hop},
    )
    print(f"wrote {len(records)} queries to {out / 'queries.jsonl'}", file=sys.stderr)
    return 0


def cmd_build_graph(args: argparse.Namespace) -> int:
    passages = load_passages(args.passages)
    if args.passage_id:
        passage = passages.get(args.passage_id)
        if passage is None:
            raise InputError(f"passage {args.passage_id!r} not found in {args.passages}")
    elif len(passages) == 1:
        passage = next(iter(passages.values()))
    else:
        raise InputError("--passage-id is required when the passages file holds more than one passage")

    relations = tuple(RelationKind.from_surface(s.strip()) for s in args.relations.split(","))
    hops = tuple(Hop(int(h)) for h in args.hops.split(","))
    spec = BuildSpec(passage, args.seed, relations, hops, dedup=not args.no_dedup)
    generator = _make_generator(args)
    try:
        build = build_graph(
            spec,
            generator,
            max_new_tokens=args.max_new_tokens,
            top_p=args.top_p,
            temperature=args.temperature,
        )
    finally:
        _close_generator(generator)
    for warning in build.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    out = _ensure_out(args.out)
    dump_graphs(out / "graph.jsonl", [build.graph])
    (out / "adjacency.txt").write_text(adjacency_text(build), encoding="utf-8")
    _write_manifest(
        out,
        "build-graph",
        {"passages": str(args.passages), "mock": str(args.mock) if args.mock else None},
        {
            "passage_id": passage.passage_id,
            "seed": args.seed,
            "relations": [r.surface for r in relations],
            "hops": [h.count for h in hops],
            "dedup": not args.no_dedup,
            **_sampling_config(args),
        },
    )
    print(
        f"built graph with {len(build.graph.nodes)} nodes and {len(build.graph.edges)} edges",
        file=sys.stderr,
    )
    return 0


def _load_eval_lines(path: str) -> list[dict]:
    lines = []
    for lineno, record in read_records(path):
        if "text" not in record:
            raise InputError(f"{path}:{lineno}: record has no text field")
        lines.append(record)
    return lines


def cmd_evaluate(args: argparse.Namespace) -> int:
    predictions = _load_eval_lines(args.pred)
    references = _load_eval_lines(args.ref)
    if len(predictions) != len(references):
        raise InputError(
            f"prediction/reference line counts differ: {len(predictions)} vs {len(references)}"
        )
    samples = []
    for pred, ref in zip(predictions, references):
        relation = RelationKind.from_surface(ref["relation"]) if "relation" in ref else None
        hop = Hop(int(ref["hop"])) if "hop" in ref else None
        samples.append((str(pred["text"]), str(ref["text"]), relation, hop))
    report = evaluate_corpus(samples)
    text = report_text(report)
    print(text, end="")
    if args.out:
        out = _ensure_out(args.out)
        (out / "report.txt").write_text(text, encoding="utf-8")
        (out / "report.json").write_text(
            json.dumps(report_dict(report), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        _write_manifest(
            out,
            "evaluate",
            {"pred": str(args.pred), "ref": str(args.ref)},
            {"lexicon_hash": lexicon_hash()},
        )
    return 0


def cmd_augment_qa(args: argparse.Namespace) -> int:
    qa_samples = load_qa_samples(args.qa)
    if not qa_samples:
        raise InputError(f"{args.qa} holds no QA samples")
    config = TrainerConfig(alpha=args.alpha, beta=args.beta)
    generator = _make_generator(args)
    augmented = []
    try:
        for index, sample in enumerate(qa_samples, start=1):
            augmented.append(
                augment_sample(
                    sample,
                    generator,
                    max_new_tokens=args.max_new_tokens,
                    top_p=args.top_p,
                    temperature=args.temperature,
                )
            )
            if index % 25 == 0:
                print(f"augmented {index}/{len(qa_samples)}", file=sys.stderr)
    finally:
        _close_generator(generator)
    out = _ensure_out(args.out)
    train_path, _ = emit_training_files(augmented, config, out)
    _write_manifest(
        out,
        "augment-qa",
        {"qa": str(args.qa), "mock": str(args.mock) if args.mock else None},
        {"alpha": args.alpha, "beta": args.beta, **_sampling_config(args)},
    )
    print(f"wrote {len(augmented)} augmented samples to {train_path}", file=sys.stderr)
    return 0


def cmd_score_qa(args: argparse.Namespace) -> int:
    predictions = load_predictions(args.pred)
    gold = load_qa_samples(args.gold)
    report = score_predictions(predictions, gold)
    text = report.render_text()
    print(text, end="")
    if args.out:
        out = _ensure_out(args.out)
        (out / "accuracy.json").write_text(
            json.dumps(report.as_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        _write_manifest(out, "score-qa", {"pred": str(args.pred), "gold": str(args.gold)}, {})
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_backend_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--backend", help=f"generation service URL (default: ${BACKEND_URL_ENV})")
    parser.add_argument("--mock", help="JSONL mock script of {prompt, response} records")
    parser.add_argument("--retries", type=int, default=3, help="max transport attempts (default 3)")
    parser.add_argument("--timeout", type=float, default=30.0, help="per-request timeout seconds")
    parser.add_argument("--top-p", type=float, default=0.9, dest="top_p")
    parser.add_argument("--max-new-tokens", type=int, default=48, dest="max_new_tokens")
    parser.add_argument("--temperature", type=float, default=1.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eigenkit", description=__doc__)
    parser.add_argument("--version", action="version", version=f"eigenkit {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    derive = commands.add_parser("derive", help="derive a generation corpus from influence graphs")
    derive.add_argument("--graphs", required=True)
    derive.add_argument("--passages", required=True)
    derive.add_argument("--max-hop", type=int, default=3, dest="max_hop")
    derive.add_argument("--no-para", action="store_true")
    derive.add_argument("--no-rev", action="store_true")
    derive.add_argument("--no-hop", action="store_true")
    derive.add_argument("--out", required=True)
    derive.set_defaults(handler=cmd_derive)

    stats_cmd = commands.add_parser("stats", help="print count table for a derived samples file")
    stats_cmd.add_argument("--samples", required=True)
    stats_cmd.add_argument("--out")
    stats_cmd.set_defaults(handler=cmd_stats)

    render = commands.add_parser("render", help="render derived samples into query/target lines")
    render.add_argument("--samples", required=True)
    render.add_argument("--passages")
    render.add_argument("--no-para", action="store_true")
    render.add_argument("--no-rev", action="store_true")
    render.add_argument("--no-hop", action="store_true")
    render.add_argument("--out", required=True)
    render.set_defaults(handler=cmd_render)

    build = commands.add_parser("build-graph", help="grow a graph around a seed event")
    build.add_argument("--passages", required=True)
    build.add_argument("--passage-id", dest="passage_id")
    build.add_argument("--seed", required=True)
    build.add_argument("--relations", default="helps,hurts,is helped by,is hurt by")
    build.add_argument("--hops", default="1,2,3")
    build.add_argument("--no-dedup", action="store_true")
    build.add_argument("--out", required=True)
    _add_backend_args(build)
    build.set_defaults(handler=cmd_build_graph)

    evaluate = commands.add_parser("evaluate", help="score predictions against references")
    evaluate.add_argument("--pred", required=True)
    evaluate.add_argument("--ref", required=True)
    evaluate.add_argument("--out")
    evaluate.set_defaults(handler=cmd_evaluate)

    augment = commands.add_parser("augment-qa", help="augment QA samples with generated context")
    augment.add_argument("--qa", required=True)
    augment.add_argument("--alpha", type=float, default=1.0)
    augment.add_argument("--beta", type=float, default=0.9)
    augment.add_argument("--out", required=True)
    _add_backend_args(augment)
    augment.set_defaults(handler=cmd_augment_qa)

    score = commands.add_parser("score-qa", help="accuracy of QA predictions against gold labels")
    score.add_argument("--pred", required=True)
    score.add_argument("--gold", required=True)
    score.add_argument("--out")
    score.set_defaults(handler=cmd_score_qa)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse handles --help/usage printing itself
        return 0 if not exc.code else 1
    try:
        return args.handler(args)
    except BackendError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (EigenkitError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
