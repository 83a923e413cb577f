"""Derive multi-hop generation corpora from validated influence graphs.

Every simple path through a graph yields one forward sample (source event,
composed relation, hop count -> target event) and, with reverse augmentation
on, the mirrored inverse sample. Enumeration order is pinned down so derived
corpora are byte-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from os import PathLike
from typing import Iterable, Iterator, Mapping

from ._jsonl import read_records, write_records
from .errors import InputError
from .graph import (
    Direction,
    Hop,
    InfluenceGraph,
    RelationKind,
    ValidationReport,
    compose,
    enumerate_paths,
    validate,
)

# Grouping and table order for splits (mirrors the published count tables).
SPLIT_ORDER = ("train", "test", "dev")


class InvalidGraph(InputError):
    def __init__(self, passage_id: str, report: ValidationReport):
        problems = "; ".join(finding.message for finding in report.errors)
        super().__init__(f"graph {passage_id!r} failed validation: {problems}")
        self.passage_id = passage_id
        self.report = report


class PassageMismatch(InputError):
    def __init__(self, graph_id: str, passage_id: str):
        super().__init__(f"graph {graph_id!r} paired with passage {passage_id!r}")
        self.graph_id = graph_id
        self.passage_id = passage_id


@dataclass(frozen=True)
class Passage:
    """A procedural paragraph: an id plus its ordered sentences."""

    passage_id: str
    sentences: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "sentences", tuple(self.sentences))
        if not self.sentences:
            raise ValueError(f"passage {self.passage_id!r} has no sentences")
        for sentence in self.sentences:
            if not sentence.strip():
                raise ValueError(f"passage {self.passage_id!r} has a blank sentence")


@dataclass(frozen=True)
class DerivedSample:
    passage_id: str
    source_text: str
    relation: RelationKind
    hop: Hop
    target_text: str
    split: str

    def __post_init__(self) -> None:
        if self.split not in SPLIT_ORDER:
            raise ValueError(f"split must be one of {SPLIT_ORDER}, got {self.split!r}")
        if not self.source_text.strip() or not self.target_text.strip():
            raise ValueError("sample event texts must be nonempty")


@dataclass(frozen=True)
class DerivationConfig:
    """Knobs for corpus derivation.

    include_paragraph and include_hop are recorded here and take effect when
    samples are rendered into query strings; include_reverse and max_hop
    change which samples exist at all.
    """

    max_hop: Hop = Hop(3)
    include_paragraph: bool = True
    include_reverse: bool = True
    include_hop: bool = True


@dataclass(frozen=True)
class DatasetBundle:
    samples_by_split: Mapping[str, tuple[DerivedSample, ...]]
    config: DerivationConfig

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "samples_by_split", {split: tuple(samples) for split, samples in self.samples_by_split.items()}
        )

    def splits(self) -> tuple[str, ...]:
        return tuple(split for split in SPLIT_ORDER if split in self.samples_by_split)

    def all_samples(self) -> Iterator[DerivedSample]:
        for split in self.splits():
            yield from self.samples_by_split[split]

    def __len__(self) -> int:
        return sum(len(samples) for samples in self.samples_by_split.values())


def derive_samples(
    graph: InfluenceGraph,
    passage: Passage,
    config: DerivationConfig,
    split: str,
) -> list[DerivedSample]:
    """All samples derivable from one graph.

    Sources are visited in node-id order and their paths in enumeration
    order, the forward sample always preceding its reverse twin. Samples
    that repeat an already-emitted (source, relation, hop, target) tuple are
    collapsed, which keeps multi-path duplicates from biasing training.
    """
    if split not in SPLIT_ORDER:
        raise InputError(f"split must be one of {SPLIT_ORDER}, got {split!r}")
    report = validate(graph)
    if not report.is_clean:
        raise InvalidGraph(graph.passage_id, report)
    if graph.passage_id != passage.passage_id:
        raise PassageMismatch(graph.passage_id, passage.passage_id)

    samples: list[DerivedSample] = []
    seen: set[tuple[str, RelationKind, int, str]] = set()

    def emit(source_text: str, relation: RelationKind, hop: Hop, target_text: str) -> None:
        key = (source_text, relation, hop.count, target_text)
        if key in seen:
            return
        seen.add(key)
        samples.append(DerivedSample(graph.passage_id, source_text, relation, hop, target_text, split))

    for source_id in sorted(graph.node_ids):
        for path in enumerate_paths(graph, source_id, config.max_hop):
            sign = compose(path.signs)
            hop = Hop(path.hop_count)
            source_text = graph.text_of(path.source)
            target_text = graph.text_of(path.target)
            emit(source_text, RelationKind.from_parts(sign, Direction.FORWARD), hop, target_text)
            if config.include_reverse:
                emit(target_text, RelationKind.from_parts(sign, Direction.INVERSE), hop, source_text)
    return samples


def derive_corpus(
    inputs: Iterable[tuple[InfluenceGraph, Passage, str]],
    config: DerivationConfig,
) -> DatasetBundle:
    """Derive and concatenate samples for many (graph, passage, split) triples."""
    grouped: dict[str, list[DerivedSample]] = {}
    for graph, passage, split in inputs:
        batch = derive_samples(graph, passage, config, split)
        grouped.setdefault(split, []).extend(batch)
    return DatasetBundle({split: tuple(batch) for split, batch in grouped.items()}, config)


@dataclass(frozen=True)
class StatsTable:
    """Sample counts keyed by (split, relation surface, hop count)."""

    cells: Mapping[tuple[str, str, int], int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells", dict(self.cells))

    @classmethod
    def from_samples(cls, samples: Iterable[DerivedSample]) -> "StatsTable":
        cells: dict[tuple[str, str, int], int] = {}
        for sample in samples:
            key = (sample.split, sample.relation.surface, sample.hop.count)
            cells[key] = cells.get(key, 0) + 1
        return cls(cells)

    def cell(self, split: str, relation_surface: str, hop: int) -> int:
        return self.cells.get((split, relation_surface, hop), 0)

    def total(self, split: str) -> int:
        return sum(count for (cell_split, _, _), count in self.cells.items() if cell_split == split)

    @property
    def hops(self) -> tuple[int, ...]:
        present = {hop for (_, _, hop) in self.cells}
        return tuple(range(1, max(present) + 1)) if present else ()

    def render_text(self) -> str:
        """Aligned plain-text table: one row per (split, relation), hop columns."""
        hops = self.hops
        header = ["Split", "Relation Type"] + [f"{h}-Hop" for h in hops] + ["Total"]
        rows: list[list[str]] = []
        for split in SPLIT_ORDER:
            split_relations = [
                kind.surface
                for kind in RelationKind
                if any(self.cell(split, kind.surface, h) for h in hops)
            ]
            for index, surface in enumerate(split_relations):
                row = [split if index == 0 else "", surface]
                row += [str(self.cell(split, surface, h)) for h in hops]
                row.append(str(self.total(split)) if index == 0 else "")
                rows.append(row)
        widths = [max(len(line[i]) for line in [header] + rows) for i in range(len(header))]
        lines = []
        for line in [header] + rows:
            padded = [
                cell.ljust(widths[i]) if i < 2 else cell.rjust(widths[i])
                for i, cell in enumerate(line)
            ]
            lines.append("  ".join(padded).rstrip())
        return "\n".join(lines) + "\n"


def stats(bundle: DatasetBundle) -> StatsTable:
    return StatsTable.from_samples(bundle.all_samples())


# ---------------------------------------------------------------------------
# file formats: one passage / one sample per line
# ---------------------------------------------------------------------------


def load_passages(path: str | PathLike[str]) -> dict[str, Passage]:
    passages: dict[str, Passage] = {}
    for lineno, record in read_records(path):
        try:
            passage = Passage(str(record["passage_id"]), tuple(str(s) for s in record["sentences"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{path}:{lineno}: bad passage record ({exc})") from exc
        if passage.passage_id in passages:
            raise InputError(f"{path}:{lineno}: duplicate passage id {passage.passage_id!r}")
        passages[passage.passage_id] = passage
    return passages


def dump_passages(path: str | PathLike[str], passages: Iterable[Passage]) -> None:
    write_records(
        path,
        ({"passage_id": p.passage_id, "sentences": list(p.sentences)} for p in passages),
    )


def load_samples(path: str | PathLike[str]) -> list[DerivedSample]:
    samples: list[DerivedSample] = []
    for lineno, record in read_records(path):
        try:
            samples.append(
                DerivedSample(
                    str(record["passage_id"]),
                    str(record["source"]),
                    RelationKind.from_surface(record["relation"]),
                    Hop(int(record["hop"])),
                    str(record["target"]),
                    str(record["split"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{path}:{lineno}: bad sample record ({exc})") from exc
    return samples


def dump_samples(path: str | PathLike[str], samples: Iterable[DerivedSample]) -> None:
    write_records(
        path,
        (
            {
                "passage_id": s.passage_id,
                "source": s.source_text,
                "relation": s.relation.surface,
                "hop": s.hop.count,
                "target": s.target_text,
                "split": s.split,
            }
            for s in samples
        ),
    )
