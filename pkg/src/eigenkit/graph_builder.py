"""Grow an influence graph around a seed event by querying a generator.

One generation request is issued per (relation, hop) pair. Forward relations
attach the generated event downstream of the seed, inverse relations attach
it upstream; either way the edge carries the relation's sign. Node identity
comes from normalized text, so reruns against a deterministic generator
assemble the same graph byte for byte.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Mapping

from .backend import DEFAULT_STOP_TOKEN, BackendError, GenerationRequest, Generator
from .derivation import Passage
from .graph import (
    Direction,
    EventNode,
    Hop,
    InfluenceEdge,
    InfluenceGraph,
    RelationKind,
    Sign,
    validate,
)
from .templating import render_query

logger = logging.getLogger(__name__)

_TRAILING_PUNCTUATION = ".,;:!?"


def normalize_event_text(text: str) -> str:
    """Node-identity normalization: lowercase, collapsed whitespace, no trailing punctuation."""
    squashed = " ".join(text.split()).lower()
    return squashed.rstrip(_TRAILING_PUNCTUATION).rstrip()


@dataclass(frozen=True)
class BuildSpec:
    """What to grow: a seed event in its passage, fanned out per relation and hop."""

    passage: Passage
    seed: str
    relations: tuple[RelationKind, ...]
    hops: tuple[Hop, ...]
    dedup: bool = True

    def __post_init__(self) -> None:
        if not " ".join(self.seed.split()):
            raise ValueError("seed event text is empty")
        if not self.relations:
            raise ValueError("at least one relation is required")
        if not self.hops:
            raise ValueError("at least one hop is required")
        # Canonical fan-out order regardless of how the caller listed things.
        relations = tuple(kind for kind in RelationKind if kind in set(self.relations))
        hops = tuple(sorted(set(self.hops), key=lambda h: h.count))
        object.__setattr__(self, "relations", relations)
        object.__setattr__(self, "hops", hops)


@dataclass(frozen=True)
class Attachment:
    """Which (relation, hop) query produced a node."""

    relation: RelationKind
    hop: Hop


@dataclass(frozen=True)
class GraphBuild:
    graph: InfluenceGraph
    provenance: Mapping[str, tuple[Attachment, ...]]
    warnings: tuple[str, ...]

    @property
    def seed_id(self) -> str:
        # The seed is the one node without provenance.
        for node in self.graph.nodes:
            if node.id not in self.provenance:
                return node.id
        raise LookupError("build has no seed node")


def build_graph(
    spec: BuildSpec,
    generator: Generator,
    *,
    max_new_tokens: int = 48,
    top_p: float = 0.9,
    temperature: float = 1.0,
    stop_token: str = DEFAULT_STOP_TOKEN,
) -> GraphBuild:
    """Issue one query per (relation, hop) and assemble the resulting graph.

    Empty generations are skipped with a warning, as are generations that
    normalize to the seed itself (they would form self-loops). Backend errors
    propagate annotated with the failing (relation, hop). The returned graph
    always validates with no errors.
    """
    seed_text = " ".join(spec.seed.split())
    seed_id = normalize_event_text(seed_text)
    nodes: dict[str, EventNode] = {seed_id: EventNode(seed_id, seed_text)}
    edges: dict[tuple[str, str, Sign], InfluenceEdge] = {}
    provenance: dict[str, list[Attachment]] = {}
    warnings: list[str] = []

    def warn(message: str) -> None:
        warnings.append(message)
        logger.warning("%s: %s", spec.passage.passage_id, message)

    for relation in spec.relations:
        for hop in spec.hops:
            prompt = render_query(spec.passage, seed_text, relation, hop)
            request = GenerationRequest(
                prompt,
                max_new_tokens=max_new_tokens,
                top_p=top_p,
                temperature=temperature,
                stop_token=stop_token,
            )
            try:
                result = generator.generate(request)
            except BackendError as exc:
                raise type(exc)(f"{relation.surface} at {hop.count}-hop: {exc}") from exc
            text = result.text.strip()
            if not text:
                warn(f"empty generation for {relation.surface} at {hop.count}-hop; skipped")
                continue
            normalized = normalize_event_text(text)
            if not normalized:
                warn(f"punctuation-only generation for {relation.surface} at {hop.count}-hop; skipped")
                continue
            if spec.dedup:
                node_id = normalized
            else:
                node_id = f"{normalized}#{relation.surface.replace(' ', '-')}@{hop.count}"
            if node_id == seed_id:
                warn(f"{relation.surface} at {hop.count}-hop regenerated the seed event; skipped")
                continue
            if node_id not in nodes:
                nodes[node_id] = EventNode(node_id, text)
            if relation.direction is Direction.FORWARD:
                key = (seed_id, node_id, relation.sign)
            else:
                key = (node_id, seed_id, relation.sign)
            edges.setdefault(key, InfluenceEdge(*key))
            provenance.setdefault(node_id, []).append(Attachment(relation, hop))

    graph = InfluenceGraph(spec.passage.passage_id, tuple(nodes.values()), tuple(edges.values()))
    report = validate(graph)
    if not report.is_clean:  # unreachable by construction; guard stays anyway
        raise RuntimeError(f"built graph failed validation: {[f.message for f in report.errors]}")
    return GraphBuild(graph, {k: tuple(v) for k, v in provenance.items()}, tuple(warnings))


def adjacency_text(build: GraphBuild) -> str:
    """Human-readable edge listing with per-node attachment annotations."""
    graph = build.graph
    lines = [
        f"passage: {graph.passage_id}",
        f"nodes: {len(graph.nodes)}  edges: {len(graph.edges)}",
        "",
    ]
    for edge in sorted(graph.edges, key=lambda e: (e.source, e.target, e.sign.wire)):
        lines.append(f"{graph.text_of(edge.source)} -[{edge.sign.wire}]-> {graph.text_of(edge.target)}")
    if build.provenance:
        lines.append("")
        for node_id in sorted(build.provenance):
            tags = ", ".join(
                f"{a.relation.surface} at {a.hop.count}-hop" for a in build.provenance[node_id]
            )
            lines.append(f"{graph.text_of(node_id)}: {tags}")
    return "\n".join(lines) + "\n"
