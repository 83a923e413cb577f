"""Influence graphs: events, signed directed edges, and the relation algebra.

An influence graph ties short event descriptions ("more sunlight") together
with signed directed edges: a positive edge means the source event helps the
target event happen, a negative edge means it hurts it. Chains of edges
compose by sign parity, which is what makes multi-hop reasoning over these
graphs cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from os import PathLike
from typing import Iterable, Union

from ._jsonl import read_records, write_records
from .errors import InputError


class UnknownNode(InputError):
    """A node id was referenced that the graph does not contain."""


class Sign(Enum):
    """Polarity of a single influence edge. The value doubles as the wire form."""

    POSITIVE = "helps"
    NEGATIVE = "hurts"

    @classmethod
    def from_wire(cls, value: str) -> "Sign":
        try:
            return cls(value)
        except ValueError:
            raise InputError(f"unknown edge sign {value!r}") from None

    @property
    def wire(self) -> str:
        return self.value


def compose(signs: Iterable[Sign]) -> Sign:
    """Combine edge signs along a chain.

    A chain is negative exactly when it holds an odd number of negative
    edges; the empty chain composes to the positive identity. Order never
    matters, and composing two concatenated chains equals composing their
    individual results.
    """
    negatives = sum(1 for sign in signs if sign is Sign.NEGATIVE)
    return Sign.NEGATIVE if negatives % 2 else Sign.POSITIVE


class Direction(Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


class RelationKind(Enum):
    """The four query relations: sign crossed with direction.

    Forward relations ask what the source does to other events; inverse
    relations ask what other events do to the source. The enum value is the
    exact surface form used in rendered queries and serialized samples.
    """

    HELPS = "helps"
    HURTS = "hurts"
    HELPED_BY = "is helped by"
    HURT_BY = "is hurt by"

    @property
    def surface(self) -> str:
        return self.value

    @property
    def sign(self) -> Sign:
        if self in (RelationKind.HELPS, RelationKind.HELPED_BY):
            return Sign.POSITIVE
        return Sign.NEGATIVE

    @property
    def direction(self) -> Direction:
        if self in (RelationKind.HELPS, RelationKind.HURTS):
            return Direction.FORWARD
        return Direction.INVERSE

    @classmethod
    def from_parts(cls, sign: Sign, direction: Direction) -> "RelationKind":
        forward = direction is Direction.FORWARD
        if sign is Sign.POSITIVE:
            return cls.HELPS if forward else cls.HELPED_BY
        return cls.HURTS if forward else cls.HURT_BY

    @classmethod
    def from_surface(cls, surface: str) -> "RelationKind":
        try:
            return cls(surface)
        except ValueError:
            raise InputError(f"unknown relation {surface!r}") from None


def invert(relation: RelationKind) -> RelationKind:
    """Flip a relation's direction while keeping its sign.

    helps <-> is helped by, hurts <-> is hurt by; applying it twice is the
    identity.
    """
    if relation.direction is Direction.FORWARD:
        flipped = Direction.INVERSE
    else:
        flipped = Direction.FORWARD
    return RelationKind.from_parts(relation.sign, flipped)


@dataclass(frozen=True)
class EventNode:
    id: str
    text: str


@dataclass(frozen=True)
class InfluenceEdge:
    source: str
    target: str
    sign: Sign


@dataclass(frozen=True)
class Hop:
    """A positive hop count; constructing a non-positive one is an error."""

    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"hop count must be >= 1, got {self.count}")


@dataclass(frozen=True)
class InfluenceGraph:
    """One passage's influence graph. Immutable after construction.

    Construction is permissive: structural problems (dangling endpoints,
    self-loops, duplicates, blank texts) are reported by validate() rather
    than thrown, so damaged files can be loaded and inspected.
    """

    passage_id: str
    nodes: tuple[EventNode, ...]
    edges: tuple[InfluenceEdge, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))

    @cached_property
    def node_ids(self) -> frozenset[str]:
        return frozenset(node.id for node in self.nodes)

    @cached_property
    def _nodes_by_id(self) -> dict[str, EventNode]:
        return {node.id: node for node in self.nodes}

    def node(self, node_id: str) -> EventNode:
        try:
            return self._nodes_by_id[node_id]
        except KeyError:
            raise UnknownNode(f"graph {self.passage_id!r} has no node {node_id!r}") from None

    def text_of(self, node_id: str) -> str:
        return self.node(node_id).text

    @cached_property
    def _adjacency(self) -> dict[str, tuple[InfluenceEdge, ...]]:
        # Unique triples with both endpoints present, ordered for stable walks.
        unique: dict[tuple[str, str, Sign], InfluenceEdge] = {}
        for edge in self.edges:
            if edge.source in self.node_ids and edge.target in self.node_ids:
                unique.setdefault((edge.source, edge.target, edge.sign), edge)
        grouped: dict[str, list[InfluenceEdge]] = {}
        for edge in unique.values():
            grouped.setdefault(edge.source, []).append(edge)
        return {
            source: tuple(sorted(out, key=lambda e: (e.target, e.sign is Sign.NEGATIVE)))
            for source, out in grouped.items()
        }

    def out_edges(self, node_id: str) -> tuple[InfluenceEdge, ...]:
        return self._adjacency.get(node_id, ())


@dataclass(frozen=True)
class Path:
    """A simple directed path: n+1 distinct nodes joined by n signed edges."""

    nodes: tuple[str, ...]
    signs: tuple[Sign, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "signs", tuple(self.signs))
        if len(self.nodes) < 2:
            raise ValueError("a path needs at least two nodes")
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("path nodes must be pairwise distinct")
        if len(self.signs) != len(self.nodes) - 1:
            raise ValueError("a path over k nodes carries k-1 signs")

    @property
    def source(self) -> str:
        return self.nodes[0]

    @property
    def target(self) -> str:
        return self.nodes[-1]

    @property
    def hop_count(self) -> int:
        return len(self.signs)

    @property
    def composed_sign(self) -> Sign:
        return compose(self.signs)


def enumerate_paths(graph: InfluenceGraph, source: str, max_hop: Hop) -> list[Path]:
    """Every simple directed path from ``source`` with 1..max_hop edges.

    Paths are returned in lexicographic order of their node-id sequence, with
    the sign sequence (positive before negative) breaking ties between
    parallel contradictory edges. Raises UnknownNode for a missing source.
    """
    if source not in graph.node_ids:
        raise UnknownNode(f"graph {graph.passage_id!r} has no node {source!r}")
    limit = max_hop.count
    found: list[Path] = []
    on_path: set[str] = {source}

    def walk(node: str, nodes: tuple[str, ...], signs: tuple[Sign, ...]) -> None:
        for edge in graph.out_edges(node):
            if edge.target in on_path:
                continue
            next_nodes = nodes + (edge.target,)
            next_signs = signs + (edge.sign,)
            found.append(Path(next_nodes, next_signs))
            if len(next_signs) < limit:
                on_path.add(edge.target)
                walk(edge.target, next_nodes, next_signs)
                on_path.discard(edge.target)

    walk(source, (source,), ())
    found.sort(key=lambda p: (p.nodes, tuple(s is Sign.NEGATIVE for s in p.signs)))
    return found


@dataclass(frozen=True)
class Finding:
    kind: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    """Structural findings for one graph.

    ``errors`` is empty exactly when every graph invariant holds; warnings
    (contradictory parallel edges) never make a graph invalid.
    """

    errors: tuple[Finding, ...] = ()
    warnings: tuple[Finding, ...] = ()

    @property
    def is_clean(self) -> bool:
        return not self.errors


def validate(graph: InfluenceGraph) -> ValidationReport:
    """Check every structural invariant, reporting problems instead of raising."""
    errors: list[Finding] = []
    warnings: list[Finding] = []

    seen_ids: set[str] = set()
    for node in graph.nodes:
        if node.id in seen_ids:
            errors.append(Finding("duplicate-node-id", f"node id {node.id!r} appears more than once"))
        seen_ids.add(node.id)
        if not node.text.strip():
            errors.append(Finding("empty-node-text", f"node {node.id!r} has empty text"))

    seen_edges: set[tuple[str, str, Sign]] = set()
    pair_signs: dict[tuple[str, str], set[Sign]] = {}
    for edge in graph.edges:
        for endpoint in (edge.source, edge.target):
            if endpoint not in graph.node_ids:
                errors.append(
                    Finding("dangling-endpoint", f"edge {edge.source!r}->{edge.target!r} references unknown node {endpoint!r}")
                )
        if edge.source == edge.target:
            errors.append(Finding("self-loop", f"node {edge.source!r} influences itself"))
        key = (edge.source, edge.target, edge.sign)
        if key in seen_edges:
            errors.append(
                Finding("duplicate-edge", f"edge ({edge.source!r}, {edge.target!r}, {edge.sign.wire}) is duplicated")
            )
        seen_edges.add(key)
        pair_signs.setdefault((edge.source, edge.target), set()).add(edge.sign)

    for (source, target), signs in sorted(pair_signs.items()):
        if len(signs) == 2:
            warnings.append(
                Finding("contradictory-edges", f"{source!r} both helps and hurts {target!r}")
            )

    return ValidationReport(tuple(errors), tuple(warnings))


# ---------------------------------------------------------------------------
# file format: one graph per line
# ---------------------------------------------------------------------------

GraphItem = Union[InfluenceGraph, tuple[InfluenceGraph, "str | None"]]


def load_graphs(path: str | PathLike[str]) -> list[tuple[InfluenceGraph, str | None]]:
    """Read a graphs file; returns (graph, split_tag_or_None) per line."""
    out: list[tuple[InfluenceGraph, str | None]] = []
    for lineno, record in read_records(path):
        try:
            nodes = tuple(EventNode(str(n["id"]), str(n["text"])) for n in record["nodes"])
            edges = tuple(
                InfluenceEdge(str(e["source"]), str(e["target"]), Sign.from_wire(e["sign"]))
                for e in record["edges"]
            )
            graph = InfluenceGraph(str(record["passage_id"]), nodes, edges)
        except (KeyError, TypeError) as exc:
            raise InputError(f"{path}:{lineno}: bad graph record ({exc!r})") from exc
        split = record.get("split")
        out.append((graph, str(split) if split is not None else None))
    return out


def dump_graphs(path: str | PathLike[str], items: Iterable[GraphItem]) -> None:
    records = []
    for item in items:
        graph, split = item if isinstance(item, tuple) else (item, None)
        record = {
            "passage_id": graph.passage_id,
            "nodes": [{"id": n.id, "text": n.text} for n in graph.nodes],
            "edges": [{"source": e.source, "target": e.target, "sign": e.sign.wire} for e in graph.edges],
        }
        if split is not None:
            record["split"] = split
        records.append(record)
    write_records(path, records)
