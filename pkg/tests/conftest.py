"""Shared fixtures: the canonical sunlight example and independent oracles.

The oracles here deliberately avoid the package's own traversal code so the
tests compare two implementations, not one implementation with itself.
"""

from __future__ import annotations

import random

import pytest

from eigenkit import EventNode, InfluenceEdge, InfluenceGraph, Passage, Sign


def make_graph(passage_id, edges, extra_nodes=()):
    """Build a graph from (source, target, sign_wire) triples; node text = id."""
    node_ids = {e[0] for e in edges} | {e[1] for e in edges} | set(extra_nodes)
    nodes = tuple(EventNode(node_id, node_id) for node_id in sorted(node_ids))
    return InfluenceGraph(
        passage_id,
        nodes,
        tuple(InfluenceEdge(s, t, Sign.from_wire(w)) for s, t, w in edges),
    )


@pytest.fixture
def sunlight_passage():
    return Passage(
        "sunlight-1",
        (
            "A plant absorbs sunlight through its leaves.",
            "The energy is used to turn water and carbon dioxide into sugar.",
            "The plant uses the sugar to grow.",
        ),
    )


@pytest.fixture
def sunlight_graph():
    # bright skies -+-> more sunlight -+-> plants trap sunlight -+-> plants grow taller
    # cloudy skies --->  more sunlight
    return make_graph(
        "sunlight-1",
        [
            ("bright skies", "more sunlight", "helps"),
            ("cloudy skies", "more sunlight", "hurts"),
            ("more sunlight", "plants trap sunlight", "helps"),
            ("plants trap sunlight", "plants grow taller", "helps"),
        ],
    )


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------


def sign_parity_oracle(signs):
    """Sign of a chain computed the dumb way: count negatives, check parity."""
    return Sign.NEGATIVE if sum(1 for s in signs if s is Sign.NEGATIVE) % 2 == 1 else Sign.POSITIVE


def brute_force_simple_paths(edge_triples, source, max_len):
    """All simple paths from source, found by enumerating walks and filtering.

    ``edge_triples`` is a plain list of (source, target, Sign); returns a set
    of (node_tuple, sign_tuple) pairs. Independent of the package's adjacency
    and traversal code.
    """
    found = set()

    def extend(nodes, signs):
        if len(signs) >= max_len:
            return
        for src, dst, sign in edge_triples:
            if src != nodes[-1]:
                continue
            next_nodes = nodes + (dst,)
            if len(set(next_nodes)) != len(next_nodes):
                continue
            entry = (next_nodes, signs + (sign,))
            if entry not in found:
                found.add(entry)
                extend(*entry)

    extend((source,), ())
    return found


def random_signed_graph(rng: random.Random, n_nodes: int, max_edges: int, passage_id: str = "rand"):
    """A random graph without self-loops or duplicate (source, target, sign) triples."""
    node_ids = [f"n{i}" for i in range(n_nodes)]
    possible = [
        (s, t, sign)
        for s in node_ids
        for t in node_ids
        if s != t
        for sign in (Sign.POSITIVE, Sign.NEGATIVE)
    ]
    count = rng.randint(0, min(max_edges, len(possible)))
    chosen = rng.sample(possible, count)
    return InfluenceGraph(
        passage_id,
        tuple(EventNode(node_id, f"event {node_id}") for node_id in node_ids),
        tuple(InfluenceEdge(s, t, sign) for s, t, sign in chosen),
    )


def passage_for(graph):
    return Passage(graph.passage_id, (f"A procedural paragraph for {graph.passage_id}.",))
