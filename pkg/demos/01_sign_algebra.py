"""
Signs, relations, and multi-hop paths
=====================================

An influence graph is a directed graph over event phrases where every edge
says one event helps (+) or hurts (-) another. This walks the core algebra:
composing edge signs along a chain and enumerating simple paths.
"""

from eigenkit import (
    EventNode,
    Hop,
    InfluenceEdge,
    InfluenceGraph,
    RelationKind,
    Sign,
    compose,
    enumerate_paths,
    invert,
    validate,
)

# A chain is negative exactly when it carries an odd number of hurts edges.
print(compose([Sign.POSITIVE, Sign.POSITIVE]))            # helps
print(compose([Sign.POSITIVE, Sign.NEGATIVE]))            # hurts
print(compose([Sign.NEGATIVE, Sign.NEGATIVE, Sign.NEGATIVE]))  # hurts
print(compose([]))                                        # helps: empty chain is the identity

# Four relation kinds = two signs x two directions.
for kind in RelationKind:
    print(f"{kind.surface!r}: sign={kind.sign.wire} direction={kind.direction.name.lower()}")

# Inverting flips direction and keeps the sign; doing it twice is a no-op.
assert invert(RelationKind.HELPS) is RelationKind.HELPED_BY
assert invert(invert(RelationKind.HURT_BY)) is RelationKind.HURT_BY

# The plant-growth toy graph used throughout these demos.
graph = InfluenceGraph(
    "sunlight-1",
    nodes=(
        EventNode("bright skies", "bright skies"),
        EventNode("cloudy skies", "cloudy skies"),
        EventNode("more sunlight", "more sunlight"),
        EventNode("plants trap sunlight", "plants trap sunlight"),
        EventNode("plants grow taller", "plants grow taller"),
    ),
    edges=(
        InfluenceEdge("bright skies", "more sunlight", Sign.POSITIVE),
        InfluenceEdge("cloudy skies", "more sunlight", Sign.NEGATIVE),
        InfluenceEdge("more sunlight", "plants trap sunlight", Sign.POSITIVE),
        InfluenceEdge("plants trap sunlight", "plants grow taller", Sign.POSITIVE),
    ),
)
report = validate(graph)
print("graph is clean:", report.is_clean)

# Simple paths from one source, up to three hops, in deterministic order.
print("\npaths out of 'cloudy skies':")
for path in enumerate_paths(graph, "cloudy skies", Hop(3)):
    print(f"  {' -> '.join(path.nodes)}  [{path.composed_sign.wire} at {path.hop_count}-hop]")
