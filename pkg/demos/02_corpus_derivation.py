"""
Deriving a generation corpus from an influence graph
====================================================

Every simple path up to max_hop becomes one training sample: the composed
sign picks helps/hurts, and each forward sample gets an inverse twin read
from the other end. Duplicate (source, relation, hop, target) tuples from
parallel paths collapse to one sample.
"""

from eigenkit import (
    DerivationConfig,
    EventNode,
    Hop,
    InfluenceEdge,
    InfluenceGraph,
    Passage,
    Sign,
    derive_corpus,
    derive_samples,
    stats,
)

passage = Passage(
    "sunlight-1",
    (
        "A plant sits on a sunny windowsill.",
        "Light falls on its leaves through the day.",
        "The leaves use the light to make food for new growth.",
    ),
)
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

config = DerivationConfig(max_hop=Hop(3))
samples = derive_samples(graph, passage, config, "train")
print(f"{len(samples)} samples from one graph; the first few:")
for sample in samples[:6]:
    print(f"  ({sample.source_text!r}, {sample.relation.surface}, {sample.hop.count}-hop) -> {sample.target_text!r}")

# Forward and inverse counts mirror each other exactly.
forward = sum(1 for s in samples if s.relation.surface in ("helps", "hurts"))
print(f"\nforward {forward}, inverse {len(samples) - forward}")

# Turning reverse augmentation off halves the corpus.
no_reverse = derive_samples(graph, passage, DerivationConfig(include_reverse=False), "train")
print(f"with reverse: {len(samples)}; without: {len(no_reverse)}")

# The count table, grouped by split, relation, and hop.
bundle = derive_corpus([(graph, passage, "train")], config)
print()
print(stats(bundle).render_text())
