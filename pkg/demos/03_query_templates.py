"""
Query templating
================

A derived sample renders into one generation prompt:

    <passage> what does <source event> <relation> at <h>-hop?

The passage and hop clauses can be ablated independently, and any rendered
query parses back into its parts.
"""

from eigenkit import Hop, Passage, RelationKind, parse_query, render_query

passage = Passage("p1", ("Rain falls on the hills.", "Water runs into the river."))

full = render_query(passage, "more rain", RelationKind.HELPS, Hop(2))
print(full)

# Ablations: drop the passage, drop the hop clause, or both.
print(render_query(None, "more rain", RelationKind.HELPS, Hop(2)))
print(render_query(passage, "more rain", RelationKind.HELPS, None))
print(render_query(None, "more rain", RelationKind.HURT_BY, None))

# Round trip.
parsed = parse_query(full)
print()
print("passage:", parsed.passage_text)
print("source: ", parsed.source)
print("relation:", parsed.relation.surface)
print("hop:    ", parsed.hop.count)

assert parsed.source == "more rain"
assert parsed.relation is RelationKind.HELPS
assert parsed.hop == Hop(2)
