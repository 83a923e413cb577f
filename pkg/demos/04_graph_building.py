"""
Growing a graph around a seed event
===================================

One generation request per (relation, hop) pair. Forward relations hang the
generated event downstream of the seed, inverse relations hang it upstream.
A scripted generator stands in for the real backend here, so the build is
fully reproducible; swap in RemoteGenerator("http://host:port") for a live
service.
"""

from eigenkit import (
    BuildSpec,
    Hop,
    Passage,
    RelationKind,
    ScriptedGenerator,
    adjacency_text,
    build_graph,
    render_query,
)

passage = Passage(
    "sunlight-1",
    (
        "A plant sits on a sunny windowsill.",
        "Light falls on its leaves through the day.",
        "The leaves use the light to make food for new growth.",
    ),
)
seed = "more sunlight"

# Script the exact prompts the builder will issue.
script = {
    render_query(passage, seed, RelationKind.HELPS, Hop(1)): "plants trap sunlight",
    render_query(passage, seed, RelationKind.HELPS, Hop(2)): "plants grow taller",
    render_query(passage, seed, RelationKind.HELPED_BY, Hop(1)): "bright skies",
    render_query(passage, seed, RelationKind.HELPED_BY, Hop(2)): "Bright skies.",  # dedups
    render_query(passage, seed, RelationKind.HURT_BY, Hop(1)): "cloudy skies",
    render_query(passage, seed, RelationKind.HURT_BY, Hop(2)): "Cloudy skies.",    # dedups
}

spec = BuildSpec(
    passage,
    seed,
    relations=(RelationKind.HELPS, RelationKind.HELPED_BY, RelationKind.HURT_BY),
    hops=(Hop(1), Hop(2)),
)
build = build_graph(spec, ScriptedGenerator(script))

print(adjacency_text(build))
print("seed node:", build.seed_id)
for warning in build.warnings:
    print("warning:", warning)
