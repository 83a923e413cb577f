"""Corpus derivation: sample emission, dedup, symmetry, stats, file formats."""

import random

import pytest

from eigenkit import (
    DerivationConfig,
    DerivedSample,
    Direction,
    Hop,
    InputError,
    InvalidGraph,
    Passage,
    PassageMismatch,
    RelationKind,
    StatsTable,
    compose,
    derive_corpus,
    derive_samples,
    dump_passages,
    dump_samples,
    load_passages,
    load_samples,
    stats,
)
from conftest import brute_force_simple_paths, make_graph, passage_for, random_signed_graph

CFG = DerivationConfig()
NO_REV = DerivationConfig(include_reverse=False)


def distinct_tuple_count(graph, max_hop, include_reverse):
    """Oracle: count distinct (source, relation, hop, target) tuples by brute force."""
    triples = [(e.source, e.target, e.sign) for e in graph.edges]
    texts = {n.id: n.text for n in graph.nodes}
    tuples = set()
    for source in sorted(graph.node_ids):
        for nodes, signs in brute_force_simple_paths(triples, source, max_hop):
            sign = compose(signs)
            forward = RelationKind.from_parts(sign, Direction.FORWARD)
            tuples.add((texts[nodes[0]], forward, len(signs), texts[nodes[-1]]))
            if include_reverse:
                inverse = RelationKind.from_parts(sign, Direction.INVERSE)
                tuples.add((texts[nodes[-1]], inverse, len(signs), texts[nodes[0]]))
    return len(tuples)


class TestDeriveSamples:
    def test_two_hop_forward_sample(self, sunlight_graph, sunlight_passage):
        samples = derive_samples(sunlight_graph, sunlight_passage, CFG, "train")
        assert (
            DerivedSample(
                "sunlight-1", "more sunlight", RelationKind.HELPS, Hop(2), "plants grow taller", "train"
            )
            in samples
        )

    def test_reverse_twin_present(self, sunlight_graph, sunlight_passage):
        samples = derive_samples(sunlight_graph, sunlight_passage, CFG, "train")
        assert (
            DerivedSample(
                "sunlight-1", "plants grow taller", RelationKind.HELPED_BY, Hop(2), "more sunlight", "train"
            )
            in samples
        )

    def test_negative_three_hop_chain(self, sunlight_graph, sunlight_passage):
        samples = derive_samples(sunlight_graph, sunlight_passage, CFG, "train")
        assert (
            DerivedSample(
                "sunlight-1", "cloudy skies", RelationKind.HURTS, Hop(3), "plants grow taller", "train"
            )
            in samples
        )

    def test_forward_precedes_its_reverse(self, sunlight_graph, sunlight_passage):
        samples = derive_samples(sunlight_graph, sunlight_passage, CFG, "train")
        forward = samples.index(
            DerivedSample("sunlight-1", "bright skies", RelationKind.HELPS, Hop(1), "more sunlight", "train")
        )
        reverse = samples.index(
            DerivedSample("sunlight-1", "more sunlight", RelationKind.HELPED_BY, Hop(1), "bright skies", "train")
        )
        assert forward + 1 == reverse

    def test_reverse_off_halves_output(self, sunlight_graph, sunlight_passage):
        with_rev = derive_samples(sunlight_graph, sunlight_passage, CFG, "train")
        without = derive_samples(sunlight_graph, sunlight_passage, NO_REV, "train")
        assert len(with_rev) == 2 * len(without)
        assert all(s.relation.direction is Direction.FORWARD for s in without)

    def test_max_hop_bound(self, sunlight_graph, sunlight_passage):
        config = DerivationConfig(max_hop=Hop(1))
        samples = derive_samples(sunlight_graph, sunlight_passage, config, "train")
        assert all(s.hop.count == 1 for s in samples)

    def test_invalid_graph_rejected(self, sunlight_passage):
        from eigenkit import EventNode, InfluenceEdge, InfluenceGraph, Sign

        broken = InfluenceGraph(
            "sunlight-1",
            (EventNode("a", "a"),),
            (InfluenceEdge("a", "ghost", Sign.POSITIVE),),
        )
        with pytest.raises(InvalidGraph):
            derive_samples(broken, sunlight_passage, CFG, "train")

    def test_passage_mismatch_rejected(self, sunlight_graph):
        other = Passage("other-id", ("Some sentence.",))
        with pytest.raises(PassageMismatch):
            derive_samples(sunlight_graph, other, CFG, "train")

    def test_bad_split_rejected(self, sunlight_graph, sunlight_passage):
        with pytest.raises(InputError):
            derive_samples(sunlight_graph, sunlight_passage, CFG, "validation")

    def test_multi_path_duplicates_collapse(self):
        # diamond: two distinct 2-hop paths carry the same (source, helps, 2, target)
        graph = make_graph(
            "p",
            [
                ("a", "b", "helps"),
                ("a", "c", "helps"),
                ("b", "d", "helps"),
                ("c", "d", "helps"),
            ],
        )
        samples = derive_samples(graph, passage_for(graph), NO_REV, "train")
        two_hop_ad = [s for s in samples if s.source_text == "a" and s.target_text == "d"]
        assert len(two_hop_ad) == 1

    def test_distinct_signs_stay_separate(self):
        # same endpoints, same length, opposite composed signs: both kept
        graph = make_graph(
            "p",
            [
                ("a", "b", "helps"),
                ("a", "c", "hurts"),
                ("b", "d", "helps"),
                ("c", "d", "helps"),
            ],
        )
        samples = derive_samples(graph, passage_for(graph), NO_REV, "train")
        relations = {s.relation for s in samples if s.source_text == "a" and s.target_text == "d"}
        assert relations == {RelationKind.HELPS, RelationKind.HURTS}

    def test_deterministic_output(self, sunlight_graph, sunlight_passage):
        first = derive_samples(sunlight_graph, sunlight_passage, CFG, "train")
        second = derive_samples(sunlight_graph, sunlight_passage, CFG, "train")
        assert first == second

    def test_matches_distinct_tuple_oracle(self):
        rng = random.Random(20240)
        for _ in range(40):
            graph = random_signed_graph(rng, rng.randint(3, 6), rng.randint(0, 10))
            for config, include_reverse in ((CFG, True), (NO_REV, False)):
                samples = derive_samples(graph, passage_for(graph), config, "dev")
                assert len(samples) == distinct_tuple_count(graph, 3, include_reverse)


class TestDeriveCorpus:
    def test_groups_by_split(self, sunlight_graph, sunlight_passage):
        other = make_graph("p2", [("x", "y", "hurts")])
        bundle = derive_corpus(
            [
                (sunlight_graph, sunlight_passage, "train"),
                (other, passage_for(other), "test"),
            ],
            CFG,
        )
        assert bundle.splits() == ("train", "test")
        assert all(s.split == "train" for s in bundle.samples_by_split["train"])
        assert len(bundle) == len(bundle.samples_by_split["train"]) + len(bundle.samples_by_split["test"])

    def test_empty_inputs_make_empty_bundle(self):
        bundle = derive_corpus([], CFG)
        assert len(bundle) == 0
        assert bundle.splits() == ()

    def test_carries_config(self, sunlight_graph, sunlight_passage):
        config = DerivationConfig(max_hop=Hop(2), include_hop=False)
        bundle = derive_corpus([(sunlight_graph, sunlight_passage, "train")], config)
        assert bundle.config == config


class TestStats:
    def test_counts_match_manual_tally(self, sunlight_graph, sunlight_passage):
        bundle = derive_corpus([(sunlight_graph, sunlight_passage, "train")], CFG)
        table = stats(bundle)
        manual = {}
        for sample in bundle.all_samples():
            key = (sample.split, sample.relation.surface, sample.hop.count)
            manual[key] = manual.get(key, 0) + 1
        assert dict(table.cells) == manual

    def test_totals_equal_cell_sums(self, sunlight_graph, sunlight_passage):
        bundle = derive_corpus([(sunlight_graph, sunlight_passage, "train")], CFG)
        table = stats(bundle)
        assert table.total("train") == sum(table.cells.values())
        assert table.total("dev") == 0

    def test_forward_inverse_symmetry(self):
        rng = random.Random(7)
        graphs = [random_signed_graph(rng, rng.randint(3, 6), rng.randint(1, 9), f"g{i}") for i in range(30)]
        splits = ["train", "test", "dev"]
        bundle = derive_corpus(
            [(g, passage_for(g), splits[i % 3]) for i, g in enumerate(graphs)], CFG
        )
        table = stats(bundle)
        for split in splits:
            for hop in (1, 2, 3):
                assert table.cell(split, "helps", hop) == table.cell(split, "is helped by", hop)
                assert table.cell(split, "hurts", hop) == table.cell(split, "is hurt by", hop)

    def test_render_text_layout(self, sunlight_graph, sunlight_passage):
        bundle = derive_corpus([(sunlight_graph, sunlight_passage, "train")], CFG)
        text = stats(bundle).render_text()
        lines = text.splitlines()
        assert lines[0].split() == ["Split", "Relation", "Type", "1-Hop", "2-Hop", "3-Hop", "Total"]
        assert lines[1].startswith("train  helps")
        assert str(stats(bundle).total("train")) in lines[1]


class TestFiles:
    def test_sample_round_trip(self, tmp_path, sunlight_graph, sunlight_passage):
        samples = derive_samples(sunlight_graph, sunlight_passage, CFG, "dev")
        path = tmp_path / "samples.jsonl"
        dump_samples(path, samples)
        assert load_samples(path) == samples

    def test_hop_serialized_as_integer(self, tmp_path, sunlight_graph, sunlight_passage):
        import json

        samples = derive_samples(sunlight_graph, sunlight_passage, CFG, "train")
        path = tmp_path / "samples.jsonl"
        dump_samples(path, samples)
        record = json.loads(path.read_text().splitlines()[0])
        assert isinstance(record["hop"], int)
        assert record["relation"] in {k.surface for k in RelationKind}

    def test_passage_round_trip(self, tmp_path, sunlight_passage):
        path = tmp_path / "passages.jsonl"
        dump_passages(path, [sunlight_passage])
        assert load_passages(path) == {"sunlight-1": sunlight_passage}

    def test_duplicate_passage_id_rejected(self, tmp_path, sunlight_passage):
        path = tmp_path / "passages.jsonl"
        dump_passages(path, [sunlight_passage, sunlight_passage])
        with pytest.raises(InputError):
            load_passages(path)

    def test_bad_sample_line_reported(self, tmp_path):
        path = tmp_path / "samples.jsonl"
        path.write_text('{"passage_id": "p", "source": "a", "relation": "boosts", "hop": 1, "target": "b", "split": "train"}\n')
        with pytest.raises(InputError):
            load_samples(path)


def test_stats_table_from_samples_equals_bundle_stats(sunlight_graph, sunlight_passage):
    bundle = derive_corpus([(sunlight_graph, sunlight_passage, "train")], CFG)
    assert StatsTable.from_samples(bundle.all_samples()) == stats(bundle)
