import itertools

import numpy as np
import pytest

from banknet import (CountryGraph, build_graph, detect_communities,
                     modularity)

from conftest import (make_complete, make_twin_cliques, make_two_triangles,
                      rec)


def random_graph(rng, n=8, p=0.35):
    names = [f"R{i:02d}" for i in range(n)]
    records = []
    for i in range(n):
        for j in range(n):
            if i != j and rng.random() < p:
                records.append(rec(names[i], names[j],
                                   int(rng.integers(1, 6))))
    return build_graph(records)


class TestModularity:
    def test_two_triangles_split(self):
        g = make_two_triangles()
        labels = {"A": 0, "B": 0, "C": 0, "X": 1, "Y": 1, "Z": 1}
        assert modularity(g, labels) == pytest.approx(0.5, abs=1e-15)

    def test_single_block_is_zero(self):
        rng = np.random.default_rng(10)
        for _ in range(10):
            g = random_graph(rng)
            if g.edge_count == 0:
                continue
            labels = {c: 0 for c in g.nodes}
            assert modularity(g, labels) == 0.0

    def test_singletons_negative(self):
        g = make_complete(6)
        labels = {c: i for i, c in enumerate(g.nodes)}
        assert modularity(g, labels) < 0.0

    def test_twin_cliques_value(self):
        g = make_twin_cliques()
        labels = {c: (0 if c.startswith("A") else 1) for c in g.nodes}
        assert modularity(g, labels) == pytest.approx(19 / 42, abs=1e-15)

    def test_weights_matter(self):
        # same topology, heavier intra-pair weights reward the pair split
        light = build_graph([rec("AA", "BB", 1), rec("CC", "DD", 1),
                             rec("BB", "CC", 1)])
        heavy = build_graph([rec("AA", "BB", 9), rec("CC", "DD", 9),
                             rec("BB", "CC", 1)])
        labels = {"AA": 0, "BB": 0, "CC": 1, "DD": 1}
        assert modularity(heavy, labels) > modularity(light, labels)

    def test_missing_label_rejected(self):
        g = make_complete(3)
        with pytest.raises(ValueError, match="misses"):
            modularity(g, {g.nodes[0]: 0, g.nodes[1]: 0})

    def test_edgeless_scores_zero(self):
        g = CountryGraph(("AA", "BB"), ())
        assert modularity(g, {"AA": 0, "BB": 1}) == 0.0

    def test_accepts_assignment_object(self):
        g = make_twin_cliques()
        assignment = detect_communities(g)
        assert modularity(g, assignment) == assignment.modularity_q

    def test_resolution_scales_penalty_only(self):
        g = make_twin_cliques()
        labels = {c: (0 if c.startswith("A") else 1) for c in g.nodes}
        q1 = modularity(g, labels, resolution=1.0)
        q2 = modularity(g, labels, resolution=2.0)
        # penalty term is gamma * 2 * (1/2)^2 = gamma / 2 here
        assert q1 - q2 == pytest.approx(0.5, abs=1e-12)


class TestDetect:
    def test_two_triangles(self):
        g = make_two_triangles()
        found = detect_communities(g)
        assert found.community_count == 2
        assert found.modularity_q == pytest.approx(0.5, abs=1e-15)
        assert len({found.labels[c] for c in "ABC"}) == 1
        assert len({found.labels[c] for c in "XYZ"}) == 1

    def test_complete_graph_single_block(self):
        found = detect_communities(make_complete(6))
        assert found.community_count == 1
        assert found.modularity_q == 0.0

    def test_twin_cliques_exact_split(self):
        g = make_twin_cliques()
        found = detect_communities(g)
        assert found.community_count == 2
        assert found.modularity_q == pytest.approx(19 / 42, abs=1e-14)
        for c in g.nodes:
            assert found.labels[c] == (0 if c.startswith("A") else 1)

    def test_beats_every_bipartition(self):
        # exhaustive check over all 2^10 two-colorings
        g = make_twin_cliques()
        found = detect_communities(g)
        best = max(
            modularity(g, {c: mask >> i & 1 for i, c in enumerate(g.nodes)})
            for mask in range(1 << g.node_count))
        assert found.modularity_q == pytest.approx(best, abs=1e-12)

    def test_deterministic_per_seed(self, synth500):
        a = detect_communities(synth500, seed=3)
        b = detect_communities(synth500, seed=3)
        assert a.labels == b.labels
        assert a.modularity_q == b.modularity_q

    def test_seed_invariant_on_clean_structure(self):
        g = make_twin_cliques()
        for seed in range(6):
            found = detect_communities(g, seed=seed)
            assert found.labels == {
                c: (0 if c.startswith("A") else 1) for c in g.nodes}

    def test_labels_dense_first_appearance(self, synth500):
        found = detect_communities(synth500)
        seen = []
        for c in synth500.nodes:
            if found.labels[c] not in seen:
                seen.append(found.labels[c])
        assert seen == list(range(found.community_count))

    def test_q_recomputable(self, synth500):
        found = detect_communities(synth500)
        assert modularity(synth500, found.labels) == found.modularity_q

    def test_no_pairwise_merge_improves(self):
        rng = np.random.default_rng(77)
        for _ in range(8):
            g = random_graph(rng, n=10, p=0.25)
            if g.node_count == 0 or g.edge_count == 0:
                continue
            found = detect_communities(g)
            ids = sorted(set(found.labels.values()))
            for a, b in itertools.combinations(ids, 2):
                merged = {c: (a if v == b else v)
                          for c, v in found.labels.items()}
                assert modularity(g, merged) <= found.modularity_q + 1e-7

    def test_resolution_sweep(self):
        g = make_twin_cliques()
        low = detect_communities(g, resolution=0.05)
        mid = detect_communities(g, resolution=1.0)
        high = detect_communities(g, resolution=8.0)
        assert low.community_count == 1
        assert low.modularity_q == pytest.approx(0.95, abs=1e-12)
        assert mid.community_count == 2
        assert high.community_count == g.node_count

    def test_edgeless_singletons(self):
        g = CountryGraph(("AA", "BB", "CC"), ())
        found = detect_communities(g)
        assert found.community_count == 3
        assert found.labels == {"AA": 0, "BB": 1, "CC": 2}
        assert found.modularity_q == 0.0

    def test_validation(self):
        with pytest.raises(ValueError, match="empty"):
            detect_communities(build_graph([]))
        with pytest.raises(ValueError, match="resolution"):
            detect_communities(make_complete(3), resolution=0.0)

    def test_isolated_node_keeps_own_community(self):
        g = build_graph([rec("AA", "BB", 2)])
        g = CountryGraph(("AA", "BB", "ZZ"), g.edges)
        found = detect_communities(g)
        assert found.labels["ZZ"] not in {found.labels["AA"],
                                          found.labels["BB"]}
