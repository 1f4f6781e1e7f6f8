"""Community structure of the undirected weighted projection.

Greedy modularity optimization in the Louvain mold: repeated local
moving passes (nodes visited in seed-shuffled order, each moving to the
neighboring community with the best modularity gain when that gain
beats 1e-9) alternate with graph aggregation until neither improves.
The resolution parameter scales the null-model penalty; 1.0 recovers
standard modularity.
"""

from __future__ import annotations

import random
from collections.abc import Mapping
from dataclasses import dataclass

from .graph import CountryGraph, _undirected_weights

GAIN_THRESHOLD = 1e-9


@dataclass(frozen=True)
class CommunityAssignment:
    """Dense community ids per country plus the partition's modularity."""

    labels: Mapping[str, int]
    modularity_q: float
    community_count: int


def modularity(g: CountryGraph,
               assignment: Mapping[str, int] | CommunityAssignment,
               resolution: float = 1.0) -> float:
    """Weighted undirected modularity of a partition.

    Q = sum_c [ w_in(c)/W - resolution * (s_c / 2W)^2 ] with W the total
    undirected weight, w_in(c) the weight inside community c and s_c the
    summed node strengths.  Empty graphs and edgeless graphs score 0.
    Every node must be labeled.
    """
    labels = assignment.labels if isinstance(assignment, CommunityAssignment) \
        else assignment
    missing = [c for c in g.nodes if c not in labels]
    if missing:
        raise ValueError(f"assignment misses {len(missing)} nodes, "
                         f"first {missing[0]!r}")

    merged = _undirected_weights(g)
    strength = {i: sum(merged[i].values()) for i in range(g.node_count)}
    total_w = sum(strength.values()) / 2.0
    if total_w == 0:
        return 0.0

    internal: dict[int, float] = {}
    tot_strength: dict[int, float] = {}
    for idx, country in enumerate(g.nodes):
        c = labels[country]
        tot_strength[c] = tot_strength.get(c, 0.0) + strength[idx]
    for src, dst, w in g.edges:
        if labels[g.nodes[src]] == labels[g.nodes[dst]]:
            c = labels[g.nodes[src]]
            internal[c] = internal.get(c, 0.0) + w

    q = 0.0
    for c, s_c in tot_strength.items():
        q += internal.get(c, 0.0) / total_w
        q -= resolution * (s_c / (2.0 * total_w)) ** 2
    return q


def _local_moving(adj: list[dict[int, float]], resolution: float,
                  rng: random.Random) -> tuple[list[int], bool]:
    """One level of greedy node moves; returns (community per node, moved?)."""
    n = len(adj)
    strength = [sum(w for j, w in adj[i].items() if j != i)
                + 2.0 * adj[i].get(i, 0.0) for i in range(n)]
    two_w = sum(strength)
    comm = list(range(n))
    tot = strength.copy()
    moved_any = False

    while True:
        moved_this_pass = False
        order = list(range(n))
        rng.shuffle(order)
        for i in order:
            c_old = comm[i]
            k_i = strength[i]
            tot[c_old] -= k_i

            # links from i into each adjacent community (self-loop stays
            # with i wherever it goes, so it cancels out of comparisons)
            links: dict[int, float] = {c_old: 0.0}
            for j, w in adj[i].items():
                if j != i:
                    links[comm[j]] = links.get(comm[j], 0.0) + w

            def gain(c: int) -> float:
                return (links.get(c, 0.0) / two_w * 2.0
                        - resolution * 2.0 * k_i * tot[c] / (two_w * two_w))

            # highest gain wins; scanning candidates in ascending id with a
            # strict comparison makes ties deterministic (and favors staying)
            best_c, best_gain = c_old, gain(c_old)
            for c in sorted(links):
                if c == c_old:
                    continue
                g_c = gain(c)
                if g_c > best_gain:
                    best_c, best_gain = c, g_c

            if best_c != c_old and best_gain - gain(c_old) > GAIN_THRESHOLD:
                comm[i] = best_c
                moved_this_pass = True
                moved_any = True
            tot[comm[i]] += k_i
        if not moved_this_pass:
            break
    return comm, moved_any


def _aggregate(adj: list[dict[int, float]],
               comm: list[int]) -> tuple[list[dict[int, float]], list[int]]:
    """Collapse communities to super-nodes; intra weight becomes self-loop."""
    ids: dict[int, int] = {}
    for c in comm:
        if c not in ids:
            ids[c] = len(ids)
    dense = [ids[c] for c in comm]

    new_adj: list[dict[int, float]] = [{} for _ in range(len(ids))]
    for i, row in enumerate(adj):
        a = dense[i]
        for j, w in row.items():
            if j < i:
                continue
            b = dense[j]
            if i == j:
                new_adj[a][a] = new_adj[a].get(a, 0.0) + w
            elif a == b:
                new_adj[a][a] = new_adj[a].get(a, 0.0) + w
            else:
                new_adj[a][b] = new_adj[a].get(b, 0.0) + w
                new_adj[b][a] = new_adj[b].get(a, 0.0) + w
    return new_adj, dense


def detect_communities(g: CountryGraph, resolution: float = 1.0,
                       seed: int = 0) -> CommunityAssignment:
    """Greedy modularity communities of the weighted projection.

    Deterministic for a given seed.  Community ids are dense, numbered
    by first appearance in node order.  Edgeless graphs fall back to
    one community per node with Q = 0.
    """
    if g.node_count == 0:
        raise ValueError("cannot detect communities in an empty graph")
    if resolution <= 0:
        raise ValueError("resolution must be > 0")

    merged = _undirected_weights(g)
    adj: list[dict[int, float]] = [
        {j: float(w) for j, w in merged[i].items()} for i in range(g.node_count)]
    if not any(adj[i] for i in range(g.node_count)):
        labels = {c: i for i, c in enumerate(g.nodes)}
        return CommunityAssignment(labels, 0.0, g.node_count)

    rng = random.Random(seed)
    membership = list(range(g.node_count))  # original node -> level community

    while True:
        comm, moved = _local_moving(adj, resolution, rng)
        if not moved:
            break
        adj, dense = _aggregate(adj, comm)
        membership = [dense[level] for level in membership]
        if len(adj) == 1:
            break

    ids: dict[int, int] = {}
    for c in membership:
        if c not in ids:
            ids[c] = len(ids)
    labels = {country: ids[membership[i]] for i, country in enumerate(g.nodes)}
    q = modularity(g, labels, resolution)
    return CommunityAssignment(labels, q, len(ids))
