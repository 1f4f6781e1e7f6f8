"""Country-level bank ownership network.

The unit of analysis is a directed, weighted graph whose nodes are
country codes and whose edge weights count cross-border ownership links
between banking sectors.  An edge A -> B with weight w means banks
headquartered in A hold w ownership links into banks hosted by B
(already multiplied out: m parents with n subsidiaries each contribute
m*n links, and the caller supplies that product per record).

Graphs are immutable; every operation returns a new value.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from enum import Enum


class SelfLoopError(ValueError):
    """An ownership record points a country at itself."""


class UnknownCountryError(ValueError):
    """A country code is not present in the graph."""


@dataclass(frozen=True)
class OwnershipRecord:
    """One aggregated ownership relation between two countries.

    link_count is the full bipartite product for the country pair, not a
    per-bank count.
    """

    parent_country: str
    host_country: str
    link_count: int


class Projection(Enum):
    """How to read degrees off the directed weighted graph."""

    UNDIRECTED_SIMPLE = "simple"
    UNDIRECTED_WEIGHTED = "weighted"
    IN_DEGREE = "in"
    OUT_DEGREE = "out"
    TOTAL_DEGREE = "total"

    @classmethod
    def from_flag(cls, flag: str) -> "Projection":
        for proj in cls:
            if proj.value == flag:
                return proj
        raise ValueError(f"unknown projection {flag!r}; expected one of "
                         + ", ".join(p.value for p in cls))


@dataclass(frozen=True)
class CountryGraph:
    """Immutable directed weighted graph over country codes.

    nodes is an ordered tuple; edges hold (source index, target index,
    weight) with at most one edge per ordered pair, no self-loops, and
    integer weights >= 1.
    """

    nodes: tuple[str, ...]
    edges: tuple[tuple[int, int, int], ...]
    metadata: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate country codes in node list")
        n = len(self.nodes)
        seen: set[tuple[int, int]] = set()
        for src, dst, weight in self.edges:
            if not (0 <= src < n and 0 <= dst < n):
                raise ValueError(f"edge ({src}, {dst}) references a missing node")
            if src == dst:
                raise SelfLoopError(
                    f"self-loop on {self.nodes[src]!r} is not representable")
            if weight < 1:
                raise ValueError(f"edge weight must be >= 1, got {weight}")
            if (src, dst) in seen:
                raise ValueError(
                    f"duplicate edge {self.nodes[src]!r} -> {self.nodes[dst]!r}; "
                    "aggregate weights before constructing the graph")
            seen.add((src, dst))
        object.__setattr__(self, "_index",
                           {code: i for i, code in enumerate(self.nodes)})

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def index(self, country: str) -> int:
        try:
            return self._index[country]
        except KeyError:
            raise UnknownCountryError(f"unknown country code {country!r}") from None

    def __contains__(self, country: str) -> bool:
        return country in self._index


@dataclass(frozen=True)
class DegreeView:
    """Per-country degrees under one projection, plus first two moments.

    Moments are taken over all nodes of the graph the view was computed
    from, isolated nodes included.
    """

    projection: Projection
    weighted: bool
    degrees: Mapping[str, float]
    mean_k: float
    mean_k2: float


@dataclass(frozen=True)
class StrengthRankings:
    """Descending activity rankings; ties broken lexicographically.

    total_strength sums in- and out-edge weights.  in_degree/out_degree
    count distinct counterparties.  imbalance maps each country to
    out-strength minus in-strength (exporters of ownership positive).
    """

    total_strength: tuple[tuple[str, int], ...]
    in_degree: tuple[tuple[str, int], ...]
    out_degree: tuple[tuple[str, int], ...]
    imbalance: Mapping[str, int]


def build_graph(records: Iterable[OwnershipRecord],
                metadata: Mapping[str, str] | None = None) -> CountryGraph:
    """Aggregate ownership records into a CountryGraph.

    Repeated (parent, host) pairs sum their link counts.  Node order is
    lexicographic over every country code mentioned on either side, so
    the same record multiset always yields the same graph.
    """
    weights: dict[tuple[str, str], int] = {}
    names: set[str] = set()
    for rec in records:
        if not rec.parent_country or not rec.host_country:
            raise ValueError(f"empty country code in record {rec}")
        if rec.parent_country == rec.host_country:
            raise SelfLoopError(
                f"record {rec.parent_country!r} -> {rec.host_country!r} "
                "is a self-loop")
        if rec.link_count < 1:
            raise ValueError(
                f"link_count must be >= 1 in record "
                f"{rec.parent_country!r} -> {rec.host_country!r} "
                f"(got {rec.link_count})")
        names.add(rec.parent_country)
        names.add(rec.host_country)
        key = (rec.parent_country, rec.host_country)
        weights[key] = weights.get(key, 0) + rec.link_count

    nodes = tuple(sorted(names))
    index = {code: i for i, code in enumerate(nodes)}
    edges = tuple(sorted((index[a], index[b], w)
                         for (a, b), w in weights.items()))
    return CountryGraph(nodes, edges, dict(metadata or {}))


def _undirected_weights(g: CountryGraph) -> dict[int, dict[int, int]]:
    # Merge the two directions of each pair into one undirected weight.
    merged: dict[int, dict[int, int]] = {i: {} for i in range(g.node_count)}
    for src, dst, w in g.edges:
        merged[src][dst] = merged[src].get(dst, 0) + w
        merged[dst][src] = merged[dst].get(src, 0) + w
    return merged


def degree_view(g: CountryGraph,
                projection: Projection = Projection.UNDIRECTED_SIMPLE,
                *, weighted: bool = False) -> DegreeView:
    """Compute per-country degrees under a projection.

    For IN_DEGREE / OUT_DEGREE / TOTAL_DEGREE the weighted flag switches
    between counting edges (default) and summing their weights.  The two
    undirected projections carry their counting mode in their name and
    ignore the flag.
    """
    n = g.node_count
    deg = [0] * n

    if projection is Projection.UNDIRECTED_SIMPLE:
        neighbors: list[set[int]] = [set() for _ in range(n)]
        for src, dst, _ in g.edges:
            neighbors[src].add(dst)
            neighbors[dst].add(src)
        deg = [len(s) for s in neighbors]
        weighted = False
    elif projection is Projection.UNDIRECTED_WEIGHTED:
        merged = _undirected_weights(g)
        deg = [sum(merged[i].values()) for i in range(n)]
        weighted = True
    else:
        for src, dst, w in g.edges:
            out_inc = w if weighted else 1
            if projection in (Projection.OUT_DEGREE, Projection.TOTAL_DEGREE):
                deg[src] += out_inc
            if projection in (Projection.IN_DEGREE, Projection.TOTAL_DEGREE):
                deg[dst] += out_inc

    total = sum(deg)
    total_sq = sum(d * d for d in deg)
    mean_k = total / n if n else 0.0
    mean_k2 = total_sq / n if n else 0.0
    degrees = {code: deg[i] for i, code in enumerate(g.nodes)}
    return DegreeView(projection, weighted, degrees, mean_k, mean_k2)


def largest_component(g: CountryGraph) -> CountryGraph:
    """Largest weakly connected component as an induced subgraph.

    Edge direction is ignored for connectivity only; the returned graph
    keeps directions, weights, and the original relative node order.
    Among equally large components the one containing the
    lexicographically smallest country code wins.
    """
    if g.node_count == 0:
        return g

    adjacency: list[list[int]] = [[] for _ in range(g.node_count)]
    for src, dst, _ in g.edges:
        adjacency[src].append(dst)
        adjacency[dst].append(src)

    component = [-1] * g.node_count
    comp_members: list[list[int]] = []
    for start in range(g.node_count):
        if component[start] != -1:
            continue
        cid = len(comp_members)
        stack = [start]
        component[start] = cid
        members = [start]
        while stack:
            u = stack.pop()
            for v in adjacency[u]:
                if component[v] == -1:
                    component[v] = cid
                    members.append(v)
                    stack.append(v)
        comp_members.append(sorted(members))

    # max size; ties fall to the component with the smallest member, and
    # node order is lexicographic, so min node index decides.
    best = max(range(len(comp_members)),
               key=lambda c: (len(comp_members[c]), -comp_members[c][0]))
    keep = comp_members[best]
    remap = {old: new for new, old in enumerate(keep)}
    nodes = tuple(g.nodes[i] for i in keep)
    edges = tuple((remap[s], remap[d], w) for s, d, w in g.edges
                  if s in remap and d in remap)
    return CountryGraph(nodes, edges, dict(g.metadata))


def delete_node(g: CountryGraph, country: str) -> CountryGraph:
    """Remove one country and every edge touching it."""
    gone = g.index(country)
    keep = [i for i in range(g.node_count) if i != gone]
    remap = {old: new for new, old in enumerate(keep)}
    nodes = tuple(g.nodes[i] for i in keep)
    edges = tuple((remap[s], remap[d], w) for s, d, w in g.edges
                  if s != gone and d != gone)
    return CountryGraph(nodes, edges, dict(g.metadata))


def strength_rankings(g: CountryGraph) -> StrengthRankings:
    """Activity rankings used for the headline country tables."""
    n = g.node_count
    in_strength = [0] * n
    out_strength = [0] * n
    in_count = [0] * n
    out_count = [0] * n
    for src, dst, w in g.edges:
        out_strength[src] += w
        in_strength[dst] += w
        out_count[src] += 1
        in_count[dst] += 1

    def ranked(values: list[int]) -> tuple[tuple[str, int], ...]:
        pairs = [(g.nodes[i], values[i]) for i in range(n)]
        pairs.sort(key=lambda p: (-p[1], p[0]))
        return tuple(pairs)

    totals = [in_strength[i] + out_strength[i] for i in range(n)]
    imbalance = {g.nodes[i]: out_strength[i] - in_strength[i]
                 for i in range(n)}
    return StrengthRankings(ranked(totals), ranked(in_count),
                            ranked(out_count), imbalance)


def degree_distribution(dv: DegreeView) -> dict[int, float]:
    """Empirical P(k) over the view's degree values.

    Degrees are integer-valued under every projection (weights are
    integers), so classes are exact ints.
    """
    counts: dict[int, int] = {}
    for value in dv.degrees.values():
        k = int(round(value))
        counts[k] = counts.get(k, 0) + 1
    n = len(dv.degrees)
    return {k: counts[k] / n for k in sorted(counts)}
