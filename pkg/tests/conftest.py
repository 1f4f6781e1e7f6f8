import pytest

from banknet import SyntheticSpec, build_graph, generate_records
from banknet.graph import OwnershipRecord


def rec(parent, host, count=1):
    return OwnershipRecord(parent, host, count)


def make_complete(n, prefix="N"):
    """K_n with unit weights, one direction per pair."""
    names = [f"{prefix}{i}" for i in range(n)]
    return build_graph([rec(names[i], names[j])
                        for i in range(n) for j in range(n) if i < j])


def make_star(n, hub="HUB"):
    """Hub plus n-1 leaves."""
    return build_graph([rec(hub, f"L{i:02d}") for i in range(n - 1)])


def make_regular(n, k):
    """Circulant k-regular graph on n nodes (n even when k is odd)."""
    if k % 2 and n % 2:
        raise ValueError("odd k needs even n")
    recs = []
    for i in range(n):
        for off in range(1, k // 2 + 1):
            recs.append(rec(f"N{i:03d}", f"N{(i + off) % n:03d}"))
        if k % 2:
            j = (i + n // 2) % n
            if i < j:  # one record per antipodal pair
                recs.append(rec(f"N{i:03d}", f"N{j:03d}"))
    return build_graph(recs)


def make_two_triangles():
    return build_graph([rec("A", "B"), rec("B", "C"), rec("C", "A"),
                        rec("X", "Y"), rec("Y", "Z"), rec("Z", "X")])


def make_twin_cliques(bridge=True):
    """Two K_5 cliques, optionally joined by one edge."""
    recs = [rec(f"A{i}", f"A{j}") for i in range(5) for j in range(5) if i < j]
    recs += [rec(f"B{i}", f"B{j}") for i in range(5) for j in range(5) if i < j]
    if bridge:
        recs.append(rec("A0", "B0"))
    return build_graph(recs)


@pytest.fixture(scope="session")
def synth500():
    return build_graph(generate_records(SyntheticSpec(500, 3, seed=17)))


@pytest.fixture(scope="session")
def synth2000():
    return build_graph(generate_records(SyntheticSpec(2000, 3, seed=11)))
