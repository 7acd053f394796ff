import networkx as nx
import numpy as np
import pytest

from src.errors import GateExceeded
from src.products import (
    MODES,
    edge_counts,
    injection_search,
    product,
    semistrong_product,
    subgraph_injection_exists,
)
from src.recognize import red_blue_colouring


@pytest.mark.parametrize("mode", MODES)
def test_closed_form_counts_match_constructed_products(mode):
    G, H = nx.path_graph(3), nx.cycle_graph(4)
    counts = edge_counts(G, H)
    built = product(G, H, mode)
    assert built.number_of_nodes() == counts.vertices == 12
    assert built.number_of_edges() == counts.edges(mode)


def test_small_counts():
    counts = edge_counts(nx.path_graph(3), nx.path_graph(2))
    assert (counts.cartesian, counts.direct, counts.strong, counts.semistrong) == (7, 4, 11, 7)


def test_semistrong_product_is_not_symmetric():
    G, H = nx.path_graph(3), nx.path_graph(2)
    assert semistrong_product(G, H).number_of_edges() == 7
    assert semistrong_product(H, G).number_of_edges() == 8


def test_semistrong_edges_need_a_path_step():
    P = semistrong_product(nx.path_graph(2), nx.path_graph(2))
    assert P.has_edge((0, 0), (0, 1))
    assert P.has_edge((0, 0), (1, 1))
    assert not P.has_edge((0, 0), (1, 0))


def test_unknown_mode():
    with pytest.raises(ValueError):
        product(nx.path_graph(2), nx.path_graph(2), "lexicographic")


def test_path_injects_into_cycle():
    report = injection_search(nx.path_graph(3), nx.cycle_graph(4))
    assert report.sat
    mapping = report.witness["mapping"]
    assert len(set(mapping.values())) == 3
    assert all(nx.cycle_graph(4).has_edge(mapping[u], mapping[w]) for u, w in [(0, 1), (1, 2)])


def test_triangle_does_not_inject_into_bipartite_host():
    report = injection_search(nx.complete_graph(3), nx.cycle_graph(6), instance="K3 in C6")
    assert report.outcome == "UNSAT"
    assert report.instance == "K3 in C6"
    assert subgraph_injection_exists(nx.complete_graph(3), nx.cycle_graph(6)) is None


def test_too_few_host_vertices_is_unsat_without_search():
    report = injection_search(nx.path_graph(5), nx.path_graph(3))
    assert not report.sat
    assert report.nodes_explored == 0


def test_injection_gate():
    with pytest.raises(GateExceeded) as err:
        injection_search(nx.path_graph(11), nx.path_graph(20))
    assert (err.value.size, err.value.gate) == (11, 10)
    assert injection_search(nx.path_graph(11), nx.path_graph(20), gate=11).sat


def _edge_set(P: nx.Graph) -> set[frozenset]:
    return {frozenset(e) for e in P.edges}


def _random_pair(seed: int) -> tuple[nx.Graph, nx.Graph]:
    rng = np.random.default_rng(seed)
    n, m = (int(x) for x in rng.integers(1, 7, size=2))
    p, q = (float(x) for x in rng.uniform(0.2, 0.8, size=2))
    return nx.gnp_random_graph(n, p, seed=seed), nx.gnp_random_graph(m, q, seed=seed + 1000)


@pytest.mark.parametrize("seed", range(100))
def test_product_edge_set_laws(seed):
    G, H = _random_pair(seed)
    built = {mode: _edge_set(product(G, H, mode)) for mode in MODES}
    assert built["direct"] <= built["semistrong"] <= built["strong"]
    assert built["strong"] == built["cartesian"] | built["direct"]
    assert not built["cartesian"] & built["direct"]
    counts = edge_counts(G, H)
    assert all(len(built[mode]) == counts.edges(mode) for mode in MODES)


@pytest.mark.parametrize("seed", range(100))
def test_semistrong_over_bipartite_factor_is_bipartite(seed):
    G, H = _random_pair(seed)
    colouring = red_blue_colouring(H)
    P = semistrong_product(G, H)
    if colouring:
        result = red_blue_colouring(P)
        assert result
        assert all(result.colours[a] != result.colours[b] for a, b in P.edges)
    direct = product(G, H, "direct")
    if colouring or red_blue_colouring(G):
        assert red_blue_colouring(direct)
