from collections import Counter
from itertools import product

import networkx as nx
import numpy as np
import pytest

from src.decompose import quotient
from src.errors import GateExceeded
from src.gadgets import (
    MinorModel,
    contains_join_subgraph,
    find_minor_model,
    forest_quotient_search,
    gadget_bipartite,
    gadget_plain,
    is_path_decomposition,
    join_target,
    layering_count_bound,
    minor_search,
    pathwidth_exact,
    verify_minor_model,
)
from src.recognize import BLUE, RED, is_outerplanar_embedding, is_squaregraph, radius


def test_plain_gadget_is_a_fan():
    gadget = gadget_plain(1, 1, 4)
    G = gadget.graph
    assert G.number_of_nodes() == 5
    # P4 has 3 edges, the apex adds 4
    assert G.number_of_edges() == 7
    assert G.degree(gadget.apex) == 4
    assert radius(G) == 1


def test_plain_gadget_recursion():
    gadget = gadget_plain(2, 1, 2)
    assert gadget.spec.copies_per_level == 3
    assert gadget.graph.number_of_nodes() == 3 * 3 + 1
    assert gadget.graph.number_of_edges() == 3 * 3 + 9
    assert radius(gadget.graph) == 1


def test_bipartite_base_gadget_is_outerplanar_squaregraph():
    gadget = gadget_bipartite(1, 0, 1, 5)
    G = gadget.graph
    assert G.number_of_nodes() == 6
    assert sorted(G[gadget.apex]) == [1, 3]
    assert gadget.colouring[gadget.apex] == RED
    assert radius(G) == 2
    assert is_squaregraph(gadget.embedding)
    assert is_outerplanar_embedding(gadget.embedding)
    assert {frozenset(e) for e in gadget.embedding.edges()} == {frozenset(e) for e in G.edges}


def test_blue_apex_attaches_to_red_vertices():
    gadget = gadget_bipartite(0, 1, 1, 4)
    assert gadget.colouring[gadget.apex] == BLUE
    assert sorted(gadget.graph[gadget.apex]) == [0, 2]
    assert gadget.embedding is None


def test_bipartite_recursion_stays_bipartite():
    gadget = gadget_bipartite(2, 0, 1, 3)
    G = gadget.graph
    assert G.number_of_nodes() == 5 * 4 + 1
    assert G.number_of_edges() == 5 * 3 + 5
    assert nx.is_bipartite(G)
    assert all(gadget.colouring[u] != gadget.colouring[w] for u, w in G.edges)


def test_gadget_metadata():
    meta = gadget_bipartite(1, 0, 1, 3).metadata()
    assert meta["kind"] == "bipartite"
    assert meta["params"] == {"i": 1, "j": 0, "ell": 1, "nprime": 3}
    assert meta["apex_id"] == 3
    assert meta["colouring"]["0"] == RED


def test_gadget_parameter_checks():
    with pytest.raises(ValueError):
        gadget_plain(0, 1, 4)
    with pytest.raises(ValueError):
        gadget_bipartite(1, 0, 1, 1)
    with pytest.raises(ValueError):
        gadget_bipartite(0, 0, 1, 4)


def test_join_targets():
    assert nx.is_isomorphic(join_target(2, 1, 0), nx.complete_graph(3))
    assert nx.is_isomorphic(join_target(2, 1, 1), nx.complete_graph(4))


def test_sizing_helpers():
    assert layering_count_bound(2) == 5
    with pytest.raises(ValueError):
        layering_count_bound(-1)


def test_triangle_minor_in_hexagon():
    report = minor_search(nx.cycle_graph(6), nx.complete_graph(3), 2)
    assert report.sat
    model = find_minor_model(nx.cycle_graph(6), nx.complete_graph(3), 2)
    assert verify_minor_model(nx.cycle_graph(6), nx.complete_graph(3), model)


def test_no_k4_minor_in_hexagon():
    assert not minor_search(nx.cycle_graph(6), nx.complete_graph(4), 3).sat


def test_minor_model_rejections():
    C = nx.cycle_graph(6)
    K = nx.complete_graph(3)
    overlapping = MinorModel({0: {0, 1}, 1: {1, 2}, 2: {3, 4}}, 2)
    assert "branch sets" in verify_minor_model(C, K, overlapping).reason
    disconnected = MinorModel({0: {0, 3}, 1: {1}, 2: {2}}, 2)
    assert not verify_minor_model(C, K, disconnected)
    too_big = MinorModel({0: {0, 1, 2}, 1: {3}, 2: {4, 5}}, 2)
    assert not verify_minor_model(C, K, too_big)
    missing_edge = MinorModel({0: {0}, 1: {1}, 2: {2}}, 1)
    assert "no host edge" in verify_minor_model(C, K, missing_edge).reason


def test_minor_gate():
    with pytest.raises(GateExceeded):
        minor_search(nx.path_graph(13), nx.complete_graph(2), 1)


@pytest.mark.parametrize(
    "graph, width",
    [
        (nx.path_graph(5), 1),
        (nx.cycle_graph(5), 2),
        (nx.complete_graph(4), 3),
        (nx.star_graph(3), 1),
        (nx.empty_graph(3), 0),
        (nx.grid_2d_graph(3, 3), 3),
    ],
)
def test_exact_pathwidth(graph, width):
    result = pathwidth_exact(graph)
    assert result.value == width
    if graph.number_of_nodes():
        assert is_path_decomposition(graph, result.bags)
        assert max(len(b) for b in result.bags) == width + 1


def test_gadget_pathwidth_is_small():
    assert pathwidth_exact(gadget_plain(1, 1, 6).graph).value <= 2
    assert pathwidth_exact(gadget_bipartite(1, 0, 1, 7).graph).value <= 2


def test_pathwidth_gate():
    with pytest.raises(GateExceeded):
        pathwidth_exact(nx.path_graph(21))


def test_path_decomposition_checker():
    P = nx.path_graph(3)
    assert is_path_decomposition(P, [{0, 1}, {1, 2}])
    assert not is_path_decomposition(P, [{0, 1}, {2}])
    assert not is_path_decomposition(P, [{0, 1}, {2}, {1, 2}])


def test_join_subgraph():
    assert contains_join_subgraph(nx.complete_graph(4), 2, 1)
    assert not contains_join_subgraph(nx.path_graph(6), 2, 1)


def test_forest_quotient_on_path_is_sat():
    report = forest_quotient_search(nx.path_graph(4), 1)
    assert report.sat
    witness = report.witness
    assert sorted(v for part in witness["parts"] for v in part) == [0, 1, 2, 3]
    assert not witness["quotient_edges"] or nx.is_forest(nx.Graph(witness["quotient_edges"]))


def test_forest_quotient_on_triangle():
    assert forest_quotient_search(nx.complete_graph(3), 1).outcome == "UNSAT"
    strong = forest_quotient_search(nx.complete_graph(3), 1, independent_layers=False)
    assert strong.sat
    assert len(strong.witness["layers"]) == 2


def test_forest_quotient_gate_and_width():
    with pytest.raises(GateExceeded):
        forest_quotient_search(nx.path_graph(11), 1)
    with pytest.raises(ValueError):
        forest_quotient_search(nx.path_graph(3), 0)


def test_forest_quotient_on_empty_graph():
    report = forest_quotient_search(nx.Graph(), 1)
    assert report.sat
    assert report.witness == {"layers": [], "parts": [], "quotient_edges": []}


def _set_partitions(items: list):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in _set_partitions(rest):
        yield [[first], *partition]
        for k in range(len(partition)):
            yield [*partition[:k], [first, *partition[k]], *partition[k + 1:]]


def _naive_forest_quotient(G: nx.Graph, ell: int, independent: bool) -> bool:
    nodes = sorted(G.nodes)
    n = len(nodes)
    partitions = list(_set_partitions(nodes))
    for levels in product(range(n), repeat=n):
        layer_of = dict(zip(nodes, levels))
        if min(levels) != 0:
            continue
        gaps = [abs(layer_of[u] - layer_of[w]) for u, w in G.edges]
        if any(d > 1 for d in gaps) or (independent and 0 in gaps):
            continue
        for parts in partitions:
            load = Counter((idx, layer_of[v]) for idx, part in enumerate(parts) for v in part)
            if max(load.values()) > ell:
                continue
            if nx.is_forest(quotient(G, parts)):
                return True
    return False


def _small_connected_graphs(count: int):
    seed = 0
    while count:
        rng = np.random.default_rng(seed)
        n = int(rng.integers(2, 6))
        G = nx.gnp_random_graph(n, float(rng.uniform(0.3, 0.9)), seed=seed)
        seed += 1
        if nx.is_connected(G):
            count -= 1
            yield G


@pytest.mark.parametrize("ell", [1, 2])
def test_forest_quotient_search_matches_naive_enumeration(ell):
    graphs = [*_small_connected_graphs(25), nx.complete_graph(3), nx.path_graph(4), nx.cycle_graph(4)]
    for G in graphs:
        n = G.number_of_nodes()
        for independent in (True, False):
            report = forest_quotient_search(G, ell, max_layers=n, independent_layers=independent)
            assert report.sat == _naive_forest_quotient(G, ell, independent), (
                sorted(G.edges), ell, independent,
            )
