import networkx as nx
import pytest

from src.decompose import (
    ProductEmbedding,
    contracted_outer_face_covers,
    decompose_squaregraph,
    leftmost_matching,
    partition_from_layering,
    quotient,
    sub_quotient,
    verify_layered_partition,
    verify_product_embedding,
)
from src.errors import (
    NotSquaregraphError,
    PartitionError,
    ProductEmbeddingError,
    RootNotOuterError,
    UnknownVertexError,
)
from src.gadgets import MinorModel, find_minor_model, verify_minor_model
from src.layering import Layering, bfs_layering, leveled_embedding
from src.planegraph import inner_vertices, load_plane_graph
from src.products import semistrong_product, subgraph_injection_exists
from src.recognize import is_outerplanar_abstract


def test_grid_decomposition(grid3):
    dec = decompose_squaregraph(grid3)
    assert dec.partition.parts == ((0,), (1,), (2,), (3,), (4, 5), (6,), (7,), (8,))
    assert dec.quotient.number_of_nodes() == 8
    assert dec.quotient.number_of_edges() == 11
    assert dec.layering.as_lists() == [[0], [1, 3], [2, 4, 6], [5, 7], [8]]
    assert dec.embedding.mode == "semistrong"
    assert dec.embedding.path_length == 4
    assert dec.embedding.map[5] == (4, 3)
    assert all(dec.checks.values())
    assert is_outerplanar_abstract(dec.quotient)


def test_grid_matchings(grid3):
    e = leveled_embedding(grid3)
    assert leftmost_matching(e, 3).edges == {(4, 5)}
    assert len(leftmost_matching(e, 1)) == 0
    with pytest.raises(ValueError):
        leftmost_matching(e, 0)
    with pytest.raises(ValueError):
        leftmost_matching(e, 5)


def test_tree_parts_are_singletons(samples_dir):
    dec = decompose_squaregraph(load_plane_graph(samples_dir / "tree.spg"))
    assert all(len(p) == 1 for p in dec.partition.parts)
    assert nx.is_isomorphic(dec.quotient, dec.graph.to_networkx())


def test_disconnected_graph_is_decomposed_per_component(samples_dir):
    dec = decompose_squaregraph(load_plane_graph(samples_dir / "two_grids.spg"))
    assert len(dec.leveled) == 2
    assert dec.layering.as_lists() == [[0, 4], [1, 3, 5, 7], [2, 6]]
    assert dec.quotient.number_of_edges() == 8
    assert nx.number_connected_components(dec.quotient) == 2


def test_root_option(grid3):
    dec = decompose_squaregraph(grid3, root=8)
    assert dec.layering.as_lists()[0] == [8]
    with pytest.raises(RootNotOuterError):
        decompose_squaregraph(grid3, root=4)


def test_unknown_root_is_rejected(grid3):
    with pytest.raises(UnknownVertexError):
        decompose_squaregraph(grid3, root=999)


def test_non_squaregraph_rejected(samples_dir):
    with pytest.raises(NotSquaregraphError):
        decompose_squaregraph(load_plane_graph(samples_dir / "k4.spg"))


def test_quotient_rejects_bad_partitions():
    P = nx.path_graph(3)
    assert sorted(quotient(P, [[0, 1], [2]]).edges) == [(0, 1)]
    with pytest.raises(PartitionError):
        quotient(P, [[0, 1], [1, 2]])
    with pytest.raises(PartitionError):
        quotient(P, [[0, 1]])
    with pytest.raises(PartitionError):
        quotient(P, [[0, 1, 2, 7]])


def test_sub_quotient_keeps_part_ids(grid3):
    dec = decompose_squaregraph(grid3)
    G = grid3.to_networkx()
    J = G.subgraph([0, 1, 3, 4])
    H = sub_quotient(G, dec.partition.parts, J)
    assert sorted(H.nodes) == [0, 1, 3, 4]
    assert H.number_of_edges() == 4
    with pytest.raises(PartitionError):
        sub_quotient(G, dec.partition.parts, nx.Graph([(0, 8)]))


def test_layered_partition_width_and_dependent_layer():
    P = nx.path_graph(3)
    report = verify_layered_partition(P, [[0, 1], [2]], Layering.from_layers([[0, 1], [2]]))
    assert report.width == 2
    assert not report.thin
    assert not report.layers_independent
    assert report.dependent_layer == 0
    assert report.widest == (0, 0)


def _edge_embedding(mode, target):
    H = nx.path_graph(2)
    return ProductEmbedding(mode, H, 1, {0: (0, 0), 1: target})


@pytest.mark.parametrize(
    "mode, target, ok",
    [
        ("cartesian", (1, 1), False),
        ("direct", (1, 1), True),
        ("strong", (1, 1), True),
        ("semistrong", (1, 1), True),
        ("cartesian", (1, 0), True),
        ("direct", (1, 0), False),
        ("strong", (1, 0), True),
        ("semistrong", (1, 0), False),
        ("semistrong", (0, 1), True),
        ("direct", (0, 1), False),
    ],
)
def test_product_modes_on_a_single_edge(mode, target, ok):
    G = nx.path_graph(2)
    assert bool(verify_product_embedding(G, _edge_embedding(mode, target))) is ok


def test_embedding_collision_and_errors():
    G = nx.path_graph(2)
    check = verify_product_embedding(G, _edge_embedding("strong", (0, 0)))
    assert not check
    assert check.vertices == (0, 1)
    with pytest.raises(ProductEmbeddingError):
        verify_product_embedding(G, _edge_embedding("lexicographic", (1, 1)))
    with pytest.raises(ProductEmbeddingError):
        verify_product_embedding(G, ProductEmbedding("strong", nx.path_graph(2), 1, {0: (0, 0)}))
    with pytest.raises(ProductEmbeddingError):
        verify_product_embedding(G, _edge_embedding("strong", (1, 5)))


def test_copy_index_makes_clique_copies_adjacent():
    G = nx.path_graph(2)
    H = nx.empty_graph(1)
    strong = ProductEmbedding("strong", H, 0, {0: (0, 0), 1: (0, 0)}, copy_index={0: 0, 1: 1})
    assert verify_product_embedding(G, strong)
    semistrong = ProductEmbedding(
        "semistrong", H, 0, {0: (0, 0), 1: (0, 0)}, copy_index={0: 0, 1: 1}
    )
    assert not verify_product_embedding(G, semistrong)


def test_contraction_check(grid3):
    dec = decompose_squaregraph(grid3)
    assert contracted_outer_face_covers(grid3, dec.partition.parts)
    assert not contracted_outer_face_covers(grid3, [[v] for v in range(9)])
    with pytest.raises(PartitionError):
        contracted_outer_face_covers(grid3, [[0, 8]])


def test_partition_from_bfs_layering(grid3):
    report = partition_from_layering(grid3, bfs_layering(grid3.to_networkx(), 0))
    assert report
    assert report.product == "semistrong"
    assert report.deepest_outer
    assert max(len(p) for p in report.partition.parts) == 2


def test_partition_from_row_layering_needs_strong_product(grid3):
    report = partition_from_layering(grid3, [[0, 1, 2], [3, 4, 5], [6, 7, 8]])
    assert report
    assert not report.layers_independent
    assert report.product == "strong"
    assert (4, 7) in report.partition.parts


def test_partition_from_non_layering_raises(grid3):
    with pytest.raises(PartitionError):
        partition_from_layering(grid3, [[0], [1], [2, 3, 4, 5, 6, 7, 8]])


def test_matching_laws_on_corpus(corpus):
    for name, g in corpus:
        e = leveled_embedding(g)
        G = g.to_networkx()
        inner = inner_vertices(g)
        children_seen: set[int] = set()
        for i in range(1, len(e)):
            matching = leftmost_matching(e, i)
            parents = [p for p, _ in matching.edges]
            children = [c for _, c in matching.edges]
            assert len(set(parents)) == len(parents), (name, i)
            assert len(set(children)) == len(children), (name, i)
            assert set(parents) <= set(e.levels[i - 1]), (name, i)
            assert set(children) <= set(e.levels[i]), (name, i)
            assert inner & set(e.levels[i - 1]) <= set(parents), (name, i)
            assert all(G.has_edge(p, c) for p, c in matching.edges), (name, i)
            assert not children_seen & set(children), name
            children_seen.update(children)


def test_parts_are_a_minor_model_of_the_quotient(tiny_corpus):
    for name, g in tiny_corpus:
        G = g.to_networkx()
        dec = decompose_squaregraph(g)
        s = max(len(p) for p in dec.partition.parts)
        own = MinorModel({idx: frozenset(p) for idx, p in enumerate(dec.partition.parts)}, s)
        assert verify_minor_model(G, dec.quotient, own), name
        found = find_minor_model(G, dec.quotient, s)
        assert found is not None and verify_minor_model(G, dec.quotient, found), name


def test_constructive_map_injects_into_semistrong_product(tiny_corpus):
    assert len(tiny_corpus) >= 20
    for name, g in tiny_corpus:
        G = g.to_networkx()
        dec = decompose_squaregraph(g)
        host = semistrong_product(dec.quotient, nx.path_graph(dec.embedding.path_length + 1))
        vmap = dec.embedding.map
        assert len(set(vmap.values())) == len(vmap), name
        assert all(host.has_edge(vmap[u], vmap[w]) for u, w in G.edges), name
        assert subgraph_injection_exists(G, host) is not None, name
