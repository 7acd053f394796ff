"""Seeded generators for plane test graphs: grids, trees, glued squaregraphs."""

import logging
import math
from collections.abc import Iterable, Mapping

import networkx as nx
import numpy as np

from src.planegraph import Dart, PlaneGraph, rotation_walks
from src.utils import cluster_pairs

logger = logging.getLogger(__name__)

_SQUARE_ROTATION = {0: [1, 3], 1: [2, 0], 2: [1, 3], 3: [0, 2]}
_SQUARE_BOUNDARY = [0, 3, 2, 1]


def embed_from_coordinates(
    edges: Iterable[tuple[int, int]], coords: Mapping[int, tuple[float, float]]
) -> PlaneGraph:
    """Plane graph of a straight-line drawing.

    Coordinates are screen coordinates (y grows downward), so sorting
    neighbours by atan2(dy, dx) lists them clockwise as drawn. Inner faces
    then trace with positive signed area; per component the outer face is
    the walk with the most negative area.
    """
    edges = list(edges)
    nbrs: dict[int, list[int]] = {v: [] for v in coords}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    rotation = {
        v: sorted(ws, key=lambda w, v=v: math.atan2(
            coords[w][1] - coords[v][1], coords[w][0] - coords[v][0]
        ))
        for v, ws in nbrs.items()
    }

    comp_of = {}
    for idx, comp in enumerate(cluster_pairs(sorted(rotation), edges)):
        for v in comp:
            comp_of[v] = idx
    outer: dict[int, tuple[float, list[Dart]]] = {}
    for walk in rotation_walks(rotation):
        area = _signed_area([coords[u] for u, _ in walk])
        comp = comp_of[walk[0][0]]
        if comp not in outer or area < outer[comp][0]:
            outer[comp] = (area, walk)
    refs = [outer[c][1][0] for c in sorted(outer)]
    return PlaneGraph(rotation, refs)


def _signed_area(points: list[tuple[float, float]]) -> float:
    xy = np.asarray(points, dtype=float)
    x, y = xy[:, 0], xy[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def grid_plane_graph(m: int, n: int) -> PlaneGraph:
    """P_m x P_n drawn as a grid; vertex r*n + c sits at column c, row r."""
    if m < 1 or n < 1:
        raise ValueError(f"grid dimensions must be positive, got {m}x{n}")
    coords = {r * n + c: (float(c), float(r)) for r in range(m) for c in range(n)}
    edges = [(r * n + c, r * n + c + 1) for r in range(m) for c in range(n - 1)]
    edges += [(r * n + c, (r + 1) * n + c) for r in range(m - 1) for c in range(n)]
    return embed_from_coordinates(edges, coords)


def tree_plane_graph(tree: nx.Graph) -> PlaneGraph:
    """Any rotation of a tree is plane; neighbours are listed in id order."""
    rotation = {v: sorted(tree[v]) for v in tree}
    refs = []
    if tree.number_of_edges():
        u = min(tree)
        refs = [(u, min(tree[u]))]
    return PlaneGraph(rotation, refs)


def random_tree(n: int, seed: int = 0) -> nx.Graph:
    """Uniform random labelled tree on 0..n-1 from a Pruefer sequence."""
    if n < 1:
        raise ValueError(f"tree order must be positive, got {n}")
    if n == 1:
        tree = nx.Graph()
        tree.add_node(0)
        return tree
    if n == 2:
        return nx.path_graph(2)
    rng = np.random.default_rng(seed)
    sequence = [int(x) for x in rng.integers(0, n, size=n - 2)]
    return nx.from_prufer_sequence(sequence)


def nonisomorphic_tree_graphs(n: int) -> list[nx.Graph]:
    return list(nx.nonisomorphic_trees(n))


def glued_squaregraph(n_squares: int, seed: int = 0) -> PlaneGraph:
    """Random squaregraph grown from one 4-cycle by gluing squares to the boundary.

    A square is glued along one boundary edge (two new vertices) or along two
    consecutive boundary edges (one new vertex, the middle boundary vertex
    becomes inner). The latter is rejected unless the middle vertex already
    has degree >= 4. The outer boundary stays a simple cycle throughout.
    """
    if n_squares < 1:
        raise ValueError(f"need at least one square, got {n_squares}")
    rng = np.random.default_rng(seed)
    rot = {v: list(nbrs) for v, nbrs in _SQUARE_ROTATION.items()}
    boundary = list(_SQUARE_BOUNDARY)
    glued = 1
    rejected = 0

    while glued < n_squares:
        i = int(rng.integers(len(boundary)))
        a = boundary[i]
        b = boundary[(i + 1) % len(boundary)]
        if rng.random() < 0.5:
            c = boundary[(i + 2) % len(boundary)]
            if len(rot[b]) >= 4:
                d = len(rot)
                rot[a].insert(rot[a].index(b) + 1, d)
                rot[c].insert(rot[c].index(b), d)
                rot[d] = [a, c]
                boundary[(i + 1) % len(boundary)] = d
                glued += 1
                continue
            rejected += 1
        p, q = len(rot), len(rot) + 1
        rot[a].insert(rot[a].index(b) + 1, p)
        rot[b].insert(rot[b].index(a), q)
        rot[p] = [a, q]
        rot[q] = [p, b]
        boundary[i + 1:i + 1] = [p, q]
        glued += 1

    logger.debug(
        "Glued %d squares (seed %d): %d vertices, %d two-edge glues rejected",
        n_squares, seed, len(rot), rejected,
    )
    return PlaneGraph(rot, [(boundary[0], boundary[1])])


def disjoint_union(*graphs: PlaneGraph) -> PlaneGraph:
    """Side-by-side union; ids of later graphs are shifted past earlier ones."""
    rotation: dict[int, list[int]] = {}
    refs: list[Dart] = []
    offset = 0
    for g in graphs:
        mapping = {v: offset + k for k, v in enumerate(sorted(g.vertices))}
        shifted = g.relabel(mapping)
        rotation.update({v: list(nbrs) for v, nbrs in shifted.rotation.items()})
        refs.extend(shifted.outer_refs)
        offset += len(g)
    return PlaneGraph(rotation, refs)


def build_corpus(config: dict, seed: int = 0) -> list[tuple[str, PlaneGraph]]:
    """Named corpus instances in a fixed order.

    Args:
        config: the global config; its "corpus" section sizes the corpus.
        seed: base seed; instance k of a random family uses seed + k.
    """
    recipe = config.get("corpus", {})
    lo, hi = recipe.get("grid_sizes", [2, 6])
    instances: list[tuple[str, PlaneGraph]] = []

    for m in range(lo, hi + 1):
        for n in range(lo, hi + 1):
            instances.append((f"grid_{m}x{n}", grid_plane_graph(m, n)))

    order = recipe.get("nonisomorphic_tree_order", 8)
    for k, tree in enumerate(nonisomorphic_tree_graphs(order)):
        instances.append((f"tree{order}_{k}", tree_plane_graph(tree)))

    t_lo, t_hi = recipe.get("random_tree_sizes", [2, 12])
    for k in range(recipe.get("random_tree_count", 10)):
        n = t_lo + k % (t_hi - t_lo + 1)
        instances.append((f"random_tree_{k}_n{n}", tree_plane_graph(random_tree(n, seed + k))))

    s_lo, s_hi = recipe.get("glued_squares", [1, 15])
    for k in range(recipe.get("glued_count", 20)):
        squares = s_lo + k % (s_hi - s_lo + 1)
        instances.append((f"glued_{k}_s{squares}", glued_squaregraph(squares, seed + k)))

    logger.info("Built corpus of %d instances (seed %d)", len(instances), seed)
    return instances
