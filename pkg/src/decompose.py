"""Thin H-partitions of squaregraphs and their product embeddings.

Pipeline per connected component:

    leveled embedding -> leftmost matchings between consecutive levels
      -> vertical paths (components of the matching union)
      -> quotient H -> map v -> (part, level) into H semistrong-times P

Every guarantee is re-checked before a Decomposition is returned.
"""

import logging
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from src.errors import (
    DisconnectedGraphError,
    DownDegreeZero,
    GateExceeded,
    InvariantViolation,
    MatchingClash,
    NotSquaregraphError,
    PartitionError,
    ProductEmbeddingError,
    UnknownVertexError,
)
from src.layering import (
    Layering,
    LeveledEmbedding,
    is_independent_layer,
    is_layering,
    leveled_embedding,
    max_inner_up_degree,
)
from src.planegraph import PlaneGraph, inner_vertices
from src.products import MODES
from src.recognize import DEFAULT_OUTERPLANAR_GATE, is_outerplanar_abstract, is_squaregraph
from src.utils import cluster_pairs

logger = logging.getLogger(__name__)


# -- types ------------------------------------------------------------------


@dataclass(frozen=True)
class SaturatingMatching:
    """Edges (parent in L_{i-1}, child in L_i) with no shared endpoint."""

    index: int
    edges: frozenset[tuple[int, int]]

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def child_of(self) -> dict[int, int]:
        return dict(self.edges)


@dataclass(frozen=True)
class HPartition:
    """Partition into parts, each stored root-to-tip, with its quotient graph."""

    parts: tuple[tuple[int, ...], ...]
    quotient: nx.Graph = field(compare=False)

    @classmethod
    def from_parts(cls, G: nx.Graph, parts: Iterable[Sequence[int]]) -> "HPartition":
        ordered = tuple(sorted((tuple(p) for p in parts), key=sorted))
        return cls(ordered, quotient(G, ordered))

    @cached_property
    def part_of(self) -> dict[int, int]:
        return {v: idx for idx, part in enumerate(self.parts) for v in part}

    def __len__(self) -> int:
        return len(self.parts)


@dataclass(frozen=True)
class ProductEmbedding:
    """Map v -> (h, path index) into target_h combined with a path of path_length edges.

    copy_index, when set, places v in copy c of K_l, so the target is
    (H strong-times K_l) combined with P. Left unset, l = 1.
    """

    mode: str
    target_h: nx.Graph = field(compare=False)
    path_length: int
    map: Mapping[int, tuple[int, int]]
    copy_index: Mapping[int, int] | None = None

    def coordinates(self, v: int) -> tuple[tuple[int, int], int]:
        h, p = self.map[v]
        c = self.copy_index.get(v, 0) if self.copy_index else 0
        return (h, c), p


@dataclass(frozen=True)
class LayeredPartitionReport:
    width: int
    thin: bool
    layers_independent: bool
    widest: tuple[int, int] | None = None
    dependent_layer: int | None = None


@dataclass(frozen=True)
class EmbeddingCheck:
    ok: bool
    reason: str = ""
    edge: tuple[int, int] | None = None
    vertices: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class Decomposition:
    """Everything the pipeline derived for one squaregraph, plus its re-checks."""

    graph: PlaneGraph
    partition: HPartition
    layering: Layering
    embedding: ProductEmbedding
    leveled: tuple[LeveledEmbedding, ...]
    matchings: tuple[tuple[SaturatingMatching, ...], ...]
    checks: dict[str, bool | None]

    @property
    def quotient(self) -> nx.Graph:
        return self.partition.quotient


# -- matchings and vertical paths ---------------------------------------------


def leftmost_matching(e: LeveledEmbedding, i: int) -> SaturatingMatching:
    """Match each inner vertex of L_{i-1} to its minimum-rank neighbour in L_i.

    Raises:
        DownDegreeZero: an inner vertex of L_{i-1} has no neighbour in L_i.
        MatchingClash: two inner vertices picked the same child.
    """
    if not 1 <= i < len(e):
        raise ValueError(f"matching index {i} outside 1..{len(e) - 1}")
    inner = inner_vertices(e.base)
    chosen: dict[int, int] = {}
    edges = set()
    for v in e.levels[i - 1]:
        if v not in inner:
            continue
        downs = e.down_neighbours(v)
        if not downs:
            raise DownDegreeZero(v)
        child = downs[0]
        if child in chosen:
            raise MatchingClash(child, (chosen[child], v))
        chosen[child] = v
        edges.add((v, child))
    return SaturatingMatching(i, frozenset(edges))


def vertical_path_partition(
    e: LeveledEmbedding, matchings: Iterable[SaturatingMatching]
) -> HPartition:
    """Parts are the components of the union of the matchings.

    Raises:
        PartitionError: a vertex with two parents or two children, a part that
            is not a vertical path, or a part whose deepest vertex is inner.
    """
    parent: dict[int, int] = {}
    child: dict[int, int] = {}
    for matching in matchings:
        for u, w in matching.edges:
            if u in child or w in parent:
                raise PartitionError(f"matching edge ({u}, {w}) reuses an endpoint")
            if e.level[w] != e.level[u] + 1 or w not in e.base.neighbours(u):
                raise PartitionError(f"({u}, {w}) is not a consecutive-level edge")
            child[u] = w
            parent[w] = u

    order = sorted(e.level, key=lambda v: (e.level[v], e.rank[v]))
    clusters = cluster_pairs(order, child.items())
    outer = e.base.outer_vertices()
    parts = []
    for cluster in clusters:
        path = sorted(cluster, key=e.level.__getitem__)
        levels = [e.level[v] for v in path]
        if levels != list(range(levels[0], levels[0] + len(path))):
            raise PartitionError(f"part {sorted(path)} is not a vertical path")
        if path[-1] not in outer:
            raise PartitionError(f"deepest vertex {path[-1]} of a part is not outer")
        parts.append(path)
    return HPartition.from_parts(e.base.to_networkx(), parts)


# -- quotients ----------------------------------------------------------------


def _part_index(G: nx.Graph, partition: Iterable[Iterable[int]]) -> dict[int, int]:
    part_of: dict[int, int] = {}
    for idx, part in enumerate(partition):
        for v in part:
            if v not in G:
                raise PartitionError(f"part {idx} names unknown vertex {v}")
            if v in part_of:
                raise PartitionError(f"vertex {v} lies in parts {part_of[v]} and {idx}")
            part_of[v] = idx
    missing = set(G.nodes) - set(part_of)
    if missing:
        raise PartitionError(f"partition misses vertices {sorted(missing)}")
    return part_of


def quotient(G: nx.Graph, partition: Sequence[Iterable[int]]) -> nx.Graph:
    """G/P: one vertex per part index, adjacent iff some G-edge crosses between them."""
    part_of = _part_index(G, partition)
    H = nx.Graph()
    H.add_nodes_from(range(len(partition)))
    H.add_edges_from(
        (part_of[u], part_of[w]) for u, w in G.edges if part_of[u] != part_of[w]
    )
    return H


def sub_quotient(
    G: nx.Graph, partition: Sequence[Iterable[int]], J: nx.Graph
) -> nx.Graph:
    """Quotient of J by the traces of the parts on V(J); part indices are kept."""
    if not all(v in G for v in J) or not all(G.has_edge(u, w) for u, w in J.edges):
        raise PartitionError("J is not a subgraph of G")
    part_of = _part_index(G, partition)
    H = nx.Graph()
    H.add_nodes_from(sorted({part_of[v] for v in J}))
    H.add_edges_from(
        (part_of[u], part_of[w]) for u, w in J.edges if part_of[u] != part_of[w]
    )
    return H


def verify_layered_partition(
    G: nx.Graph, partition: Sequence[Iterable[int]], layering: Layering
) -> LayeredPartitionReport:
    part_of = _part_index(G, partition)
    layer_of = layering.layer_of
    counts = Counter((part_of[v], layer_of[v]) for v in G)
    widest, width = max(counts.items(), key=lambda kv: kv[1], default=(None, 0))
    dependent = next(
        (i for i, layer in enumerate(layering.layers) if not is_independent_layer(G, layer)),
        None,
    )
    return LayeredPartitionReport(
        width=width,
        thin=width <= 1,
        layers_independent=dependent is None,
        widest=widest,
        dependent_layer=dependent,
    )


# -- product embeddings -------------------------------------------------------


def _adjacent_in_mode(mode: str, h_eq: bool, h_adj: bool, p_eq: bool, p_adj: bool) -> bool:
    if mode == "cartesian":
        return (h_eq and p_adj) or (h_adj and p_eq)
    if mode == "direct":
        return h_adj and p_adj
    if mode == "strong":
        return (h_eq and p_adj) or (h_adj and p_eq) or (h_adj and p_adj)
    return p_adj and (h_eq or h_adj)


def verify_product_embedding(G: nx.Graph, emb: ProductEmbedding) -> EmbeddingCheck:
    """Is emb.map an injective homomorphism-on-edges into the mode's product?

    Raises:
        ProductEmbeddingError: unknown mode, partial map, or coordinates outside
            the factors. A map that merely fails the check returns a negative
            EmbeddingCheck instead.
    """
    if emb.mode not in MODES:
        raise ProductEmbeddingError(f"unknown product mode {emb.mode!r}")
    missing = [v for v in G if v not in emb.map]
    if missing:
        raise ProductEmbeddingError(f"map is undefined on {sorted(missing)}")
    H = emb.target_h

    seen: dict[tuple, int] = {}
    for v in sorted(G.nodes):
        hc, p = emb.coordinates(v)
        if hc[0] not in H or not 0 <= p <= emb.path_length:
            raise ProductEmbeddingError(f"vertex {v} maps outside the product: {emb.map[v]}")
        key = (hc, p)
        if key in seen:
            return EmbeddingCheck(
                False, reason=f"vertices {seen[key]} and {v} share image {emb.map[v]}",
                vertices=(seen[key], v),
            )
        seen[key] = v

    for u, w in sorted(tuple(sorted(edge)) for edge in G.edges):
        (hu, cu), pu = emb.coordinates(u)
        (hw, cw), pw = emb.coordinates(w)
        h_eq = (hu, cu) == (hw, cw)
        h_adj = not h_eq and (hu == hw or H.has_edge(hu, hw))
        if not _adjacent_in_mode(emb.mode, h_eq, h_adj, pu == pw, abs(pu - pw) == 1):
            return EmbeddingCheck(
                False,
                reason=f"edge ({u}, {w}) maps to non-adjacent {emb.map[u]}, {emb.map[w]}",
                edge=(u, w),
            )
    return EmbeddingCheck(True)


# -- outerplanarity of H from the inherited embedding -------------------------


def contracted_outer_face_covers(g: PlaneGraph, parts: Iterable[Sequence[int]]) -> bool:
    """Contract each part into its last vertex and test one face sees every vertex.

    Parts are vertical paths listed root-to-tip; the tip is an outer vertex.
    Rotations are kept per edge id so parallel edges created by contraction
    stay distinct. The face tested is the one carrying a surviving dart of
    the original outer walk.
    """
    edge_id: dict[frozenset[int], int] = {}
    ends: dict[int, list[int]] = {}
    for idx, (u, w) in enumerate(g.edges()):
        edge_id[frozenset((u, w))] = idx
        ends[idx] = [u, w]
    rot = {v: [edge_id[frozenset((v, w))] for w in nbrs] for v, nbrs in g.rotation.items()}
    rep = {v: v for v in g.vertices}

    for part in parts:
        keep = part[-1]
        for absorb in reversed(part[:-1]):
            eid = next(
                (x for x in rot[keep] if absorb in ends[x]),
                None,
            )
            if eid is None:
                raise PartitionError(f"part {list(part)} is not a path in the plane graph")
            _splice(rot, ends, keep, absorb, eid)
            rep[absorb] = keep

    remaining = set(rot)
    if len(remaining) <= 1:
        return True
    outer_darts = [
        (edge_id[frozenset(d)], rep[d[0]])
        for face in g.outer_faces()
        for d in face.boundary
        if frozenset(d) in edge_id and edge_id[frozenset(d)] in ends
    ]
    if not outer_darts:
        return False
    start = outer_darts[0]
    seen_vertices = set()
    dart = start
    while True:
        eid, tail = dart
        seen_vertices.add(tail)
        head = _other(ends, eid, tail)
        around = rot[head]
        nxt = around[(around.index(eid) - 1) % len(around)]
        dart = (nxt, head)
        if dart == start:
            break
    return seen_vertices == remaining


def _other(ends: dict[int, list[int]], eid: int, v: int) -> int:
    a, b = ends[eid]
    return b if a == v else a


def _splice(
    rot: dict[int, list[int]], ends: dict[int, list[int]], keep: int, absorb: int, eid: int
) -> None:
    around = rot.pop(absorb)
    k = around.index(eid)
    inserted = around[k + 1:] + around[:k]
    pos = rot[keep].index(eid)
    rot[keep] = rot[keep][:pos] + inserted + rot[keep][pos + 1:]
    del ends[eid]
    for x in inserted:
        ends[x] = [keep if y == absorb else y for y in ends[x]]


# -- the pipeline -------------------------------------------------------------


def decompose_squaregraph(
    g: PlaneGraph, root: int | None = None, gate: int | None = None
) -> Decomposition:
    """Thin partition with outerplanar quotient H and G inside H semistrong-times P.

    Disconnected inputs are decomposed per component; the quotients are
    disjoint and the layerings are united level by level. `root` applies to
    the component containing it; other components use their smallest outer
    vertex. `gate` bounds the abstract outerplanarity oracle, which is
    skipped (recorded as None) above it.

    Raises:
        NotSquaregraphError, UnknownVertexError, RootNotOuterError, DisconnectedGraphError (empty
        input), InvariantViolation when a re-check fails.
    """
    verdict = is_squaregraph(g)
    if not verdict:
        raise NotSquaregraphError(verdict)
    if len(g) == 0:
        raise DisconnectedGraphError("empty graph has nothing to decompose")
    if root is not None and root not in g:
        raise UnknownVertexError(root)

    G = g.to_networkx()
    components = g.components()
    logger.info("Decomposing %d vertices in %d component(s)", len(g), len(components))

    leveled: list[LeveledEmbedding] = []
    all_matchings: list[tuple[SaturatingMatching, ...]] = []
    parts: list[tuple[int, ...]] = []
    level: dict[int, int] = {}
    contracted_ok = True

    for comp in components:
        comp_root = root if root is not None and root in comp else None
        e = leveled_embedding(comp, comp_root)
        max_inner_up_degree(e)
        matchings = tuple(leftmost_matching(e, i) for i in range(1, len(e)))
        comp_partition = vertical_path_partition(e, matchings)
        contracted_ok &= contracted_outer_face_covers(comp, comp_partition.parts)
        logger.info(
            "Component at %d: %d levels, matching sizes %s, %d parts",
            min(comp.vertices), len(e), [len(m) for m in matchings], len(comp_partition),
        )
        leveled.append(e)
        all_matchings.append(matchings)
        parts.extend(comp_partition.parts)
        level.update(e.level)

    partition = HPartition.from_parts(G, parts)
    layering = Layering.from_assignment(level)
    embedding = ProductEmbedding(
        mode="semistrong",
        target_h=partition.quotient,
        path_length=len(layering) - 1,
        map={v: (partition.part_of[v], level[v]) for v in sorted(level)},
    )

    report = verify_layered_partition(G, partition.parts, layering)
    checks: dict[str, bool | None] = {
        "layering_valid": is_layering(G, layering),
        "thin": report.thin,
        "layers_independent": report.layers_independent,
        "product_embedding": bool(verify_product_embedding(G, embedding)),
        "quotient_outerplanar_embedding": contracted_ok,
        "quotient_outerplanar_abstract": _abstract_check(partition.quotient, gate),
    }
    failed = [name for name, ok in checks.items() if ok is False]
    if failed:
        raise InvariantViolation(failed[0], f"all failed checks: {failed}")

    logger.info(
        "H has %d vertices and %d edges; path length %d",
        partition.quotient.number_of_nodes(), partition.quotient.number_of_edges(),
        embedding.path_length,
    )
    return Decomposition(
        graph=g,
        partition=partition,
        layering=layering,
        embedding=embedding,
        leveled=tuple(leveled),
        matchings=tuple(all_matchings),
        checks=checks,
    )


def _abstract_check(H: nx.Graph, gate: int | None) -> bool | None:
    try:
        return is_outerplanar_abstract(H, gate if gate is not None else DEFAULT_OUTERPLANAR_GATE)
    except GateExceeded:
        logger.info("Abstract outerplanarity check skipped: H above gate")
        return None


# -- general layerings --------------------------------------------------------


@dataclass(frozen=True)
class LayeringPartitionReport:
    """Outcome of building a thin partition from an arbitrary layering."""

    ok: bool
    partition: HPartition | None = None
    failed_layer: int | None = None
    layers_independent: bool = False
    deepest_outer: bool = False

    def __bool__(self) -> bool:
        return self.ok

    @property
    def product(self) -> str | None:
        """Product the layering certifies: semistrong with independent layers."""
        if not self.ok:
            return None
        return "semistrong" if self.layers_independent else "strong"


def partition_from_layering(
    g: PlaneGraph, layering: Layering | Sequence[Iterable[int]]
) -> LayeringPartitionReport:
    """Thin partition from any layering whose consecutive layers admit matchings
    saturating the inner vertices of the upper layer.

    Saturation is decided with a maximum bipartite matching per layer pair.
    The report names the first layer pair without one.
    """
    G = g.to_networkx()
    if not is_layering(G, layering):
        raise PartitionError("candidate is not a layering of the graph")
    if not isinstance(layering, Layering):
        layering = Layering.from_layers(layer for layer in layering if layer)
    inner = inner_vertices(g)

    child: list[tuple[int, int]] = []
    for i in range(1, len(layering)):
        upper = sorted(layering[i - 1] & inner)
        if not upper:
            continue
        lower = layering[i]
        B = nx.Graph()
        B.add_nodes_from(upper)
        B.add_nodes_from(lower)
        B.add_edges_from((u, w) for u in upper for w in G[u] if w in lower)
        matched = nx.bipartite.maximum_matching(B, top_nodes=upper)
        pairs = [(u, matched[u]) for u in upper if u in matched]
        if len(pairs) < len(upper):
            logger.info("No matching saturates inner vertices of layer %d", i - 1)
            return LayeringPartitionReport(False, failed_layer=i)
        child.extend(pairs)

    layer_of = layering.layer_of
    clusters = cluster_pairs(sorted(G.nodes), child)
    parts = [sorted(c, key=layer_of.__getitem__) for c in clusters]
    partition = HPartition.from_parts(G, parts)
    report = verify_layered_partition(G, partition.parts, layering)
    outer = g.outer_vertices()
    return LayeringPartitionReport(
        True,
        partition=partition,
        layers_independent=report.layers_independent,
        deepest_outer=all(part[-1] in outer for part in partition.parts),
    )
