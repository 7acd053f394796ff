"""BFS layerings, leveled embeddings of squaregraphs, and up/down degrees."""

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from functools import cached_property

import networkx as nx

from src.errors import (
    DisconnectedGraphError,
    EmbeddingError,
    NotSquaregraphError,
    OrderCrossingError,
    PartitionError,
    RootNotOuterError,
    UnknownVertexError,
    UpDegreeViolation,
)
from src.planegraph import PlaneGraph, inner_vertices
from src.recognize import is_squaregraph

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Layering:
    """Ordered partition (L_0, L_1, ...) into non-empty layers."""

    layers: tuple[frozenset[int], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for i, layer in enumerate(self.layers):
            if not layer:
                raise PartitionError(f"layer {i} is empty")
            if seen & layer:
                raise PartitionError(f"layer {i} repeats vertices {sorted(seen & layer)}")
            seen |= layer

    @classmethod
    def from_layers(cls, layers: Iterable[Iterable[int]]) -> "Layering":
        return cls(tuple(frozenset(layer) for layer in layers))

    @classmethod
    def from_assignment(cls, layer_of: Mapping[int, int]) -> "Layering":
        if not layer_of:
            return cls(())
        depth = max(layer_of.values())
        buckets: list[set[int]] = [set() for _ in range(depth + 1)]
        for v, i in layer_of.items():
            if i < 0:
                raise PartitionError(f"vertex {v} has negative layer {i}")
            buckets[i].add(v)
        return cls.from_layers(buckets)

    @cached_property
    def layer_of(self) -> dict[int, int]:
        return {v: i for i, layer in enumerate(self.layers) for v in layer}

    def __len__(self) -> int:
        return len(self.layers)

    def __getitem__(self, i: int) -> frozenset[int]:
        return self.layers[i]

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.layer_of)

    def as_lists(self) -> list[list[int]]:
        return [sorted(layer) for layer in self.layers]


def bfs_layering(G: nx.Graph, r: int) -> Layering:
    """Layers by graph distance from r."""
    if r not in G:
        raise UnknownVertexError(r)
    if not nx.is_connected(G):
        raise DisconnectedGraphError("BFS layering needs a connected graph")
    return Layering.from_assignment(nx.single_source_shortest_path_length(G, r))


def is_layering(G: nx.Graph, candidate: Layering | Sequence[Iterable[int]]) -> bool:
    """Partition of V(G) such that every edge spans at most one layer step."""
    layers = candidate.layers if isinstance(candidate, Layering) else candidate
    layer_of: dict[int, int] = {}
    for i, layer in enumerate(layers):
        for v in layer:
            if v in layer_of:
                return False
            layer_of[v] = i
    if set(layer_of) != set(G.nodes):
        return False
    return all(abs(layer_of[u] - layer_of[w]) <= 1 for u, w in G.edges)


def is_independent_layer(G: nx.Graph, layer: Iterable[int]) -> bool:
    return G.subgraph(layer).number_of_edges() == 0


@dataclass(frozen=True)
class LeveledEmbedding:
    """Per-vertex (level, rank) coordinates of a (weakly) leveled drawing."""

    base: PlaneGraph
    level: Mapping[int, int]
    rank: Mapping[int, int]
    weak: bool = False

    @cached_property
    def levels(self) -> tuple[tuple[int, ...], ...]:
        """Vertices of each level, left to right."""
        if not self.level:
            return ()
        buckets: list[list[int]] = [[] for _ in range(max(self.level.values()) + 1)]
        for v, i in self.level.items():
            buckets[i].append(v)
        return tuple(tuple(sorted(b, key=self.rank.__getitem__)) for b in buckets)

    @cached_property
    def layering(self) -> Layering:
        return Layering.from_assignment(self.level)

    def __len__(self) -> int:
        return len(self.levels)

    def _check_vertex(self, v: int) -> None:
        if v not in self.level:
            raise UnknownVertexError(v)

    def up_neighbours(self, v: int) -> list[int]:
        """Neighbours in the previous level, left to right."""
        self._check_vertex(v)
        i = self.level[v]
        nbrs = [w for w in self.base.neighbours(v) if self.level[w] == i - 1]
        return sorted(nbrs, key=self.rank.__getitem__)

    def down_neighbours(self, v: int) -> list[int]:
        """Neighbours in the next level, left to right."""
        self._check_vertex(v)
        i = self.level[v]
        nbrs = [w for w in self.base.neighbours(v) if self.level[w] == i + 1]
        return sorted(nbrs, key=self.rank.__getitem__)

    def find_crossing(self) -> tuple[tuple[int, int], tuple[int, int]] | None:
        """First pair of crossing consecutive-level edges, or None.

        With edges between L_i and L_{i+1} sorted by (rank of upper end, rank
        of lower end), a crossing exists exactly when the lower ranks are not
        non-decreasing.
        """
        by_level: dict[int, list[tuple[int, int, int, int]]] = {}
        for u, w in self.base.edges():
            if self.level[u] > self.level[w]:
                u, w = w, u
            if self.level[w] == self.level[u] + 1:
                by_level.setdefault(self.level[u], []).append(
                    (self.rank[u], self.rank[w], u, w)
                )
        for i in sorted(by_level):
            best: tuple[int, int, int, int] | None = None
            for edge in sorted(by_level[i]):
                if best is not None and edge[1] < best[1]:
                    return (best[2], best[3]), (edge[2], edge[3])
                if best is None or edge[1] >= best[1]:
                    best = edge
        return None

    def validate(self) -> None:
        """Raise unless levels form a layering with total ranks and no crossings."""
        if set(self.level) != set(self.base.vertices) or set(self.rank) != set(self.level):
            raise EmbeddingError("level/rank maps do not cover the base graph")
        for i, row in enumerate(self.levels):
            if sorted(self.rank[v] for v in row) != list(range(len(row))):
                raise EmbeddingError(f"ranks on level {i} are not 0..{len(row) - 1}")
        for u, w in self.base.edges():
            gap = abs(self.level[u] - self.level[w])
            if gap > 1:
                raise EmbeddingError(f"edge ({u}, {w}) skips a level")
            if gap == 0:
                if not self.weak:
                    raise EmbeddingError(f"edge ({u}, {w}) joins a level to itself")
                if abs(self.rank[u] - self.rank[w]) != 1:
                    raise EmbeddingError(
                        f"same-level edge ({u}, {w}) joins non-consecutive vertices"
                    )
        crossing = self.find_crossing()
        if crossing:
            raise OrderCrossingError(*crossing)


def leveled_embedding(g: PlaneGraph, r: int | None = None) -> LeveledEmbedding:
    """Leveled embedding of a connected squaregraph from an outer root.

    Levels are the BFS layering from r. L_i is ordered by scanning L_{i-1}
    left to right and, at each vertex u, listing u's unranked neighbours in
    L_i in clockwise order starting just after u's leftmost up-neighbour
    (for the root: just after the outer face). The result is checked for
    crossings before it is returned.

    Raises:
        NotSquaregraphError, DisconnectedGraphError, UnknownVertexError,
        RootNotOuterError, OrderCrossingError.
    """
    verdict = is_squaregraph(g)
    if not verdict:
        raise NotSquaregraphError(verdict)
    if not g.is_connected():
        raise DisconnectedGraphError("leveled embedding needs a connected graph")
    outer = g.outer_vertices()
    if r is None:
        r = min(outer)
    if r not in g:
        raise UnknownVertexError(r)
    if r not in outer:
        raise RootNotOuterError(r)

    level = nx.single_source_shortest_path_length(g.to_networkx(), r)
    rank: dict[int, int] = {r: 0}
    previous = [r]
    depth = max(level.values())

    for i in range(1, depth + 1):
        current: list[int] = []
        for u in previous:
            for w in _clockwise_from_anchor(g, u, r, level, rank):
                if level[w] == i and w not in rank:
                    rank[w] = len(current)
                    current.append(w)
        previous = current

    embedding = LeveledEmbedding(g, dict(level), rank, weak=False)
    embedding.validate()
    logger.debug(
        "Leveled embedding from root %d: %d levels, widest %d",
        r, len(embedding), max(len(row) for row in embedding.levels),
    )
    return embedding


def _clockwise_from_anchor(
    g: PlaneGraph, u: int, root: int, level: Mapping[int, int], rank: Mapping[int, int]
) -> list[int]:
    rot = g.rotation[u]
    if not rot:
        return []
    if u == root:
        start = g.index_in_rotation(u, _outer_gap_end(g, root))
    else:
        ups = [w for w in rot if level[w] == level[u] - 1]
        leftmost = min(ups, key=rank.__getitem__)
        start = g.index_in_rotation(u, leftmost) + 1
    return [rot[(start + k) % len(rot)] for k in range(len(rot))]


def _outer_gap_end(g: PlaneGraph, root: int) -> int:
    """Neighbour x with (x, root) on the outer walk, first from the outer reference."""
    face = g.outer_faces()[0]
    walk = list(face.boundary)
    if g.outer_ref in walk:
        k = walk.index(g.outer_ref)
        walk = walk[k:] + walk[:k]
    for x, y in walk:
        if y == root:
            return x
    raise RootNotOuterError(root)


def up_degree(e: LeveledEmbedding, v: int) -> int:
    return len(e.up_neighbours(v))


def down_degree(e: LeveledEmbedding, v: int) -> int:
    return len(e.down_neighbours(v))


def max_inner_up_degree(e: LeveledEmbedding, inner_only: bool = False) -> int:
    """Largest up-degree; raises if any vertex exceeds 2.

    By default every vertex counts: the three-parents argument rules out
    up-degree 3 for outer vertices as well. The reported violation is the one
    on the earliest level, the minimal counterexample of that argument.

    Raises:
        UpDegreeViolation: carrying the offending vertex and its up-degree.
    """
    scope = inner_vertices(e.base) if inner_only else e.base.vertices
    degrees = {v: up_degree(e, v) for v in scope}
    bad = [v for v, d in degrees.items() if d > 2]
    if bad:
        worst = min(bad, key=lambda v: (e.level[v], v))
        raise UpDegreeViolation(worst, degrees[worst])
    return max(degrees.values(), default=0)
