"""Lower-bound gadgets, minor models, exact pathwidth, and exhaustive searches.

The searches here are exponential and gated by size; they exist to test the
constructive pipeline and the lower-bound constructions at small scale.
"""

import logging
import time
from collections import Counter
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from itertools import combinations

import networkx as nx
import numpy as np

from src.corpus import embed_from_coordinates
from src.decompose import quotient, verify_layered_partition
from src.errors import InvariantViolation
from src.layering import Layering
from src.planegraph import PlaneGraph
from src.products import injection_search
from src.recognize import BLUE, RED, radius
from src.utils import SearchReport, check_gate, has_cycle, timed_search

logger = logging.getLogger(__name__)

DEFAULT_MINOR_GATE = 12
DEFAULT_PATHWIDTH_GATE = 20
DEFAULT_FOREST_SEARCH_GATE = 10

PLAIN = "plain"
BIPARTITE = "bipartite"


# -- gadget constructions -----------------------------------------------------


@dataclass(frozen=True)
class GadgetSpec:
    kind: str
    ell: int
    nprime: int
    k: int = 0
    i: int = 0
    j: int = 0

    @property
    def copies_per_level(self) -> int:
        return (3 if self.kind == PLAIN else 5) * self.ell

    def params(self) -> dict:
        if self.kind == PLAIN:
            return {"k": self.k, "ell": self.ell, "nprime": self.nprime}
        return {"i": self.i, "j": self.j, "ell": self.ell, "nprime": self.nprime}


@dataclass
class Gadget:
    spec: GadgetSpec
    graph: nx.Graph
    apex: int
    colouring: dict[int, str] | None = None
    embedding: PlaneGraph | None = None

    def metadata(self) -> dict:
        colouring = None
        if self.colouring is not None:
            colouring = {str(v): self.colouring[v] for v in sorted(self.colouring)}
        return {
            "kind": self.spec.kind,
            "params": self.spec.params(),
            "apex_id": self.apex,
            "colouring": colouring,
        }


def _join_apex(parts: list[nx.Graph], attach) -> tuple[nx.Graph, int]:
    """Disjoint union of parts plus a new apex joined to vertices passing `attach`."""
    G = nx.disjoint_union_all(parts) if len(parts) > 1 else nx.Graph(parts[0])
    apex = G.number_of_nodes()
    targets = [v for v in G if attach(G, v)]
    G.add_node(apex)
    G.add_edges_from((apex, v) for v in targets)
    return G, apex


def gadget_plain(k: int, ell: int, nprime: int) -> Gadget:
    """G^(1) is a path on nprime vertices plus a dominant vertex; G^(k) is
    3*ell disjoint copies of G^(k-1) plus a dominant vertex."""
    if k < 1 or ell < 1 or nprime < 1:
        raise ValueError(f"gadget_plain needs k, ell, nprime >= 1, got {k}, {ell}, {nprime}")
    spec = GadgetSpec(PLAIN, ell=ell, nprime=nprime, k=k)
    G, apex = _join_apex([nx.path_graph(nprime)], lambda _, v: True)
    for _ in range(k - 1):
        G, apex = _join_apex([G] * spec.copies_per_level, lambda _, v: True)
    logger.debug("gadget_plain(%d, %d, %d): %d vertices", k, ell, nprime, len(G))
    return Gadget(spec, G, apex)


def gadget_bipartite(i: int, j: int, ell: int, nprime: int) -> Gadget:
    """Red-blue gadget G^(i,j).

    G^(1,0) is a path on nprime vertices coloured alternately from red at
    vertex 0, plus a red apex adjacent to the blue path vertices. G^(0,1) is
    the same with a blue apex adjacent to the red ones. Otherwise G^(i,j) is
    5*ell copies of G^(i-1,j) plus a red apex adjacent to every blue vertex,
    or, once i is 0, copies of G^(0,j-1) plus a blue apex adjacent to every
    red vertex.
    """
    if i < 0 or j < 0 or i + j < 1 or ell < 1 or nprime < 2:
        raise ValueError(
            f"gadget_bipartite needs i, j >= 0 with i + j >= 1, ell >= 1 and "
            f"nprime >= 2, got {i}, {j}, {ell}, {nprime}"
        )
    spec = GadgetSpec(BIPARTITE, ell=ell, nprime=nprime, k=i + j, i=i, j=j)
    G, apex = _build_bipartite(i, j, spec.copies_per_level, nprime)
    colouring = nx.get_node_attributes(G, "colour")
    embedding = _natural_embedding(nprime, apex) if (i, j) == (1, 0) else None
    return Gadget(spec, G, apex, colouring=colouring, embedding=embedding)


def _build_bipartite(i: int, j: int, copies: int, nprime: int) -> tuple[nx.Graph, int]:
    if i + j == 1:
        path = nx.path_graph(nprime)
        nx.set_node_attributes(path, {v: RED if v % 2 == 0 else BLUE for v in path}, "colour")
        base = [path]
        apex_colour = RED if i == 1 else BLUE
    else:
        sub, _ = _build_bipartite(i - 1, j, copies, nprime) if i >= 1 else _build_bipartite(
            0, j - 1, copies, nprime
        )
        base = [sub] * copies
        apex_colour = RED if i >= 1 else BLUE
    other = BLUE if apex_colour == RED else RED
    G, apex = _join_apex(base, lambda g, v: g.nodes[v]["colour"] == other)
    G.nodes[apex]["colour"] = apex_colour
    return G, apex


def _natural_embedding(nprime: int, apex: int) -> PlaneGraph:
    coords = {t: (float(t), 1.0) for t in range(nprime)}
    coords[apex] = ((nprime - 1) / 2, 0.0)
    edges = [(t, t + 1) for t in range(nprime - 1)]
    edges += [(apex, t) for t in range(1, nprime, 2)]
    return embed_from_coordinates(edges, coords)


def join_target(n: int, i: int, j: int) -> nx.Graph:
    """P_n + K_{i,j}: a path 0..n-1 joined to every vertex of K_{i,j}."""
    if n < 0 or i < 0 or j < 0:
        raise ValueError("join_target sizes must be non-negative")
    G = nx.path_graph(n)
    left = range(n, n + i)
    right = range(n + i, n + i + j)
    G.add_nodes_from(left)
    G.add_nodes_from(right)
    G.add_edges_from((a, b) for a in left for b in right)
    G.add_edges_from((p, x) for p in range(n) for x in [*left, *right])
    return G


def layering_count_bound(rho: int) -> int:
    """At most 2*rho + 1 non-empty layers in any layering of a radius-rho graph."""
    if rho < 0:
        raise ValueError(f"radius must be >= 0, got {rho}")
    return 2 * rho + 1


# -- minor models -------------------------------------------------------------


@dataclass(frozen=True)
class MinorModel:
    branch_sets: Mapping = field(default_factory=dict)
    s: int = 1

    def to_dict(self) -> dict:
        return {
            "s": self.s,
            "branch_sets": {str(t): sorted(b) for t, b in self.branch_sets.items()},
        }


@dataclass(frozen=True)
class ModelCheck:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_minor_model(
    G: nx.Graph, target: nx.Graph, model: MinorModel, s: int | None = None
) -> ModelCheck:
    """Disjoint, connected, at most s vertices each, and every target edge realised."""
    s = model.s if s is None else s
    used: dict = {}
    for t in target:
        branch = model.branch_sets.get(t)
        if not branch:
            return ModelCheck(False, f"target vertex {t} has no branch set")
        for v in branch:
            if v not in G:
                return ModelCheck(False, f"branch set of {t} names unknown vertex {v}")
            if v in used:
                return ModelCheck(False, f"vertex {v} lies in branch sets of {used[v]} and {t}")
            used[v] = t
        if len(branch) > s:
            return ModelCheck(False, f"branch set of {t} has {len(branch)} > {s} vertices")
        if not nx.is_connected(G.subgraph(branch)):
            return ModelCheck(False, f"branch set of {t} is not connected")
    for a, b in target.edges:
        if not any(G.has_edge(x, y) for x in model.branch_sets[a] for y in model.branch_sets[b]):
            return ModelCheck(False, f"target edge ({a}, {b}) has no host edge")
    return ModelCheck(True)


def _connected_subsets(G: nx.Graph, s: int) -> list[frozenset]:
    subsets = []
    nodes = sorted(G.nodes)
    for size in range(1, s + 1):
        for combo in combinations(nodes, size):
            if size == 1 or nx.is_connected(G.subgraph(combo)):
                subsets.append(frozenset(combo))
    return subsets


@timed_search
def minor_search(
    G: nx.Graph, target: nx.Graph, s: int, gate: int | None = None, instance: str = ""
) -> SearchReport:
    """Exhaustive search for an s-small model of target in G.

    Raises:
        GateExceeded: |V(G)| above the gate.
    """
    if gate is None:
        gate = DEFAULT_MINOR_GATE
    check_gate("minor model search", G.number_of_nodes(), gate)
    report = SearchReport(instance=instance or "minor", gate=gate)
    start = time.perf_counter()

    candidates = _connected_subsets(G, s)
    boundary = {b: frozenset(w for v in b for w in G[v]) - b for b in candidates}
    order = sorted(target.nodes, key=lambda t: (-target.degree(t), t))
    assigned: dict = {}
    used: set = set()

    def extend(idx: int) -> bool:
        if idx == len(order):
            return True
        t = order[idx]
        placed = [assigned[u] for u in target[t] if u in assigned]
        for b in candidates:
            if used & b:
                continue
            if any(not (boundary[b] & other) for other in placed):
                continue
            report.nodes_explored += 1
            assigned[t] = b
            used.update(b)
            if extend(idx + 1):
                return True
            del assigned[t]
            used.difference_update(b)
        return False

    if extend(0):
        model = MinorModel(dict(assigned), s)
        if not verify_minor_model(G, target, model):
            raise InvariantViolation("minor_model", "search produced an invalid model")
        report.outcome = "SAT"
        report.witness = model.to_dict()
    report.wall_time_ms = (time.perf_counter() - start) * 1000
    logger.info(
        "Minor search %s: %s after %d nodes", report.instance, report.outcome,
        report.nodes_explored,
    )
    return report


def find_minor_model(
    G: nx.Graph, target: nx.Graph, s: int, gate: int | None = None
) -> MinorModel | None:
    report = minor_search(G, target, s, gate)
    if not report.sat:
        return None
    sets = report.witness["branch_sets"]
    lookup = {str(t): t for t in target}
    return MinorModel({lookup[t]: frozenset(b) for t, b in sets.items()}, s)


# -- exact pathwidth ----------------------------------------------------------


@dataclass(frozen=True)
class PathDecomposition:
    value: int
    bags: tuple[frozenset, ...]
    order: tuple

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "order": list(self.order),
            "bags": [sorted(b) for b in self.bags],
        }


def is_path_decomposition(G: nx.Graph, bags: Iterable[Iterable]) -> bool:
    """Every edge inside some bag, and the bags holding each vertex are consecutive."""
    bags = [frozenset(b) for b in bags]
    for v in G:
        hits = [t for t, bag in enumerate(bags) if v in bag]
        if not hits or hits != list(range(hits[0], hits[-1] + 1)):
            return False
    return all(any(u in bag and w in bag for bag in bags) for u, w in G.edges)


@timed_search
def pathwidth_exact(G: nx.Graph, gate: int | None = None) -> PathDecomposition:
    """Exact pathwidth as vertex separation number, by DP over vertex subsets.

    f(S) = max(|boundary(S)|, min over v in S of f(S - v)), where boundary(S)
    is the set of vertices of S with a neighbour outside S. The optimal
    order v_1..v_n yields bags {v_t} + boundary({v_1..v_{t-1}}).

    Raises:
        GateExceeded: more than `gate` vertices.
    """
    if gate is None:
        gate = DEFAULT_PATHWIDTH_GATE
    n = G.number_of_nodes()
    check_gate("exact pathwidth", n, gate)
    if n == 0:
        return PathDecomposition(0, (), ())

    nodes = sorted(G.nodes)
    index = {v: k for k, v in enumerate(nodes)}
    nbr_mask = np.zeros(n, dtype=np.int64)
    for u, w in G.edges:
        nbr_mask[index[u]] |= np.int64(1) << index[w]
        nbr_mask[index[w]] |= np.int64(1) << index[u]

    masks = np.arange(1 << n, dtype=np.int64)
    boundary = np.zeros(1 << n, dtype=np.int64)
    for k in range(n):
        inside = (masks >> k) & 1
        escapes = (nbr_mask[k] & ~masks) != 0
        boundary += inside & escapes

    popcount = np.zeros(1 << n, dtype=np.int64)
    for k in range(n):
        popcount += (masks >> k) & 1

    big = np.iinfo(np.int64).max
    f = np.zeros(1 << n, dtype=np.int64)
    for size in range(1, n + 1):
        level = masks[popcount == size]
        best = np.full(level.shape, big, dtype=np.int64)
        for k in range(n):
            bit = np.int64(1) << k
            has = (level & bit) != 0
            best = np.where(has, np.minimum(best, f[level ^ bit]), best)
        f[level] = np.maximum(boundary[level], best)

    order = []
    current = (1 << n) - 1
    while current:
        k = min(
            (k for k in range(n) if current >> k & 1),
            key=lambda k: (f[current ^ (1 << k)], k),
        )
        order.append(nodes[k])
        current ^= 1 << k
    order.reverse()

    bags = []
    prefix = 0
    for v in order:
        front = {nodes[k] for k in range(n) if prefix >> k & 1 and nbr_mask[k] & ~prefix}
        bags.append(frozenset(front | {v}))
        prefix |= 1 << index[v]

    value = int(f[(1 << n) - 1])
    width = max(len(b) for b in bags) - 1
    if width != value or not is_path_decomposition(G, bags):
        raise InvariantViolation("pathwidth", f"bags of width {width} for value {value}")
    return PathDecomposition(value, tuple(bags), tuple(order))


# -- join subgraphs -----------------------------------------------------------


def contains_join_subgraph(H: nx.Graph, n: int, k: int, gate: int | None = None) -> bool:
    """Is P_n + K_k (a path joined to a k-clique) a subgraph of H?"""
    target = nx.path_graph(n)
    clique = range(n, n + k)
    target.add_nodes_from(clique)
    target.add_edges_from(combinations(clique, 2))
    target.add_edges_from((p, c) for p in range(n) for c in clique)
    return injection_search(target, H, gate, instance=f"P{n}+K{k}").sat


# -- forest-quotient search ---------------------------------------------------


@timed_search
def forest_quotient_search(
    G: nx.Graph,
    ell: int,
    max_layers: int | None = None,
    independent_layers: bool = True,
    gate: int | None = None,
    instance: str = "",
) -> SearchReport:
    """Does any layered partition of width <= ell have an acyclic quotient?

    Layerings use indices 0..max_layers-1 with the lowest index used being 0.
    With independent_layers every edge must join consecutive layers (the
    semistrong setting); otherwise same-layer edges are allowed too. For
    each layering, partitions are grown vertex by vertex and cut as soon as
    the partial quotient has a cycle, since quotient edges only accumulate.

    Raises:
        GateExceeded: |V(G)| above the gate.
    """
    if gate is None:
        gate = DEFAULT_FOREST_SEARCH_GATE
    n = G.number_of_nodes()
    check_gate("forest-quotient search", n, gate)
    if ell < 1:
        raise ValueError(f"width must be >= 1, got {ell}")
    if max_layers is None:
        max_layers = _default_max_layers(G)
    report = SearchReport(instance=instance or "forest-quotient", gate=gate)
    start = time.perf_counter()

    order = _bfs_vertex_order(G)
    layer_of: dict = {}
    part_of: dict = {}

    def assign_layers(idx: int) -> bool:
        if idx == n:
            if min(layer_of.values(), default=0) != 0:
                return False
            return assign_parts(0, [], Counter(), set())
        v = order[idx]
        placed = [layer_of[w] for w in G[v] if w in layer_of]
        lo = max([0, *(x - 1 for x in placed)])
        hi = min([max_layers - 1, *(x + 1 for x in placed)])
        for layer in range(lo, hi + 1):
            if independent_layers and layer in placed:
                continue
            report.nodes_explored += 1
            layer_of[v] = layer
            if assign_layers(idx + 1):
                return True
            del layer_of[v]
        return False

    def assign_parts(idx: int, parts: list[list], load: Counter, edges: set) -> bool:
        if idx == n:
            return True
        v = order[idx]
        for p in range(len(parts) + 1):
            if load[(p, layer_of[v])] >= ell:
                continue
            new_edges = {
                (min(p, part_of[w]), max(p, part_of[w]))
                for w in G[v]
                if w in part_of and part_of[w] != p
            } - edges
            if new_edges and has_cycle(edges | new_edges):
                continue
            report.nodes_explored += 1
            if p == len(parts):
                parts.append([])
            parts[p].append(v)
            part_of[v] = p
            load[(p, layer_of[v])] += 1
            if assign_parts(idx + 1, parts, load, edges | new_edges):
                return True
            load[(p, layer_of[v])] -= 1
            del part_of[v]
            parts[p].pop()
            if not parts[p]:
                parts.pop()
        return False

    if n and assign_layers(0):
        report.outcome = "SAT"
        report.witness = _forest_witness(G, layer_of, part_of, ell, independent_layers)
    elif n == 0:
        report.outcome = "SAT"
        report.witness = {"layers": [], "parts": [], "quotient_edges": []}
    report.wall_time_ms = (time.perf_counter() - start) * 1000
    logger.info(
        "Forest-quotient search %s (width %d, %d layers, %s): %s after %d nodes",
        report.instance, ell, max_layers,
        "independent layers" if independent_layers else "any layers",
        report.outcome, report.nodes_explored,
    )
    return report


def _default_max_layers(G: nx.Graph) -> int:
    n = G.number_of_nodes()
    if n and nx.is_connected(G):
        return min(n, layering_count_bound(radius(G)))
    return max(n, 1)


def _bfs_vertex_order(G: nx.Graph) -> list:
    order = []
    seen = set()
    for root in sorted(G.nodes):
        if root in seen:
            continue
        for v in [root, *(w for _, w in nx.bfs_edges(G, root, sort_neighbors=sorted))]:
            seen.add(v)
            order.append(v)
    return order


def _forest_witness(G: nx.Graph, layer_of: dict, part_of: dict, ell: int, independent: bool) -> dict:
    used = sorted(set(layer_of.values()))
    layering = Layering.from_layers(
        [v for v in G if layer_of[v] == x] for x in used
    )
    groups: dict = {}
    for v in sorted(part_of):
        groups.setdefault(part_of[v], []).append(v)
    parts = sorted(groups.values())
    report = verify_layered_partition(G, parts, layering)
    if report.width > ell or (independent and not report.layers_independent):
        raise InvariantViolation("forest_witness", f"width {report.width}")
    H = quotient(G, parts)
    if not nx.is_forest(H):
        raise InvariantViolation("forest_witness", "quotient has a cycle")
    return {
        "layers": layering.as_lists(),
        "parts": parts,
        "quotient_edges": sorted(tuple(sorted(e)) for e in H.edges),
    }
