"""The four graph products and a brute-force subgraph-injection oracle."""

import logging
import time
from dataclasses import dataclass
from itertools import product as cross

import networkx as nx

from src.utils import SearchReport, check_gate, timed_search

logger = logging.getLogger(__name__)

DEFAULT_INJECTION_GATE = 10

MODES = ("cartesian", "direct", "strong", "semistrong")


def semistrong_product(G: nx.Graph, H: nx.Graph) -> nx.Graph:
    """(v, w)(v', w') is an edge iff v = v' and ww' in E(H), or vv' in E(G) and ww' in E(H)."""
    P = nx.Graph()
    P.add_nodes_from(cross(G.nodes, H.nodes))
    P.add_edges_from(((v, w), (v, x)) for v in G for w, x in H.edges)
    for (v, y), (w, x) in cross(G.edges, H.edges):
        P.add_edge((v, w), (y, x))
        P.add_edge((v, x), (y, w))
    return P


def product(G: nx.Graph, H: nx.Graph, mode: str) -> nx.Graph:
    """Product graph on ordered pairs (g, h). The semistrong product is not symmetric."""
    if mode == "cartesian":
        return nx.cartesian_product(G, H)
    if mode == "direct":
        return nx.tensor_product(G, H)
    if mode == "strong":
        return nx.strong_product(G, H)
    if mode == "semistrong":
        return semistrong_product(G, H)
    raise ValueError(f"unknown product mode {mode!r}; expected one of {MODES}")


@dataclass(frozen=True)
class ProductCounts:
    vertices: int
    cartesian: int
    direct: int
    strong: int
    semistrong: int

    def edges(self, mode: str) -> int:
        return getattr(self, mode)


def edge_counts(G: nx.Graph, H: nx.Graph) -> ProductCounts:
    """Closed-form |V| and |E| of each product of G and H."""
    vg, eg = G.number_of_nodes(), G.number_of_edges()
    vh, eh = H.number_of_nodes(), H.number_of_edges()
    cartesian = vg * eh + vh * eg
    direct = 2 * eg * eh
    return ProductCounts(
        vertices=vg * vh,
        cartesian=cartesian,
        direct=direct,
        strong=cartesian + direct,
        semistrong=vg * eh + direct,
    )


@timed_search
def injection_search(
    G: nx.Graph, X: nx.Graph, gate: int | None = None, instance: str = ""
) -> SearchReport:
    """Backtracking search for an injective edge-preserving map V(G) -> V(X).

    Pattern vertices are placed in descending-degree order; a host vertex is
    a candidate only if it is unused, has at least the pattern degree, and is
    adjacent to the images of every already-placed pattern neighbour.

    Raises:
        GateExceeded: |V(G)| above the gate.
    """
    if gate is None:
        gate = DEFAULT_INJECTION_GATE
    check_gate("subgraph injection", G.number_of_nodes(), gate)
    report = SearchReport(instance=instance or "injection", gate=gate)
    start = time.perf_counter()

    order = sorted(G.nodes, key=lambda v: (-G.degree(v), v))
    host_order = sorted(X.nodes, key=lambda x: (-X.degree(x), str(x)))
    mapping: dict = {}
    used: set = set()

    def extend(idx: int) -> bool:
        if idx == len(order):
            return True
        v = order[idx]
        placed = [mapping[w] for w in G[v] if w in mapping]
        for x in host_order:
            if x in used or X.degree(x) < G.degree(v):
                continue
            if any(not X.has_edge(x, y) for y in placed):
                continue
            report.nodes_explored += 1
            mapping[v] = x
            used.add(x)
            if extend(idx + 1):
                return True
            del mapping[v]
            used.discard(x)
        return False

    # Too few host vertices or edges settles it without search.
    feasible = (
        G.number_of_nodes() <= X.number_of_nodes()
        and G.number_of_edges() <= X.number_of_edges()
    )
    if feasible and extend(0):
        report.outcome = "SAT"
        report.witness = {"mapping": {v: mapping[v] for v in sorted(mapping)}}
    report.wall_time_ms = (time.perf_counter() - start) * 1000
    logger.info(
        "Injection search %s: %s after %d nodes", report.instance, report.outcome,
        report.nodes_explored,
    )
    return report


def subgraph_injection_exists(G: nx.Graph, X: nx.Graph, gate: int | None = None) -> dict | None:
    """Mapping witnessing G as a subgraph of X, or None once the search is exhausted."""
    report = injection_search(G, X, gate)
    return report.witness["mapping"] if report.sat else None
