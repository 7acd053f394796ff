"""Shared utilities: pair clustering, size gates, search timing and reports."""

import functools
import logging
import time
from collections.abc import Hashable, Iterable
from dataclasses import dataclass

import networkx as nx

from src.errors import GateExceeded

logger = logging.getLogger(__name__)


def cluster_pairs(items: Iterable[Hashable], pairs: Iterable[tuple]) -> list[list]:
    """Group items into the connected components of the graph the pairs span.

    Args:
        items: All items; each ends up in exactly one cluster.
        pairs: Item pairs that belong to the same cluster.

    Returns:
        List of clusters, ordered by the first item of each in `items`.
    """
    graph = nx.Graph()
    graph.add_nodes_from(items)
    graph.add_edges_from(pairs)
    position = {v: idx for idx, v in enumerate(graph)}
    return [sorted(comp, key=position.__getitem__) for comp in nx.connected_components(graph)]


def has_cycle(edges: Iterable[tuple]) -> bool:
    """True if the undirected simple edge set contains a cycle."""
    components = nx.utils.UnionFind()
    for a, b in edges:
        if components[a] == components[b]:
            return True
        components.union(a, b)
    return False


def check_gate(what: str, size: int, gate: int) -> None:
    """Raise GateExceeded when an exhaustive search input is too large."""
    if size > gate:
        logger.error("Refusing %s: size %d above gate %d", what, size, gate)
        raise GateExceeded(what, size, gate)


def timed_search(func):
    """Decorator: log wall time of an exhaustive search at DEBUG level."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        try:
            return func(*args, **kwargs)
        finally:
            elapsed_ms = (time.perf_counter() - start) * 1000
            logger.debug("%s finished in %.1f ms", func.__name__, elapsed_ms)

    return wrapper


@dataclass
class SearchReport:
    """Outcome of one exhaustive search, in the shape written to reports."""

    instance: str
    gate: int
    outcome: str = "UNSAT"
    witness: dict | None = None
    nodes_explored: int = 0
    wall_time_ms: float = 0.0

    @property
    def sat(self) -> bool:
        return self.outcome == "SAT"

    def to_dict(self) -> dict:
        return {
            "instance": self.instance,
            "gate": self.gate,
            "outcome": self.outcome,
            "witness": self.witness,
            "nodes_explored": self.nodes_explored,
            "wall_time_ms": round(self.wall_time_ms, 3),
        }
