"""The .graph edge-list format for abstract (non-embedded) graphs.

    V <n>
    N <id> <id> ...     optional; default ids are 0..n-1
    <u> <v>             one edge per line

Blank lines and lines starting with '#' are ignored.
"""

import logging
from pathlib import Path

import networkx as nx

from src.errors import PlaneGraphSyntaxError

logger = logging.getLogger(__name__)


def _tokens(raw: str) -> list[tuple[str, int]]:
    out = []
    col = 0
    for piece in raw.split():
        col = raw.index(piece, col)
        out.append((piece, col + 1))
        col += len(piece)
    return out


def _int(token: tuple[str, int], lineno: int) -> int:
    text, col = token
    if not text.isdigit():
        raise PlaneGraphSyntaxError(f"expected a non-negative integer, got {text!r}", lineno, col)
    return int(text)


def parse_abstract_graph(text: str) -> nx.Graph:
    """Parse .graph text.

    Raises:
        PlaneGraphSyntaxError: with the line and column of the offending token.
    """
    G = nx.Graph()
    declared: int | None = None
    header_line = 1
    ids: list[int] | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        toks = _tokens(raw)
        head, col = toks[0]
        if declared is None:
            if head != "V" or len(toks) != 2:
                raise PlaneGraphSyntaxError("expected header 'V <n>'", lineno, col)
            declared = _int(toks[1], lineno)
            header_line = lineno
            continue
        if head == "N":
            if ids is not None or G.number_of_edges():
                raise PlaneGraphSyntaxError("'N' line must come once, before edges", lineno, col)
            ids = [_int(t, lineno) for t in toks[1:]]
            if len(ids) != declared or len(set(ids)) != len(ids):
                raise PlaneGraphSyntaxError(
                    f"'N' line must list {declared} distinct ids", lineno, col
                )
            G.add_nodes_from(ids)
            continue
        if len(toks) != 2:
            raise PlaneGraphSyntaxError("expected an edge '<u> <v>'", lineno, col)
        if ids is None:
            ids = list(range(declared))
            G.add_nodes_from(ids)
        u, v = (_int(t, lineno) for t in toks)
        for vertex, (_, c) in zip((u, v), toks):
            if vertex not in G:
                raise PlaneGraphSyntaxError(f"unknown vertex {vertex}", lineno, c)
        if u == v:
            raise PlaneGraphSyntaxError(f"loop at vertex {u}", lineno, col)
        G.add_edge(u, v)

    if declared is None:
        raise PlaneGraphSyntaxError("missing header 'V <n>'", 1, 1)
    if ids is None:
        G.add_nodes_from(range(declared))
    if G.number_of_nodes() != declared:
        raise PlaneGraphSyntaxError(
            f"header declares {declared} vertices, found {G.number_of_nodes()}", header_line, 1
        )
    return G


def serialize_abstract_graph(G: nx.Graph) -> str:
    nodes = sorted(G.nodes)
    lines = [f"V {len(nodes)}"]
    if nodes != list(range(len(nodes))):
        lines.append("N " + " ".join(str(v) for v in nodes))
    lines.extend(f"{u} {v}" for u, v in sorted(tuple(sorted(e)) for e in G.edges))
    return "\n".join(lines) + "\n"


def load_abstract_graph(path: Path) -> nx.Graph:
    return parse_abstract_graph(Path(path).read_text(encoding="ascii"))


def save_abstract_graph(G: nx.Graph, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize_abstract_graph(G), encoding="ascii")
    logger.info("Graph saved to %s (%d vertices, %d edges)", path, len(G), G.number_of_edges())
    return path
