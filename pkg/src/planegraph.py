"""Plane graphs as rotation systems: validation, face tracing, and the .spg format.

Rotations list neighbours in clockwise order as drawn. A face is traced by
leaving each directed edge (u, v) along (v, w), where w immediately precedes u
in the rotation at v, so every walk keeps its face on the left.
"""

import logging
import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path
from types import MappingProxyType

import networkx as nx

from src.errors import EmbeddingError, PlaneGraphSyntaxError, UnknownVertexError

logger = logging.getLogger(__name__)

Dart = tuple[int, int]

_TOKEN = re.compile(r"\S+")


@dataclass(frozen=True)
class FaceWalk:
    """Closed boundary walk of one face, as a cyclic sequence of darts."""

    boundary: tuple[Dart, ...]
    is_outer: bool = False

    def __len__(self) -> int:
        return len(self.boundary)

    @property
    def vertices(self) -> tuple[int, ...]:
        """Vertices in walk order (a vertex repeats if the walk revisits it)."""
        return tuple(u for u, _ in self.boundary)

    @property
    def vertex_set(self) -> frozenset[int]:
        return frozenset(self.vertices)


class PlaneGraph:
    """Immutable simple plane graph given by a rotation system.

    Args:
        rotation: vertex -> neighbours in clockwise order.
        outer_refs: one dart per connected component with edges, each lying on
            that component's outer face walk. Isolated vertices need none.

    Raises:
        EmbeddingError: asymmetric or non-simple adjacency, a rotation system
            that fails the Euler check, or a missing/dangling outer reference.
    """

    __slots__ = ("_rotation", "_outer_refs", "_faces", "_position")

    def __init__(
        self,
        rotation: Mapping[int, Sequence[int]],
        outer_refs: Iterable[Dart] = (),
    ):
        rot = {int(v): tuple(int(w) for w in nbrs) for v, nbrs in rotation.items()}
        _check_simple_symmetric(rot)
        self._rotation = MappingProxyType(rot)
        self._position = {
            v: {w: i for i, w in enumerate(nbrs)} for v, nbrs in rot.items()
        }
        self._outer_refs = tuple((int(u), int(v)) for u, v in outer_refs)
        for u, v in self._outer_refs:
            if u not in rot or v not in self._position[u]:
                raise EmbeddingError(f"outer reference ({u}, {v}) is not an edge")

        walks = self._trace_walks()
        outer_darts = set(self._outer_refs)
        self._faces = tuple(
            FaceWalk(tuple(w), is_outer=bool(outer_darts.intersection(w)))
            for w in walks
        )
        self._check_euler_and_outer()

    # -- basic accessors -------------------------------------------------

    @property
    def rotation(self) -> Mapping[int, tuple[int, ...]]:
        return self._rotation

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self._rotation)

    @property
    def outer_refs(self) -> tuple[Dart, ...]:
        return self._outer_refs

    @property
    def outer_ref(self) -> Dart | None:
        return self._outer_refs[0] if self._outer_refs else None

    @property
    def faces(self) -> tuple[FaceWalk, ...]:
        return self._faces

    def __len__(self) -> int:
        return len(self._rotation)

    def __contains__(self, v: object) -> bool:
        return v in self._rotation

    def neighbours(self, v: int) -> tuple[int, ...]:
        if v not in self._rotation:
            raise UnknownVertexError(v)
        return self._rotation[v]

    def degree(self, v: int) -> int:
        return len(self.neighbours(v))

    def edges(self) -> list[tuple[int, int]]:
        """Undirected edges as sorted (u, v) pairs with u < v."""
        return sorted(
            (u, v) for u, nbrs in self._rotation.items() for v in nbrs if u < v
        )

    def number_of_edges(self) -> int:
        return sum(len(n) for n in self._rotation.values()) // 2

    def successor(self, dart: Dart) -> Dart:
        """Next dart on the face to the left of `dart`."""
        u, v = dart
        rot_v = self._rotation[v]
        return v, rot_v[(self._position[v][u] - 1) % len(rot_v)]

    def index_in_rotation(self, v: int, w: int) -> int:
        return self._position[v][w]

    def outer_faces(self) -> list[FaceWalk]:
        return [f for f in self._faces if f.is_outer]

    def outer_vertices(self) -> frozenset[int]:
        """Vertices on an outer walk, plus isolated vertices."""
        on_outer = set().union(*(f.vertex_set for f in self.outer_faces()))
        on_outer.update(v for v, nbrs in self._rotation.items() if not nbrs)
        return frozenset(on_outer)

    def to_networkx(self) -> nx.Graph:
        """Underlying abstract graph."""
        graph = nx.Graph()
        graph.add_nodes_from(sorted(self._rotation))
        graph.add_edges_from(self.edges())
        return graph

    def is_connected(self) -> bool:
        return len(self.component_vertex_sets()) <= 1

    def component_vertex_sets(self) -> list[frozenset[int]]:
        comps = nx.connected_components(self.to_networkx())
        return sorted((frozenset(c) for c in comps), key=min)

    def components(self) -> list["PlaneGraph"]:
        """One plane graph per connected component, ordered by smallest id."""
        result = []
        for comp in self.component_vertex_sets():
            rot = {v: self._rotation[v] for v in comp}
            refs = [d for d in self._outer_refs if d[0] in comp][:1]
            result.append(PlaneGraph(rot, refs))
        return result

    def relabel(self, mapping: Mapping[int, int]) -> "PlaneGraph":
        """Copy with vertex ids renamed through an injective mapping."""
        rot = {mapping[v]: [mapping[w] for w in nbrs] for v, nbrs in self._rotation.items()}
        refs = [(mapping[u], mapping[v]) for u, v in self._outer_refs]
        return PlaneGraph(rot, refs)

    # -- equality ---------------------------------------------------------

    def canonical(self) -> tuple:
        """Key equal for graphs that differ only by rotation-sequence rotation."""
        rot = []
        for v in sorted(self._rotation):
            nbrs = self._rotation[v]
            if nbrs:
                k = nbrs.index(min(nbrs))
                nbrs = nbrs[k:] + nbrs[:k]
            rot.append((v, nbrs))
        outer = frozenset(frozenset(f.boundary) for f in self.outer_faces())
        return tuple(rot), outer

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PlaneGraph):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(self.canonical())

    def __repr__(self) -> str:
        return (
            f"PlaneGraph(n={len(self)}, m={self.number_of_edges()}, "
            f"faces={len(self._faces)}, outer_refs={list(self._outer_refs)})"
        )

    # -- validation -------------------------------------------------------

    def _trace_walks(self) -> list[list[Dart]]:
        return rotation_walks(self._rotation)

    def _check_euler_and_outer(self) -> None:
        comp_of = {}
        comps = self.component_vertex_sets()
        for idx, comp in enumerate(comps):
            for v in comp:
                comp_of[v] = idx

        face_count = [0] * len(comps)
        for face in self._faces:
            face_count[comp_of[face.boundary[0][0]]] += 1

        for idx, comp in enumerate(comps):
            n = len(comp)
            m = sum(len(self._rotation[v]) for v in comp) // 2
            f = face_count[idx] if m else 1
            if n - m + f != 2:
                raise EmbeddingError(
                    f"Euler check failed on component containing {min(comp)}: "
                    f"n={n}, m={m}, f={f} (rotation system is not planar)"
                )
            if not m:
                continue
            refs = [d for d in self._outer_refs if comp_of[d[0]] == idx]
            if not refs:
                raise EmbeddingError(
                    f"component containing {min(comp)} has edges but no OUTER reference"
                )
            outer_in_comp = [
                f for f in self._faces if f.is_outer and comp_of[f.boundary[0][0]] == idx
            ]
            if len(outer_in_comp) != 1:
                raise EmbeddingError(
                    f"OUTER references of component containing {min(comp)} "
                    f"name {len(outer_in_comp)} different faces"
                )


def rotation_walks(rotation: Mapping[int, Sequence[int]]) -> list[list[Dart]]:
    """Closed walks of a rotation system, each started at its smallest-tail dart."""
    position = {v: {w: i for i, w in enumerate(nbrs)} for v, nbrs in rotation.items()}
    seen: set[Dart] = set()
    walks = []
    for u in sorted(rotation):
        for v in rotation[u]:
            if (u, v) in seen:
                continue
            walk = []
            dart = (u, v)
            while dart not in seen:
                seen.add(dart)
                walk.append(dart)
                a, b = dart
                rot_b = rotation[b]
                dart = (b, rot_b[(position[b][a] - 1) % len(rot_b)])
            walks.append(walk)
    return walks


def _check_simple_symmetric(rot: Mapping[int, tuple[int, ...]]) -> None:
    for v, nbrs in rot.items():
        if v < 0:
            raise EmbeddingError(f"vertex id {v} is negative")
        if len(set(nbrs)) != len(nbrs):
            raise EmbeddingError(f"rotation of {v} repeats a neighbour (multigraph)")
        for w in nbrs:
            if w == v:
                raise EmbeddingError(f"loop at vertex {v}")
            if w not in rot:
                raise EmbeddingError(f"neighbour {w} of vertex {v} has no rotation")
            if v not in rot[w]:
                raise EmbeddingError(f"asymmetric adjacency: {v}->{w} without {w}->{v}")


def trace_faces(g: PlaneGraph) -> tuple[FaceWalk, ...]:
    """All face walks of g; exactly one per component is flagged outer."""
    return g.faces


def inner_vertices(g: PlaneGraph) -> frozenset[int]:
    return g.vertices - g.outer_vertices()


# -- .spg text format -------------------------------------------------------


def parse_plane_graph(text: str) -> PlaneGraph:
    """Parse the .spg plane-graph format.

    Raises:
        PlaneGraphSyntaxError: with line and column of the offending token.
        EmbeddingError: for well-formed text describing an invalid embedding.
    """
    declared: int | None = None
    header_line = 0
    rotation: dict[int, list[int]] = {}
    outer_refs: list[Dart] = []
    last_line = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        last_line = lineno
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = [(m.group(0), m.start() + 1) for m in _TOKEN.finditer(raw)]
        head, col = tokens[0]

        if declared is None:
            if head != "V" or len(tokens) != 2:
                raise PlaneGraphSyntaxError("expected header 'V <n>'", lineno, col)
            declared = _parse_int(tokens[1], lineno)
            header_line = lineno
            continue

        if head == "OUTER":
            if len(tokens) != 3:
                raise PlaneGraphSyntaxError("expected 'OUTER <u> <v>'", lineno, col)
            outer_refs.append((_parse_int(tokens[1], lineno), _parse_int(tokens[2], lineno)))
            continue

        if not head.endswith(":"):
            # allow "3 : 1 2" as well as "3: 1 2"
            if len(tokens) >= 2 and tokens[1][0] == ":":
                tokens = [(head + ":", col)] + tokens[2:]
            elif ":" in head:
                vid, rest = head.split(":", 1)
                tokens = [(vid + ":", col), (rest, col + len(vid) + 1)] + tokens[1:]
            else:
                raise PlaneGraphSyntaxError("expected '<id>: <neighbours>'", lineno, col)
        vid = _parse_int((tokens[0][0][:-1], col), lineno)
        if vid in rotation:
            raise PlaneGraphSyntaxError(f"duplicate rotation for vertex {vid}", lineno, col)
        rotation[vid] = [_parse_int(tok, lineno) for tok in tokens[1:] if tok[0]]

    if declared is None:
        raise PlaneGraphSyntaxError("missing header 'V <n>'", max(last_line, 1), 1)
    if declared != len(rotation):
        raise PlaneGraphSyntaxError(
            f"header declares {declared} vertices, found {len(rotation)}", header_line, 1
        )

    graph = PlaneGraph(rotation, outer_refs)
    logger.debug("Parsed %r", graph)
    return graph


def _parse_int(token: tuple[str, int], lineno: int) -> int:
    text, col = token
    try:
        value = int(text)
    except ValueError:
        raise PlaneGraphSyntaxError(f"expected an integer, got {text!r}", lineno, col) from None
    if value < 0:
        raise PlaneGraphSyntaxError(f"negative value {value}", lineno, col)
    return value


def serialize(g: PlaneGraph) -> str:
    lines = [f"V {len(g)}"]
    for v in sorted(g.vertices):
        nbrs = " ".join(str(w) for w in g.rotation[v])
        lines.append(f"{v}: {nbrs}".rstrip())
    for u, v in g.outer_refs:
        lines.append(f"OUTER {u} {v}")
    return "\n".join(lines) + "\n"


def load_plane_graph(path: Path) -> PlaneGraph:
    return parse_plane_graph(Path(path).read_text(encoding="ascii"))


def save_plane_graph(g: PlaneGraph, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize(g), encoding="ascii")
    logger.info("Plane graph saved to %s (%d vertices)", path, len(g))
    return path
