"""Exception hierarchy shared by the library and the CLI."""


class ProductStructureError(Exception):
    """Base class for every error raised by this package."""


class PlaneGraphSyntaxError(ProductStructureError):
    """Malformed .spg or .graph text."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class EmbeddingError(ProductStructureError):
    """Rotation system is not a valid genus-0 embedding of a simple graph."""


class UnknownVertexError(ProductStructureError):
    def __init__(self, vertex):
        super().__init__(f"unknown vertex {vertex!r}")
        self.vertex = vertex


class DisconnectedGraphError(ProductStructureError):
    """Operation needs a connected graph."""


class NotSquaregraphError(ProductStructureError):
    def __init__(self, verdict):
        super().__init__(f"not a squaregraph: {verdict.reason}")
        self.verdict = verdict


class RootNotOuterError(ProductStructureError):
    def __init__(self, root: int):
        super().__init__(f"root {root} is not on the outer face")
        self.root = root


class OrderCrossingError(ProductStructureError):
    """Two consecutive-level edges cross under the computed ranks."""

    def __init__(self, edge_a: tuple[int, int], edge_b: tuple[int, int]):
        super().__init__(f"edges {edge_a} and {edge_b} cross")
        self.edge_a = edge_a
        self.edge_b = edge_b


class UpDegreeViolation(ProductStructureError):
    def __init__(self, vertex: int, degree: int):
        super().__init__(f"vertex {vertex} has up-degree {degree} > 2")
        self.vertex = vertex
        self.degree = degree


class DownDegreeZero(ProductStructureError):
    def __init__(self, vertex: int):
        super().__init__(f"inner vertex {vertex} has no neighbour in the next level")
        self.vertex = vertex


class MatchingClash(ProductStructureError):
    def __init__(self, vertex: int, parents: tuple[int, int]):
        super().__init__(
            f"vertex {vertex} chosen as leftmost child of both {parents[0]} and {parents[1]}"
        )
        self.vertex = vertex
        self.parents = parents


class PartitionError(ProductStructureError):
    """Partition does not cover the graph, overlaps, or is otherwise malformed."""


class ProductEmbeddingError(ProductStructureError):
    """Product embedding map is partial or refers to unknown coordinates."""


class GateExceeded(ProductStructureError):
    """Exhaustive search refused because the instance is above its size gate."""

    def __init__(self, what: str, size: int, gate: int):
        super().__init__(f"{what}: size {size} exceeds gate {gate}")
        self.what = what
        self.size = size
        self.gate = gate


class ConfigError(ProductStructureError):
    pass


class CertificateError(ProductStructureError):
    """Certificate JSON cannot be read at all (as opposed to failing a check)."""


class InvariantViolation(ProductStructureError):
    """A guarantee of the decomposition pipeline failed its own re-check."""

    def __init__(self, check: str, detail: str = ""):
        super().__init__(f"check {check!r} failed" + (f": {detail}" if detail else ""))
        self.check = check
        self.detail = detail
