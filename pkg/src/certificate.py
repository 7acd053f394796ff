"""Certificate JSON for decompositions, and a verifier that trusts only the JSON.

Field order is fixed: parts, layers, quotient_edges, map, mode, checks.
Arrays are sorted ascending; part ids are positions in `parts`.
"""

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import networkx as nx

from src.decompose import (
    Decomposition,
    ProductEmbedding,
    contracted_outer_face_covers,
    verify_product_embedding,
)
from src.errors import CertificateError, GateExceeded, PartitionError, ProductEmbeddingError
from src.layering import is_layering
from src.planegraph import PlaneGraph
from src.recognize import DEFAULT_OUTERPLANAR_GATE, is_outerplanar_abstract

logger = logging.getLogger(__name__)

CERTIFICATE_MODE = "semistrong"

CHECK_NAMES = (
    "schema",
    "parts_partition",
    "layers_partition",
    "layering_valid",
    "layers_independent",
    "width",
    "vertical_paths",
    "quotient_edges",
    "map_consistent",
    "product_embedding",
    "quotient_outerplanar",
    "checks",
)

# producer-side check name -> verifier checks that decide it
CLAIMED_CHECKS = {
    "layering_valid": ("layering_valid",),
    "thin": ("width",),
    "layers_independent": ("layers_independent",),
    "product_embedding": ("product_embedding",),
    "quotient_outerplanar_embedding": ("quotient_outerplanar",),
    "quotient_outerplanar_abstract": ("quotient_outerplanar",),
}


def certificate_to_dict(dec: Decomposition) -> dict:
    parts = [sorted(p) for p in dec.partition.parts]
    part_of = {v: idx for idx, p in enumerate(parts) for v in p}
    layer_of = dec.layering.layer_of
    return {
        "parts": parts,
        "layers": dec.layering.as_lists(),
        "quotient_edges": sorted(sorted(e) for e in dec.quotient.edges),
        "map": {str(v): [part_of[v], layer_of[v]] for v in sorted(part_of)},
        "mode": dec.embedding.mode,
        "checks": dict(dec.checks),
    }


def write_certificate(data: dict, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    logger.info("Certificate written to %s", path)
    return path


def load_certificate(path: Path) -> dict:
    """Raises CertificateError when the file is missing or not a JSON object."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CertificateError(f"cannot read certificate {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise CertificateError(f"certificate {path} is not a JSON object")
    return data


@dataclass(frozen=True)
class CheckFailure:
    check: str
    message: str


@dataclass
class CertificateReport:
    passed: list[str] = field(default_factory=list)
    failures: list[CheckFailure] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok

    def failed(self, check: str) -> bool:
        return any(f.check == check for f in self.failures)

    def record(self, check: str, problem: str | None) -> None:
        if problem is None:
            self.passed.append(check)
        else:
            self.failures.append(CheckFailure(check, problem))
            logger.info("Certificate check %s failed: %s", check, problem)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "passed": self.passed,
            "failures": [{"check": f.check, "message": f.message} for f in self.failures],
        }


def _is_int_list(value) -> bool:
    return isinstance(value, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in value)


def _schema_problem(data: dict) -> str | None:
    for key in ("parts", "layers", "quotient_edges", "map", "mode", "checks"):
        if key not in data:
            return f"missing field {key!r}"
    if not isinstance(data["parts"], list) or not all(_is_int_list(p) for p in data["parts"]):
        return "'parts' must be a list of integer lists"
    if not isinstance(data["layers"], list) or not all(_is_int_list(x) for x in data["layers"]):
        return "'layers' must be a list of integer lists"
    edges = data["quotient_edges"]
    if not isinstance(edges, list) or not all(_is_int_list(e) and len(e) == 2 for e in edges):
        return "'quotient_edges' must be a list of integer pairs"
    if not isinstance(data["map"], dict):
        return "'map' must be an object"
    for key, value in data["map"].items():
        if not _is_vertex_key(key) or not _is_int_list(value) or len(value) != 2:
            return f"map entry {key!r} must map a vertex id to [part, layer]"
    if data["mode"] != CERTIFICATE_MODE:
        return f"mode must be {CERTIFICATE_MODE!r}, got {data['mode']!r}"
    checks = data["checks"]
    if not isinstance(checks, dict):
        return "'checks' must be an object"
    for name, value in checks.items():
        if name not in CLAIMED_CHECKS:
            return f"unknown claimed check {name!r}"
        if value is not None and not isinstance(value, bool):
            return f"claimed check {name!r} must be true, false or null"
    return None


def _is_vertex_key(key: str) -> bool:
    return key.isascii() and key.isdigit()


def _partition_problem(G: nx.Graph, groups: list[list[int]], what: str) -> str | None:
    seen: dict[int, int] = {}
    for idx, group in enumerate(groups):
        if not group:
            return f"{what} {idx} is empty"
        for v in group:
            if v not in G:
                return f"{what} {idx} names unknown vertex {v}"
            if v in seen:
                return f"vertex {v} appears in {what}s {seen[v]} and {idx}"
            seen[v] = idx
    missing = sorted(set(G.nodes) - set(seen))
    if missing:
        return f"{what}s miss vertices {missing}"
    return None


def verify_certificate(
    g: PlaneGraph, data: dict, outerplanar_gate: int = DEFAULT_OUTERPLANAR_GATE
) -> CertificateReport:
    """Re-check every claim of a certificate from the plane graph and the JSON.

    The claimed `checks` are never trusted: each one is compared with the
    recomputed verdict and a disagreement fails the `checks` check. A null
    claim means the producer skipped that check. Later checks that depend on
    a failed earlier one are reported as failed with a pointer to it.
    """
    report = CertificateReport()
    G = g.to_networkx()

    schema = _schema_problem(data)
    report.record("schema", schema)
    if schema:
        for name in CHECK_NAMES[1:]:
            report.record(name, "skipped: schema check failed")
        return report

    parts, layers = data["parts"], data["layers"]
    report.record("parts_partition", _partition_problem(G, parts, "part"))
    report.record("layers_partition", _partition_problem(G, layers, "layer"))
    if report.failed("parts_partition") or report.failed("layers_partition"):
        for name in CHECK_NAMES[3:]:
            report.record(name, "skipped: not a partition")
        return report

    part_of = {v: idx for idx, p in enumerate(parts) for v in p}
    layer_of = {v: idx for idx, x in enumerate(layers) for v in x}

    report.record(
        "layering_valid",
        None if is_layering(G, layers) else _first_long_edge(G, layer_of),
    )
    dependent = [
        (u, w) for u, w in sorted(G.edges) if layer_of[u] == layer_of[w]
    ]
    report.record(
        "layers_independent",
        f"edge {dependent[0]} lies inside layer {layer_of[dependent[0][0]]}" if dependent else None,
    )
    report.record("width", _width_problem(parts, layer_of))
    report.record("vertical_paths", _vertical_path_problem(G, parts, layer_of))

    H = nx.Graph()
    H.add_nodes_from(range(len(parts)))
    H.add_edges_from((part_of[u], part_of[w]) for u, w in G.edges if part_of[u] != part_of[w])
    claimed = {tuple(sorted(e)) for e in data["quotient_edges"]}
    actual = {tuple(sorted(e)) for e in H.edges}
    report.record("quotient_edges", _edge_set_problem(claimed, actual))

    vmap = {int(k): tuple(v) for k, v in data["map"].items()}
    report.record("map_consistent", _map_problem(G, vmap, part_of, layer_of))

    claimed_h = nx.Graph()
    claimed_h.add_nodes_from(range(len(parts)))
    claimed_h.add_edges_from(tuple(e) for e in data["quotient_edges"])
    emb = ProductEmbedding(data["mode"], claimed_h, len(layers) - 1, vmap)
    try:
        check = verify_product_embedding(G, emb)
        report.record("product_embedding", None if check else check.reason)
    except ProductEmbeddingError as exc:
        report.record("product_embedding", str(exc))

    report.record("quotient_outerplanar", _outerplanar_problem(g, H, parts, layer_of, outerplanar_gate))
    report.record("checks", _claimed_checks_problem(data["checks"], report))
    return report


def _claimed_checks_problem(claims: dict, report: CertificateReport) -> str | None:
    for name, claim in claims.items():
        if claim is None:
            continue
        actual = not any(report.failed(check) for check in CLAIMED_CHECKS[name])
        if claim != actual:
            return f"claimed {name}={str(claim).lower()} but recomputed {str(actual).lower()}"
    return None


def _first_long_edge(G: nx.Graph, layer_of: dict[int, int]) -> str:
    for u, w in sorted(G.edges):
        if abs(layer_of[u] - layer_of[w]) > 1:
            return f"edge ({u}, {w}) spans layers {layer_of[u]} and {layer_of[w]}"
    return "layers do not form a layering"


def _width_problem(parts: list[list[int]], layer_of: dict[int, int]) -> str | None:
    for idx, part in enumerate(parts):
        seen: dict[int, int] = {}
        for v in part:
            if layer_of[v] in seen:
                return (
                    f"part {idx} meets layer {layer_of[v]} in two vertices "
                    f"{seen[layer_of[v]]} and {v} (width 2 > 1)"
                )
            seen[layer_of[v]] = v
    return None


def _vertical_path_problem(G: nx.Graph, parts: list[list[int]], layer_of: dict[int, int]) -> str | None:
    for idx, part in enumerate(parts):
        path = sorted(part, key=layer_of.__getitem__)
        for a, b in zip(path, path[1:]):
            if layer_of[b] != layer_of[a] + 1 or not G.has_edge(a, b):
                return f"part {idx} is not a vertical path at ({a}, {b})"
    return None


def _edge_set_problem(claimed: set, actual: set) -> str | None:
    extra = sorted(claimed - actual)
    absent = sorted(actual - claimed)
    if extra:
        return f"claimed quotient edge {list(extra[0])} has no crossing graph edge"
    if absent:
        return f"quotient edge {list(absent[0])} is missing"
    return None


def _map_problem(G: nx.Graph, vmap: dict, part_of: dict, layer_of: dict) -> str | None:
    for v in sorted(G.nodes):
        if v not in vmap:
            return f"vertex {v} has no map entry"
        if vmap[v] != (part_of[v], layer_of[v]):
            return f"vertex {v} maps to {list(vmap[v])}, expected {[part_of[v], layer_of[v]]}"
    extra = sorted(set(vmap) - set(G.nodes))
    if extra:
        return f"map names unknown vertex {extra[0]}"
    return None


def _outerplanar_problem(
    g: PlaneGraph, H: nx.Graph, parts: list[list[int]], layer_of: dict, gate: int
) -> str | None:
    try:
        ok = is_outerplanar_abstract(H, gate)
    except GateExceeded:
        ok = None
    if ok is None:
        # Above the oracle's gate: contract parts inside each component instead.
        ordered = [sorted(p, key=layer_of.__getitem__) for p in parts]
        ok = True
        for comp in g.components():
            inside = []
            for idx, p in enumerate(ordered):
                members = sum(v in comp for v in p)
                if members and members < len(p):
                    return f"part {idx} spans two components"
                if members:
                    inside.append(p)
            try:
                ok &= contracted_outer_face_covers(comp, inside)
            except PartitionError as exc:
                return f"contraction check failed: {exc}"
    return None if ok else "quotient is not outerplanar"
