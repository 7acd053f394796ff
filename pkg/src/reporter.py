"""Jinja2 rendering: HTML search reports and SVG drawings of leveled embeddings."""

import json
import logging
from collections import Counter
from datetime import datetime
from pathlib import Path

from jinja2 import Environment, FileSystemLoader

from src.decompose import HPartition
from src.layering import LeveledEmbedding

logger = logging.getLogger(__name__)

TEMPLATES_DIR = Path(__file__).parent.parent / "templates"

_SPACING = 60
_MARGIN = 40
_PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2")


def _environment() -> Environment:
    return Environment(loader=FileSystemLoader(str(TEMPLATES_DIR)), autoescape=True)


def generate_search_report(
    results: list[dict], experiment: dict, reports_dir: Path | None = None
) -> Path | None:
    """Render one experiment's search results to HTML, with a JSON sibling.

    Args:
        results: SearchReport dicts, one per instance, in run order.
        experiment: The loaded experiment definition.
        reports_dir: Output root; files go to <reports_dir>/<slug>/<date>.html.

    Returns:
        Path to the HTML report, or None if there were no results.
    """
    if not results:
        logger.warning("No search results to report on")
        return None

    now = datetime.now()
    date_str = now.strftime("%Y-%m-%d")
    outcome_counts = dict(Counter(r["outcome"] for r in results))
    first_unsat = next((r["instance"] for r in results if r["outcome"] == "UNSAT"), None)

    template = _environment().get_template("search_report.html")
    html = template.render(
        date=date_str,
        experiment=experiment,
        results=results,
        outcome_counts=outcome_counts,
        first_unsat=first_unsat,
        total_ms=sum(r["wall_time_ms"] for r in results),
        generated_at=now.strftime("%Y-%m-%d %H:%M:%S"),
    )

    if reports_dir is None:
        reports_dir = Path(__file__).parent.parent / "reports"
    out_dir = Path(reports_dir) / experiment.get("slug", "adhoc")
    out_dir.mkdir(parents=True, exist_ok=True)
    report_path = out_dir / f"{date_str}.html"
    report_path.write_text(html, encoding="utf-8")
    (out_dir / f"{date_str}.json").write_text(
        json.dumps({"experiment": experiment, "results": results}, indent=2, default=str),
        encoding="utf-8",
    )

    logger.info(
        "Report saved to %s (%s)", report_path,
        ", ".join(f"{k} {v}" for k, v in sorted(outcome_counts.items())),
    )
    return report_path


def _point(e: LeveledEmbedding, v: int) -> tuple[int, int]:
    return _MARGIN + e.rank[v] * _SPACING, _MARGIN + e.level[v] * _SPACING


def render_leveled_svg(e: LeveledEmbedding, partition: HPartition | None = None) -> str:
    """SVG with x = rank and y = level; parts of `partition` drawn as thick polylines."""
    vertices = [
        {"id": v, "x": x, "y": y}
        for v in sorted(e.level)
        for x, y in [_point(e, v)]
    ]
    edges = []
    for u, w in e.base.edges():
        (x1, y1), (x2, y2) = _point(e, u), _point(e, w)
        edges.append({"x1": x1, "y1": y1, "x2": x2, "y2": y2})

    paths = []
    if partition is not None:
        for idx, part in enumerate(partition.parts):
            members = [v for v in part if v in e.level]
            if len(members) < 2:
                continue
            points = " ".join(f"{x},{y}" for x, y in (_point(e, v) for v in members))
            paths.append({"points": points, "colour": _PALETTE[idx % len(_PALETTE)]})

    width = max((len(row) for row in e.levels), default=1)
    template = _environment().get_template("leveled_embedding.svg")
    return template.render(
        width=2 * _MARGIN + max(width - 1, 0) * _SPACING,
        height=2 * _MARGIN + max(len(e) - 1, 0) * _SPACING,
        vertices=vertices,
        edges=edges,
        paths=paths,
    )


def save_svg(svg: str, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(svg, encoding="utf-8")
    logger.info("Drawing saved to %s", path)
    return path
