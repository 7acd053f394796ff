"""Command-line front end: check, decompose, verify, gadget, oracle, corpus, experiment.

Exit codes: 0 success or a positive verdict, 1 a negative verdict or a failed
verification, 2 unreadable or malformed input or configuration, 3 an
exhaustive search refused by its size gate.
"""

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime
from pathlib import Path

# Ensure project root is on sys.path so `python src/main.py` works
_PROJECT_ROOT = Path(__file__).resolve().parent.parent
if str(_PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(_PROJECT_ROOT))

import networkx as nx  # noqa: E402
from dotenv import load_dotenv  # noqa: E402

from src.certificate import (  # noqa: E402
    certificate_to_dict,
    load_certificate,
    verify_certificate,
    write_certificate,
)
from src.config_loader import (  # noqa: E402
    list_experiments,
    load_config,
    load_experiment,
    resolve_gate,
)
from src.corpus import build_corpus  # noqa: E402
from src.decompose import decompose_squaregraph, verify_layered_partition  # noqa: E402
from src.edgelist import load_abstract_graph, save_abstract_graph  # noqa: E402
from src.errors import (  # noqa: E402
    CertificateError,
    ConfigError,
    DisconnectedGraphError,
    EmbeddingError,
    GateExceeded,
    InvariantViolation,
    NotSquaregraphError,
    PartitionError,
    PlaneGraphSyntaxError,
    ProductStructureError,
    RootNotOuterError,
    UnknownVertexError,
)
from src.gadgets import (  # noqa: E402
    forest_quotient_search,
    gadget_bipartite,
    gadget_plain,
    join_target,
    minor_search,
    pathwidth_exact,
)
from src.planegraph import (  # noqa: E402
    load_plane_graph,
    parse_plane_graph,
    save_plane_graph,
    serialize,
)
from src.products import injection_search  # noqa: E402
from src.recognize import is_squaregraph  # noqa: E402
from src.reporter import generate_search_report, render_leveled_svg, save_svg  # noqa: E402

logger = logging.getLogger(__name__)

PROJECT_ROOT = _PROJECT_ROOT

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_GATE = 3

# First match wins, so subclasses come before their bases.
_EXIT_CODES: list[tuple[type[BaseException], int]] = [
    (GateExceeded, EXIT_GATE),
    (NotSquaregraphError, EXIT_NEGATIVE),
    (InvariantViolation, EXIT_NEGATIVE),
    (PlaneGraphSyntaxError, EXIT_INPUT),
    (EmbeddingError, EXIT_INPUT),
    (CertificateError, EXIT_INPUT),
    (ConfigError, EXIT_INPUT),
    (UnknownVertexError, EXIT_INPUT),
    (RootNotOuterError, EXIT_INPUT),
    (DisconnectedGraphError, EXIT_INPUT),
    (PartitionError, EXIT_INPUT),
    (OSError, EXIT_INPUT),
    (ValueError, EXIT_INPUT),
    (ProductStructureError, EXIT_NEGATIVE),
]


def setup_logging(verbose: bool = False) -> None:
    """Configure logging format and level."""
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )


def save_run_log(log_data: dict, command: str, logs_dir: Path) -> Path:
    """Save structured JSON log for one command run."""
    log_dir = Path(logs_dir) / command
    log_dir.mkdir(parents=True, exist_ok=True)
    filename = f"{datetime.now().strftime('%Y-%m-%d_%H%M%S')}.json"
    log_path = log_dir / filename
    log_path.write_text(json.dumps(log_data, indent=2, default=str), encoding="utf-8")
    return log_path


def exit_code_for(exc: BaseException) -> int:
    for cls, code in _EXIT_CODES:
        if isinstance(exc, cls):
            return code
    raise exc


def _emit(args: argparse.Namespace, data: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(data, indent=2, default=str))
    else:
        print(text)


def _load_any_graph(path: str) -> nx.Graph:
    """Abstract graph from a .graph file, or the underlying graph of a .spg file."""
    if Path(path).suffix == ".spg":
        return load_plane_graph(Path(path)).to_networkx()
    return load_abstract_graph(Path(path))


# -- commands -----------------------------------------------------------------


def cmd_check(args: argparse.Namespace, config: dict, run_data: dict) -> int:
    g = load_plane_graph(Path(args.file))
    verdict = is_squaregraph(g)
    run_data["verdict"] = verdict.describe()
    _emit(
        args,
        {
            "squaregraph": verdict.ok,
            "reason": verdict.reason or None,
            "face": list(verdict.face.vertices) if verdict.face else None,
            "vertex": verdict.vertex,
        },
        f"squaregraph: {verdict.describe()}",
    )
    return EXIT_OK if verdict else EXIT_NEGATIVE


def cmd_decompose(args: argparse.Namespace, config: dict, run_data: dict) -> int:
    g = load_plane_graph(Path(args.file))
    gate = resolve_gate(config, "outerplanar", args.gate)
    dec = decompose_squaregraph(g, root=args.root, gate=gate)
    cert = certificate_to_dict(dec)
    H = dec.quotient
    summary = {
        "vertices": len(g),
        "components": len(dec.leveled),
        "h_vertices": H.number_of_nodes(),
        "h_edges": H.number_of_edges(),
        "path_length": dec.embedding.path_length,
        "width": verify_layered_partition(
            g.to_networkx(), dec.partition.parts, dec.layering
        ).width,
        "checks": dec.checks,
    }
    run_data.update(summary)

    if args.out:
        write_certificate(cert, Path(args.out))
        run_data["certificate"] = args.out
    if args.svg:
        for k, e in enumerate(dec.leveled):
            target = Path(args.svg)
            if len(dec.leveled) > 1:
                target = target.with_name(f"{target.stem}_{k}{target.suffix}")
            save_svg(render_leveled_svg(e, dec.partition), target)

    lines = [
        f"|V(G)| = {summary['vertices']} in {summary['components']} component(s)",
        f"|V(H)| = {summary['h_vertices']}, |E(H)| = {summary['h_edges']}",
        f"path length = {summary['path_length']}, width = {summary['width']}",
    ]
    lines += [f"  {name}: {_verdict_text(ok)}" for name, ok in dec.checks.items()]
    if args.format == "json" and not args.out:
        print(json.dumps(cert, indent=2))
    else:
        _emit(args, summary, "\n".join(lines))
    return EXIT_OK


def _verdict_text(ok: bool | None) -> str:
    if ok is None:
        return "skipped (above gate)"
    return "pass" if ok else "FAIL"


def cmd_verify(args: argparse.Namespace, config: dict, run_data: dict) -> int:
    g = load_plane_graph(Path(args.graph))
    data = load_certificate(Path(args.cert))
    report = verify_certificate(g, data, resolve_gate(config, "outerplanar", args.gate))
    run_data["report"] = report.to_dict()
    lines = [f"  {name}: pass" for name in report.passed]
    lines += [f"  {f.check}: FAIL ({f.message})" for f in report.failures]
    lines.append("certificate: " + ("valid" if report else "INVALID"))
    _emit(args, report.to_dict(), "\n".join(lines))
    return EXIT_OK if report else EXIT_NEGATIVE


def cmd_gadget(args: argparse.Namespace, config: dict, run_data: dict) -> int:
    if args.kind == "plain":
        gadget = gadget_plain(args.k, args.ell, args.nprime)
    else:
        gadget = gadget_bipartite(args.i, args.j, args.ell, args.nprime)
    meta = gadget.metadata()
    meta["vertices"] = gadget.graph.number_of_nodes()
    meta["edges"] = gadget.graph.number_of_edges()
    run_data["gadget"] = meta

    if args.out:
        out = Path(args.out)
        save_abstract_graph(gadget.graph, out)
        out.with_suffix(".json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")
        if gadget.embedding is not None:
            save_plane_graph(gadget.embedding, out.with_suffix(".spg"))
    _emit(
        args,
        meta,
        f"{meta['kind']} gadget {meta['params']}: {meta['vertices']} vertices, "
        f"{meta['edges']} edges, apex {meta['apex_id']}",
    )
    return EXIT_OK


def _minor_target(args: argparse.Namespace) -> tuple[nx.Graph, str]:
    if (args.target is None) == (args.join is None):
        raise ValueError("oracle minor needs exactly one of TARGET or --join N,I,J")
    if args.target is not None:
        return _load_any_graph(args.target), Path(args.target).name
    try:
        n, i, j = (int(x) for x in args.join.split(","))
    except ValueError as exc:
        raise ValueError(f"--join expects three integers N,I,J, got {args.join!r}") from exc
    return join_target(n, i, j), f"P{n}+K{i},{j}"


def cmd_oracle(args: argparse.Namespace, config: dict, run_data: dict) -> int:
    if args.oracle == "pathwidth":
        G = _load_any_graph(args.graph)
        result = pathwidth_exact(G, resolve_gate(config, "pathwidth", args.gate))
        run_data["result"] = result.to_dict()
        _emit(args, result.to_dict(), str(result.value))
        return EXIT_OK

    if args.oracle == "forest-quotient":
        G = _load_any_graph(args.graph)
        report = forest_quotient_search(
            G, args.width, args.max_layers,
            independent_layers=not args.strong,
            gate=resolve_gate(config, "forest_search", args.gate),
            instance=Path(args.graph).name,
        )
    elif args.oracle == "minor":
        target, target_name = _minor_target(args)
        report = minor_search(
            _load_any_graph(args.host), target, args.s,
            gate=resolve_gate(config, "minor", args.gate),
            instance=f"{target_name} in {Path(args.host).name}",
        )
    else:
        report = injection_search(
            _load_any_graph(args.pattern), _load_any_graph(args.host),
            gate=resolve_gate(config, "injection", args.gate),
            instance=f"{Path(args.pattern).name} into {Path(args.host).name}",
        )
    data = report.to_dict()
    run_data["result"] = data
    _emit(args, data, f"{report.outcome} ({report.nodes_explored} nodes, "
                      f"{report.wall_time_ms:.1f} ms)")
    return EXIT_OK if report.sat else EXIT_NEGATIVE


def _corpus_job(job: tuple[str, str, int]) -> dict:
    """Decompose and re-verify one corpus instance; runs in a worker process."""
    name, text, gate = job
    start = time.perf_counter()
    entry = {"instance": name, "ok": False}
    try:
        g = parse_plane_graph(text)
        dec = decompose_squaregraph(g, gate=gate)
        report = verify_certificate(g, certificate_to_dict(dec), gate)
        entry.update(
            vertices=len(g),
            parts=len(dec.partition),
            path_length=dec.embedding.path_length,
            checks=dec.checks,
            certificate_failures=[f.message for f in report.failures],
            ok=report.ok,
        )
    except ProductStructureError as exc:
        entry["error"] = f"{type(exc).__name__}: {exc}"
    entry["wall_time_ms"] = round((time.perf_counter() - start) * 1000, 3)
    return entry


def cmd_corpus(args: argparse.Namespace, config: dict, run_data: dict) -> int:
    seed = config["seed"] if args.seed is None else args.seed
    workers = config["workers"] if args.workers is None else args.workers
    gate = resolve_gate(config, "outerplanar", args.gate)
    jobs = [(name, serialize(g), gate) for name, g in build_corpus(config, seed)]

    if workers == 1:
        results = [_corpus_job(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers or None) as pool:
            results = list(pool.map(_corpus_job, jobs))

    failed = [r["instance"] for r in results if not r["ok"]]
    summary = {"seed": seed, "instances": len(results), "failed": failed, "results": results}
    run_data.update(seed=seed, instances=len(results), failed=failed)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(json.dumps(summary, indent=2, default=str) + "\n", encoding="utf-8")
        logger.info("Corpus summary saved to %s", out)
    _emit(
        args,
        summary,
        f"corpus seed {seed}: {len(results) - len(failed)}/{len(results)} passed"
        + (f"; failed: {', '.join(failed)}" if failed else ""),
    )
    return EXIT_OK if not failed else EXIT_NEGATIVE


def _build_instance(instance: dict) -> nx.Graph:
    kind = instance.get("kind", "bipartite")
    if kind == "plain":
        return gadget_plain(instance["k"], instance.get("ell", 1), instance["nprime"]).graph
    if kind == "bipartite":
        return gadget_bipartite(
            instance.get("i", 1), instance.get("j", 0), instance.get("ell", 1), instance["nprime"]
        ).graph
    if kind == "file":
        return _load_any_graph(str(PROJECT_ROOT / instance["path"]))
    raise ConfigError(f"unknown instance kind {kind!r}")


def _instance_name(instance: dict) -> str:
    if instance.get("kind") == "file":
        return Path(instance["path"]).name
    params = ",".join(f"{k}={v}" for k, v in instance.items() if k != "kind")
    return f"{instance.get('kind', 'bipartite')}({params})"


def cmd_experiment(args: argparse.Namespace, config: dict, run_data: dict) -> int:
    if args.list:
        experiments = list_experiments()
        if not experiments:
            print("No experiments found in experiments/ directory.")
            return EXIT_NEGATIVE
        print("Available experiments:")
        for e in experiments:
            print(f"  {e['slug']:20s} {e['name']} - {e['description']}")
        return EXIT_OK
    if not args.name:
        raise ConfigError("experiment needs --name <slug> or --list")

    experiment = load_experiment(args.name)
    gate = resolve_gate(config, "forest_search", args.gate)
    results = []
    for instance in experiment["instances"]:
        name = _instance_name(instance)
        try:
            report = forest_quotient_search(
                _build_instance(instance),
                experiment["width"],
                experiment["max_layers"],
                independent_layers=experiment["independent_layers"],
                gate=gate,
                instance=name,
            )
            results.append(report.to_dict())
        except GateExceeded as exc:
            logger.warning("[%s] %s", name, exc)
            results.append({
                "instance": name, "gate": gate, "outcome": "GATED", "witness": None,
                "nodes_explored": 0, "wall_time_ms": 0.0,
            })
        print(f"[{experiment['slug']}] {name}: {results[-1]['outcome']}")

    report_path = generate_search_report(
        results, experiment, PROJECT_ROOT / config["reports_dir"]
    )
    run_data.update(experiment=experiment["slug"], results=results, report=report_path)
    if report_path:
        print(f"[{experiment['slug']}] Report: {report_path}")
    return EXIT_OK


_COMMANDS = {
    "check": cmd_check,
    "decompose": cmd_decompose,
    "verify": cmd_verify,
    "gadget": cmd_gadget,
    "oracle": cmd_oracle,
    "corpus": cmd_corpus,
    "experiment": cmd_experiment,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="Enable DEBUG logging")
    common.add_argument(
        "--format", choices=("text", "json"), default="text", help="stdout rendering"
    )
    common.add_argument(
        "--gate", type=int, default=None,
        help="Size gate for the invoked search (beats SQUAREPROD_GATE and config.yaml)",
    )
    common.add_argument("--config", default=None, help="Path to an alternative config.yaml")

    parser = argparse.ArgumentParser(
        description="Product structure of squaregraphs: recognition, decomposition, oracles",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="Is the .spg file a squaregraph?")
    p.add_argument("file")

    p = sub.add_parser("decompose", parents=[common], help="Thin partition and certificate")
    p.add_argument("file")
    p.add_argument("--root", type=int, default=None, help="Outer root vertex")
    p.add_argument("--out", default=None, help="Certificate JSON path")
    p.add_argument("--svg", default=None, help="Also draw the leveled embedding(s)")

    p = sub.add_parser("verify", parents=[common], help="Re-check a certificate")
    p.add_argument("graph")
    p.add_argument("cert")

    p = sub.add_parser("gadget", parents=[common], help="Build a lower-bound gadget")
    p.add_argument("--kind", choices=("plain", "bipartite"), required=True)
    p.add_argument("-k", type=int, default=1, help="Recursion depth (plain)")
    p.add_argument("-i", type=int, default=1, help="Red-apex levels (bipartite)")
    p.add_argument("-j", type=int, default=0, help="Blue-apex levels (bipartite)")
    p.add_argument("-l", "--ell", type=int, default=1, help="Width the gadget defeats")
    p.add_argument("--nprime", type=int, required=True, help="Base path order")
    p.add_argument("--out", default=None, help=".graph path; metadata goes next to it")

    p = sub.add_parser("oracle", help="Exhaustive small-scale searches")
    oracles = p.add_subparsers(dest="oracle", required=True)
    q = oracles.add_parser("forest-quotient", parents=[common])
    q.add_argument("graph")
    q.add_argument("--width", type=int, default=1)
    q.add_argument("--max-layers", type=int, default=None)
    q.add_argument(
        "--strong", action="store_true", help="Allow edges inside a layer (strong product)"
    )
    q = oracles.add_parser("pathwidth", parents=[common])
    q.add_argument("graph")
    q = oracles.add_parser("minor", parents=[common])
    q.add_argument("host")
    q.add_argument("target", nargs="?", default=None)
    q.add_argument("-s", type=int, default=2, help="Largest branch set")
    q.add_argument(
        "--join", default=None, metavar="N,I,J", help="Target P_N + K_{I,J} instead of a file"
    )
    q = oracles.add_parser("inject", parents=[common])
    q.add_argument("pattern")
    q.add_argument("host")

    p = sub.add_parser("corpus", parents=[common], help="Decompose the seeded test corpus")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=None, help="0 = one per CPU")
    p.add_argument("--out", default=None, help="Summary JSON path")

    p = sub.add_parser("experiment", parents=[common], help="Run a forest-quotient sweep")
    p.add_argument("--name", default=None)
    p.add_argument("--list", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    setup_logging(args.verbose)
    load_dotenv(PROJECT_ROOT / ".env", override=True)

    run_data: dict = {
        "command": args.command,
        "argv": sys.argv[1:] if argv is None else argv,
        "started_at": datetime.now().isoformat(timespec="seconds"),
        "errors": [],
    }
    start = time.perf_counter()
    try:
        config = load_config(Path(args.config) if args.config else None)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    try:
        code = _COMMANDS[args.command](args, config, run_data)
    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return 130
    except (ProductStructureError, OSError, ValueError) as exc:
        code = exit_code_for(exc)
        run_data["errors"].append(f"{type(exc).__name__}: {exc}")
        print(f"error: {exc}", file=sys.stderr)

    run_data["exit_code"] = code
    run_data["wall_time_ms"] = round((time.perf_counter() - start) * 1000, 3)
    if args.command != "experiment" or not args.list:
        log_path = save_run_log(run_data, args.command, PROJECT_ROOT / config["logs_dir"])
        logger.debug("Run log saved to %s", log_path)
    return code


if __name__ == "__main__":
    sys.exit(main())
