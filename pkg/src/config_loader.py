"""Load global settings, gate overrides, and experiment definitions."""

import logging
import os
from collections.abc import Mapping
from pathlib import Path

import yaml

from src.errors import ConfigError

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parent.parent
EXPERIMENTS_DIR = PROJECT_ROOT / "experiments"
GLOBAL_CONFIG_PATH = PROJECT_ROOT / "config.yaml"

GATE_ENV_VAR = "SQUAREPROD_GATE"

GATE_NAMES = ("outerplanar", "injection", "minor", "pathwidth", "forest_search")

_GLOBAL_DEFAULTS = {
    "outerplanar_gate": 14,
    "injection_gate": 10,
    "minor_gate": 12,
    "pathwidth_gate": 20,
    "forest_search_gate": 10,
    "seed": 0,
    "workers": 0,
    "reports_dir": "reports",
    "logs_dir": "logs",
    "corpus": {
        "grid_sizes": [2, 6],
        "nonisomorphic_tree_order": 8,
        "random_tree_sizes": [2, 12],
        "random_tree_count": 10,
        "glued_count": 200,
        "glued_squares": [1, 90],
    },
}

_EXPERIMENT_KINDS = ("forest-quotient",)


def load_config(path: Path | None = None, env: Mapping[str, str] | None = None) -> dict:
    """Global config: built-in defaults <- config.yaml <- SQUAREPROD_GATE.

    Raises:
        ConfigError: unreadable YAML, a non-integer gate, or a malformed
            SQUAREPROD_GATE value.
    """
    path = Path(path) if path else GLOBAL_CONFIG_PATH
    if not path.exists():
        logger.warning("Global config not found at %s, using defaults", path)
        config: dict = {}
    else:
        try:
            with open(path, encoding="utf-8") as f:
                config = yaml.safe_load(f) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"cannot parse {path}: {exc}") from exc
        if not isinstance(config, dict):
            raise ConfigError(f"{path} must hold a mapping")

    for key, default in _GLOBAL_DEFAULTS.items():
        if isinstance(default, dict):
            config[key] = {**default, **(config.get(key) or {})}
        else:
            config.setdefault(key, default)

    for name in GATE_NAMES:
        value = config[f"{name}_gate"]
        if not isinstance(value, int) or value < 0:
            raise ConfigError(f"{name}_gate must be a non-negative integer, got {value!r}")

    env = os.environ if env is None else env
    raw = env.get(GATE_ENV_VAR, "").strip()
    if raw:
        overrides = parse_gate_overrides(raw)
        config.update({f"{name}_gate": value for name, value in overrides.items()})
        logger.info("Gate overrides from %s: %s", GATE_ENV_VAR, overrides)
    return config


def parse_gate_overrides(raw: str) -> dict[str, int]:
    """'12' sets every gate; 'pathwidth=18,minor=10' sets the named ones."""
    raw = raw.strip()
    if raw.isdigit():
        return {name: int(raw) for name in GATE_NAMES}
    overrides = {}
    for item in raw.split(","):
        name, sep, value = item.partition("=")
        name = name.strip().removesuffix("_gate")
        if not sep or name not in GATE_NAMES or not value.strip().isdigit():
            raise ConfigError(
                f"bad {GATE_ENV_VAR} entry {item!r}; expected an integer or "
                f"name=value with name in {', '.join(GATE_NAMES)}"
            )
        overrides[name] = int(value)
    return overrides


def resolve_gate(config: dict, name: str, cli_gate: int | None = None) -> int:
    """--gate beats the environment, which already beats config.yaml."""
    if cli_gate is not None:
        return cli_gate
    return config[f"{name}_gate"]


def load_experiment(slug: str, experiments_dir: Path | None = None) -> dict:
    """Load experiments/<slug>/experiment.yaml with defaults filled in.

    Raises:
        ConfigError: unknown slug (the message lists the available ones), or
            a definition with an unknown kind or no instances.
    """
    experiments_dir = Path(experiments_dir) if experiments_dir else EXPERIMENTS_DIR
    path = experiments_dir / slug / "experiment.yaml"
    if not path.exists():
        available = [e["slug"] for e in list_experiments(experiments_dir)]
        raise ConfigError(
            f"experiment {slug!r} not found; available: {', '.join(available) or '(none)'}"
        )
    with open(path, encoding="utf-8") as f:
        data = yaml.safe_load(f) or {}

    data.setdefault("name", slug)
    data.setdefault("description", "")
    data.setdefault("kind", "forest-quotient")
    data.setdefault("width", 1)
    data.setdefault("max_layers", None)
    data.setdefault("independent_layers", True)
    data["slug"] = slug
    if data["kind"] not in _EXPERIMENT_KINDS:
        raise ConfigError(f"experiment {slug!r}: unknown kind {data['kind']!r}")
    if not data.get("instances"):
        raise ConfigError(f"experiment {slug!r} lists no instances")
    return data


def list_experiments(experiments_dir: Path | None = None) -> list[dict]:
    """All experiments (skipping _template and other _-prefixed folders).

    Returns list of {slug, name, description} dicts.
    """
    experiments_dir = Path(experiments_dir) if experiments_dir else EXPERIMENTS_DIR
    if not experiments_dir.exists():
        return []

    experiments = []
    for entry in sorted(experiments_dir.iterdir()):
        if not entry.is_dir() or entry.name.startswith("_"):
            continue
        definition = entry / "experiment.yaml"
        if not definition.exists():
            continue
        with open(definition, encoding="utf-8") as f:
            config = yaml.safe_load(f) or {}
        experiments.append({
            "slug": entry.name,
            "name": config.get("name", entry.name),
            "description": config.get("description", ""),
        })
    return experiments
