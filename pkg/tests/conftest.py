import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.config_loader import load_config  # noqa: E402
from src.corpus import build_corpus  # noqa: E402
from src.planegraph import PlaneGraph, load_plane_graph  # noqa: E402

SAMPLES = ROOT / "samples"


@pytest.fixture
def samples_dir() -> Path:
    return SAMPLES


@pytest.fixture
def grid3() -> PlaneGraph:
    return load_plane_graph(SAMPLES / "grid3x3.spg")


@pytest.fixture
def square() -> PlaneGraph:
    return PlaneGraph({0: [1, 3], 1: [2, 0], 2: [1, 3], 3: [0, 2]}, [(0, 3)])


@pytest.fixture
def small_config(tmp_path: Path) -> dict:
    """Global config with a small corpus, writing logs and reports under tmp_path."""
    return {
        "outerplanar_gate": 14,
        "injection_gate": 10,
        "minor_gate": 12,
        "pathwidth_gate": 20,
        "forest_search_gate": 10,
        "seed": 0,
        "workers": 1,
        "reports_dir": str(tmp_path / "reports"),
        "logs_dir": str(tmp_path / "logs"),
        "corpus": {
            "grid_sizes": [2, 3],
            "nonisomorphic_tree_order": 5,
            "random_tree_sizes": [2, 6],
            "random_tree_count": 3,
            "glued_count": 6,
            "glued_squares": [1, 6],
        },
    }


@pytest.fixture(scope="session")
def corpus() -> list[tuple[str, PlaneGraph]]:
    """The default seeded corpus from the shipped config.yaml."""
    return build_corpus(load_config(env={}), seed=0)


@pytest.fixture(scope="session")
def tiny_corpus(corpus) -> list[tuple[str, PlaneGraph]]:
    return [(name, g) for name, g in corpus if len(g) <= 10]
