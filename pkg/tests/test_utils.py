import pytest

from src.errors import GateExceeded
from src.utils import SearchReport, check_gate, cluster_pairs, has_cycle


def test_cluster_pairs_keeps_first_seen_order():
    clusters = cluster_pairs([3, 1, 2, 5, 4], [(1, 4), (2, 5), (5, 3)])
    assert clusters == [[3, 2, 5], [1, 4]]
    assert cluster_pairs([7], []) == [[7]]


def test_has_cycle():
    assert not has_cycle([(0, 1), (1, 2), (3, 4)])
    assert has_cycle([(0, 1), (1, 2), (2, 0)])
    assert not has_cycle([])
    assert not has_cycle([("a", "b"), ("c", "d"), ("b", "c")])


def test_check_gate():
    check_gate("search", 10, 10)
    with pytest.raises(GateExceeded, match="exceeds gate 10"):
        check_gate("search", 11, 10)


def test_search_report_dict():
    report = SearchReport(instance="p5", gate=10, nodes_explored=3, wall_time_ms=1.23456)
    assert not report.sat
    assert report.to_dict() == {
        "instance": "p5",
        "gate": 10,
        "outcome": "UNSAT",
        "witness": None,
        "nodes_explored": 3,
        "wall_time_ms": 1.235,
    }
