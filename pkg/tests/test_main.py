import json
from pathlib import Path

import pytest
import yaml

from src.main import EXIT_GATE, EXIT_INPUT, EXIT_NEGATIVE, EXIT_OK, main


@pytest.fixture
def config_path(tmp_path, small_config, monkeypatch) -> str:
    monkeypatch.delenv("SQUAREPROD_GATE", raising=False)
    path = tmp_path / "config.yaml"
    path.write_text(yaml.safe_dump(small_config), encoding="utf-8")
    return str(path)


def _run(config_path, *argv) -> int:
    return main([*argv, "--config", config_path])


def test_check(config_path, samples_dir, capsys):
    assert _run(config_path, "check", str(samples_dir / "grid3x3.spg")) == EXIT_OK
    assert "squaregraph: yes" in capsys.readouterr().out
    assert _run(config_path, "check", str(samples_dir / "k4.spg")) == EXIT_NEGATIVE


def test_check_json_output(config_path, samples_dir, capsys):
    code = _run(config_path, "check", str(samples_dir / "k4.spg"), "--format", "json")
    assert code == EXIT_NEGATIVE
    data = json.loads(capsys.readouterr().out)
    assert data["squaregraph"] is False
    assert len(data["face"]) == 3


def test_unreadable_input_exits_two(config_path, tmp_path, capsys):
    broken = tmp_path / "broken.spg"
    broken.write_text("V 2\n0: 1\n1: 0 zz\n", encoding="ascii")
    assert _run(config_path, "check", str(broken)) == EXIT_INPUT
    assert "line 3" in capsys.readouterr().err
    assert _run(config_path, "check", str(tmp_path / "missing.spg")) == EXIT_INPUT


def test_decompose_then_verify(config_path, samples_dir, tmp_path, small_config):
    cert = tmp_path / "grid.json"
    svg = tmp_path / "grid.svg"
    grid = str(samples_dir / "grid3x3.spg")
    assert _run(config_path, "decompose", grid, "--out", str(cert), "--svg", str(svg)) == EXIT_OK
    assert json.loads(cert.read_text())["mode"] == "semistrong"
    assert svg.exists()
    assert _run(config_path, "verify", grid, str(cert)) == EXIT_OK

    data = json.loads(cert.read_text())
    data["parts"] = [[v] for v in range(9)]
    cert.write_text(json.dumps(data))
    assert _run(config_path, "verify", grid, str(cert)) == EXIT_NEGATIVE

    logs = list((Path(small_config["logs_dir"]) / "decompose").glob("*.json"))
    assert logs
    assert json.loads(logs[0].read_text())["exit_code"] == EXIT_OK


def test_decompose_rejections(config_path, samples_dir):
    assert _run(config_path, "decompose", str(samples_dir / "k4.spg")) == EXIT_NEGATIVE
    grid = str(samples_dir / "grid3x3.spg")
    assert _run(config_path, "decompose", grid, "--root", "4") == EXIT_INPUT
    assert _run(config_path, "decompose", grid, "--root", "999") == EXIT_INPUT


def test_decompose_two_components_draws_two_svgs(config_path, samples_dir, tmp_path):
    svg = tmp_path / "two.svg"
    assert _run(
        config_path, "decompose", str(samples_dir / "two_grids.spg"), "--svg", str(svg)
    ) == EXIT_OK
    assert (tmp_path / "two_0.svg").exists()
    assert (tmp_path / "two_1.svg").exists()


def test_gadget_files(config_path, tmp_path):
    out = tmp_path / "g.graph"
    code = _run(
        config_path, "gadget", "--kind", "bipartite", "-i", "1", "-j", "0",
        "--nprime", "5", "--out", str(out),
    )
    assert code == EXIT_OK
    assert out.read_text().startswith("V 6\n")
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["apex_id"] == 5
    assert out.with_suffix(".spg").exists()


def test_bad_gadget_parameters(config_path):
    assert _run(config_path, "gadget", "--kind", "plain", "-k", "0", "--nprime", "3") == EXIT_INPUT


def test_oracle_pathwidth(config_path, samples_dir, capsys):
    assert _run(config_path, "oracle", "pathwidth", str(samples_dir / "p5.graph")) == EXIT_OK
    assert capsys.readouterr().out.strip().splitlines()[-1] == "1"


def test_oracle_forest_quotient(config_path, samples_dir):
    p5 = str(samples_dir / "p5.graph")
    triangle = str(samples_dir / "triangle.graph")
    assert _run(config_path, "oracle", "forest-quotient", p5) == EXIT_OK
    assert _run(config_path, "oracle", "forest-quotient", triangle) == EXIT_NEGATIVE
    assert _run(config_path, "oracle", "forest-quotient", triangle, "--strong") == EXIT_OK


def test_oracle_gate(config_path, samples_dir):
    p5 = str(samples_dir / "p5.graph")
    assert _run(config_path, "oracle", "inject", p5, p5, "--gate", "2") == EXIT_GATE
    assert _run(config_path, "oracle", "inject", p5, p5) == EXIT_OK


def test_oracle_gate_from_environment(config_path, samples_dir, monkeypatch):
    monkeypatch.setenv("SQUAREPROD_GATE", "pathwidth=3")
    assert _run(config_path, "oracle", "pathwidth", str(samples_dir / "p5.graph")) == EXIT_GATE


def test_oracle_minor(config_path, samples_dir):
    triangle = str(samples_dir / "triangle.graph")
    p5 = str(samples_dir / "p5.graph")
    assert _run(config_path, "oracle", "minor", p5, p5) == EXIT_OK
    assert _run(config_path, "oracle", "minor", p5, triangle) == EXIT_NEGATIVE


def test_corpus(config_path, tmp_path):
    out = tmp_path / "corpus.json"
    assert _run(config_path, "corpus", "--workers", "1", "--out", str(out)) == EXIT_OK
    summary = json.loads(out.read_text())
    assert summary["failed"] == []
    assert summary["instances"] == len(summary["results"]) == 16


def test_experiment_list_and_unknown(config_path, capsys):
    assert _run(config_path, "experiment", "--list") == EXIT_OK
    assert "forest_quotient" in capsys.readouterr().out
    assert _run(config_path, "experiment", "--name", "no_such_sweep") == EXIT_INPUT
    assert _run(config_path, "experiment") == EXIT_INPUT


def test_oracle_minor_join_target(config_path, samples_dir):
    g10 = str(samples_dir / "g10.graph")
    p5 = str(samples_dir / "p5.graph")
    assert _run(config_path, "oracle", "minor", g10, "--join", "2,1,0") == EXIT_OK
    assert _run(config_path, "oracle", "minor", p5, "--join", "2,1,0") == EXIT_NEGATIVE
    assert _run(config_path, "oracle", "minor", p5) == EXIT_INPUT
    assert _run(config_path, "oracle", "minor", p5, p5, "--join", "2,1,0") == EXIT_INPUT
    assert _run(config_path, "oracle", "minor", p5, "--join", "2,x") == EXIT_INPUT
