from __future__ import annotations

import json
from pathlib import Path

import pytest

from assignpmas.cli import main
from assignpmas.config import get_settings

GAMMA = "6 3\n5 0\n"
DOMINANT = "5 3\n2 0\n"
VETO = """players: 4
values:
  "1,2": 2
  "1,3": 3
  "1,4": 4
  "1,2,3": 3
  "1,2,4": 4
  "1,3,4": 5
  "1,2,3,4": 8
"""


def _write(tmp_path: Path, name: str, text: str) -> str:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def test_analyze_prints_full_report(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    code = main(["analyze", _write(tmp_path, "gamma.matrix", GAMMA)])
    out = capsys.readouterr().out
    assert code == 0
    assert "verdict: not-admissible" in out
    assert "kappa = 1/2" in out


def test_pmas_check_exit_codes(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["pmas", "check", _write(tmp_path, "gamma.matrix", GAMMA)]) == 1
    assert "6 < 3+5" in capsys.readouterr().out
    assert main(["pmas", "check", _write(tmp_path, "dominant.matrix", DOMINANT)]) == 0


def test_build_then_verify_scheme(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    matrix = _write(tmp_path, "dominant.matrix", DOMINANT)
    scheme = tmp_path / "scheme.txt"
    assert main(["pmas", "build", matrix, "--point", "3,0,2,0", "--output", str(scheme)]) == 0
    assert scheme.exists()
    assert main(["pmas", "verify", matrix, "--scheme", str(scheme)]) == 0
    assert capsys.readouterr().out.strip().endswith("verdict: valid")

    scheme.write_text(scheme.read_text(encoding="utf-8").replace("S=1 -> 0", "S=1 -> 1"), encoding="utf-8")
    assert main(["pmas", "verify", matrix, "--scheme", str(scheme)]) == 1


def test_build_refusals(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["pmas", "build", _write(tmp_path, "gamma.matrix", GAMMA), "--point", "2,1,4,1"]) == 1
    assert main(["pmas", "build", _write(tmp_path, "dominant.matrix", DOMINANT), "--point", "5,0,0,1"]) == 4
    assert "not in the core" in capsys.readouterr().err


def test_oracle_on_explicit_game(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    game = _write(tmp_path, "veto.game", VETO)
    assert main(["pmas", "oracle", game, "--point", "8,0,0,0"]) == 0
    assert main(["pmas", "oracle", game, "--point", "1,2,2,3"]) == 1
    assert main(["--verbose", "pmas", "oracle", game]) == 0


def test_core_commands(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    matrix = _write(tmp_path, "gamma.matrix", GAMMA)
    assert main(["core", "contains", matrix, "--point", "4,0,4,0"]) == 4
    assert "violated at {2,3}" in capsys.readouterr().out
    assert main(["core", "contains", matrix, "--point", "2,1,4,1"]) == 0
    capsys.readouterr()

    assert main(["core", "vertices", matrix, "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["row_optimal"] == ["3", "2", "3", "0"]
    assert data["vertices"] == [["1", "0", "5", "2"], ["3", "0", "5", "0"], ["3", "2", "3", "0"]]


def test_solution_commands_in_json(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    matrix = _write(tmp_path, "gamma.matrix", GAMMA)
    assert main(["tau", matrix, "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["kappa"] == "1/2"
    assert data["midpoint"] == ["2", "1", "4", "1"]

    assert main(["nucleolus", matrix, "--certificate", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["nucleolus"] == ["7/3", "2/3", "13/3", "2/3"]
    assert data["certificate"]["balanced"] is True

    assert main(["shapley", _write(tmp_path, "veto.game", VETO)]) == 0
    assert "shapley" in capsys.readouterr().out


def test_input_errors_exit_2(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["analyze", _write(tmp_path, "bad.matrix", "1 x\n")]) == 2
    assert "bad.matrix:1:3:" in capsys.readouterr().err
    assert main(["analyze", _write(tmp_path, "game.dat", GAMMA)]) == 2
    assert main(["analyze", _write(tmp_path, "game.dat", GAMMA), "--format", "matrix"]) == 0
    assert main(["pmas", "check", _write(tmp_path, "veto.game", VETO)]) == 2
    assert main(["core", "contains", _write(tmp_path, "g.matrix", GAMMA), "--point", "1,2"]) == 2


def test_size_limit_exits_3(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    wide = _write(tmp_path, "wide.matrix", " ".join(["1"] * 10) + "\n")
    assert main(["pmas", "oracle", wide]) == 3
    assert "at most 10 players" in capsys.readouterr().err


def test_bad_environment_exits_2(monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
    monkeypatch.setenv("PMAS_MAX_PLAYERS", "many")
    get_settings.cache_clear()
    try:
        assert main(["analyze", _write(tmp_path, "gamma.matrix", GAMMA)]) == 2
    finally:
        monkeypatch.delenv("PMAS_MAX_PLAYERS")
        get_settings.cache_clear()


def test_verify_paper_golden_only(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["verify-paper", "--instances", "0"]) == 0
    out = capsys.readouterr().out
    assert "verify-paper seed=7 instances=0" in out
    assert "| golden" in out


def test_verify_paper_json(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["verify-paper", "--instances", "2", "--suite", "midpoint", "coincidence", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert [s["name"] for s in data["suites"]] == ["midpoint", "coincidence"]
    assert data["passed"] is True


def test_analyze_json_keeps_unbalanced_certificate(tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["analyze", _write(tmp_path, "veto.game", VETO), "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["certificates"]["tau_balanced"] is False
    assert data["certificates"]["tau"]
    assert data["certificates"]["nucleolus_balanced"] is True
