from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from assignpmas.core.assignment import AssignmentGame
from assignpmas.core.coalition import Coalition
from assignpmas.core.errors import ParseError
from assignpmas.core.pmas import Coverage
from assignpmas.io.parser import (
    InputFormat,
    detect_format,
    load_input,
    load_scheme,
    parse_game_text,
    parse_matrix_text,
    parse_point,
    parse_scheme_text,
)


def test_matrix_with_comments_and_separators() -> None:
    m = parse_matrix_text("# gamma\n6 3\n\n5, 1/2\n")
    assert m.rows == 2 and m.cols == 2
    assert m.entries[1] == (5, Fraction(1, 2))


def test_matrix_errors_carry_positions() -> None:
    with pytest.raises(ParseError) as info:
        parse_matrix_text("6 x\n", "m.matrix")
    assert (info.value.line, info.value.column) == (1, 3)
    assert str(info.value) == "m.matrix:1:3: not an exact rational: 'x'"

    with pytest.raises(ParseError) as info:
        parse_matrix_text("1 -2\n")
    assert info.value.column == 3

    with pytest.raises(ParseError) as info:
        parse_matrix_text("1 2\n3\n")
    assert info.value.line == 2

    with pytest.raises(ParseError):
        parse_matrix_text("# nothing\n")
    with pytest.raises(ParseError):
        parse_matrix_text("0.5/2\n")


def test_game_document_in_yaml() -> None:
    g = parse_game_text('players: 3\nvalues:\n  "1,2": 1\n  "1,2,3": 3/2\n  "3": 0.25\n')
    assert g.player_count == 3
    assert g.worth(Coalition.full(3)) == Fraction(3, 2)
    assert g.worth(Coalition.of(2)) == Fraction(1, 4)
    assert g.worth(Coalition.of(0, 2)) == 0


def test_game_document_with_names_and_json() -> None:
    g = parse_game_text("players: [ann, bob]\nvalues:\n  ann,bob: 2\n  ann: 1\n")
    assert g.names == ("ann", "bob")
    assert g.worth(Coalition.of(0, 1)) == 2

    g = parse_game_text('{"players": 2, "values": {"1,2": "5", "2": 1}}')
    assert g.worth(Coalition.of(0, 1)) == 5


def test_game_document_errors() -> None:
    with pytest.raises(ParseError) as info:
        parse_game_text('players: 2\nvalues:\n  "1,2": 1\n  "1,2": 2\n')
    assert info.value.line == 4

    with pytest.raises(ParseError):
        parse_game_text('players: 3\nvalues:\n  "1,4": 1\n')
    with pytest.raises(ParseError):
        parse_game_text("players: 2\n")
    with pytest.raises(ParseError):
        parse_game_text("players: 2\nvalues: [1, 2]\n")
    with pytest.raises(ParseError):
        parse_game_text('players: 2\nvalues:\n  "": 1\n')
    with pytest.raises(ParseError):
        parse_game_text("players: [a\n")


def test_points() -> None:
    assert parse_point("1/2, 3 ;4", expected=3) == (Fraction(1, 2), 3, 4)
    with pytest.raises(ParseError):
        parse_point("1,2", expected=3)
    with pytest.raises(ParseError):
        parse_point("1,two")


def test_scheme_records() -> None:
    scheme = parse_scheme_text("S=1 -> 0\nS=2 -> 0\n# grand\nS=1,2 -> 1,3\n", 2)
    assert scheme.coverage is Coverage.ALL
    assert scheme[Coalition.of(0, 1)] == (1, 3)

    partial = parse_scheme_text("S=1,2 -> 1,3\n", 2)
    assert partial.coverage is Coverage.ESSENTIAL

    with pytest.raises(ParseError) as info:
        parse_scheme_text("S=1 -> 0\nbad line\n", 2)
    assert info.value.line == 2
    with pytest.raises(ParseError):
        parse_scheme_text("S=1,2 -> 1\n", 2)
    with pytest.raises(ParseError):
        parse_scheme_text("S=1 -> 0\nS=1 -> 0\n", 2)


def test_format_detection() -> None:
    assert detect_format(Path("a.matrix")) is InputFormat.MATRIX
    assert detect_format(Path("a.YAML")) is InputFormat.GAME
    assert detect_format(Path("a.dat"), "game") is InputFormat.GAME
    with pytest.raises(ParseError):
        detect_format(Path("a.dat"))


def test_load_from_files(tmp_path: Path) -> None:
    path = tmp_path / "gamma.matrix"
    path.write_text("6 3\n5 0\n", encoding="utf-8")
    loaded = load_input(path)
    assert isinstance(loaded.assignment, AssignmentGame)
    assert loaded.matrix is not None and loaded.matrix.rows == 2

    game_path = tmp_path / "veto.game"
    game_path.write_text('players: 2\nvalues:\n  "1,2": 1\n', encoding="utf-8")
    assert load_input(game_path).assignment is None

    scheme_path = tmp_path / "scheme.txt"
    scheme_path.write_text("S=1,2 -> 1,0\n", encoding="utf-8")
    assert len(load_scheme(scheme_path, 2)) == 1

    with pytest.raises(ParseError):
        load_input(tmp_path / "missing.matrix")
