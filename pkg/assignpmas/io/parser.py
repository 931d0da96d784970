"""
Input parsing - surplus matrices, explicit games, payoff points and schemes.

Every failure is a `ParseError` carrying the 1-based line and column of the offending token.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import yaml

from ..core.assignment import AssignmentGame, SurplusMatrix
from ..core.coalition import Coalition
from ..core.errors import ParseError
from ..core.game import ExplicitGame, TUGame
from ..core.pmas import Coverage, Scheme
from ..core.rational import Payoff, parse_rational

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"[^,;\s]+")
_SCHEME_RE = re.compile(r"^\s*S\s*=\s*(?P<members>.*?)\s*->\s*(?P<payoffs>.*?)\s*$")


class InputFormat(str, Enum):
    MATRIX = "matrix"
    GAME = "game"


_SUFFIXES = {
    ".matrix": InputFormat.MATRIX,
    ".txt": InputFormat.MATRIX,
    ".game": InputFormat.GAME,
    ".json": InputFormat.GAME,
    ".yaml": InputFormat.GAME,
    ".yml": InputFormat.GAME,
}


def detect_format(path: Path, override: Optional[str] = None) -> InputFormat:
    if override:
        return InputFormat(override)
    fmt = _SUFFIXES.get(path.suffix.lower())
    if fmt is None:
        raise ParseError(f"cannot tell the format of {path.name}; pass --format matrix|game", source=str(path))
    return fmt


def _rational_at(token: str, line: int, column: int, source: str) -> Fraction:
    try:
        return parse_rational(token)
    except ValueError as exc:
        raise ParseError(str(exc), line, column, source) from exc


def _tokens(text: str) -> List[tuple[str, int]]:
    return [(m.group(0), m.start() + 1) for m in _TOKEN_RE.finditer(text)]


def parse_matrix_text(text: str, source: str = "<input>") -> SurplusMatrix:
    """One row per line, entries split by commas or whitespace; `#` lines are comments."""

    rows: List[List[Fraction]] = []
    width: Optional[int] = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        row = []
        for token, column in _tokens(line):
            value = _rational_at(token, lineno, column, source)
            if value < 0:
                raise ParseError(f"surplus entries must be nonnegative, got {token}", lineno, column, source)
            row.append(value)
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"row has {len(row)} entries, expected {width}", lineno, 1, source)
        rows.append(row)
    if not rows:
        raise ParseError("matrix has no rows", 1, 1, source)
    return SurplusMatrix.from_rows(rows)


def _mark(node: Optional[yaml.Node]) -> tuple[int, int]:
    if node is None:
        return 1, 1
    return node.start_mark.line + 1, node.start_mark.column + 1


def _mapping_entries(node: Optional[yaml.Node]) -> Dict[str, tuple[yaml.Node, yaml.Node]]:
    if not isinstance(node, yaml.MappingNode):
        return {}
    return {str(key.value): (key, value) for key, value in node.value if isinstance(key, yaml.ScalarNode)}


def _parse_players(raw: object, node: Optional[yaml.Node], source: str) -> tuple[int, Optional[List[str]]]:
    line, column = _mark(node)
    if isinstance(raw, bool):
        raise ParseError("'players' must be an integer or a list of names", line, column, source)
    if isinstance(raw, int):
        if raw < 0:
            raise ParseError(f"'players' must be nonnegative, got {raw}", line, column, source)
        return raw, None
    if isinstance(raw, list):
        names = [str(name) for name in raw]
        if len(set(names)) != len(names):
            raise ParseError("player names must be distinct", line, column, source)
        return len(names), names
    raise ParseError("'players' must be an integer or a list of names", line, column, source)


def _parse_coalition_key(
    text: str, n: int, names: Optional[Sequence[str]], line: int, column: int, source: str
) -> Coalition:
    members: List[int] = []
    for part in (p.strip() for p in text.split(",")):
        if not part:
            continue
        if names is not None and part in names:
            members.append(names.index(part))
            continue
        if not part.isdigit():
            raise ParseError(f"unknown player {part!r} in coalition {text!r}", line, column, source)
        label = int(part)
        if not 1 <= label <= n:
            raise ParseError(f"player {label} outside 1..{n} in coalition {text!r}", line, column, source)
        members.append(label - 1)
    if len(set(members)) != len(members):
        raise ParseError(f"coalition {text!r} repeats a player", line, column, source)
    return Coalition.from_members(members)


def parse_game_text(text: str, source: str = "<input>") -> ExplicitGame:
    """`players` (count or names) and `values` (coalition -> rational); YAML or JSON syntax."""

    try:
        data = yaml.safe_load(text)
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        problem = getattr(exc, "problem", None) or str(exc)
        line, column = (mark.line + 1, mark.column + 1) if mark is not None else (1, 1)
        raise ParseError(f"invalid game document: {problem}", line, column, source) from exc

    if not isinstance(data, dict):
        raise ParseError("game document must be a mapping with 'players' and 'values'", *_mark(root), source)
    entries = _mapping_entries(root)
    for key in ("players", "values"):
        if key not in data:
            raise ParseError(f"game document is missing {key!r}", *_mark(root), source)

    n, names = _parse_players(data["players"], entries["players"][1], source)
    values_node = entries["values"][1]
    if not isinstance(values_node, yaml.MappingNode):
        raise ParseError("'values' must be a mapping of coalition to worth", *_mark(values_node), source)

    values: Dict[Coalition, Fraction] = {}
    for key_node, value_node in values_node.value:
        line, column = _mark(key_node)
        if not isinstance(key_node, yaml.ScalarNode):
            raise ParseError("coalition keys must be comma-separated player lists", line, column, source)
        coalition = _parse_coalition_key(str(key_node.value), n, names, line, column, source)
        if coalition in values:
            raise ParseError(f"coalition {coalition} is listed twice", line, column, source)
        if not isinstance(value_node, yaml.ScalarNode):
            raise ParseError(f"worth of {coalition} must be a rational", *_mark(value_node), source)
        worth = _rational_at(str(value_node.value), *_mark(value_node), source)
        if not coalition and worth != 0:
            raise ParseError("the empty coalition must be worth 0", line, column, source)
        values[coalition] = worth
    logger.debug("parsed explicit game: n=%d, %d listed coalitions", n, len(values))
    return ExplicitGame(n, values, names)


def parse_point(text: str, expected: Optional[int] = None, source: str = "--point") -> Payoff:
    """Comma or whitespace separated rationals; a `;` between the two sides is ignored."""

    point = tuple(_rational_at(token, 1, column, source) for token, column in _tokens(text))
    if expected is not None and len(point) != expected:
        raise ParseError(f"point has {len(point)} entries, expected {expected}", 1, 1, source)
    return point


def parse_scheme_text(text: str, player_count: int, source: str = "<scheme>") -> Scheme:
    allocations: Dict[Coalition, Payoff] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        match = _SCHEME_RE.match(line)
        if match is None:
            raise ParseError("expected 'S=<players> -> <payoffs>'", lineno, 1, source)
        column = match.start("members") + 1
        s = _parse_coalition_key(match.group("members"), player_count, None, lineno, column, source)
        if not s:
            raise ParseError("scheme records need a nonempty coalition", lineno, column, source)
        if s in allocations:
            raise ParseError(f"coalition {s} is listed twice", lineno, column, source)
        offset = match.start("payoffs")
        payoff = tuple(
            _rational_at(token, lineno, offset + column, source) for token, column in _tokens(match.group("payoffs"))
        )
        if len(payoff) != len(s):
            raise ParseError(f"{s} needs {len(s)} payoffs, got {len(payoff)}", lineno, offset + 1, source)
        allocations[s] = payoff
    coverage = Coverage.ALL if len(allocations) == (1 << player_count) - 1 else Coverage.ESSENTIAL
    return Scheme(player_count, allocations, coverage)


@dataclass(frozen=True)
class LoadedInput:
    path: Path
    format: InputFormat
    game: TUGame
    matrix: Optional[SurplusMatrix] = None

    @property
    def assignment(self) -> Optional[AssignmentGame]:
        return self.game if isinstance(self.game, AssignmentGame) else None


def _read(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror or exc}", source=str(path)) from exc


def load_input(path: Path, fmt: Optional[str] = None) -> LoadedInput:
    path = Path(path)
    kind = detect_format(path, fmt)
    text = _read(path)
    if kind is InputFormat.MATRIX:
        matrix = parse_matrix_text(text, str(path))
        return LoadedInput(path, kind, AssignmentGame(matrix), matrix)
    return LoadedInput(path, kind, parse_game_text(text, str(path)))


def load_scheme(path: Path, player_count: int) -> Scheme:
    path = Path(path)
    return parse_scheme_text(_read(path), player_count, str(path))
