"""Structural PMAS-admissibility of a surplus matrix.

After dropping null rows and columns, every connected component of the support graph
(rows and columns as nodes, positive entries as edges) must be a single row, a single
column, or a Gamma-shaped block whose corner dominates: a[i1][j1] >= a[i1][l] + a[k][j1].
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import networkx as nx

from .assignment import AssignmentGame, SurplusMatrix
from .coalition import Coalition
from .errors import NotAdmissibleError
from .rational import ZERO, format_rational

logger = logging.getLogger(__name__)


class BlockKind(str, Enum):
    ROW_VECTOR = "row-vector"
    COL_VECTOR = "col-vector"
    GAMMA_DOMINANT = "gamma-dominant"


class WitnessKind(str, Enum):
    POSITIVE_SQUARE = "positive-2x2"
    CORNER_VIOLATION = "corner-violation"


@dataclass(frozen=True)
class Block:
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    kind: BlockKind
    corner: Optional[tuple[int, int]] = None

    def players(self, row_count: int) -> tuple[int, ...]:
        return self.rows + tuple(row_count + j for j in self.cols)

    def describe(self, row_count: int) -> str:
        rows = ",".join(str(i + 1) for i in self.rows)
        cols = ",".join(str(row_count + j + 1) for j in self.cols)
        text = f"{self.kind.value} rows={{{rows}}} cols={{{cols}}}"
        if self.corner is not None:
            i, j = self.corner
            text += f" corner=({i + 1},{row_count + j + 1})"
        return text


@dataclass(frozen=True)
class Witness:
    """Refusal certificate.

    POSITIVE_SQUARE: rows (i, k) and cols (j, l) span an all-positive 2x2 submatrix.
    CORNER_VIOLATION: corner (rows[0], cols[0]) with a[i1][j1] < a[i1][l] + a[k][j1],
    where k = rows[1] and l = cols[1].
    """

    kind: WitnessKind
    rows: tuple[int, int]
    cols: tuple[int, int]
    corner: Fraction = ZERO
    row_entry: Fraction = ZERO
    col_entry: Fraction = ZERO

    def describe(self, row_count: Optional[int] = None) -> str:
        if self.kind is WitnessKind.CORNER_VIOLATION:
            return (
                f"{format_rational(self.corner)} < "
                f"{format_rational(self.row_entry)}+{format_rational(self.col_entry)}"
            )
        shift = row_count or 0
        i, k = self.rows
        j, l = self.cols
        return f"2x2 positive submatrix rows {i + 1},{k + 1} cols {shift + j + 1},{shift + l + 1}"

    def to_dict(self) -> Dict[str, object]:
        data: Dict[str, object] = {
            "kind": self.kind.value,
            "rows": [i + 1 for i in self.rows],
            "cols": [j + 1 for j in self.cols],
            "text": self.describe(),
        }
        if self.kind is WitnessKind.CORNER_VIOLATION:
            data["corner"] = format_rational(self.corner)
            data["row_entry"] = format_rational(self.row_entry)
            data["col_entry"] = format_rational(self.col_entry)
        return data


@dataclass(frozen=True)
class BlockDecomposition:
    rows: int
    cols: int
    blocks: tuple[Block, ...]
    null_rows: tuple[int, ...]
    null_cols: tuple[int, ...]
    witness: Optional[Witness] = None

    @property
    def admissible(self) -> bool:
        return self.witness is None

    @property
    def null_players(self) -> tuple[int, ...]:
        return self.null_rows + tuple(self.rows + j for j in self.null_cols)

    @property
    def verdict(self) -> str:
        return "admissible" if self.admissible else "not-admissible"


class BlockClassifier:
    def corner_dominates(self, corner: Fraction, row_entry: Fraction, col_entry: Fraction) -> bool:
        return corner >= row_entry + col_entry

    def classify(self, m: SurplusMatrix) -> BlockDecomposition:
        null_rows = tuple(i for i in range(m.rows) if all(a == 0 for a in m.entries[i]))
        null_cols = tuple(j for j in range(m.cols) if all(m.entries[i][j] == 0 for i in range(m.rows)))

        graph = nx.Graph()
        graph.add_nodes_from(("r", i) for i in range(m.rows) if i not in null_rows)
        graph.add_nodes_from(("c", j) for j in range(m.cols) if j not in null_cols)
        graph.add_edges_from((("r", i), ("c", j)) for i, j in m.positive_cells())

        components = []
        for nodes in nx.connected_components(graph):
            rows = tuple(sorted(idx for side, idx in nodes if side == "r"))
            cols = tuple(sorted(idx for side, idx in nodes if side == "c"))
            components.append((rows, cols))
        components.sort(key=lambda rc: (rc[0][0], rc[1][0]))

        blocks: List[Block] = []
        for rows, cols in components:
            block, witness = self._classify_component(m, rows, cols)
            if witness is not None:
                logger.debug("component rows=%s cols=%s refused: %s", rows, cols, witness.describe())
                return BlockDecomposition(m.rows, m.cols, tuple(blocks), null_rows, null_cols, witness)
            assert block is not None
            blocks.append(block)
        return BlockDecomposition(m.rows, m.cols, tuple(blocks), null_rows, null_cols)

    def _classify_component(
        self, m: SurplusMatrix, rows: Sequence[int], cols: Sequence[int]
    ) -> tuple[Optional[Block], Optional[Witness]]:
        if len(rows) == 1:
            return Block(tuple(rows), tuple(cols), BlockKind.ROW_VECTOR), None
        if len(cols) == 1:
            return Block(tuple(rows), tuple(cols), BlockKind.COL_VECTOR), None

        a = m.entries
        cells = [(i, j) for i in rows for j in cols if a[i][j] > 0]
        corner = next(
            ((i, j) for i, j in cells if all(k == i or l == j for k, l in cells)),
            None,
        )
        if corner is not None:
            i1, j1 = corner
            for k in rows:
                if k == i1 or a[k][j1] == 0:
                    continue
                for l in cols:
                    if l == j1 or a[i1][l] == 0:
                        continue
                    if not self.corner_dominates(a[i1][j1], a[i1][l], a[k][j1]):
                        return None, Witness(
                            WitnessKind.CORNER_VIOLATION, (i1, k), (j1, l), a[i1][j1], a[i1][l], a[k][j1]
                        )
            return Block(tuple(rows), tuple(cols), BlockKind.GAMMA_DOMINANT, corner), None
        return None, self._square_witness(m, rows, cols)

    def _square_witness(self, m: SurplusMatrix, rows: Sequence[int], cols: Sequence[int]) -> Witness:
        a = m.entries
        pairs = [(r, c) for r in itertools.combinations(rows, 2) for c in itertools.combinations(cols, 2)]
        for (i, k), (j, l) in pairs:
            if a[i][j] > 0 and a[i][l] > 0 and a[k][j] > 0 and a[k][l] > 0:
                return Witness(WitnessKind.POSITIVE_SQUARE, (i, k), (j, l))
        # Without a covering corner some Gamma-shaped 2x2 (three positives) must fail dominance.
        for (i, k), (j, l) in pairs:
            cells = {(i, j), (i, l), (k, j), (k, l)}
            zeros = [cell for cell in cells if a[cell[0]][cell[1]] == 0]
            if len(zeros) != 1:
                continue
            zr, zc = zeros[0]
            ci = i if zr == k else k
            cj = j if zc == l else l
            other_row = k if ci == i else i
            other_col = l if cj == j else j
            if not self.corner_dominates(a[ci][cj], a[ci][other_col], a[other_row][cj]):
                return Witness(
                    WitnessKind.CORNER_VIOLATION,
                    (ci, other_row),
                    (cj, other_col),
                    a[ci][cj],
                    a[ci][other_col],
                    a[other_row][cj],
                )
        raise RuntimeError(f"component rows={list(rows)} cols={list(cols)} has no corner and no witness")


def classify_blocks(m: SurplusMatrix) -> BlockDecomposition:
    return BlockClassifier().classify(m)


@dataclass(frozen=True)
class AdmissibleComponents:
    """Block subgames of an admissible game plus the null players attached to no block."""

    games: tuple[AssignmentGame, ...]
    null_players: tuple[int, ...]

    def __iter__(self):
        return iter(self.games)

    def __len__(self) -> int:
        return len(self.games)

    def recomposed_worth(self, s: Coalition) -> Fraction:
        """Sum of component worths over the parts of s (null players contribute nothing)."""

        total = ZERO
        for game in self.games:
            assert game.index_map is not None
            local = Coalition.from_members(k for k, p in enumerate(game.index_map) if p in s)
            total += game.worth(local)
        return total


def decompose_admissible(g: AssignmentGame) -> AdmissibleComponents:
    decomposition = classify_blocks(g.matrix)
    if not decomposition.admissible:
        assert decomposition.witness is not None
        raise NotAdmissibleError(
            f"matrix is not PMAS-admissible: {decomposition.witness.describe(g.row_count)}",
            decomposition.witness,
        )
    games = tuple(g.restrict(block.rows, block.cols) for block in decomposition.blocks)
    return AdmissibleComponents(games, decomposition.null_players)
