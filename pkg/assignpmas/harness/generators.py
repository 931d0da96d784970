"""Seeded random surplus matrices for the property suites.

Every generator takes a `random.Random` so a suite is reproducible from its seed alone.
Admissible matrices are assembled from row, column and dominant Gamma blocks placed on a
block diagonal, optionally padded with null lines, then shuffled.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional, Sequence

from ..core.assignment import SurplusMatrix
from ..core.blocks import BlockKind

DENOMINATORS = (1, 1, 1, 2, 3)


def random_rational(rng: random.Random, low: int = 1, high: int = 9) -> Fraction:
    """A small positive rational in [low, high] with denominator 1, 2 or 3."""

    q = rng.choice(DENOMINATORS)
    return Fraction(rng.randint(low * q, high * q), q)


def _block(rng: random.Random, kind: BlockKind, rows: int, cols: int) -> List[List[Fraction]]:
    zero = Fraction(0)
    if kind is BlockKind.ROW_VECTOR:
        return [[random_rational(rng) for _ in range(cols)]]
    if kind is BlockKind.COL_VECTOR:
        return [[random_rational(rng)] for _ in range(rows)]
    out = [[zero] * cols for _ in range(rows)]
    for j in range(1, cols):
        out[0][j] = random_rational(rng)
    for i in range(1, rows):
        out[i][0] = random_rational(rng)
    # Corner at least the largest row entry plus the largest column entry.
    row_max = max(out[0][1:])
    col_max = max(out[i][0] for i in range(1, rows))
    out[0][0] = row_max + col_max + rng.choice((Fraction(0), Fraction(0), random_rational(rng, 0, 3)))
    return out


def _block_shape(rng: random.Random, kind: BlockKind, budget: int) -> tuple[int, int]:
    if kind is BlockKind.ROW_VECTOR:
        return 1, rng.randint(1, max(1, min(4, budget - 1)))
    if kind is BlockKind.COL_VECTOR:
        return rng.randint(1, max(1, min(4, budget - 1))), 1
    rows = rng.randint(2, max(2, min(3, budget - 2)))
    cols = rng.randint(2, max(2, min(3, budget - rows)))
    return rows, cols


def assemble(blocks: Sequence[List[List[Fraction]]], null_rows: int = 0, null_cols: int = 0) -> List[List[Fraction]]:
    """Block-diagonal placement followed by all-zero rows and columns."""

    total_rows = sum(len(b) for b in blocks) + null_rows
    total_cols = sum(len(b[0]) for b in blocks) + null_cols
    out = [[Fraction(0)] * total_cols for _ in range(total_rows)]
    r0 = c0 = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, a in enumerate(row):
                out[r0 + i][c0 + j] = a
        r0 += len(b)
        c0 += len(b[0])
    return out


def shuffle_lines(rng: random.Random, rows: List[List[Fraction]]) -> List[List[Fraction]]:
    row_order = list(range(len(rows)))
    col_order = list(range(len(rows[0]) if rows else 0))
    rng.shuffle(row_order)
    rng.shuffle(col_order)
    return [[rows[i][j] for j in col_order] for i in row_order]


def random_admissible_matrix(
    rng: random.Random,
    max_players: int = 10,
    *,
    blocks: Optional[int] = None,
    null_lines: bool = True,
) -> SurplusMatrix:
    """1-3 admissible blocks within `max_players` players, plus optional null rows/columns."""

    count = blocks if blocks is not None else rng.randint(1, 3)
    budget = max_players
    parts: List[List[List[Fraction]]] = []
    for _ in range(count):
        if budget < 2:
            break
        kinds = [BlockKind.ROW_VECTOR, BlockKind.COL_VECTOR]
        if budget >= 4:
            kinds.append(BlockKind.GAMMA_DOMINANT)
        kind = rng.choice(kinds)
        rows, cols = _block_shape(rng, kind, budget)
        parts.append(_block(rng, kind, rows, cols))
        budget -= rows + cols
    null_rows = null_cols = 0
    if null_lines and budget > 0 and rng.random() < 0.5:
        null_rows = rng.randint(0, budget)
        null_cols = rng.randint(0, budget - null_rows)
    return SurplusMatrix.from_rows(shuffle_lines(rng, assemble(parts, null_rows, null_cols)))


def random_violating_matrix(rng: random.Random, max_players: int = 8) -> SurplusMatrix:
    """A non-admissible matrix: a Gamma block with a failing corner or a positive 2x2, among admissible blocks."""

    if rng.random() < 0.5:
        a = random_rational(rng)
        b, c, d = (random_rational(rng) for _ in range(3))
        bad = [[a, b], [c, d]]
    else:
        b, c = random_rational(rng), random_rational(rng)
        corner = b + c - random_rational(rng, 1, 2) / 2
        if corner <= 0:
            corner = (b + c) / 2
        bad = [[corner, b], [c, Fraction(0)]]
    parts = [bad]
    budget = max_players - 4
    if budget >= 2 and rng.random() < 0.5:
        parts.append([[random_rational(rng) for _ in range(rng.randint(1, budget - 1))]])
    return SurplusMatrix.from_rows(shuffle_lines(rng, assemble(parts)))


def random_matrix(
    rng: random.Random,
    max_rows: int = 4,
    max_cols: int = 4,
    *,
    max_players: int = 8,
    zero_rate: float = 0.4,
) -> SurplusMatrix:
    """Arbitrary nonnegative matrix; each entry is zero with probability `zero_rate`."""

    rows = rng.randint(1, max_rows)
    cols = rng.randint(1, max(1, min(max_cols, max_players - rows)))
    return SurplusMatrix.from_rows(
        [
            [Fraction(0) if rng.random() < zero_rate else random_rational(rng) for _ in range(cols)]
            for _ in range(rows)
        ]
    )


def random_positive_square(rng: random.Random) -> SurplusMatrix:
    return SurplusMatrix.from_rows([[random_rational(rng) for _ in range(2)] for _ in range(2)])


def random_diagonal(rng: random.Random, size: int) -> SurplusMatrix:
    zero = Fraction(0)
    diagonal = [random_rational(rng) for _ in range(size)]
    return SurplusMatrix.from_rows([[diagonal[i] if i == j else zero for j in range(size)] for i in range(size)])


def gamma_triple(rng: random.Random, dominant: bool) -> tuple[Fraction, Fraction, Fraction]:
    """(a, b, c) with a >= b + c > 0 when dominant, else b + c > a > 0."""

    b, c = random_rational(rng), random_rational(rng)
    if dominant:
        return b + c + rng.choice((Fraction(0), random_rational(rng, 0, 4))), b, c
    a = (b + c) * Fraction(rng.randint(1, 11), 12)
    return a, b, c


def entry_grid(values: Sequence[int], rows: int, cols: int) -> List[SurplusMatrix]:
    """Every rows x cols matrix with entries from `values`."""

    out: List[SurplusMatrix] = []
    cells = rows * cols
    total = len(values) ** cells
    for code in range(total):
        flat = []
        for _ in range(cells):
            code, digit = divmod(code, len(values))
            flat.append(Fraction(values[digit]))
        out.append(SurplusMatrix.from_rows([flat[r * cols : (r + 1) * cols] for r in range(rows)]))
    return out
