"""Assignment games induced by a nonnegative surplus matrix.

Row players are indexed 0..R-1 and column players R..R+C-1; printed labels are 1-based,
so in a 2x2 game the rows are players 1,2 and the columns players 3,4.
"""

from __future__ import annotations

import itertools
import logging
import random
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence

from ..config import get_settings
from .coalition import Coalition, mask_members
from .errors import LpError, NotInCoreError, StructuralError, require_players
from .game import TUGame
from .lp import (
    LinearProgram,
    LpBuilder,
    Relation,
    Sense,
    lp_max_coordinate,
    lp_min_coordinate,
    lp_solve,
    matrix_rank,
    solve_unique,
)
from .rational import ZERO, Payoff, RationalLike, as_rational

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SurplusMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if len(self.entries) != self.rows:
            raise StructuralError(f"expected {self.rows} rows, got {len(self.entries)}")
        for i, row in enumerate(self.entries):
            if len(row) != self.cols:
                raise StructuralError(f"row {i + 1} has {len(row)} entries, expected {self.cols}")
            for j, a in enumerate(row):
                if a < 0:
                    raise StructuralError(f"entry ({i + 1},{j + 1}) is negative: {a}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]], cols: Optional[int] = None) -> "SurplusMatrix":
        entries = tuple(tuple(as_rational(a) for a in row) for row in rows)
        width = cols if cols is not None else (len(entries[0]) if entries else 0)
        return cls(len(entries), width, entries)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "SurplusMatrix":
        return cls(rows, cols, tuple(tuple(ZERO for _ in range(cols)) for _ in range(rows)))

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i][j]

    def transpose(self) -> "SurplusMatrix":
        return SurplusMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else ())

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "SurplusMatrix":
        return SurplusMatrix(len(rows), len(cols), tuple(tuple(self.entries[i][j] for j in cols) for i in rows))

    def positive_cells(self) -> List[tuple[int, int]]:
        return [(i, j) for i in range(self.rows) for j in range(self.cols) if self.entries[i][j] > 0]

    def is_zero(self) -> bool:
        return not self.positive_cells()

    def to_lists(self) -> List[List[Fraction]]:
        return [list(row) for row in self.entries]


@dataclass(frozen=True)
class Matching:
    """Row/column index pairs of the matrix (not player indices)."""

    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        rows = [i for i, _ in self.pairs]
        cols = [j for _, j in self.pairs]
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise StructuralError(f"matching reuses a row or column: {self.pairs}")

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def row_partner(self, i: int) -> Optional[int]:
        return next((j for r, j in self.pairs if r == i), None)

    def col_partner(self, j: int) -> Optional[int]:
        return next((i for i, c in self.pairs if c == j), None)

    def weight(self, m: SurplusMatrix) -> Fraction:
        return sum((m.entries[i][j] for i, j in self.pairs), ZERO)

    def labels(self, row_count: int) -> List[tuple[int, int]]:
        """Pairs as 1-based player labels."""

        return [(i + 1, row_count + j + 1) for i, j in self.pairs]


def _assignment(weights: Sequence[Sequence[Fraction]]) -> tuple[Fraction, List[int]]:
    """Hungarian method with potentials; every row is assigned (requires rows <= cols)."""

    n = len(weights)
    if n == 0:
        return ZERO, []
    m = len(weights[0])
    u = [ZERO] * (n + 1)
    v = [ZERO] * (m + 1)
    p = [0] * (m + 1)
    way = [0] * (m + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv: List[Optional[Fraction]] = [None] * (m + 1)
        used = [False] * (m + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta: Optional[Fraction] = None
            j1 = 0
            row = weights[i0 - 1]
            for j in range(1, m + 1):
                if used[j]:
                    continue
                cur = -row[j - 1] - u[i0] - v[j]
                mj = minv[j]
                if mj is None or cur < mj:
                    minv[j] = cur
                    way[j] = j0
                    mj = cur
                if delta is None or mj < delta:
                    delta = mj
                    j1 = j
            assert delta is not None
            for j in range(m + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    mj = minv[j]
                    assert mj is not None
                    minv[j] = mj - delta
            j0 = j1
            if p[j0] == 0:
                break
        while True:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
            if j0 == 0:
                break
    assign = [0] * n
    for j in range(1, m + 1):
        if p[j]:
            assign[p[j] - 1] = j - 1
    value = sum((weights[i][assign[i]] for i in range(n)), ZERO)
    return value, assign


def _best_value(m: SurplusMatrix, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
    if not rows or not cols:
        return ZERO
    sub = [[m.entries[i][j] for j in cols] for i in rows]
    if len(rows) > len(cols):
        sub = [list(col) for col in zip(*sub)]
    return _assignment(sub)[0]


def _matrix_indices(c: Optional[Coalition], bound: int, label: str) -> List[int]:
    if c is None:
        return list(range(bound))
    if c.mask >> bound:
        raise StructuralError(f"{label} {c} out of range for {bound} {label}s")
    return list(c)


def max_weight_matching(
    m: SurplusMatrix, rows: Optional[Coalition] = None, cols: Optional[Coalition] = None
) -> tuple[Fraction, Matching]:
    """Optimal value and the lexicographically smallest optimal matching on rows x cols.

    Rows are fixed greedily in ascending order: row i takes the smallest column j that still
    extends to an optimum, or stays single when no column does. The result is complete on the
    short side.
    """

    row_list = _matrix_indices(rows, m.rows, "row")
    col_list = _matrix_indices(cols, m.cols, "column")
    best = _best_value(m, row_list, col_list)
    pairs: List[tuple[int, int]] = []
    fixed = ZERO
    free = list(col_list)
    for idx, i in enumerate(row_list):
        rest = row_list[idx + 1 :]
        for j in free:
            others = [c for c in free if c != j]
            if fixed + m.entries[i][j] + _best_value(m, rest, others) == best:
                pairs.append((i, j))
                fixed += m.entries[i][j]
                free = others
                break
    return best, Matching(tuple(pairs))


class AssignmentGame(TUGame):
    """TU game w_A(S) = optimal matching value of S's rows against S's columns."""

    def __init__(
        self,
        matrix: SurplusMatrix,
        names: Optional[Sequence[str]] = None,
        index_map: Optional[Sequence[int]] = None,
    ):
        super().__init__(matrix.rows + matrix.cols, names)
        self.matrix = matrix
        self.index_map = tuple(index_map) if index_map is not None else None
        self._memo: Dict[int, Fraction] = {}
        self._lock = threading.Lock()

    @property
    def row_count(self) -> int:
        return self.matrix.rows

    @property
    def col_count(self) -> int:
        return self.matrix.cols

    def is_row(self, player: int) -> bool:
        return player < self.matrix.rows

    def col_player(self, j: int) -> int:
        return self.matrix.rows + j

    def split(self, mask: int) -> tuple[List[int], List[int]]:
        """Matrix row and column indices present in a coalition mask."""

        r = self.matrix.rows
        members = mask_members(mask)
        return [p for p in members if p < r], [p - r for p in members if p >= r]

    def _value(self, mask: int) -> Fraction:
        with self._lock:
            cached = self._memo.get(mask)
        if cached is not None:
            return cached
        rows, cols = self.split(mask)
        value = _best_value(self.matrix, rows, cols)
        with self._lock:
            self._memo[mask] = value
        return value

    def matching(self, s: Optional[Coalition] = None) -> tuple[Fraction, Matching]:
        rows, cols = self.split(self.grand_mask if s is None else s.mask)
        return max_weight_matching(self.matrix, Coalition.from_members(rows), Coalition.from_members(cols))

    def restrict(self, rows: Sequence[int], cols: Sequence[int]) -> "AssignmentGame":
        """Assignment game on the induced submatrix; `index_map` records the players of this game."""

        rows = sorted(rows)
        cols = sorted(cols)
        players = [i for i in rows] + [self.col_player(j) for j in cols]
        names = [self.names[p] for p in players]
        return AssignmentGame(self.matrix.submatrix(rows, cols), names=names, index_map=players)

    def subgame(self, s: Coalition) -> "AssignmentGame":
        if not s:
            raise StructuralError("subgame needs a nonempty coalition")
        if s.mask >> self.player_count:
            raise StructuralError(f"subgame coalition {s} exceeds {self.player_count} players")
        rows, cols = self.split(s.mask)
        return self.restrict(rows, cols)

    def essential_coalitions(self) -> List[Coalition]:
        """Singletons and the mixed pairs with positive surplus."""

        out = [Coalition.of(p) for p in range(self.player_count)]
        for i, j in self.matrix.positive_cells():
            out.append(Coalition.of(i, self.col_player(j)))
        out.sort(key=Coalition.sort_key)
        return out

    def describe(self) -> str:
        return f"AssignmentGame({self.matrix.rows}x{self.matrix.cols})"


def assignment_game(m: SurplusMatrix) -> AssignmentGame:
    return AssignmentGame(m)


def is_convex_assignment(m: SurplusMatrix) -> bool:
    """True iff no row and no column holds two positive entries."""

    for row in m.entries:
        if sum(1 for a in row if a > 0) > 1:
            return False
    for j in range(m.cols):
        if sum(1 for i in range(m.rows) if m.entries[i][j] > 0) > 1:
            return False
    return True


@dataclass(frozen=True)
class CoreSystem:
    """Core constraints over (u, v) built on one fixed optimal matching of the grand coalition."""

    rows: int
    cols: int
    matching: Matching
    equalities: tuple[tuple[int, int, Fraction], ...]
    unmatched_rows: tuple[int, ...]
    unmatched_cols: tuple[int, ...]
    inequalities: tuple[tuple[int, int, Fraction], ...]
    names: tuple[str, ...]

    @property
    def player_count(self) -> int:
        return self.rows + self.cols

    def to_lp(self) -> LinearProgram:
        builder = LpBuilder()
        for p in range(self.player_count):
            prefix = "u" if p < self.rows else "v"
            builder.add_variable(f"{prefix}[{self.names[p]}]", lower=0)
        for i, j, a in self.equalities:
            builder.add_constraint({i: 1, self.rows + j: 1}, Relation.EQ, a)
        for i in self.unmatched_rows:
            builder.add_constraint({i: 1}, Relation.EQ, 0)
        for j in self.unmatched_cols:
            builder.add_constraint({self.rows + j: 1}, Relation.EQ, 0)
        for i, j, a in self.inequalities:
            builder.add_constraint({i: 1, self.rows + j: 1}, Relation.GE, a)
        return builder.build()

    def satisfied_by(self, x: Sequence[Fraction]) -> bool:
        return self.to_lp().is_satisfied_by(tuple(x))

    def describe(self) -> List[str]:
        def u(i: int) -> str:
            return f"u{self.names[i]}"

        def v(j: int) -> str:
            return f"v{self.names[self.rows + j]}"

        lines = [f"{u(i)}+{v(j)}={a}" for i, j, a in self.equalities]
        lines += [f"{u(i)}=0" for i in self.unmatched_rows]
        lines += [f"{v(j)}=0" for j in self.unmatched_cols]
        lines += [f"{u(i)}+{v(j)}>={a}" for i, j, a in self.inequalities]
        return lines


def core_system(g: AssignmentGame) -> CoreSystem:
    m = g.matrix
    _, mu = g.matching()
    matched = set(mu.pairs)
    matched_rows = {i for i, _ in mu.pairs}
    matched_cols = {j for _, j in mu.pairs}
    equalities = tuple((i, j, m.entries[i][j]) for i, j in mu.pairs)
    # Zero-surplus pairs off the matching are implied by nonnegativity.
    inequalities = tuple(
        (i, j, m.entries[i][j])
        for i in range(m.rows)
        for j in range(m.cols)
        if (i, j) not in matched and m.entries[i][j] > 0
    )
    return CoreSystem(
        rows=m.rows,
        cols=m.cols,
        matching=mu,
        equalities=equalities,
        unmatched_rows=tuple(i for i in range(m.rows) if i not in matched_rows),
        unmatched_cols=tuple(j for j in range(m.cols) if j not in matched_cols),
        inequalities=inequalities,
        names=g.names,
    )


@dataclass(frozen=True)
class CoreMembership:
    member: bool
    violated: Optional[Coalition] = None

    def __bool__(self) -> bool:
        return self.member

    def require(self) -> None:
        if not self.member:
            raise NotInCoreError(f"payoff vector is not in the core: violated at {self.violated}", self.violated)


def core_contains(g: TUGame, x: Sequence[Fraction]) -> CoreMembership:
    """Efficiency, then x(S) >= w(S) over essential coalitions in canonical order."""

    if len(x) != g.player_count:
        raise StructuralError(f"payoff vector has {len(x)} entries for {g.player_count} players")
    grand = g.grand
    if sum(x, ZERO) != g.worth(grand):
        return CoreMembership(False, grand)
    for s in g.essential_coalitions():
        if sum((x[i] for i in s), ZERO) < g.worth(s):
            return CoreMembership(False, s)
    return CoreMembership(True)


class SideOptimal(NamedTuple):
    row_optimal: Payoff
    column_optimal: Payoff


def side_optimal_vertices(g: AssignmentGame) -> SideOptimal:
    """Row-optimal (u max, v min) and column-optimal (u min, v max) core vertices."""

    n = g.player_count
    if n == 0:
        return SideOptimal((), ())
    lp = core_system(g).to_lp()
    highs = [lp_max_coordinate(lp, k) for k in range(n)]
    lows = [lp_min_coordinate(lp, k) for k in range(n)]
    r = g.row_count
    row_opt = tuple(highs[:r] + lows[r:])
    col_opt = tuple(lows[:r] + highs[r:])
    for label, point in (("row-optimal", row_opt), ("column-optimal", col_opt)):
        if not core_contains(g, point):
            raise LpError(f"{label} vertex assembled from coordinate extremes is not in the core")
    return SideOptimal(row_opt, col_opt)


def convex_combination(weight: Fraction, a: Sequence[Fraction], b: Sequence[Fraction]) -> Payoff:
    return tuple(weight * p + (1 - weight) * q for p, q in zip(a, b))


def sample_core_point(
    g: AssignmentGame,
    seed: Optional[int] = None,
    *,
    lam: Optional[RationalLike] = None,
    with_vertex: bool = False,
) -> Payoff:
    """lam * row_opt + (1 - lam) * col_opt, optionally mixed with a random-objective core vertex."""

    rng = random.Random(seed)
    row_opt, col_opt = side_optimal_vertices(g)
    weight = as_rational(lam) if lam is not None else Fraction(rng.randint(0, 12), 12)
    point = convex_combination(weight, row_opt, col_opt)
    if with_vertex and g.player_count:
        objective = [rng.randint(-3, 3) for _ in range(g.player_count)]
        result = lp_solve(core_system(g).to_lp().with_objective(objective, Sense.MAX))
        if result.optimal and result.point is not None:
            mix = Fraction(rng.randint(0, 12), 12)
            point = convex_combination(mix, result.point, point)
    return point


def core_vertices(g: AssignmentGame, limit: Optional[int] = None) -> List[Payoff]:
    """All extreme points of the core, by brute force over tight subsystems."""

    n = g.player_count
    require_players("core vertex enumeration", n, limit or get_settings().core_vertex_max_players)
    if n == 0:
        return [()]
    lp = core_system(g).to_lp()
    equalities = [list(c.coefficients) for c in lp.constraints if c.relation is Relation.EQ]
    eq_rhs = [c.rhs for c in lp.constraints if c.relation is Relation.EQ]
    tight: List[tuple[List[Fraction], Fraction]] = []
    for k in range(n):
        unit = [ZERO] * n
        unit[k] = Fraction(1)
        tight.append((unit, ZERO))
    for c in lp.constraints:
        if c.relation is Relation.GE:
            tight.append((list(c.coefficients), c.rhs))
    # A vertex makes exactly n - rank(equalities) further constraints tight.
    size = n - matrix_rank(equalities, n)
    found: set[Payoff] = set()
    for chosen in itertools.combinations(range(len(tight)), size):
        rows = equalities + [tight[t][0] for t in chosen]
        rhs = eq_rhs + [tight[t][1] for t in chosen]
        point = solve_unique(rows, rhs, n)
        if point is not None and lp.is_satisfied_by(point):
            found.add(point)
    return sorted(found)
