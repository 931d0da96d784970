"""Population monotonic allocation schemes.

A scheme assigns every coalition S an efficient suballocation x^S (indexed by the members
of S in ascending order) such that x^S_i <= x^T_i whenever i in S, S subset of T.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence

from ..config import get_settings
from .assignment import AssignmentGame, SurplusMatrix, core_contains
from .blocks import BlockKind, classify_blocks
from .coalition import Coalition, mask_members, mask_sort_key, two_part_splits
from .errors import LpError, NotAdmissibleError, PreconditionError, StructuralError, require_players
from .game import TUGame, is_inessential, is_monotonic
from .lp import LpBuilder, Relation, lp_feasible
from .rational import ZERO, Payoff, RationalLike, as_payoff, format_vector

logger = logging.getLogger(__name__)


class Coverage(str, Enum):
    ALL = "all-coalitions"
    ESSENTIAL = "essential-only"


@dataclass(frozen=True)
class Scheme:
    player_count: int
    allocations: Mapping[Coalition, Payoff]
    coverage: Coverage = Coverage.ALL

    def __post_init__(self) -> None:
        for s, x in self.allocations.items():
            if not s or s.mask >> self.player_count:
                raise StructuralError(f"scheme coalition {s} is not a nonempty subset of {self.player_count} players")
            if len(x) != len(s):
                raise StructuralError(f"suballocation for {s} has {len(x)} entries, expected {len(s)}")

    def __getitem__(self, s: Coalition) -> Payoff:
        return self.allocations[s]

    def __contains__(self, s: object) -> bool:
        return s in self.allocations

    def __len__(self) -> int:
        return len(self.allocations)

    def get(self, s: Coalition) -> Optional[Payoff]:
        return self.allocations.get(s)

    def payoff(self, s: Coalition, player: int) -> Fraction:
        if player not in s:
            raise StructuralError(f"player {player + 1} is not in {s}")
        return self.allocations[s][s.members.index(player)]

    def coalitions(self) -> List[Coalition]:
        return sorted(self.allocations, key=Coalition.sort_key)

    @property
    def grand_allocation(self) -> Payoff:
        return self.allocations[Coalition.full(self.player_count)]

    def expand(self, game: TUGame) -> "Scheme":
        """Fill inessential coalitions by composing the suballocations of their witness split."""

        if self.coverage is Coverage.ALL:
            return self
        n = game.player_count
        require_players("scheme expansion", n, get_settings().max_players)
        full: Dict[int, Payoff] = {s.mask: x for s, x in self.allocations.items()}
        for mask in sorted(range(1, 1 << n), key=mask_sort_key):
            if mask in full:
                continue
            if mask & (mask - 1) == 0:
                full[mask] = (game.worth_mask(mask),)
                continue
            verdict = is_inessential(game, Coalition(mask))
            if verdict.witness is None:
                raise StructuralError(f"essential coalition {Coalition(mask)} is missing from the scheme")
            s1, s2 = verdict.witness
            full[mask] = _compose_parts(mask, [(s1.mask, full[s1.mask]), (s2.mask, full[s2.mask])])
        return Scheme(n, {Coalition(m): x for m, x in full.items()}, Coverage.ALL)

    def serialize(self) -> str:
        """One `S=<members> -> <payoffs>` line per coalition in canonical order."""

        lines = [f"S={s.label()} -> {format_vector(self.allocations[s])}" for s in self.coalitions()]
        return "\n".join(lines) + ("\n" if lines else "")


def _compose_parts(mask: int, parts: Sequence[tuple[int, Payoff]]) -> Payoff:
    by_player: Dict[int, Fraction] = {}
    for part_mask, x in parts:
        for i, value in zip(mask_members(part_mask), x):
            by_player[i] = value
    return tuple(by_player[i] for i in mask_members(mask))


class ViolationKind(str, Enum):
    EFFICIENCY = "efficiency"
    MONOTONICITY = "monotonicity"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    coalition: Coalition
    superset: Optional[Coalition] = None
    player: Optional[int] = None
    left: Fraction = ZERO
    right: Fraction = ZERO

    def describe(self) -> str:
        if self.kind is ViolationKind.EFFICIENCY:
            return f"efficiency fails at S={self.coalition.label()}: sum {self.left} != w(S) {self.right}"
        assert self.superset is not None and self.player is not None
        return (
            f"monotonicity fails for player {self.player + 1}: "
            f"x^{{{self.coalition.label()}}} = {self.left} > x^{{{self.superset.label()}}} = {self.right}"
        )


@dataclass(frozen=True)
class PmasCheck:
    valid: bool
    violation: Optional[Violation] = None

    def __bool__(self) -> bool:
        return self.valid


def verify_pmas(g: TUGame, s: Scheme) -> PmasCheck:
    """Subgame efficiency for every coalition, then monotonicity along single-player extensions."""

    n = g.player_count
    if s.player_count != n:
        raise StructuralError(f"scheme is for {s.player_count} players, game has {n}")
    require_players("verify_pmas", n, get_settings().max_players)
    scheme = s.expand(g)
    table: Dict[int, Payoff] = {c.mask: x for c, x in scheme.allocations.items()}
    order = sorted(range(1, 1 << n), key=mask_sort_key)
    missing = [m for m in order if m not in table]
    if missing:
        raise StructuralError(f"scheme misses {len(missing)} coalitions, first {Coalition(missing[0])}")

    for mask in order:
        total = sum(table[mask], ZERO)
        worth = g.worth_mask(mask)
        if total != worth:
            return PmasCheck(False, Violation(ViolationKind.EFFICIENCY, Coalition(mask), left=total, right=worth))

    for mask in order:
        x = table[mask]
        members = mask_members(mask)
        for j in range(n):
            if mask >> j & 1:
                continue
            bigger = mask | 1 << j
            y = table[bigger]
            for pos, i in enumerate(members):
                at = (bigger & ((1 << i) - 1)).bit_count()
                if x[pos] > y[at]:
                    return PmasCheck(
                        False,
                        Violation(
                            ViolationKind.MONOTONICITY,
                            Coalition(mask),
                            Coalition(bigger),
                            i,
                            x[pos],
                            y[at],
                        ),
                    )
    return PmasCheck(True)


def build_veto_pmas(g: TUGame, veto_player: int) -> Scheme:
    """The veto player takes w(S) in every coalition it belongs to; everybody else gets 0."""

    n = g.player_count
    if not 0 <= veto_player < n:
        raise StructuralError(f"player {veto_player + 1} is outside 1..{n}")
    w = g.worth_table()
    bit = 1 << veto_player
    for mask in sorted(range(1, 1 << n), key=mask_sort_key):
        if not mask & bit and w[mask] != 0:
            raise PreconditionError(
                f"player {veto_player + 1} is not a veto player: w({Coalition(mask)}) = {w[mask]}", Coalition(mask)
            )
    broken = is_monotonic(g)
    if broken is not None:
        s, j = broken
        raise PreconditionError(f"game is not monotonic: w({s.add(j)}) < w({s})", s)
    allocations: Dict[Coalition, Payoff] = {}
    for mask in range(1, 1 << n):
        allocations[Coalition(mask)] = tuple(w[mask] if i == veto_player else ZERO for i in mask_members(mask))
    return Scheme(n, allocations)


def _line_scheme(game: AssignmentGame, veto: int, y: Payoff) -> Dict[int, Payoff]:
    """Scheme of a game whose positive surplus all runs through one line player `veto`.

    In S containing the veto player: if the top partner t is present the pair keeps its core
    payoffs (y_veto, y_t); otherwise the veto player takes the best surplus available in S.
    """

    n = game.player_count
    surplus = [game.worth_mask((1 << veto) | (1 << p)) if p != veto else ZERO for p in range(n)]
    partners = [p for p in range(n) if p != veto and surplus[p] > 0]
    top: Optional[int] = None
    if partners:
        best = max(surplus[p] for p in partners)
        top = min(p for p in partners if surplus[p] == best)
    out: Dict[int, Payoff] = {}
    for mask in range(1, 1 << n):
        members = mask_members(mask)
        if not mask >> veto & 1:
            out[mask] = tuple(ZERO for _ in members)
            continue
        if top is not None and mask >> top & 1:
            out[mask] = tuple(y[i] if i in (veto, top) else ZERO for i in members)
            continue
        available = max((surplus[p] for p in members), default=ZERO)
        out[mask] = tuple(available if i == veto else ZERO for i in members)
    return out


def _gamma_scheme(game: AssignmentGame, corner: tuple[int, int], y: Payoff) -> Dict[int, Payoff]:
    """Split a dominant Gamma block into a row-veto and a column-veto game and add their schemes.

    The transfer is the largest non-corner entry of the corner column: the row game keeps the
    corner reduced by it, the column game gets it at the corner.
    """

    m = game.matrix
    i1, j1 = corner
    transfer = max((m.entries[k][j1] for k in range(m.rows) if k != i1), default=ZERO)
    row_rows = [
        [(m.entries[i][j] - transfer if j == j1 else m.entries[i][j]) if i == i1 else ZERO for j in range(m.cols)]
        for i in range(m.rows)
    ]
    col_rows = [
        [(transfer if i == i1 else m.entries[i][j]) if j == j1 else ZERO for j in range(m.cols)]
        for i in range(m.rows)
    ]
    row_game = AssignmentGame(SurplusMatrix.from_rows(row_rows, m.cols))
    col_game = AssignmentGame(SurplusMatrix.from_rows(col_rows, m.cols))
    j1_player = game.col_player(j1)
    y2 = tuple(transfer if p == j1_player else ZERO for p in range(game.player_count))
    y1 = tuple(a - b for a, b in zip(y, y2))
    first = _line_scheme(row_game, i1, y1)
    second = _line_scheme(col_game, j1_player, y2)
    return {mask: tuple(a + b for a, b in zip(first[mask], second[mask])) for mask in first}


def build_pmas(g: AssignmentGame, x: Sequence[RationalLike]) -> Scheme:
    """Canonical PMAS extending the core allocation x of an admissible assignment game."""

    decomposition = classify_blocks(g.matrix)
    if not decomposition.admissible:
        assert decomposition.witness is not None
        raise NotAdmissibleError(
            f"matrix is not PMAS-admissible: {decomposition.witness.describe(g.row_count)}",
            decomposition.witness,
        )
    point = as_payoff(x)
    core_contains(g, point).require()
    n = g.player_count
    require_players("build_pmas", n, get_settings().max_players)

    parts: List[tuple[tuple[int, ...], Dict[int, Payoff]]] = []
    for block in decomposition.blocks:
        sub = g.restrict(block.rows, block.cols)
        assert sub.index_map is not None
        y = tuple(point[p] for p in sub.index_map)
        if block.kind is BlockKind.ROW_VECTOR:
            local = _line_scheme(sub, 0, y)
        elif block.kind is BlockKind.COL_VECTOR:
            local = _line_scheme(sub, sub.row_count, y)
        else:
            assert block.corner is not None
            ci, cj = block.corner
            local = _gamma_scheme(sub, (block.rows.index(ci), block.cols.index(cj)), y)
        parts.append((sub.index_map, local))
        logger.debug("block %s built over players %s", block.kind.value, sub.index_map)

    allocations: Dict[Coalition, Payoff] = {}
    for mask in range(1, 1 << n):
        payoff: Dict[int, Fraction] = {}
        for players, local in parts:
            local_mask = 0
            for k, p in enumerate(players):
                if mask >> p & 1:
                    local_mask |= 1 << k
            if local_mask:
                for k, value in zip(mask_members(local_mask), local[local_mask]):
                    payoff[players[k]] = value
        allocations[Coalition(mask)] = tuple(payoff.get(i, ZERO) for i in mask_members(mask))
    return Scheme(n, allocations)


@dataclass(frozen=True)
class OracleResult:
    feasible: bool
    scheme: Optional[Scheme] = None
    reason: str = ""
    witness: Optional[tuple[Coalition, Coalition]] = None
    variables: int = 0
    constraints: int = 0

    def __bool__(self) -> bool:
        return self.feasible


@dataclass(frozen=True)
class _Term:
    """A scheme entry: either an LP variable or a fixed constant."""

    var: Optional[int] = None
    const: Fraction = field(default=ZERO)


def _definition_system(g: TUGame, pinned: Optional[Payoff], limit: Optional[int]) -> OracleResult:
    n = g.player_count
    require_players("pmas LP oracle", n, limit or get_settings().lp_oracle_max_players)
    if n == 0:
        return OracleResult(True, Scheme(0, {}))
    w = g.worth_table(limit=n)
    order = sorted(range(1, 1 << n), key=mask_sort_key)

    witness: Dict[int, tuple[int, int]] = {}
    for mask in order:
        if mask & (mask - 1) == 0:
            continue
        for s1, s2 in two_part_splits(mask):
            total = w[s1] + w[s2]
            if w[mask] < total:
                pair = (Coalition(s1), Coalition(s2))
                reason = f"not superadditive: w({Coalition(mask)}) < w({pair[0]}) + w({pair[1]})"
                return OracleResult(False, reason=reason, witness=pair)
            if mask not in witness and w[mask] == total:
                witness[mask] = (s1, s2)

    # Inessential coalitions inherit their witness split, which every PMAS of a superadditive game satisfies.
    builder = LpBuilder()
    terms: Dict[int, List[_Term]] = {}
    for mask in order:
        members = mask_members(mask)
        if len(members) == 1:
            terms[mask] = [_Term(const=w[mask])]
        elif mask in witness:
            s1, s2 = witness[mask]
            first = dict(zip(mask_members(s1), terms[s1]))
            second = dict(zip(mask_members(s2), terms[s2]))
            terms[mask] = [first[i] if i in first else second[i] for i in members]
        else:
            label = Coalition(mask).label("")
            idx = [builder.add_variable(f"x{label}[{g.names[i]}]", lower=w[1 << i]) for i in members]
            builder.add_constraint({v: 1 for v in idx}, Relation.EQ, w[mask])
            terms[mask] = [_Term(var=v) for v in idx]

    grand = (1 << n) - 1
    if pinned is not None:
        for i, term in enumerate(terms[grand]):
            if term.var is None:
                if term.const != pinned[i]:
                    return OracleResult(False, reason=f"x^N is forced to {term.const} for player {i + 1}")
            else:
                builder.add_constraint({term.var: 1}, Relation.EQ, pinned[i])

    seen: set[tuple[_Term, _Term]] = set()
    for mask in order:
        members = mask_members(mask)
        for j in range(n):
            if mask >> j & 1:
                continue
            bigger = mask | 1 << j
            for pos, i in enumerate(members):
                low = terms[mask][pos]
                high = terms[bigger][(bigger & ((1 << i) - 1)).bit_count()]
                if low == high or (low, high) in seen:
                    continue
                seen.add((low, high))
                if low.var is None and high.var is None:
                    if low.const > high.const:
                        return OracleResult(False, reason=f"constant payoffs decrease for player {i + 1}")
                    continue
                row: Dict[int, Fraction] = {}
                if low.var is not None:
                    row[low.var] = row.get(low.var, ZERO) + 1
                if high.var is not None:
                    row[high.var] = row.get(high.var, ZERO) - 1
                builder.add_constraint(row, Relation.LE, high.const - low.const)

    lp = builder.build()
    logger.debug("pmas oracle: %d variables, %d constraints", lp.size, len(lp.constraints))
    result = lp_feasible(lp)
    if not result.feasible or result.point is None:
        return OracleResult(
            False, reason="definition system is infeasible", variables=lp.size, constraints=len(lp.constraints)
        )
    point = result.point
    allocations = {
        Coalition(mask): tuple(point[t.var] if t.var is not None else t.const for t in terms[mask]) for mask in order
    }
    scheme = Scheme(n, allocations)
    check = verify_pmas(g, scheme)
    if not check.valid:
        assert check.violation is not None
        raise LpError(f"oracle scheme failed verification: {check.violation.describe()}")
    return OracleResult(True, scheme, variables=lp.size, constraints=len(lp.constraints))


def pmas_exists_lp(g: TUGame, *, limit: Optional[int] = None) -> OracleResult:
    """Exact feasibility of the PMAS definition system."""

    return _definition_system(g, None, limit)


def pmas_extend_lp(g: TUGame, x: Sequence[RationalLike], *, limit: Optional[int] = None) -> OracleResult:
    """Feasibility of the PMAS definition system with x^N pinned to x."""

    point = as_payoff(x)
    core_contains(g, point).require()
    return _definition_system(g, point, limit)

