"""Point-valued solutions of balanced games and the certificates that back them.

All values are exact. The nucleolus is computed by repeated LPs over the essential proper
coalitions and can be cross-checked with `kohlberg_check`.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterable, List, Literal, Optional, Sequence

from ..config import get_settings
from .assignment import AssignmentGame, core_contains, side_optimal_vertices
from .coalition import Coalition, all_coalitions, sort_coalitions
from .errors import LpError, PreconditionError, StructuralError, require_players
from .game import TUGame, is_balanced
from .lp import LpBuilder, Relation, Sense, lp_feasible, lp_solve, matrix_rank, solve_unique
from .rational import ONE, ZERO, Payoff, RationalLike, as_payoff, format_rational

logger = logging.getLogger(__name__)

CoalitionFamily = Literal["essential", "all"]


def _check_length(g: TUGame, x: Sequence[Fraction]) -> None:
    if len(x) != g.player_count:
        raise StructuralError(f"payoff vector has {len(x)} entries for {g.player_count} players")


def _indicator(n: int, s: Coalition) -> List[Fraction]:
    return [ONE if i in s else ZERO for i in range(n)]


# ---------------------------------------------------------------------------
# Upper and lower vectors, tau-value
# ---------------------------------------------------------------------------


def upper_vector(g: TUGame) -> Payoff:
    """M_i = w(N) - w(N minus i)."""

    full = g.grand_mask
    total = g.worth_mask(full)
    return tuple(total - g.worth_mask(full & ~(1 << i)) for i in range(g.player_count))


def lower_vector(g: TUGame, *, essential_only: Optional[bool] = None, limit: Optional[int] = None) -> Payoff:
    """m_i = max over S containing i of w(S) - M(S minus i).

    With `essential_only` the maximum runs over essential coalitions only; this is the default
    for assignment games, whose essential coalitions are the singletons and positive pairs.
    """

    n = g.player_count
    upper = upper_vector(g)
    if essential_only is None:
        essential_only = isinstance(g, AssignmentGame)
    if essential_only:
        candidates = [(s.mask, g.worth(s)) for s in g.essential_coalitions()]
    else:
        table = g.worth_table(limit)
        candidates = list(enumerate(table))[1:]

    best: List[Optional[Fraction]] = [None] * n
    for mask, value in candidates:
        members = [i for i in range(n) if mask >> i & 1]
        spent = sum((upper[j] for j in members), ZERO)
        for i in members:
            gain = value - (spent - upper[i])
            current = best[i]
            if current is None or gain > current:
                best[i] = gain
    return tuple(b if b is not None else ZERO for b in best)


@dataclass(frozen=True)
class TauBundle:
    upper: Payoff
    lower: Payoff
    kappa: Fraction
    tau: Payoff

    def to_dict(self) -> Dict[str, object]:
        return {
            "M": [format_rational(v) for v in self.upper],
            "m": [format_rational(v) for v in self.lower],
            "kappa": format_rational(self.kappa),
            "tau": [format_rational(v) for v in self.tau],
        }


def tau_value(g: TUGame, *, limit: Optional[int] = None) -> TauBundle:
    """Efficient compromise kappa*M + (1-kappa)*m of a balanced game."""

    n = g.player_count
    if n == 0:
        return TauBundle((), (), ZERO, ())
    if not is_balanced(g):
        raise PreconditionError("game is not balanced: the core is empty")
    upper = upper_vector(g)
    lower = lower_vector(g, limit=limit)
    total = g.worth_mask(g.grand_mask)
    sum_upper = sum(upper, ZERO)
    sum_lower = sum(lower, ZERO)
    if sum_upper == sum_lower:
        if sum_lower != total:
            raise PreconditionError(
                f"upper and lower vectors both sum to {format_rational(sum_lower)} but w(N) = {format_rational(total)}"
            )
        kappa = ZERO
    else:
        kappa = (total - sum_lower) / (sum_upper - sum_lower)
    if not ZERO <= kappa <= ONE:
        raise PreconditionError(f"no compromise weight in [0,1]: kappa = {format_rational(kappa)}")
    tau = tuple(kappa * hi + (ONE - kappa) * lo for hi, lo in zip(upper, lower))
    logger.debug("tau: M=%s m=%s kappa=%s", upper, lower, kappa)
    return TauBundle(upper, lower, kappa, tau)


def tau_value_assignment(g: AssignmentGame) -> Payoff:
    """Midpoint of the row-optimal and column-optimal core vertices."""

    row_opt, col_opt = side_optimal_vertices(g)
    return tuple((a + b) / 2 for a, b in zip(row_opt, col_opt))


# ---------------------------------------------------------------------------
# Satisfactions
# ---------------------------------------------------------------------------


def satisfaction(g: TUGame, x: Sequence[RationalLike], s: Coalition) -> Fraction:
    point = as_payoff(x)
    _check_length(g, point)
    return sum((point[i] for i in s), ZERO) - g.worth(s)


@dataclass(frozen=True)
class SatisfactionRow:
    coalition: Coalition
    allocated: Fraction
    worth: Fraction

    @property
    def satisfaction(self) -> Fraction:
        return self.allocated - self.worth


def _proper_family(g: TUGame, coalitions: CoalitionFamily) -> List[Coalition]:
    if coalitions == "essential":
        family = g.essential_coalitions()
    elif coalitions == "all":
        family = all_coalitions(g.player_count)
    else:
        raise ValueError(f"unknown coalition family: {coalitions}")
    return [s for s in family if s.mask != g.grand_mask]


def satisfaction_table(g: TUGame, x: Sequence[RationalLike]) -> List[SatisfactionRow]:
    """x(S), w(S) and the satisfaction of every essential proper coalition, canonical order."""

    point = as_payoff(x)
    _check_length(g, point)
    return [
        SatisfactionRow(s, sum((point[i] for i in s), ZERO), g.worth(s)) for s in _proper_family(g, "essential")
    ]


# ---------------------------------------------------------------------------
# Balanced families and the Kohlberg certificate
# ---------------------------------------------------------------------------


class FamilyVerdict(str, Enum):
    EMPTY = "empty"
    BALANCED = "balanced"
    NOT_BALANCED = "not-balanced"


@dataclass(frozen=True)
class FamilyBalance:
    verdict: FamilyVerdict
    weights: Dict[Coalition, Fraction] = field(default_factory=dict)
    reason: str = ""
    player: Optional[int] = None
    member: Optional[Coalition] = None

    def __bool__(self) -> bool:
        return self.verdict is not FamilyVerdict.NOT_BALANCED


def balanced_family(n: int, family: Iterable[Coalition]) -> FamilyBalance:
    """Positive weights lambda_S with sum over S containing i equal to 1 for every player i.

    Feasibility is decided first; then every member whose weight is zero in all solutions
    found so far gets its weight maximized. Averaging the solutions gives strictly positive
    weights when no member is forced to zero.
    """

    members = sort_coalitions(set(family))
    if not members:
        return FamilyBalance(FamilyVerdict.EMPTY)
    for s in members:
        if not s or s.mask >> n:
            raise StructuralError(f"family member {s} is not a nonempty coalition of 1..{n}")

    for i in range(n):
        if not any(i in s for s in members):
            return FamilyBalance(FamilyVerdict.NOT_BALANCED, reason=f"player {i + 1} is not covered", player=i)

    builder = LpBuilder()
    for s in members:
        builder.add_variable(f"lambda[{s.label()}]", lower=0)
    for i in range(n):
        builder.add_constraint({k: 1 for k, s in enumerate(members) if i in s}, Relation.EQ, 1)
    lp = builder.build()

    first = lp_feasible(lp)
    if not first.feasible or first.point is None:
        return FamilyBalance(FamilyVerdict.NOT_BALANCED, reason="no weights sum to 1 for every player")

    solutions = [first.point]
    positive = {k for k, v in enumerate(first.point) if v > 0}
    for k, s in enumerate(members):
        if k in positive:
            continue
        result = lp_solve(lp.unit_objective(k, Sense.MAX))
        if not result.optimal or result.point is None or result.point[k] == 0:
            return FamilyBalance(
                FamilyVerdict.NOT_BALANCED, reason=f"member {s} has weight 0 in every solution", member=s
            )
        solutions.append(result.point)
        positive.update(j for j, v in enumerate(result.point) if v > 0)

    count = len(solutions)
    weights = [sum((p[k] for p in solutions), ZERO) / count for k in range(len(members))]
    if not all(w > 0 for w in weights) or not lp.is_satisfied_by(weights):
        raise LpError("averaged balancing weights failed the exact check")
    return FamilyBalance(FamilyVerdict.BALANCED, dict(zip(members, weights)))


@dataclass(frozen=True)
class KohlbergLevel:
    threshold: Fraction
    family: tuple[Coalition, ...]
    balance: FamilyBalance

    def serialize(self) -> str:
        family = ",".join(str(s) for s in self.family)
        text = f"t={format_rational(self.threshold)} family=[{family}] verdict={self.balance.verdict.value}"
        if self.balance.verdict is FamilyVerdict.BALANCED:
            weights = ",".join(format_rational(self.balance.weights[s]) for s in self.family)
            text += f" weights=[{weights}]"
        else:
            text += f" reason={self.balance.reason!r}"
        return text


@dataclass(frozen=True)
class KohlbergCertificate:
    levels: tuple[KohlbergLevel, ...]

    @property
    def balanced(self) -> bool:
        return all(level.balance for level in self.levels)

    @property
    def first_failure(self) -> Optional[KohlbergLevel]:
        return next((level for level in self.levels if not level.balance), None)

    def serialize(self) -> str:
        return "\n".join(level.serialize() for level in self.levels)


def kohlberg_check(g: TUGame, x: Sequence[RationalLike]) -> KohlbergCertificate:
    """Balancedness of F_t(x) = {S essential, S != N : x(S) - w(S) <= t} at every attained t."""

    point = as_payoff(x)
    _check_length(g, point)
    core_contains(g, point).require()
    rows = satisfaction_table(g, point)
    levels = []
    for t in sorted({row.satisfaction for row in rows}):
        family = tuple(row.coalition for row in rows if row.satisfaction <= t)
        balance = balanced_family(g.player_count, family)
        logger.debug("kohlberg t=%s |F|=%d %s", t, len(family), balance.verdict.value)
        levels.append(KohlbergLevel(t, family, balance))
    return KohlbergCertificate(tuple(levels))


# ---------------------------------------------------------------------------
# Nucleolus
# ---------------------------------------------------------------------------


@dataclass
class _NucleolusState:
    n: int
    total: Fraction
    frozen: List[tuple[List[Fraction], Fraction]] = field(default_factory=list)

    def program(self, active: Sequence[tuple[Coalition, Fraction]], level: Optional[Fraction]) -> LpBuilder:
        """x(N) = w(N), frozen equalities, x(S) >= w(S) + t on active coalitions.

        With `level` given t is fixed to it and only the x variables remain.
        """

        builder = LpBuilder()
        for i in range(self.n):
            builder.add_variable(f"x[{i + 1}]")
        t_index = builder.add_variable("t") if level is None else None
        builder.add_constraint({i: 1 for i in range(self.n)}, Relation.EQ, self.total)
        for row, rhs in self.frozen:
            builder.add_constraint({i: c for i, c in enumerate(row) if c}, Relation.EQ, rhs)
        for s, value in active:
            coefficients: Dict[int, RationalLike] = {i: 1 for i in s}
            if t_index is not None:
                coefficients[t_index] = -1
                builder.add_constraint(coefficients, Relation.GE, value)
            else:
                assert level is not None
                builder.add_constraint(coefficients, Relation.GE, value + level)
        return builder

    def fixed_rows(self) -> List[List[Fraction]]:
        return [[ONE] * self.n] + [row for row, _ in self.frozen]

    def rank(self) -> int:
        return matrix_rank(self.fixed_rows(), self.n)


def nucleolus(
    g: TUGame,
    *,
    coalitions: CoalitionFamily = "essential",
    limit: Optional[int] = None,
    certify: Optional[bool] = None,
) -> Payoff:
    """Core point lexicographically maximizing the sorted satisfactions.

    With `certify` the result must pass `kohlberg_check`. By default this happens for the
    essential family on games with at most `lp_oracle_max_players` players.

    Each stage maximizes the minimum satisfaction t over the active coalitions, then freezes the
    coalitions that cannot rise above t* while all others stay at least t*. Coalitions whose
    indicator falls in the span of the frozen ones leave the active set. The point is unique
    once the frozen indicators (with efficiency) have rank n.
    """

    n = g.player_count
    require_players("nucleolus", n, limit or get_settings().max_players)
    if n == 0:
        return ()
    total = g.worth_mask(g.grand_mask)
    if n == 1:
        return (total,)

    state = _NucleolusState(n, total)
    active = [(s, g.worth(s)) for s in _proper_family(g, coalitions)]
    stage = 0
    while True:
        builder = state.program(active, None)
        builder.set_objective({n: 1}, Sense.MAX)
        result = lp_solve(builder.build())
        if not result.optimal or result.point is None or result.value is None:
            raise LpError(f"nucleolus stage {stage} ended {result.status.value}")
        level = result.value
        if stage == 0 and level < 0:
            raise PreconditionError("game is not balanced: the core is empty")
        x = result.point[:n]

        fixed = state.program(active, level).build()
        newly: List[tuple[Coalition, Fraction]] = []
        for s, value in active:
            if sum((x[i] for i in s), ZERO) - value > level:
                continue
            best = lp_solve(fixed.with_objective(_indicator(n, s), Sense.MAX))
            if best.optimal and best.value == value + level:
                newly.append((s, value))
        if not newly:
            raise LpError(f"nucleolus stage {stage} froze no coalition at t={level}")

        rank = state.rank()
        for s, value in newly:
            row = _indicator(n, s)
            if matrix_rank(state.fixed_rows() + [row], n) > rank:
                state.frozen.append((row, value + level))
                rank += 1
        logger.debug("nucleolus stage %d t=%s froze %s rank=%d", stage, level, [str(s) for s, _ in newly], rank)

        if rank == n:
            rows = state.fixed_rows()
            rhs = [total] + [r for _, r in state.frozen]
            point = solve_unique(rows, rhs, n)
            if point is None:
                raise LpError("frozen nucleolus system has no unique solution")
            break
        fixed_rows = state.fixed_rows()
        active = [(s, v) for s, v in active if matrix_rank(fixed_rows + [_indicator(n, s)], n) > rank]
        if not active:
            point = tuple(x)
            break
        stage += 1

    if certify is None:
        certify = coalitions == "essential" and n <= get_settings().lp_oracle_max_players
    if certify and not kohlberg_check(g, point).balanced:
        raise LpError(f"nucleolus candidate {point} failed the Kohlberg certificate")
    return point


# ---------------------------------------------------------------------------
# Shapley value
# ---------------------------------------------------------------------------


def shapley_value(g: TUGame, *, limit: Optional[int] = None) -> Payoff:
    """Weighted marginal contributions |S|!(n-|S|-1)!/n! (w(S+i) - w(S))."""

    n = g.player_count
    require_players("shapley value", n, limit or get_settings().max_players)
    if n == 0:
        return ()
    table = g.worth_table(limit)
    weight = [Fraction(math.factorial(k) * math.factorial(n - k - 1), math.factorial(n)) for k in range(n)]
    phi = [ZERO] * n
    for mask in range(1 << n):
        size = mask.bit_count()
        if size == n:
            continue
        base = table[mask]
        for i in range(n):
            bit = 1 << i
            if not mask & bit:
                phi[i] += weight[size] * (table[mask | bit] - base)
    return tuple(phi)
