"""Exact linear programming over Fractions.

Two-phase primal simplex on a sparse tableau with Bland's smallest-index rule, so the
pivot sequence is deterministic and cycling cannot occur. Variables are free unless a
lower bound is given; free variables are split into a positive and a negative part.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence

from .errors import LpError, LpInfeasibleError, LpUnboundedError, StructuralError
from .rational import ZERO, RationalLike, as_rational

logger = logging.getLogger(__name__)


class Relation(str, Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class Sense(str, Enum):
    MAX = "max"
    MIN = "min"


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coefficients: tuple[Fraction, ...]
    relation: Relation
    rhs: Fraction

    @classmethod
    def of(cls, coefficients: Sequence[RationalLike], relation: Relation | str, rhs: RationalLike) -> "Constraint":
        return cls(tuple(as_rational(c) for c in coefficients), Relation(relation), as_rational(rhs))

    def activity(self, point: Sequence[Fraction]) -> Fraction:
        return sum((c * x for c, x in zip(self.coefficients, point) if c), ZERO)

    def holds(self, point: Sequence[Fraction]) -> bool:
        lhs = self.activity(point)
        if self.relation is Relation.LE:
            return lhs <= self.rhs
        if self.relation is Relation.GE:
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass(frozen=True)
class LinearProgram:
    """max/min objective . x subject to constraints, with optional per-variable lower bounds.

    An empty `objective` means the zero objective; an empty `lower_bounds` means every
    variable is free.
    """

    variables: tuple[str, ...]
    constraints: tuple[Constraint, ...] = ()
    objective: tuple[Fraction, ...] = ()
    sense: Sense = Sense.MAX
    lower_bounds: tuple[Optional[Fraction], ...] = ()

    def __post_init__(self) -> None:
        n = len(self.variables)
        for idx, con in enumerate(self.constraints):
            if len(con.coefficients) != n:
                raise StructuralError(
                    f"constraint {idx} has {len(con.coefficients)} coefficients for {n} variables"
                )
        if self.objective and len(self.objective) != n:
            raise StructuralError(f"objective has {len(self.objective)} coefficients for {n} variables")
        if self.lower_bounds and len(self.lower_bounds) != n:
            raise StructuralError(f"lower_bounds has {len(self.lower_bounds)} entries for {n} variables")

    @property
    def size(self) -> int:
        return len(self.variables)

    def bound(self, j: int) -> Optional[Fraction]:
        return self.lower_bounds[j] if self.lower_bounds else None

    def objective_value(self, point: Sequence[Fraction]) -> Fraction:
        if not self.objective:
            return ZERO
        return sum((c * x for c, x in zip(self.objective, point) if c), ZERO)

    def is_satisfied_by(self, point: Sequence[Fraction]) -> bool:
        if len(point) != self.size:
            return False
        for j, x in enumerate(point):
            lo = self.bound(j)
            if lo is not None and x < lo:
                return False
        return all(con.holds(point) for con in self.constraints)

    def with_objective(self, coefficients: Sequence[RationalLike], sense: Sense = Sense.MAX) -> "LinearProgram":
        return replace(self, objective=tuple(as_rational(c) for c in coefficients), sense=sense)

    def with_constraint(self, constraint: Constraint) -> "LinearProgram":
        return replace(self, constraints=self.constraints + (constraint,))

    def unit_objective(self, var_index: int, sense: Sense = Sense.MAX) -> "LinearProgram":
        if not 0 <= var_index < self.size:
            raise StructuralError(f"variable index {var_index} out of range for {self.size} variables")
        row = [ZERO] * self.size
        row[var_index] = Fraction(1)
        return replace(self, objective=tuple(row), sense=sense)


@dataclass(frozen=True)
class LpResult:
    status: LpStatus
    point: Optional[tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    point: Optional[tuple[Fraction, ...]] = None


@dataclass
class LpBuilder:
    """Incremental, sparse construction of a LinearProgram."""

    names: List[str] = field(default_factory=list)
    bounds: List[Optional[Fraction]] = field(default_factory=list)
    rows: List[tuple[Dict[int, Fraction], Relation, Fraction]] = field(default_factory=list)
    objective: Dict[int, Fraction] = field(default_factory=dict)
    sense: Sense = Sense.MAX

    def add_variable(self, name: str, lower: Optional[RationalLike] = None) -> int:
        self.names.append(name)
        self.bounds.append(None if lower is None else as_rational(lower))
        return len(self.names) - 1

    def add_constraint(
        self, coefficients: Mapping[int, RationalLike], relation: Relation | str, rhs: RationalLike
    ) -> None:
        row: Dict[int, Fraction] = {}
        for j, c in coefficients.items():
            if not 0 <= j < len(self.names):
                raise StructuralError(f"variable index {j} out of range for {len(self.names)} variables")
            value = as_rational(c)
            if value:
                row[j] = row.get(j, ZERO) + value
        self.rows.append((row, Relation(relation), as_rational(rhs)))

    def set_objective(self, coefficients: Mapping[int, RationalLike], sense: Sense = Sense.MAX) -> None:
        self.objective = {j: as_rational(c) for j, c in coefficients.items()}
        self.sense = sense

    def build(self) -> LinearProgram:
        n = len(self.names)
        constraints = []
        for row, relation, rhs in self.rows:
            dense = [ZERO] * n
            for j, c in row.items():
                dense[j] = c
            constraints.append(Constraint(tuple(dense), relation, rhs))
        objective: tuple[Fraction, ...] = ()
        if self.objective:
            dense = [ZERO] * n
            for j, c in self.objective.items():
                dense[j] = c
            objective = tuple(dense)
        lower = tuple(self.bounds) if any(b is not None for b in self.bounds) else ()
        return LinearProgram(
            variables=tuple(self.names),
            constraints=tuple(constraints),
            objective=objective,
            sense=self.sense,
            lower_bounds=lower,
        )


class _Tableau:
    """Sparse simplex tableau; row r reads sum_j rows[r][j] * y_j = rhs[r] with basis[r] basic."""

    def __init__(self) -> None:
        self.rows: List[Dict[int, Fraction]] = []
        self.rhs: List[Fraction] = []
        self.basis: List[int] = []
        self.obj: Dict[int, Fraction] = {}
        self.value: Fraction = ZERO
        self.pivots = 0

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        piv = row[c]
        if piv != 1:
            row = {j: v / piv for j, v in row.items()}
            self.rows[r] = row
            self.rhs[r] = self.rhs[r] / piv
        b = self.rhs[r]
        for k, other in enumerate(self.rows):
            if k == r:
                continue
            f = other.get(c)
            if f is None:
                continue
            for j, v in row.items():
                nv = other.get(j, ZERO) - f * v
                if nv:
                    other[j] = nv
                else:
                    other.pop(j, None)
            self.rhs[k] -= f * b
        f = self.obj.get(c)
        if f is not None:
            for j, v in row.items():
                nv = self.obj.get(j, ZERO) - f * v
                if nv:
                    self.obj[j] = nv
                else:
                    self.obj.pop(j, None)
            self.value += f * b
        self.basis[r] = c
        self.pivots += 1

    def price_out(self) -> None:
        for r, b in enumerate(self.basis):
            f = self.obj.get(b)
            if not f:
                continue
            for j, v in self.rows[r].items():
                nv = self.obj.get(j, ZERO) - f * v
                if nv:
                    self.obj[j] = nv
                else:
                    self.obj.pop(j, None)
            self.value += f * self.rhs[r]

    def maximize(self) -> bool:
        """Run Bland-rule pivots to optimality; False means the objective is unbounded."""

        while True:
            entering = min((j for j, c in self.obj.items() if c > 0), default=None)
            if entering is None:
                return True
            best_row = -1
            best_ratio = ZERO
            for r, row in enumerate(self.rows):
                a = row.get(entering)
                if a is None or a <= 0:
                    continue
                ratio = self.rhs[r] / a
                if (
                    best_row < 0
                    or ratio < best_ratio
                    or (ratio == best_ratio and self.basis[r] < self.basis[best_row])
                ):
                    best_row = r
                    best_ratio = ratio
            if best_row < 0:
                return False
            self.pivot(best_row, entering)


def _solve(lp: LinearProgram) -> LpResult:
    n = lp.size
    # Column layout: structural columns first, then slack/surplus, then artificials.
    pos_col: List[int] = []
    neg_col: List[Optional[int]] = []
    offset: List[Fraction] = []
    ncols = 0
    for j in range(n):
        lo = lp.bound(j)
        pos_col.append(ncols)
        ncols += 1
        if lo is None:
            neg_col.append(ncols)
            ncols += 1
            offset.append(ZERO)
        else:
            neg_col.append(None)
            offset.append(lo)

    prepared: List[tuple[Dict[int, Fraction], Relation, Fraction]] = []
    for con in lp.constraints:
        row: Dict[int, Fraction] = {}
        rhs = con.rhs
        for j, a in enumerate(con.coefficients):
            if not a:
                continue
            row[pos_col[j]] = a
            neg = neg_col[j]
            if neg is not None:
                row[neg] = -a
            rhs -= a * offset[j]
        relation = con.relation
        if rhs < 0:
            row = {k: -v for k, v in row.items()}
            rhs = -rhs
            if relation is Relation.LE:
                relation = Relation.GE
            elif relation is Relation.GE:
                relation = Relation.LE
        prepared.append((row, relation, rhs))

    tab = _Tableau()
    slack_needed = sum(1 for _, rel, _ in prepared if rel is not Relation.EQ)
    next_slack = ncols
    next_art = ncols + slack_needed
    artificials: List[int] = []
    for row, relation, rhs in prepared:
        if relation is Relation.LE:
            row[next_slack] = Fraction(1)
            tab.basis.append(next_slack)
            next_slack += 1
        else:
            if relation is Relation.GE:
                row[next_slack] = Fraction(-1)
                next_slack += 1
            row[next_art] = Fraction(1)
            tab.basis.append(next_art)
            artificials.append(next_art)
            next_art += 1
        tab.rows.append(row)
        tab.rhs.append(rhs)

    if artificials:
        art_set = set(artificials)
        tab.obj = {a: Fraction(-1) for a in artificials}
        tab.price_out()
        tab.maximize()
        if tab.value < 0:
            logger.debug("lp infeasible after phase 1 (%d rows, %d pivots)", len(tab.rows), tab.pivots)
            return LpResult(LpStatus.INFEASIBLE)
        # Drive zero-level artificials out of the basis; rows that cannot pivot are redundant.
        r = 0
        while r < len(tab.rows):
            if tab.basis[r] in art_set:
                candidates = [j for j in tab.rows[r] if j not in art_set]
                if candidates:
                    tab.pivot(r, min(candidates))
                else:
                    del tab.rows[r]
                    del tab.rhs[r]
                    del tab.basis[r]
                    continue
            r += 1
        for row in tab.rows:
            for a in artificials:
                row.pop(a, None)

    sign = 1 if lp.sense is Sense.MAX else -1
    tab.obj = {}
    tab.value = ZERO
    for j, c in enumerate(lp.objective):
        if not c:
            continue
        tab.obj[pos_col[j]] = sign * c
        neg = neg_col[j]
        if neg is not None:
            tab.obj[neg] = -sign * c
    tab.price_out()
    if not tab.maximize():
        logger.debug("lp unbounded (%d rows, %d pivots)", len(tab.rows), tab.pivots)
        return LpResult(LpStatus.UNBOUNDED)

    y = [ZERO] * next_art
    for r, b in enumerate(tab.basis):
        y[b] = tab.rhs[r]
    point = []
    for j in range(n):
        neg = neg_col[j]
        x = offset[j] + y[pos_col[j]]
        if neg is not None:
            x -= y[neg]
        point.append(x)
    solution = tuple(point)
    if not lp.is_satisfied_by(solution):
        raise LpError("simplex produced a point that fails exact substitution")
    logger.debug("lp optimal (%d vars, %d rows, %d pivots)", n, len(lp.constraints), tab.pivots)
    return LpResult(LpStatus.OPTIMAL, solution, lp.objective_value(solution))


def lp_solve(lp: LinearProgram) -> LpResult:
    """Exact optimum, or an Infeasible/Unbounded status."""

    return _solve(lp)


def lp_feasible(lp: LinearProgram) -> Feasibility:
    result = _solve(replace(lp, objective=()))
    if result.optimal:
        return Feasibility(True, result.point)
    return Feasibility(False)


def _coordinate(lp: LinearProgram, var_index: int, sense: Sense) -> Fraction:
    result = _solve(lp.unit_objective(var_index, sense))
    if result.status is LpStatus.INFEASIBLE:
        raise LpInfeasibleError(f"program is infeasible; cannot optimize {lp.variables[var_index]}")
    if result.status is LpStatus.UNBOUNDED:
        raise LpUnboundedError(f"{lp.variables[var_index]} is unbounded ({sense.value})")
    assert result.value is not None
    return result.value


def lp_max_coordinate(lp: LinearProgram, var_index: int) -> Fraction:
    return _coordinate(lp, var_index, Sense.MAX)


def lp_min_coordinate(lp: LinearProgram, var_index: int) -> Fraction:
    return _coordinate(lp, var_index, Sense.MIN)


def lp_lexicographic(
    lp: LinearProgram, objectives: Sequence[Sequence[RationalLike]], sense: Sense = Sense.MAX
) -> LpResult:
    """Optimize each objective in turn, pinning every earlier optimum as an equality."""

    current = lp
    result = LpResult(LpStatus.INFEASIBLE)
    if not objectives:
        return lp_solve(replace(lp, objective=()))
    for coefficients in objectives:
        staged = current.with_objective(coefficients, sense)
        result = _solve(staged)
        if not result.optimal:
            return result
        assert result.value is not None
        current = current.with_constraint(Constraint(staged.objective, Relation.EQ, result.value))
    return result


def _row_echelon(rows: Sequence[Sequence[Fraction]], rhs: Optional[Sequence[Fraction]], n: int):
    """Gauss-Jordan elimination on copies; returns (reduced rows, reduced rhs, pivot columns)."""

    work = [list(r) for r in rows]
    b = list(rhs) if rhs is not None else [ZERO] * len(work)
    pivots: List[int] = []
    r = 0
    for c in range(n):
        pr = next((k for k in range(r, len(work)) if work[k][c] != 0), None)
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        b[r], b[pr] = b[pr], b[r]
        piv = work[r][c]
        if piv != 1:
            work[r] = [v / piv for v in work[r]]
            b[r] = b[r] / piv
        for k in range(len(work)):
            if k != r and work[k][c] != 0:
                f = work[k][c]
                work[k] = [a - f * p for a, p in zip(work[k], work[r])]
                b[k] -= f * b[r]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work, b, pivots


def matrix_rank(rows: Sequence[Sequence[Fraction]], n: int) -> int:
    if not rows:
        return 0
    return len(_row_echelon(rows, None, n)[2])


def solve_unique(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction], n: int
) -> Optional[tuple[Fraction, ...]]:
    """Unique exact solution of rows . x = rhs, or None if singular or inconsistent."""

    if not rows:
        return () if n == 0 else None
    work, b, pivots = _row_echelon(rows, rhs, n)
    rank = len(pivots)
    if any(b[k] != 0 for k in range(rank, len(work))):
        return None
    if rank < n:
        return None
    x = [ZERO] * n
    for k, c in enumerate(pivots):
        x[c] = b[k]
    return tuple(x)
