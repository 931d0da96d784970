"""Enumeration-based reference for the nucleolus of very small games.

The nucleolus is the only core point that solves x(N) = w(N) together with the equalities
x(A) - w(A) = x(B) - w(B) between coalitions of equal satisfaction. Some n-1 of those
equalities already pin it down, so trying every (n-1)-subset of pairwise equalities over the
essential proper coalitions and keeping the core point with the lexicographically greatest
sorted satisfactions recovers it without any LP.
"""

from __future__ import annotations

import itertools
import logging
from fractions import Fraction
from typing import List, Optional

from ..core.assignment import core_contains
from ..core.errors import PreconditionError, require_players
from ..core.game import TUGame
from ..core.lp import solve_unique
from ..core.rational import ONE, ZERO, Payoff

logger = logging.getLogger(__name__)

ENUMERATION_MAX_PLAYERS = 4


def enumerated_nucleolus(g: TUGame, *, limit: int = ENUMERATION_MAX_PLAYERS) -> Payoff:
    n = g.player_count
    require_players("enumerated nucleolus", n, limit)
    total = g.worth_mask(g.grand_mask)
    if n <= 1:
        return (total,) * n

    family = [(s, g.worth(s)) for s in g.essential_coalitions() if s.mask != g.grand_mask]
    equations: List[tuple[List[Fraction], Fraction]] = []
    for (a, wa), (b, wb) in itertools.combinations(family, 2):
        row = [(ONE if i in a else ZERO) - (ONE if i in b else ZERO) for i in range(n)]
        equations.append((row, wa - wb))

    best: Optional[Payoff] = None
    best_key: Optional[List[Fraction]] = None
    tried = 0
    for chosen in itertools.combinations(equations, n - 1):
        tried += 1
        point = solve_unique([[ONE] * n] + [row for row, _ in chosen], [total] + [rhs for _, rhs in chosen], n)
        if point is None or not core_contains(g, point).member:
            continue
        key = sorted(sum((point[i] for i in s), ZERO) - w for s, w in family)
        if best_key is None or key > best_key:
            best, best_key = point, key
    logger.debug("enumerated nucleolus: %d systems over %d coalitions", tried, len(family))
    if best is None:
        raise PreconditionError("game is not balanced: no candidate point lies in the core")
    return best
