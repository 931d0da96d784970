"""Slow reference implementations the tests compare against."""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from typing import Dict, Iterator, List, Sequence

from assignpmas.core.assignment import SurplusMatrix
from assignpmas.core.coalition import Coalition, all_coalitions, mask_members, two_part_splits
from assignpmas.core.game import ExplicitGame, TUGame


def brute_force_matching_value(m: SurplusMatrix, rows: Sequence[int], cols: Sequence[int]) -> Fraction:
    """Best total over every injective row -> column map, allowing rows to stay single."""

    best = Fraction(0)
    options = list(cols) + [None] * len(rows)
    for choice in itertools.permutations(options, len(rows)):
        used = [c for c in choice if c is not None]
        if len(set(used)) != len(used):
            continue
        total = sum((m.entries[i][c] for i, c in zip(rows, choice) if c is not None), Fraction(0))
        best = max(best, total)
    return best


def permutation_shapley(g: TUGame) -> tuple[Fraction, ...]:
    n = g.player_count
    phi = [Fraction(0)] * n
    for order in itertools.permutations(range(n)):
        mask = 0
        for i in order:
            phi[i] += g.worth_mask(mask | 1 << i) - g.worth_mask(mask)
            mask |= 1 << i
    count = math.factorial(n)
    return tuple(v / count for v in phi)


def _set_partitions(items: Sequence[int]) -> Iterator[List[List[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in _set_partitions(rest):
        for k in range(len(partition)):
            yield partition[:k] + [[first] + partition[k]] + partition[k + 1 :]
        yield [[first]] + partition


def partition_essential(g: TUGame, s: Coalition) -> bool:
    """No partition of S into two or more blocks is worth at least w(S)."""

    worth = g.worth(s)
    for partition in _set_partitions(list(s)):
        if len(partition) > 1 and worth <= sum((g.worth(Coalition.from_members(b)) for b in partition), Fraction(0)):
            return False
    return True


def random_balanced_game(rng: random.Random, n: int) -> ExplicitGame:
    """Worths below a random integer point x with w(N) = x(N); some coalitions copy a split."""

    x = [Fraction(rng.randint(0, 6)) for _ in range(n)]
    full = (1 << n) - 1
    table: Dict[int, Fraction] = {}
    for s in all_coalitions(n):
        own = sum((x[i] for i in s), Fraction(0))
        if s.mask == full:
            table[s.mask] = own
        elif len(s) > 1 and rng.random() < 0.3:
            s1, s2 = rng.choice(list(two_part_splits(s.mask)))
            table[s.mask] = table[s1] + table[s2]
        else:
            table[s.mask] = max(Fraction(0), own - rng.randint(0, 4))
    return ExplicitGame(n, table)


def random_superadditive_game(rng: random.Random, n: int) -> ExplicitGame:
    table: Dict[int, Fraction] = {}
    for s in all_coalitions(n):
        if len(s) == 1:
            table[s.mask] = Fraction(rng.randint(0, 3))
            continue
        base = max(table[s1] + table[s2] for s1, s2 in two_part_splits(s.mask))
        table[s.mask] = base + (0 if rng.random() < 0.4 else rng.randint(1, 3))
    return ExplicitGame(n, table)


def random_veto_game(rng: random.Random, n: int, veto: int) -> ExplicitGame:
    """Monotonic game in which every coalition without `veto` is worth 0."""

    table: Dict[int, Fraction] = {}
    for s in all_coalitions(n):
        if veto not in s:
            table[s.mask] = Fraction(0)
            continue
        below = [table[s.mask & ~(1 << j)] for j in mask_members(s.mask) if j != veto]
        table[s.mask] = max(below, default=Fraction(0)) + rng.choice((0, 0, 1, 2, 3))
    return ExplicitGame(n, table)
