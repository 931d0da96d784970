"""Transferable-utility games behind one read interface.

Every game exposes `worth(S)` over `Coalition`s and a faster `worth_mask(mask)` used by the
exhaustive sweeps. Worths are exact Fractions and w(empty) = 0 always.
"""

from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Union

from ..config import get_settings
from .coalition import Coalition, mask_members, mask_sort_key, two_part_splits
from .errors import StructuralError, require_players
from .lp import LinearProgram, LpBuilder, Relation, lp_feasible
from .rational import ZERO, RationalLike, as_rational

logger = logging.getLogger(__name__)


class TUGame(ABC):
    def __init__(self, player_count: int, names: Optional[Sequence[str]] = None):
        if player_count < 0:
            raise StructuralError(f"player count must be nonnegative, got {player_count}")
        if names is not None and len(names) != player_count:
            raise StructuralError(f"expected {player_count} player names, got {len(names)}")
        self._n = player_count
        self._names = tuple(names) if names is not None else tuple(str(i + 1) for i in range(player_count))

    @property
    def player_count(self) -> int:
        return self._n

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    @property
    def grand(self) -> Coalition:
        return Coalition.full(self._n)

    @property
    def grand_mask(self) -> int:
        return (1 << self._n) - 1

    @abstractmethod
    def _value(self, mask: int) -> Fraction:
        """Worth of a nonempty in-range coalition."""

    def worth_mask(self, mask: int) -> Fraction:
        if mask < 0 or mask >> self._n:
            raise StructuralError(f"coalition {Coalition(max(mask, 0))} has players outside 1..{self._n}")
        if mask == 0:
            return ZERO
        return self._value(mask)

    def worth(self, s: Coalition) -> Fraction:
        return self.worth_mask(s.mask)

    def worth_table(self, limit: Optional[int] = None) -> List[Fraction]:
        """Worths of all 2^n coalitions indexed by mask."""

        require_players("full coalition sweep", self._n, limit or get_settings().max_players)
        return [self.worth_mask(m) for m in range(1 << self._n)]

    def subgame(self, s: Coalition) -> "TUGame":
        return SubGame(self, s)

    def essential_coalitions(self) -> List[Coalition]:
        """Coalitions beating every 2-part split, in canonical order."""

        w = self.worth_table()
        out = []
        for mask in range(1, 1 << self._n):
            if mask & (mask - 1) == 0 or _first_split(w, mask) is None:
                out.append(Coalition(mask))
        out.sort(key=Coalition.sort_key)
        return out

    def describe(self) -> str:
        return f"{type(self).__name__}(n={self._n})"


def _first_split(w: Sequence[Fraction], mask: int) -> Optional[tuple[int, int]]:
    for s1, s2 in two_part_splits(mask):
        if w[mask] <= w[s1] + w[s2]:
            return s1, s2
    return None


class ExplicitGame(TUGame):
    """Coalitional function given as a table; unlisted coalitions are worth 0."""

    def __init__(
        self,
        player_count: int,
        values: Mapping[Union[Coalition, int], RationalLike],
        names: Optional[Sequence[str]] = None,
    ):
        super().__init__(player_count, names)
        table: Dict[int, Fraction] = {}
        for key, raw in values.items():
            mask = key.mask if isinstance(key, Coalition) else int(key)
            if mask < 0 or mask >> player_count:
                raise StructuralError(f"coalition {Coalition(max(mask, 0))} has players outside 1..{player_count}")
            value = as_rational(raw)
            if mask == 0:
                if value != 0:
                    raise StructuralError("the empty coalition must be worth 0")
                continue
            if value:
                table[mask] = value
        self._values = table

    def _value(self, mask: int) -> Fraction:
        return self._values.get(mask, ZERO)

    @property
    def values(self) -> Dict[Coalition, Fraction]:
        return {Coalition(m): v for m, v in sorted(self._values.items(), key=lambda kv: mask_sort_key(kv[0]))}


class SubGame(TUGame):
    """Restriction of a parent game to the coalition `members`, reindexed 0..k-1."""

    def __init__(self, parent: TUGame, members: Coalition):
        if not members:
            raise StructuralError("subgame needs a nonempty coalition")
        if members.mask >> parent.player_count:
            raise StructuralError(f"subgame coalition {members} exceeds {parent.player_count} players")
        index_map = members.members
        super().__init__(len(index_map), [parent.names[i] for i in index_map])
        self.parent = parent
        self.index_map = index_map

    def lift(self, mask: int) -> int:
        out = 0
        for local in mask_members(mask):
            out |= 1 << self.index_map[local]
        return out

    def _value(self, mask: int) -> Fraction:
        return self.parent.worth_mask(self.lift(mask))


class CompositeGame(TUGame):
    """Independent sum of component games on consecutive player blocks."""

    def __init__(self, components: Sequence[TUGame]):
        if not components:
            raise StructuralError("compose needs at least one game")
        offsets = []
        total = 0
        names: List[str] = []
        for game in components:
            offsets.append(total)
            total += game.player_count
        default_names = all(g.names == tuple(str(i + 1) for i in range(g.player_count)) for g in components)
        if default_names:
            names = [str(i + 1) for i in range(total)]
        else:
            for game in components:
                names.extend(game.names)
        super().__init__(total, names)
        self.components = tuple(components)
        self.offsets = tuple(offsets)

    def block(self, k: int) -> Coalition:
        size = self.components[k].player_count
        return Coalition(((1 << size) - 1) << self.offsets[k])

    def _value(self, mask: int) -> Fraction:
        total = ZERO
        for game, off in zip(self.components, self.offsets):
            part = (mask >> off) & ((1 << game.player_count) - 1)
            if part:
                total += game.worth_mask(part)
        return total


def worth(game: TUGame, s: Coalition) -> Fraction:
    return game.worth(s)


def subgame(game: TUGame, s: Coalition) -> TUGame:
    if not s:
        raise StructuralError("subgame needs a nonempty coalition")
    return game.subgame(s)


def compose(games: Sequence[TUGame]) -> TUGame:
    if len(games) == 1:
        return games[0]
    return CompositeGame(games)


@dataclass(frozen=True)
class Essentiality:
    essential: bool
    witness: Optional[tuple[Coalition, Coalition]] = None


def is_inessential(game: TUGame, s: Coalition) -> Essentiality:
    """Essential, or Inessential with a split S1|S2 where w(S) <= w(S1) + w(S2)."""

    if not s:
        raise StructuralError("essentiality is defined for nonempty coalitions")
    ws = game.worth(s)
    for s1, s2 in two_part_splits(s.mask):
        if ws <= game.worth_mask(s1) + game.worth_mask(s2):
            parts = sorted((Coalition(s1), Coalition(s2)), key=Coalition.sort_key)
            return Essentiality(False, (parts[0], parts[1]))
    return Essentiality(True)


def essential_coalitions(game: TUGame) -> List[Coalition]:
    return game.essential_coalitions()


def is_superadditive(game: TUGame) -> Optional[tuple[Coalition, Coalition]]:
    """First disjoint pair (S, T) with w(S u T) < w(S) + w(T), or None."""

    w = game.worth_table()
    for mask in sorted(range(1, 1 << game.player_count), key=mask_sort_key):
        for s1, s2 in two_part_splits(mask):
            if w[mask] < w[s1] + w[s2]:
                return Coalition(s1), Coalition(s2)
    return None


def is_monotonic(game: TUGame) -> Optional[tuple[Coalition, int]]:
    """First (S, j) with w(S + j) < w(S), or None."""

    n = game.player_count
    w = game.worth_table()
    for mask in sorted(range(1, 1 << n), key=mask_sort_key):
        for j in range(n):
            if not mask >> j & 1 and w[mask | 1 << j] < w[mask]:
                return Coalition(mask), j
    return None


def veto_players(game: TUGame) -> List[int]:
    n = game.player_count
    w = game.worth_table()
    out = []
    for i in range(n):
        bit = 1 << i
        if all(w[m] == 0 for m in range(1 << n) if not m & bit):
            out.append(i)
    return out


def null_players(game: TUGame) -> List[int]:
    n = game.player_count
    w = game.worth_table()
    out = []
    for i in range(n):
        bit = 1 << i
        if all(w[m | bit] == w[m] for m in range(1 << n) if not m & bit):
            out.append(i)
    return out


def is_convex_game(game: TUGame) -> Optional[tuple[Coalition, int, int]]:
    """First (S, i, j) breaking supermodularity w(S+i+j) - w(S+j) >= w(S+i) - w(S), or None."""

    n = game.player_count
    w = game.worth_table()
    for mask in sorted(range(1 << n), key=mask_sort_key):
        for i in range(n):
            if mask >> i & 1:
                continue
            for j in range(i + 1, n):
                if mask >> j & 1:
                    continue
                bi, bj = 1 << i, 1 << j
                if w[mask | bi | bj] - w[mask | bj] < w[mask | bi] - w[mask]:
                    return Coalition(mask), i, j
    return None


def core_lp(game: TUGame, coalitions: Optional[Sequence[Coalition]] = None) -> LinearProgram:
    """Core constraints x(N) = w(N), x(S) >= w(S), over the essential coalitions by default."""

    n = game.player_count
    builder = LpBuilder()
    for name in game.names:
        builder.add_variable(f"x[{name}]")
    builder.add_constraint({i: 1 for i in range(n)}, Relation.EQ, game.worth_mask(game.grand_mask))
    family = coalitions if coalitions is not None else game.essential_coalitions()
    for s in family:
        if s.mask == game.grand_mask:
            continue
        builder.add_constraint({i: 1 for i in s}, Relation.GE, game.worth(s))
    return builder.build()


def core_point(game: TUGame) -> Optional[tuple[Fraction, ...]]:
    if game.player_count == 0:
        return ()
    result = lp_feasible(core_lp(game))
    return result.point if result.feasible else None


def is_balanced(game: TUGame) -> bool:
    """Nonempty core, decided by exact LP feasibility."""

    return core_point(game) is not None
