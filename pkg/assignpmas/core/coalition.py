from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


def mask_members(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_sort_key(mask: int) -> tuple[int, list[int]]:
    return (mask.bit_count(), mask_members(mask))


def proper_submasks(mask: int) -> Iterator[int]:
    """Nonempty proper submasks of `mask` in increasing numeric order."""

    sub = (mask - 1) & mask
    found = []
    while sub:
        found.append(sub)
        sub = (sub - 1) & mask
    return reversed(found)


def two_part_splits(mask: int) -> Iterator[tuple[int, int]]:
    """Unordered splits S1 | S2 of `mask`; S1 always holds the lowest member."""

    low = mask & -mask
    for sub in proper_submasks(mask):
        if sub & low:
            yield sub, mask ^ sub


@dataclass(frozen=True)
class Coalition:
    """Set of player indices stored as a bitmask (bit i set iff player i belongs)."""

    mask: int = 0

    def __post_init__(self) -> None:
        if self.mask < 0:
            raise ValueError("coalition mask must be nonnegative")

    @classmethod
    def of(cls, *players: int) -> "Coalition":
        return cls.from_members(players)

    @classmethod
    def from_members(cls, players: Iterable[int]) -> "Coalition":
        mask = 0
        for p in players:
            if p < 0:
                raise ValueError(f"player index must be nonnegative, got {p}")
            mask |= 1 << p
        return cls(mask)

    @classmethod
    def from_labels(cls, labels: Iterable[int]) -> "Coalition":
        """Build from 1-based player labels."""

        return cls.from_members(label - 1 for label in labels)

    @classmethod
    def full(cls, n: int) -> "Coalition":
        return cls((1 << n) - 1)

    @classmethod
    def empty(cls) -> "Coalition":
        return cls(0)

    def __iter__(self) -> Iterator[int]:
        return iter(mask_members(self.mask))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __bool__(self) -> bool:
        return self.mask != 0

    def __contains__(self, player: object) -> bool:
        return isinstance(player, int) and player >= 0 and bool(self.mask >> player & 1)

    def __or__(self, other: "Coalition") -> "Coalition":
        return Coalition(self.mask | other.mask)

    def __and__(self, other: "Coalition") -> "Coalition":
        return Coalition(self.mask & other.mask)

    def __sub__(self, other: "Coalition") -> "Coalition":
        return Coalition(self.mask & ~other.mask)

    def issubset(self, other: "Coalition") -> bool:
        return self.mask & ~other.mask == 0

    def issuperset(self, other: "Coalition") -> bool:
        return other.issubset(self)

    def isdisjoint(self, other: "Coalition") -> bool:
        return self.mask & other.mask == 0

    def add(self, player: int) -> "Coalition":
        return Coalition(self.mask | 1 << player)

    def remove(self, player: int) -> "Coalition":
        return Coalition(self.mask & ~(1 << player))

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(mask_members(self.mask))

    @property
    def max_player(self) -> int:
        return self.mask.bit_length() - 1

    def sort_key(self) -> tuple[int, list[int]]:
        return mask_sort_key(self.mask)

    def label(self, sep: str = ",") -> str:
        """1-based member list, e.g. "1,3,4"."""

        return sep.join(str(i + 1) for i in self)

    def __str__(self) -> str:
        return "{" + self.label() + "}"


def all_coalitions(n: int, *, include_empty: bool = False) -> list[Coalition]:
    """Every coalition of n players in (cardinality, lexicographic) order."""

    start = 0 if include_empty else 1
    masks = sorted(range(start, 1 << n), key=mask_sort_key)
    return [Coalition(m) for m in masks]


def sort_coalitions(coalitions: Iterable[Coalition]) -> list[Coalition]:
    return sorted(coalitions, key=Coalition.sort_key)
