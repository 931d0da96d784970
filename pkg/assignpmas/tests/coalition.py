from __future__ import annotations

import pytest

from assignpmas.core.coalition import Coalition, all_coalitions, sort_coalitions, two_part_splits


def test_labels_are_one_based() -> None:
    s = Coalition.from_labels([1, 3])
    assert s.mask == 0b101
    assert s.members == (0, 2)
    assert s.label() == "1,3"
    assert str(s) == "{1,3}"
    assert 2 in s and 1 not in s


def test_set_operations() -> None:
    a = Coalition.of(0, 1)
    b = Coalition.of(1, 2)
    assert a | b == Coalition.full(3)
    assert a & b == Coalition.of(1)
    assert a - b == Coalition.of(0)
    assert Coalition.of(1).issubset(a)
    assert a.add(3).remove(0) == Coalition.of(1, 3)
    assert not Coalition.empty()
    assert len(Coalition.full(4)) == 4


def test_canonical_order_is_size_then_members() -> None:
    labels = [s.label() for s in all_coalitions(3)]
    assert labels == ["1", "2", "3", "1,2", "1,3", "2,3", "1,2,3"]
    assert all_coalitions(2, include_empty=True)[0] == Coalition.empty()
    assert sort_coalitions([Coalition.of(0, 1), Coalition.of(2)]) == [Coalition.of(2), Coalition.of(0, 1)]


def test_two_part_splits_are_unordered() -> None:
    assert list(two_part_splits(0b111)) == [(0b001, 0b110), (0b011, 0b100), (0b101, 0b010)]
    assert list(two_part_splits(0b1)) == []


def test_negative_players_rejected() -> None:
    with pytest.raises(ValueError):
        Coalition(-1)
    with pytest.raises(ValueError):
        Coalition.of(-2)
