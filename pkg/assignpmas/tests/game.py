from __future__ import annotations

import random
from fractions import Fraction

import pytest

from assignpmas.core.coalition import Coalition, all_coalitions
from assignpmas.core.errors import SizeLimitError, StructuralError
from assignpmas.core.game import (
    CompositeGame,
    ExplicitGame,
    compose,
    core_point,
    is_balanced,
    is_convex_game,
    is_inessential,
    is_monotonic,
    is_superadditive,
    null_players,
    subgame,
    veto_players,
)
from assignpmas.harness.golden import veto_example

from ._oracles import partition_essential, random_superadditive_game


def _c(*labels: int) -> Coalition:
    return Coalition.from_labels(labels)


def test_explicit_worths_default_to_zero() -> None:
    g = veto_example()
    assert g.worth(_c(1, 3, 4)) == 5
    assert g.worth(_c(2, 3)) == 0
    assert g.worth(Coalition.empty()) == 0
    assert g.names == ("1", "2", "3", "4")


def test_essential_coalitions_of_veto_game() -> None:
    labels = [s.label() for s in veto_example().essential_coalitions()]
    assert labels == ["1", "2", "3", "4", "1,2", "1,3", "1,4", "1,3,4", "1,2,3,4"]


def test_essential_coalitions_match_partition_search() -> None:
    rng = random.Random(5)
    for _ in range(40):
        g = random_superadditive_game(rng, rng.randint(1, 5))
        expected = [s for s in all_coalitions(g.player_count) if partition_essential(g, s)]
        assert g.essential_coalitions() == expected


def test_inessential_witness_is_a_split() -> None:
    verdict = is_inessential(veto_example(), _c(1, 2, 3))
    assert not verdict.essential
    assert verdict.witness == (_c(2), _c(1, 3))
    assert is_inessential(veto_example(), _c(1, 3, 4)).essential


def test_superadditivity_witness() -> None:
    assert is_superadditive(veto_example()) is None
    g = ExplicitGame(2, {_c(1): 1, _c(2): 1, _c(1, 2): 1})
    assert is_superadditive(g) == (_c(1), _c(2))


def test_monotonicity_witness() -> None:
    g = ExplicitGame(2, {_c(1): 2})
    assert is_monotonic(g) == (_c(1), 1)
    assert is_monotonic(veto_example()) is None


def test_veto_and_null_players() -> None:
    assert veto_players(veto_example()) == [0]
    g = ExplicitGame(3, {_c(1, 2): 1, _c(1, 2, 3): 1})
    assert null_players(g) == [2]


def test_convexity_witness() -> None:
    convex = ExplicitGame(2, {_c(1, 2): 1})
    assert is_convex_game(convex) is None
    g = ExplicitGame(3, {_c(1, 2): 1, _c(1, 3): 1, _c(2, 3): 1, _c(1, 2, 3): 1})
    assert is_convex_game(g) is not None


def test_subgame_reindexes_players() -> None:
    sub = subgame(veto_example(), _c(1, 3, 4))
    assert sub.player_count == 3
    assert sub.names == ("1", "3", "4")
    assert sub.worth(Coalition.full(3)) == 5
    assert sub.worth(Coalition.of(0, 1)) == 3
    with pytest.raises(StructuralError):
        subgame(veto_example(), Coalition.empty())


def test_compose_adds_component_worths() -> None:
    a = ExplicitGame(2, {_c(1, 2): 3})
    b = ExplicitGame(1, {_c(1): 2})
    g = compose([a, b])
    assert isinstance(g, CompositeGame)
    assert g.player_count == 3
    assert g.worth(_c(1, 2, 3)) == 5
    assert g.worth(_c(1, 3)) == 2
    assert g.block(1) == _c(3)
    assert compose([a]) is a


def test_balancedness() -> None:
    assert is_balanced(veto_example())
    point = core_point(veto_example())
    assert point is not None and sum(point) == 8
    g = ExplicitGame(3, {_c(1, 2): 1, _c(1, 3): 1, _c(2, 3): 1, _c(1, 2, 3): 1})
    assert not is_balanced(g)
    assert core_point(g) is None


def test_invalid_tables() -> None:
    with pytest.raises(StructuralError):
        ExplicitGame(2, {Coalition.empty(): 1})
    with pytest.raises(StructuralError):
        ExplicitGame(2, {_c(3): 1})
    with pytest.raises(StructuralError):
        veto_example().worth(_c(5))
    assert ExplicitGame(1, {_c(1): "3/2"}).worth(_c(1)) == Fraction(3, 2)


def test_sweep_respects_player_limit() -> None:
    with pytest.raises(SizeLimitError) as info:
        ExplicitGame(5, {}).worth_table(limit=4)
    assert info.value.limit == 4
    assert info.value.players == 5
