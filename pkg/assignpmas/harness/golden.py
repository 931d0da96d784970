"""Worked example games with hand-checked values."""

from __future__ import annotations

from fractions import Fraction

from ..core.assignment import AssignmentGame, SurplusMatrix
from ..core.coalition import Coalition
from ..core.game import ExplicitGame, TUGame, compose


def _labels(*groups: tuple[int, ...]) -> list[Coalition]:
    return [Coalition.from_labels(g) for g in groups]


def veto_example() -> ExplicitGame:
    """Four players, player 1 veto; PMAS-extendable at (8,0,0,0) but not at (1,2,2,3)."""

    keys = _labels((1, 2), (1, 3), (1, 4), (1, 2, 3), (1, 2, 4), (1, 3, 4), (1, 2, 3, 4))
    return ExplicitGame(4, dict(zip(keys, (2, 3, 4, 3, 4, 5, 8))))


def gamma_example() -> AssignmentGame:
    """[[6,3],[5,0]]: a Gamma block whose corner 6 is below 3+5."""

    return AssignmentGame(SurplusMatrix.from_rows([[6, 3], [5, 0]]))


def three_player_component() -> ExplicitGame:
    keys = _labels((1, 2), (1, 3), (2, 3), (1, 2, 3))
    return ExplicitGame(3, dict(zip(keys, (1, 2, 3, 5))))


def two_player_component() -> ExplicitGame:
    return ExplicitGame(2, {Coalition.from_labels((1, 2)): 3})


def composite_example() -> TUGame:
    """Independent sum of the 3-player and 2-player components (tau is not additive here)."""

    return compose([three_player_component(), two_player_component()])


def _q(text: str) -> Fraction:
    return Fraction(text)


VETO_EXAMPLE = {
    "extendable": (8, 0, 0, 0),
    "not_extendable": (1, 2, 2, 3),
    "upper": (8, 3, 4, 5),
    "lower": (0, 0, 0, 0),
    "kappa": _q("2/5"),
    "tau": (_q("16/5"), _q("6/5"), _q("8/5"), _q("10/5")),
    "nucleolus": (_q("21/6"), _q("8/6"), _q("8/6"), _q("11/6")),
    "tau_failure": _q("6/5"),
}

GAMMA_EXAMPLE = {
    "upper": (3, 2, 5, 2),
    "lower": (1, 0, 3, 0),
    "kappa": _q("1/2"),
    "tau": (2, 1, 4, 1),
    "nucleolus": (_q("7/3"), _q("2/3"), _q("13/3"), _q("2/3")),
    "row_optimal": (3, 2, 3, 0),
    "column_optimal": (1, 0, 5, 2),
    "witness": "6 < 3+5",
}

COMPOSITE_EXAMPLE = {
    "tau": (_q("16/15"), _q("24/15"), _q("32/15"), _q("24/15"), _q("24/15")),
    "component_tau": (_q("10/9"), _q("15/9"), _q("20/9"), _q("3/2"), _q("3/2")),
    "nucleolus": (1, _q("3/2"), _q("5/2"), _q("3/2"), _q("3/2")),
}
