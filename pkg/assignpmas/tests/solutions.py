from __future__ import annotations

import random
from fractions import Fraction

import pytest

from assignpmas.core.assignment import AssignmentGame
from assignpmas.core.coalition import Coalition
from assignpmas.core.errors import LpError, NotInCoreError, PreconditionError
from assignpmas.core.game import ExplicitGame
from assignpmas.core.solutions import (
    FamilyBalance,
    FamilyVerdict,
    KohlbergCertificate,
    KohlbergLevel,
    balanced_family,
    kohlberg_check,
    lower_vector,
    nucleolus,
    satisfaction,
    satisfaction_table,
    shapley_value,
    tau_value,
    tau_value_assignment,
    upper_vector,
)
from assignpmas.harness.generators import random_matrix
from assignpmas.harness.golden import GAMMA_EXAMPLE, VETO_EXAMPLE, gamma_example, veto_example

from ._oracles import permutation_shapley, random_balanced_game


def _c(*labels: int) -> Coalition:
    return Coalition.from_labels(labels)


def _triangle() -> ExplicitGame:
    return ExplicitGame(3, {_c(1, 2): 1, _c(1, 3): 1, _c(2, 3): 1, _c(1, 2, 3): 1})


def test_upper_and_lower_vectors() -> None:
    g = gamma_example()
    assert upper_vector(g) == GAMMA_EXAMPLE["upper"]
    assert lower_vector(g) == GAMMA_EXAMPLE["lower"]
    assert upper_vector(veto_example()) == VETO_EXAMPLE["upper"]
    assert lower_vector(veto_example()) == VETO_EXAMPLE["lower"]


def test_lower_vector_needs_only_essential_coalitions() -> None:
    rng = random.Random(11)
    for _ in range(60):
        g = random_balanced_game(rng, rng.randint(2, 5))
        assert lower_vector(g, essential_only=True) == lower_vector(g, essential_only=False)
    for _ in range(30):
        m = AssignmentGame(random_matrix(rng, 3, 3, max_players=6))
        assert lower_vector(m, essential_only=True) == lower_vector(m, essential_only=False)


def test_tau_value_of_worked_games() -> None:
    bundle = tau_value(veto_example())
    assert bundle.kappa == Fraction(2, 5)
    assert bundle.tau == VETO_EXAMPLE["tau"]
    assert bundle.to_dict()["kappa"] == "2/5"

    bundle = tau_value(gamma_example())
    assert bundle.kappa == Fraction(1, 2)
    assert bundle.tau == GAMMA_EXAMPLE["tau"]
    assert tau_value_assignment(gamma_example()) == bundle.tau


def test_tau_value_edge_cases() -> None:
    with pytest.raises(PreconditionError):
        tau_value(_triangle())
    assert tau_value(ExplicitGame(0, {})).tau == ()
    additive = ExplicitGame(2, {_c(1): 1, _c(2): 2, _c(1, 2): 3})
    bundle = tau_value(additive)
    assert bundle.kappa == 0
    assert bundle.tau == (1, 2)


def test_satisfactions() -> None:
    g = gamma_example()
    assert satisfaction(g, (2, 1, 4, 1), _c(1, 3)) == 0
    rows = satisfaction_table(g, (2, 1, 4, 1))
    assert [row.coalition.label() for row in rows] == ["1", "2", "3", "4", "1,3", "1,4", "2,3"]
    assert [row.satisfaction for row in rows] == [2, 1, 4, 1, 0, 0, 0]


def test_balanced_family_verdicts() -> None:
    assert balanced_family(2, []).verdict is FamilyVerdict.EMPTY

    partition = balanced_family(2, [_c(1), _c(2)])
    assert partition.verdict is FamilyVerdict.BALANCED
    assert partition.weights == {_c(1): 1, _c(2): 1}

    uncovered = balanced_family(2, [_c(1)])
    assert not uncovered
    assert uncovered.player == 1
    assert uncovered.reason == "player 2 is not covered"

    forced = balanced_family(2, [_c(1, 2), _c(1)])
    assert forced.verdict is FamilyVerdict.NOT_BALANCED
    assert forced.member == _c(1)


def test_balanced_family_weights_are_positive_and_exact() -> None:
    family = [_c(1, 2), _c(1), _c(2), _c(3), _c(1, 3)]
    result = balanced_family(3, family)
    assert result.verdict is FamilyVerdict.BALANCED
    assert all(w > 0 for w in result.weights.values())
    for player in range(3):
        assert sum(w for s, w in result.weights.items() if player in s) == 1


def test_kohlberg_certificates_of_veto_game() -> None:
    g = veto_example()
    tau_certificate = kohlberg_check(g, VETO_EXAMPLE["tau"])
    failure = tau_certificate.first_failure
    assert not tau_certificate.balanced
    assert failure is not None
    assert failure.threshold == Fraction(6, 5)
    assert set(failure.family) == {_c(2), _c(1, 4)}
    assert failure.balance.player == 2

    eta_certificate = kohlberg_check(g, VETO_EXAMPLE["nucleolus"])
    assert eta_certificate.balanced
    assert "verdict=balanced" in eta_certificate.serialize()


def test_kohlberg_of_gamma_tau_fails_at_zero() -> None:
    certificate = kohlberg_check(gamma_example(), GAMMA_EXAMPLE["tau"])
    failure = certificate.first_failure
    assert failure is not None
    assert failure.threshold == 0
    assert failure.balance.member == _c(1, 3)


def test_kohlberg_requires_core_point() -> None:
    with pytest.raises(NotInCoreError):
        kohlberg_check(gamma_example(), (4, 0, 4, 0))


def test_nucleolus_of_worked_games() -> None:
    assert nucleolus(veto_example()) == VETO_EXAMPLE["nucleolus"]
    assert nucleolus(gamma_example()) == GAMMA_EXAMPLE["nucleolus"]
    assert nucleolus(gamma_example(), coalitions="all") == GAMMA_EXAMPLE["nucleolus"]
    assert nucleolus(veto_example(), certify=True) == VETO_EXAMPLE["nucleolus"]


def test_nucleolus_edge_cases() -> None:
    assert nucleolus(ExplicitGame(0, {})) == ()
    assert nucleolus(ExplicitGame(1, {_c(1): 3})) == (3,)
    assert nucleolus(ExplicitGame(2, {_c(1, 2): 4})) == (2, 2)
    with pytest.raises(PreconditionError):
        nucleolus(_triangle())


def test_shapley_value() -> None:
    assert shapley_value(ExplicitGame(2, {_c(1, 2): 4})) == (2, 2)
    for g in (veto_example(), gamma_example(), _triangle()):
        assert shapley_value(g) == permutation_shapley(g)
    phi = shapley_value(ExplicitGame(3, {_c(1, 2): 1, _c(1, 2, 3): 1}))
    assert phi[2] == 0
    assert sum(shapley_value(veto_example())) == 8


def test_nucleolus_checks_its_certificate_by_default(monkeypatch: pytest.MonkeyPatch) -> None:
    failing = KohlbergCertificate((KohlbergLevel(Fraction(0), (), FamilyBalance(FamilyVerdict.NOT_BALANCED)),))
    monkeypatch.setattr("assignpmas.core.solutions.kohlberg_check", lambda g, x: failing)
    with pytest.raises(LpError):
        nucleolus(veto_example())
    assert nucleolus(veto_example(), certify=False) == VETO_EXAMPLE["nucleolus"]
    assert nucleolus(veto_example(), coalitions="all") == VETO_EXAMPLE["nucleolus"]
