from __future__ import annotations

import random

import pytest

from assignpmas.core.assignment import AssignmentGame, SurplusMatrix, core_vertices, side_optimal_vertices
from assignpmas.core.coalition import Coalition
from assignpmas.core.errors import NotAdmissibleError, NotInCoreError, PreconditionError, SizeLimitError
from assignpmas.core.game import ExplicitGame, TUGame, is_inessential
from assignpmas.core.pmas import (
    Coverage,
    Scheme,
    ViolationKind,
    build_pmas,
    build_veto_pmas,
    pmas_exists_lp,
    pmas_extend_lp,
    verify_pmas,
)
from assignpmas.core.solutions import tau_value_assignment
from assignpmas.harness.generators import random_admissible_matrix, random_rational
from assignpmas.harness.golden import VETO_EXAMPLE, gamma_example, veto_example

from ._oracles import random_veto_game


def _c(*labels: int) -> Coalition:
    return Coalition.from_labels(labels)


def _dominant() -> AssignmentGame:
    return AssignmentGame(SurplusMatrix.from_rows([[5, 3], [2, 0]]))


def test_build_pmas_extends_every_core_vertex() -> None:
    g = _dominant()
    for vertex in core_vertices(g):
        scheme = build_pmas(g, vertex)
        assert scheme.grand_allocation == vertex
        assert verify_pmas(g, scheme).valid


def test_build_pmas_on_blocks_with_null_lines() -> None:
    g = AssignmentGame(SurplusMatrix.from_rows([[0, 0, 0], [0, 4, 1], [2, 0, 0]]))
    point = tau_value_assignment(g)
    scheme = build_pmas(g, point)
    assert len(scheme) == 2**6 - 1
    assert verify_pmas(g, scheme)
    assert scheme.payoff(g.grand, 0) == 0


def test_build_pmas_refusals() -> None:
    with pytest.raises(NotAdmissibleError):
        build_pmas(gamma_example(), (2, 1, 4, 1))
    with pytest.raises(NotInCoreError):
        build_pmas(_dominant(), (5, 0, 0, 1))


def test_verify_reports_efficiency_first() -> None:
    g = ExplicitGame(2, {_c(1): 1, _c(1, 2): 4})
    scheme = Scheme(2, {_c(1): (1,), _c(2): (0,), _c(1, 2): (1, 2)})
    check = verify_pmas(g, scheme)
    assert not check.valid
    assert check.violation is not None
    assert check.violation.kind is ViolationKind.EFFICIENCY
    assert check.violation.coalition == _c(1, 2)


def test_verify_reports_monotonicity() -> None:
    g = ExplicitGame(2, {_c(1): 1, _c(1, 2): 4})
    check = verify_pmas(g, Scheme(2, {_c(1): (1,), _c(2): (0,), _c(1, 2): (0, 4)}))
    assert not check
    violation = check.violation
    assert violation is not None
    assert violation.kind is ViolationKind.MONOTONICITY
    assert (violation.coalition, violation.superset, violation.player) == (_c(1), _c(1, 2), 0)
    assert violation.describe() == "monotonicity fails for player 1: x^{1} = 1 > x^{1,2} = 0"


def test_essential_scheme_expands_to_the_full_one() -> None:
    g = _dominant()
    full = build_pmas(g, side_optimal_vertices(g).row_optimal)
    essential = {s: x for s, x in full.allocations.items() if s in g.essential_coalitions()}
    compact = Scheme(4, essential, Coverage.ESSENTIAL)
    assert compact.expand(g).allocations == full.allocations
    assert verify_pmas(g, compact).valid


def test_veto_scheme() -> None:
    g = veto_example()
    scheme = build_veto_pmas(g, 0)
    assert scheme.grand_allocation == (8, 0, 0, 0)
    assert verify_pmas(g, scheme).valid
    with pytest.raises(PreconditionError):
        build_veto_pmas(g, 1)


def test_oracle_on_veto_game() -> None:
    g = veto_example()
    assert pmas_extend_lp(g, VETO_EXAMPLE["extendable"]).feasible
    assert not pmas_extend_lp(g, VETO_EXAMPLE["not_extendable"]).feasible
    found = pmas_exists_lp(g)
    assert found.feasible
    assert found.scheme is not None and verify_pmas(g, found.scheme).valid


def test_oracle_refuses_gamma_and_non_superadditive_games() -> None:
    assert not pmas_exists_lp(gamma_example())
    result = pmas_exists_lp(ExplicitGame(2, {_c(1): 1, _c(2): 1, _c(1, 2): 1}))
    assert not result.feasible
    assert result.reason.startswith("not superadditive")
    assert result.witness == (_c(1), _c(2))


def test_oracle_agrees_with_builder_on_dominant_block() -> None:
    g = _dominant()
    result = pmas_exists_lp(g)
    assert result.feasible
    assert result.variables > 0
    with pytest.raises(NotInCoreError):
        pmas_extend_lp(g, (0, 0, 0, 0))


def test_oracle_player_limit() -> None:
    g = AssignmentGame(SurplusMatrix.from_rows([[1] * 10]))
    with pytest.raises(SizeLimitError):
        pmas_exists_lp(g)
    with pytest.raises(SizeLimitError):
        pmas_exists_lp(_dominant(), limit=3)


def test_serialize_uses_canonical_order() -> None:
    scheme = Scheme(2, {_c(1, 2): (1, 3), _c(2): (0,), _c(1): (0,)})
    assert scheme.serialize() == "S=1 -> 0\nS=2 -> 0\nS=1,2 -> 1,3\n"


def _assert_restricts_to_witness_parts(g: TUGame, scheme: Scheme) -> None:
    for s in scheme.coalitions():
        verdict = is_inessential(g, s)
        if verdict.witness is None:
            continue
        for part in verdict.witness:
            for i in part:
                assert scheme.payoff(s, i) == scheme.payoff(part, i), (s, part, i)


def test_row_vector_scheme_table() -> None:
    g = AssignmentGame(SurplusMatrix.from_rows([[5, 3, 2]]))
    scheme = build_pmas(g, (4, 1, 0, 0))
    assert scheme[_c(1, 2)] == (4, 1)
    assert scheme[_c(1, 3)] == (3, 0)
    assert scheme[_c(1, 4)] == (2, 0)
    assert scheme[_c(2, 3)] == (0, 0)
    assert scheme[_c(1, 2, 3)] == (4, 1, 0)
    assert scheme[_c(1, 3, 4)] == (3, 0, 0)
    assert scheme.grand_allocation == (4, 1, 0, 0)
    assert verify_pmas(g, scheme).valid


def test_dominant_block_scheme_table() -> None:
    g = AssignmentGame(SurplusMatrix.from_rows([[6, 3], [2, 0]]))
    scheme = build_pmas(g, (4, 0, 2, 0))
    assert scheme[_c(1, 3)] == (4, 2)
    assert scheme[_c(1, 4)] == (3, 0)
    assert scheme[_c(2, 3)] == (0, 2)
    assert scheme[_c(1, 2, 3)] == (4, 0, 2)
    assert scheme[_c(1, 2, 4)] == (3, 0, 0)
    assert scheme[_c(1, 3, 4)] == (4, 2, 0)
    assert scheme[_c(2, 3, 4)] == (0, 2, 0)
    for s in scheme.coalitions():
        for player in (1, 3):
            if player in s:
                assert scheme.payoff(s, player) == 0
    assert verify_pmas(g, scheme).valid


def test_schemes_restrict_to_witness_parts() -> None:
    line = AssignmentGame(SurplusMatrix.from_rows([[5, 3, 2]]))
    for g in (veto_example(), _dominant(), line):
        found = pmas_exists_lp(g)
        assert found.scheme is not None
        _assert_restricts_to_witness_parts(g, found.scheme)
    _assert_restricts_to_witness_parts(line, build_pmas(line, (4, 1, 0, 0)))

    rng = random.Random(23)
    for _ in range(4):
        g = AssignmentGame(random_admissible_matrix(rng, 5))
        vertices = side_optimal_vertices(g)
        _assert_restricts_to_witness_parts(g, build_pmas(g, vertices.row_optimal))
        found = pmas_exists_lp(g)
        assert found.scheme is not None
        _assert_restricts_to_witness_parts(g, found.scheme)


def test_random_line_matrices_extend_side_vertices_and_midpoint() -> None:
    rng = random.Random(31)
    for k in range(12):
        entries = [random_rational(rng) for _ in range(rng.randint(1, 5))]
        rows = [entries] if k % 2 == 0 else [[a] for a in entries]
        g = AssignmentGame(SurplusMatrix.from_rows(rows))
        vertices = side_optimal_vertices(g)
        for point in (vertices.row_optimal, vertices.column_optimal, tau_value_assignment(g)):
            scheme = build_pmas(g, point)
            assert scheme.grand_allocation == point
            assert verify_pmas(g, scheme).valid, (rows, point)


def test_random_monotonic_veto_games() -> None:
    rng = random.Random(41)
    for _ in range(20):
        n = rng.randint(2, 6)
        veto = rng.randrange(n)
        g = random_veto_game(rng, n, veto)
        scheme = build_veto_pmas(g, veto)
        assert scheme.grand_allocation[veto] == g.worth(g.grand)
        assert verify_pmas(g, scheme).valid
