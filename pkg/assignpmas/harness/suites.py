"""
Property suites behind `assignpmas verify-paper`.

Each suite turns a seeded RNG into a list of picklable cases and checks every case
independently, so cases can run in worker processes. A check returns None on success or a
one-line counterexample.
"""

from __future__ import annotations

import logging
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence

from tqdm import tqdm

from ..core.assignment import (
    AssignmentGame,
    SurplusMatrix,
    convex_combination,
    core_vertices,
    side_optimal_vertices,
)
from ..core.blocks import BlockClassifier, WitnessKind, classify_blocks
from ..core.game import compose
from ..core.pmas import build_pmas, build_veto_pmas, pmas_exists_lp, pmas_extend_lp, verify_pmas
from ..core.rational import format_vector
from ..core.solutions import (
    kohlberg_check,
    lower_vector,
    nucleolus,
    satisfaction_table,
    tau_value,
    tau_value_assignment,
    upper_vector,
)
from . import golden
from .generators import (
    entry_grid,
    gamma_triple,
    random_admissible_matrix,
    random_matrix,
    random_positive_square,
    random_violating_matrix,
)
from .oracles import ENUMERATION_MAX_PLAYERS, enumerated_nucleolus

logger = logging.getLogger(__name__)

GRID_VALUES = (0, 1, 2, 3, 5)
QUICK_GRID_VALUES = (0, 1, 3)
GRID_NOTE = "2x3 grid reduced to entries {0,1,3}; --exhaustive uses {0,1,2,3,5}"


@dataclass(frozen=True)
class SuiteOptions:
    exhaustive: bool = False
    mutant: Optional[str] = None


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failures: List[str] = field(default_factory=list)
    skipped: bool = False
    note: str = ""

    @property
    def passed(self) -> bool:
        return not self.failures


class FlippedDominanceClassifier(BlockClassifier):
    """Self-test mutant: the corner-dominance comparison is inverted."""

    def corner_dominates(self, corner: Fraction, row_entry: Fraction, col_entry: Fraction) -> bool:
        return corner < row_entry + col_entry


MUTANTS: Dict[str, type[BlockClassifier]] = {"corner-dominance": FlippedDominanceClassifier}


def _classifier(options: SuiteOptions) -> BlockClassifier:
    if options.mutant is None:
        return BlockClassifier()
    return MUTANTS[options.mutant]()


def dump_matrix(m: SurplusMatrix) -> str:
    return "[" + "; ".join(format_vector(row, " ") for row in m.entries) + "]"


def _sorted_satisfactions(game: AssignmentGame, x: Sequence[Fraction]) -> List[Fraction]:
    return sorted(row.satisfaction for row in satisfaction_table(game, x))


# ---------------------------------------------------------------------------
# Checks (module level so worker processes can unpickle them)
# ---------------------------------------------------------------------------


def _expect(failures: List[str], ok: bool, message: str) -> None:
    if not ok:
        failures.append(message)


def check_golden(name: str, options: SuiteOptions) -> Optional[str]:
    failures: List[str] = []
    if name == "veto-example":
        g = golden.veto_example()
        ref = golden.VETO_EXAMPLE
        _expect(failures, bool(pmas_extend_lp(g, ref["extendable"])), "x=(8,0,0,0) should extend")
        _expect(failures, not pmas_extend_lp(g, ref["not_extendable"]), "x=(1,2,2,3) should not extend")
        _expect(failures, verify_pmas(g, build_veto_pmas(g, 0)).valid, "veto scheme should verify")
        bundle = tau_value(g)
        _expect(failures, bundle.upper == ref["upper"] and bundle.lower == ref["lower"], f"M,m = {bundle}")
        _expect(failures, bundle.kappa == ref["kappa"] and bundle.tau == ref["tau"], f"tau = {bundle.tau}")
        eta = nucleolus(g)
        _expect(failures, eta == ref["nucleolus"], f"nucleolus = {eta}")
        failure = kohlberg_check(g, bundle.tau).first_failure
        _expect(failures, failure is not None and failure.threshold == ref["tau_failure"], "tau should fail at 6/5")
        _expect(failures, kohlberg_check(g, eta).balanced, "nucleolus certificate should hold")
    elif name == "gamma-example":
        g = golden.gamma_example()
        ref = golden.GAMMA_EXAMPLE
        bundle = tau_value(g)
        _expect(failures, upper_vector(g) == ref["upper"] and lower_vector(g) == ref["lower"], f"M,m = {bundle}")
        _expect(failures, bundle.kappa == ref["kappa"] and bundle.tau == ref["tau"], f"tau = {bundle.tau}")
        _expect(failures, nucleolus(g) == ref["nucleolus"], f"nucleolus = {nucleolus(g)}")
        decomposition = classify_blocks(g.matrix)
        witness = decomposition.witness
        _expect(failures, witness is not None and witness.describe() == ref["witness"], f"witness = {witness}")
        _expect(failures, not pmas_exists_lp(g), "gamma example should have no PMAS")
        row_opt, col_opt = side_optimal_vertices(g)
        _expect(failures, (row_opt, col_opt) == (ref["row_optimal"], ref["column_optimal"]), "side vertices")
        failure = kohlberg_check(g, bundle.tau).first_failure
        _expect(failures, failure is not None and failure.threshold == 0, "tau should fail at t=0")
    elif name == "composite-example":
        g = golden.composite_example()
        ref = golden.COMPOSITE_EXAMPLE
        parts = (golden.three_player_component(), golden.two_player_component())
        tau = tau_value(g).tau
        concatenated = tau_value(parts[0]).tau + tau_value(parts[1]).tau
        _expect(failures, tau == ref["tau"], f"tau = {tau}")
        _expect(failures, concatenated == ref["component_tau"] and concatenated != tau, "tau should not decompose")
        eta = nucleolus(g)
        _expect(failures, eta == ref["nucleolus"], f"nucleolus = {eta}")
        _expect(failures, eta == nucleolus(parts[0]) + nucleolus(parts[1]), "nucleolus should decompose")
        _expect(failures, nucleolus(compose(parts)) == eta, "compose should be deterministic")
    else:
        return f"unknown golden case {name!r}"
    return f"{name}: " + "; ".join(failures) if failures else None


def check_classification(m: SurplusMatrix, options: SuiteOptions) -> Optional[str]:
    verdict = _classifier(options).classify(m).admissible
    oracle = pmas_exists_lp(AssignmentGame(m)).feasible
    if verdict != oracle:
        return f"{dump_matrix(m)}: classifier says {verdict}, LP oracle says {oracle}"
    return None


def check_coincidence(m: SurplusMatrix, options: SuiteOptions) -> Optional[str]:
    g = AssignmentGame(m)
    eta = nucleolus(g)
    tau = tau_value(g).tau
    mid = tau_value_assignment(g)
    if not eta == tau == mid:
        shown = f"nucleolus {format_vector(eta)}, tau {format_vector(tau)}, midpoint {format_vector(mid)}"
        return f"{dump_matrix(m)}: {shown}"
    for p in classify_blocks(m).null_players:
        if eta[p] != 0:
            return f"{dump_matrix(m)}: null player {p + 1} gets {eta[p]}"
    return None


def check_midpoint(m: SurplusMatrix, options: SuiteOptions) -> Optional[str]:
    g = AssignmentGame(m)
    tau = tau_value(g).tau
    mid = tau_value_assignment(g)
    if tau != mid:
        return f"{dump_matrix(m)}: tau {format_vector(tau)} != midpoint {format_vector(mid)}"
    return None


def check_extendability(m: SurplusMatrix, options: SuiteOptions) -> Optional[str]:
    g = AssignmentGame(m)
    row_opt, col_opt = side_optimal_vertices(g)
    for point in (row_opt, col_opt, convex_combination(Fraction(1, 2), row_opt, col_opt)):
        scheme = build_pmas(g, point)
        check = verify_pmas(g, scheme)
        if not check.valid:
            assert check.violation is not None
            return f"{dump_matrix(m)} at {format_vector(point)}: {check.violation.describe()}"
        if scheme.grand_allocation != point:
            shown = format_vector(scheme.grand_allocation)
            return f"{dump_matrix(m)}: grand allocation {shown} != {format_vector(point)}"
    return None


def check_gamma_dichotomy(
    case: tuple[tuple[Fraction, Fraction, Fraction], bool], options: SuiteOptions
) -> Optional[str]:
    (a, b, c), dominant = case
    m = SurplusMatrix.from_rows([[a, b], [c, 0]])
    g = AssignmentGame(m)
    oracle = pmas_exists_lp(g)
    decomposition = classify_blocks(m)
    if oracle.feasible != dominant or decomposition.admissible != dominant:
        return f"{dump_matrix(m)}: expected feasible={dominant}, oracle {oracle.feasible}"
    if not dominant:
        witness = decomposition.witness
        if witness is None or witness.kind is not WitnessKind.CORNER_VIOLATION:
            return f"{dump_matrix(m)}: expected a corner-violation witness"
        return None
    scheme = build_pmas(g, tau_value_assignment(g))
    # Player 2 is paired only with player 3 and player 4 only with player 1.
    for s in scheme.coalitions():
        for player, partner in ((1, 2), (3, 0)):
            if player in s and partner not in s and scheme.payoff(s, player) != 0:
                return f"{dump_matrix(m)}: player {player + 1} gets {scheme.payoff(s, player)} in {s}"
    return None


def check_positive_square(m: SurplusMatrix, options: SuiteOptions) -> Optional[str]:
    g = AssignmentGame(m)
    if pmas_exists_lp(g).feasible or classify_blocks(m).admissible:
        return f"{dump_matrix(m)}: positive 2x2 should admit no PMAS"
    return None


def check_kohlberg(m: SurplusMatrix, options: SuiteOptions) -> Optional[str]:
    g = AssignmentGame(m)
    eta = nucleolus(g, certify=False)
    if not kohlberg_check(g, eta).balanced:
        return f"{dump_matrix(m)}: nucleolus {format_vector(eta)} fails its certificate"
    if g.player_count <= ENUMERATION_MAX_PLAYERS:
        reference = enumerated_nucleolus(g)
        if reference != eta:
            return f"{dump_matrix(m)}: nucleolus {format_vector(eta)} != enumerated {format_vector(reference)}"
    best = _sorted_satisfactions(g, eta)
    vertices = core_vertices(g)
    for v in vertices:
        if _sorted_satisfactions(g, v) > best:
            return f"{dump_matrix(m)}: core vertex {format_vector(v)} beats the nucleolus"
    for v in [v for v in vertices if v != eta][:3]:
        moved = convex_combination(Fraction(1, 2), v, eta)
        if kohlberg_check(g, moved).balanced:
            return f"{dump_matrix(m)}: perturbed point {format_vector(moved)} passes the certificate"
    return None


def _run_case(check: Callable[[Any, SuiteOptions], Optional[str]], options: SuiteOptions, case: Any) -> Optional[str]:
    try:
        return check(case, options)
    except Exception as exc:  # a crash is a counterexample too
        shown = dump_matrix(case) if isinstance(case, SurplusMatrix) else repr(case)
        return f"{shown}: {type(exc).__name__}: {exc}"


# ---------------------------------------------------------------------------
# Case generators
# ---------------------------------------------------------------------------


def _golden_cases(rng: random.Random, instances: int, options: SuiteOptions) -> List[Any]:
    return ["veto-example", "gamma-example", "composite-example"]


def _small_random(rng: random.Random) -> SurplusMatrix:
    while True:
        roll = rng.random()
        if roll < 0.4:
            m = random_admissible_matrix(rng, 8)
        elif roll < 0.6:
            m = random_violating_matrix(rng, 8)
        else:
            m = random_matrix(rng, 4, 4, max_players=8)
        if m.rows <= 4 and m.cols <= 4:
            return m


def _classification_cases(rng: random.Random, instances: int, options: SuiteOptions) -> List[Any]:
    cases: List[Any] = entry_grid(GRID_VALUES, 2, 2)
    cases += entry_grid(GRID_VALUES if options.exhaustive else QUICK_GRID_VALUES, 2, 3)
    cases += [_small_random(rng) for _ in range(instances)]
    return cases


def _coincidence_cases(rng: random.Random, instances: int, options: SuiteOptions) -> List[Any]:
    return [random_admissible_matrix(rng, 10) for _ in range(instances)]


def _midpoint_cases(rng: random.Random, instances: int, options: SuiteOptions) -> List[Any]:
    return [random_matrix(rng, 4, 4, max_players=8) for _ in range(instances)]


def _extendability_cases(rng: random.Random, instances: int, options: SuiteOptions) -> List[Any]:
    return [random_admissible_matrix(rng, 8) for _ in range(instances)]


def _gamma_dichotomy_cases(rng: random.Random, instances: int, options: SuiteOptions) -> List[Any]:
    return [(gamma_triple(rng, dominant), dominant) for dominant in (False, True) for _ in range(instances)]


def _positive_square_cases(rng: random.Random, instances: int, options: SuiteOptions) -> List[Any]:
    return [random_positive_square(rng) for _ in range(instances)]


def _kohlberg_cases(rng: random.Random, instances: int, options: SuiteOptions) -> List[Any]:
    # Every other case stays within the enumeration oracle's player cap.
    small = partial(random_matrix, max_rows=2, max_cols=2, max_players=ENUMERATION_MAX_PLAYERS)
    large = partial(random_matrix, max_rows=3, max_cols=3, max_players=6)
    return [(small if k % 2 == 0 else large)(rng) for k in range(instances)]


@dataclass(frozen=True)
class Suite:
    name: str
    description: str
    cases: Callable[[random.Random, int, SuiteOptions], List[Any]]
    check: Callable[[Any, SuiteOptions], Optional[str]]
    quick_note: str = ""


SUITES: Dict[str, Suite] = {
    s.name: s
    for s in (
        Suite("golden", "worked examples with hand-checked values", _golden_cases, check_golden),
        Suite(
            "classification",
            "block classification agrees with the PMAS LP oracle",
            _classification_cases,
            check_classification,
            quick_note=GRID_NOTE,
        ),
        Suite("coincidence", "nucleolus = tau = midpoint on admissible games", _coincidence_cases, check_coincidence),
        Suite("midpoint", "tau = (row_opt + col_opt)/2 on any assignment game", _midpoint_cases, check_midpoint),
        Suite("extendability", "build_pmas extends vertices and midpoint", _extendability_cases, check_extendability),
        Suite(
            "gamma-dichotomy", "2x2 Gamma blocks: PMAS iff a >= b + c", _gamma_dichotomy_cases, check_gamma_dichotomy
        ),
        Suite("positive-square", "positive 2x2 matrices admit no PMAS", _positive_square_cases, check_positive_square),
        Suite("kohlberg", "nucleolus certificate and lexicographic optimality", _kohlberg_cases, check_kohlberg),
    )
}


def run_suite(
    suite: Suite,
    seed: int,
    instances: int,
    *,
    options: SuiteOptions = SuiteOptions(),
    jobs: int = 1,
    progress: bool = False,
) -> SuiteResult:
    if instances == 0 and suite.name != "golden":
        return SuiteResult(suite.name, skipped=True)
    rng = random.Random(f"{seed}/{suite.name}")
    cases = suite.cases(rng, instances, options)
    check = partial(_run_case, suite.check, options)
    logger.info("suite %s: %d cases", suite.name, len(cases))

    def _collect(outcomes: Iterable[Optional[str]]) -> SuiteResult:
        result = SuiteResult(suite.name, checked=len(cases))
        bar = tqdm(outcomes, total=len(cases), desc=suite.name, disable=not progress, leave=False)
        for k, outcome in enumerate(bar):
            if outcome is not None:
                result.failures.append(f"case {k}: {outcome}")
        return result

    if jobs > 1 and len(cases) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            result = _collect(executor.map(check, cases, chunksize=max(1, len(cases) // (jobs * 8))))
    else:
        result = _collect(map(check, cases))
    if suite.quick_note and not options.exhaustive:
        result.note = suite.quick_note
    logger.info("suite %s: %d/%d passed", suite.name, result.checked - len(result.failures), result.checked)
    return result


def run_suites(
    seed: int,
    instances: int,
    *,
    names: Optional[Sequence[str]] = None,
    options: SuiteOptions = SuiteOptions(),
    jobs: int = 1,
    progress: bool = False,
) -> List[SuiteResult]:
    selected = list(names) if names else list(SUITES)
    unknown = [n for n in selected if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suites: {', '.join(unknown)}")
    if options.mutant is not None and options.mutant not in MUTANTS:
        raise ValueError(f"unknown mutant: {options.mutant}")
    return [
        run_suite(SUITES[n], seed, instances, options=options, jobs=jobs, progress=progress) for n in selected
    ]
