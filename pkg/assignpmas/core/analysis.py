"""Whole-game analysis behind `assignpmas analyze`.

Analyzer owns the order of computations; ReportGenerator owns presentation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from .assignment import AssignmentGame, Matching, SideOptimal, core_contains, side_optimal_vertices
from .blocks import BlockDecomposition, classify_blocks
from .coalition import Coalition
from .errors import PreconditionError
from .game import TUGame, is_balanced, is_superadditive
from .rational import Payoff, format_rational, format_vector
from .solutions import (
    KohlbergCertificate,
    SatisfactionRow,
    TauBundle,
    kohlberg_check,
    nucleolus,
    satisfaction_table,
    shapley_value,
    tau_value,
    tau_value_assignment,
)

logger = logging.getLogger(__name__)


def _vector(values: Optional[Payoff]) -> Optional[List[str]]:
    return None if values is None else [format_rational(v) for v in values]


@dataclass
class AnalysisReport:
    source: str
    kind: str
    names: tuple[str, ...]
    grand_worth: Fraction
    essential: tuple[Coalition, ...]
    balanced: bool
    rows: Optional[int] = None
    cols: Optional[int] = None
    matrix: Optional[List[List[Fraction]]] = None
    matching: Optional[Matching] = None
    blocks: Optional[BlockDecomposition] = None
    side_optimal: Optional[SideOptimal] = None
    tau: Optional[TauBundle] = None
    tau_assignment: Optional[Payoff] = None
    nucleolus: Optional[Payoff] = None
    shapley: Optional[Payoff] = None
    tau_certificate: Optional[KohlbergCertificate] = None
    nucleolus_certificate: Optional[KohlbergCertificate] = None
    tau_satisfactions: List[SatisfactionRow] = field(default_factory=list)
    nucleolus_satisfactions: List[SatisfactionRow] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)

    @property
    def player_count(self) -> int:
        return len(self.names)

    def to_dict(self) -> Dict[str, object]:
        game: Dict[str, object] = {
            "players": self.player_count,
            "names": list(self.names),
            "rows": self.rows,
            "cols": self.cols,
            "grand_worth": format_rational(self.grand_worth),
            "essential": [s.label() for s in self.essential],
            "balanced": self.balanced,
        }
        if self.matrix is not None:
            game["matrix"] = [[format_rational(a) for a in row] for row in self.matrix]
        if self.matching is not None and self.rows is not None:
            game["optimal_matching"] = [list(p) for p in self.matching.labels(self.rows)]
        data: Dict[str, object] = {"input": {"source": self.source, "kind": self.kind}, "game": game}
        if self.blocks is not None and self.rows is not None:
            data["blocks"] = {
                "verdict": self.blocks.verdict,
                "blocks": [b.describe(self.rows) for b in self.blocks.blocks],
                "null_players": [p + 1 for p in self.blocks.null_players],
                "witness": self.blocks.witness.to_dict() if self.blocks.witness else None,
            }
        solutions: Dict[str, object] = {
            "tau": self.tau.to_dict() if self.tau else None,
            "tau_assignment": _vector(self.tau_assignment),
            "nucleolus": _vector(self.nucleolus),
            "shapley": _vector(self.shapley),
        }
        if self.side_optimal is not None:
            solutions["row_optimal"] = _vector(self.side_optimal.row_optimal)
            solutions["column_optimal"] = _vector(self.side_optimal.column_optimal)
        data["solutions"] = solutions
        tau_cert, eta_cert = self.tau_certificate, self.nucleolus_certificate
        data["certificates"] = {
            "tau": tau_cert.serialize().splitlines() if tau_cert is not None else None,
            "tau_balanced": tau_cert.balanced if tau_cert is not None else None,
            "nucleolus": eta_cert.serialize().splitlines() if eta_cert is not None else None,
            "nucleolus_balanced": eta_cert.balanced if eta_cert is not None else None,
        }
        data["notes"] = list(self.notes)
        return data


class Analyzer:
    """Runs every applicable solution concept on one game."""

    def __init__(self, game: TUGame, source: str = "<input>"):
        self.game = game
        self.source = source

    def analyze(self) -> AnalysisReport:
        g = self.game
        balanced = is_balanced(g)
        report = AnalysisReport(
            source=self.source,
            kind="matrix" if isinstance(g, AssignmentGame) else "game",
            names=g.names,
            grand_worth=g.worth(g.grand),
            essential=tuple(g.essential_coalitions()),
            balanced=balanced,
        )
        if isinstance(g, AssignmentGame):
            self._assignment_part(g, report)
        else:
            split = is_superadditive(g)
            if split is not None:
                s, t = split
                report.notes.append(f"game is not superadditive: w({s | t}) < w({s}) + w({t})")

        if not balanced:
            report.notes.append("game is not balanced: tau-value and nucleolus are undefined")
        else:
            self._balanced_part(g, report)
        report.shapley = shapley_value(g)
        logger.debug("analyzed %s: n=%d notes=%s", self.source, g.player_count, report.notes)
        return report

    def _assignment_part(self, g: AssignmentGame, report: AnalysisReport) -> None:
        report.rows = g.row_count
        report.cols = g.col_count
        report.matrix = g.matrix.to_lists()
        report.matching = g.matching()[1]
        report.blocks = classify_blocks(g.matrix)
        report.side_optimal = side_optimal_vertices(g)
        report.tau_assignment = tau_value_assignment(g)

    def _balanced_part(self, g: TUGame, report: AnalysisReport) -> None:
        try:
            report.tau = tau_value(g)
        except PreconditionError as exc:
            report.notes.append(f"tau-value undefined: {exc}")
        report.nucleolus = nucleolus(g, certify=False)
        report.nucleolus_certificate = kohlberg_check(g, report.nucleolus)
        report.nucleolus_satisfactions = satisfaction_table(g, report.nucleolus)
        if report.tau is not None:
            report.tau_satisfactions = satisfaction_table(g, report.tau.tau)
            if core_contains(g, report.tau.tau):
                report.tau_certificate = kohlberg_check(g, report.tau.tau)
            else:
                report.notes.append("tau-value lies outside the core; no Kohlberg certificate")
        if report.tau_assignment is not None and report.tau is not None and report.tau_assignment != report.tau.tau:
            report.notes.append(
                f"midpoint {format_vector(report.tau_assignment)} differs from tau {format_vector(report.tau.tau)}"
            )
