"""
Report Generation - text tables and JSON for analysis results, schemes and certificates.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from ..core.analysis import AnalysisReport
from ..core.assignment import CoreSystem, SideOptimal
from ..core.blocks import BlockDecomposition
from ..core.coalition import Coalition
from ..core.pmas import OracleResult, PmasCheck, Scheme
from ..core.rational import Payoff, format_rational, format_vector
from ..core.solutions import KohlbergCertificate, SatisfactionRow, TauBundle
from ..harness.suites import SuiteResult


def _cells(values: Optional[Sequence[Any]], n: int) -> List[str]:
    if values is None:
        return ["-"] * n
    return [format_rational(v) if not isinstance(v, str) else v for v in values]


def format_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """Pipe table with columns padded to their widest cell."""

    widths = [len(h) for h in headers]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    lines = [
        "| " + " | ".join(h.ljust(w) for h, w in zip(headers, widths)) + " |",
        "|" + "|".join("-" * (w + 2) for w in widths) + "|",
    ]
    for row in rows:
        lines.append("| " + " | ".join(c.ljust(w) for c, w in zip(row, widths)) + " |")
    return "\n".join(lines)


class ReportGenerator:
    """Render results as text or JSON, optionally writing them under `output_dir`."""

    def __init__(self, output_dir: Optional[Path] = None):
        self.output_dir = Path(output_dir) if output_dir is not None else None
        if self.output_dir is not None:
            self.output_dir.mkdir(parents=True, exist_ok=True)

    # -- writing ----------------------------------------------------------

    def write_text(self, text: str, filename: str) -> Path:
        path = Path(filename) if self.output_dir is None else self.output_dir / filename
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
        return path

    def write_scheme(self, scheme: Scheme, filename: str) -> Path:
        return self.write_text(scheme.serialize(), filename)

    @staticmethod
    def to_json(data: Any) -> str:
        return json.dumps(data, indent=2, sort_keys=False)

    # -- vectors ----------------------------------------------------------

    def vector_table(self, names: Sequence[str], columns: Dict[str, Optional[Sequence[Any]]]) -> str:
        headers = ["player"] + list(columns)
        n = len(names)
        cells = {k: _cells(v, n) for k, v in columns.items()}
        rows = [[names[i]] + [cells[k][i] for k in columns] for i in range(n)]
        return format_table(headers, rows)

    def tau_text(self, names: Sequence[str], bundle: TauBundle) -> str:
        table = self.vector_table(names, {"M": bundle.upper, "m": bundle.lower, "tau": bundle.tau})
        return f"{table}\nkappa = {format_rational(bundle.kappa)}"

    def vector_dict(self, label: str, values: Payoff) -> Dict[str, object]:
        return {label: [format_rational(v) for v in values]}

    def side_optimal_text(self, names: Sequence[str], vertices: SideOptimal) -> str:
        return self.vector_table(
            names, {"row-optimal": vertices.row_optimal, "column-optimal": vertices.column_optimal}
        )

    def vertices_text(self, vertices: Sequence[Payoff]) -> str:
        header = "core vertices: " + str(len(vertices))
        body = [f"  ({format_vector(v)})" for v in vertices]
        return "\n".join([header] + body)

    # -- satisfactions and certificates -------------------------------------

    def satisfaction_text(self, columns: Dict[str, Sequence[SatisfactionRow]]) -> str:
        """One row per coalition: w(S), then x(S) and x(S) - w(S) for every labelled point."""

        first = next(iter(columns.values()), [])
        headers = ["S", "w(S)"]
        for label in columns:
            headers += [f"{label}(S)", f"f(S,{label})"]
        rows = []
        for k, base in enumerate(first):
            row = [base.coalition.label(), format_rational(base.worth)]
            for table in columns.values():
                row += [format_rational(table[k].allocated), format_rational(table[k].satisfaction)]
            rows.append(row)
        return format_table(headers, rows)

    def certificate_text(self, label: str, certificate: KohlbergCertificate) -> str:
        verdict = "balanced" if certificate.balanced else "not balanced"
        lines = [f"kohlberg ({label}): {verdict}"]
        lines += [f"  {line}" for line in certificate.serialize().splitlines()]
        return "\n".join(lines)

    def certificate_dict(self, certificate: KohlbergCertificate) -> Dict[str, object]:
        return {
            "balanced": certificate.balanced,
            "levels": [
                {
                    "t": format_rational(level.threshold),
                    "family": [s.label() for s in level.family],
                    "verdict": level.balance.verdict.value,
                    "weights": [format_rational(level.balance.weights[s]) for s in level.family]
                    if level.balance.weights
                    else None,
                    "reason": level.balance.reason or None,
                }
                for level in certificate.levels
            ],
        }

    # -- pmas -------------------------------------------------------------

    def classification_text(self, decomposition: BlockDecomposition) -> str:
        lines = [f"verdict: {decomposition.verdict}"]
        lines += [f"  block {b.describe(decomposition.rows)}" for b in decomposition.blocks]
        if decomposition.null_players:
            lines.append("  null players: " + ",".join(str(p + 1) for p in decomposition.null_players))
        if decomposition.witness is not None:
            lines.append(f"  witness: {decomposition.witness.describe(decomposition.rows)}")
        return "\n".join(lines)

    def classification_dict(self, decomposition: BlockDecomposition) -> Dict[str, object]:
        return {
            "verdict": decomposition.verdict,
            "blocks": [b.describe(decomposition.rows) for b in decomposition.blocks],
            "null_players": [p + 1 for p in decomposition.null_players],
            "witness": decomposition.witness.to_dict() if decomposition.witness else None,
        }

    def check_text(self, check: PmasCheck) -> str:
        if check.valid:
            return "verdict: valid"
        assert check.violation is not None
        return f"verdict: invalid\n  {check.violation.describe()}"

    def check_dict(self, check: PmasCheck) -> Dict[str, object]:
        violation = check.violation
        return {
            "verdict": "valid" if check.valid else "invalid",
            "violation": violation.describe() if violation else None,
            "coalition": violation.coalition.label() if violation else None,
        }

    def oracle_text(self, result: OracleResult) -> str:
        lines = [f"verdict: {'feasible' if result.feasible else 'infeasible'}"]
        if result.reason:
            lines.append(f"  reason: {result.reason}")
        if result.variables:
            lines.append(f"  system: {result.variables} variables, {result.constraints} constraints")
        if result.scheme is not None:
            lines.append(result.scheme.serialize().rstrip("\n"))
        return "\n".join(lines)

    def oracle_dict(self, result: OracleResult) -> Dict[str, object]:
        return {
            "verdict": "feasible" if result.feasible else "infeasible",
            "reason": result.reason or None,
            "witness": [s.label() for s in result.witness] if result.witness else None,
            "scheme": result.scheme.serialize().splitlines() if result.scheme is not None else None,
        }

    def core_system_text(self, system: CoreSystem) -> str:
        return "\n".join(["core system:"] + [f"  {line}" for line in system.describe()])

    # -- whole reports ----------------------------------------------------

    def analysis_text(self, report: AnalysisReport) -> str:
        names = report.names
        out: List[str] = [f"input: {report.source} ({report.kind})"]
        if report.rows is not None and report.cols is not None:
            rows = ",".join(str(i + 1) for i in range(report.rows))
            cols = ",".join(str(report.rows + j + 1) for j in range(report.cols))
            out.append(f"players: {report.player_count} (rows {rows}; columns {cols})")
        else:
            out.append(f"players: {report.player_count} ({', '.join(names)})")
        out.append(f"w(N) = {format_rational(report.grand_worth)}")
        if report.matrix is not None:
            out.append("matrix:")
            out += [f"  {format_vector(row, ' ')}" for row in report.matrix]
        if report.matching is not None and report.rows is not None:
            pairs = " ".join(f"({i},{j})" for i, j in report.matching.labels(report.rows))
            out.append(f"optimal matching: {pairs or '(empty)'}")
        out.append("essential coalitions: " + " ".join(str(s) for s in report.essential))
        if report.blocks is not None:
            out += ["", self.classification_text(report.blocks)]

        columns: Dict[str, Optional[Sequence[Any]]] = {}
        if report.tau is not None:
            columns.update({"M": report.tau.upper, "m": report.tau.lower, "tau": report.tau.tau})
        if report.side_optimal is not None:
            columns.update(
                {"row-opt": report.side_optimal.row_optimal, "col-opt": report.side_optimal.column_optimal}
            )
        columns["nucleolus"] = report.nucleolus
        columns["shapley"] = report.shapley
        out += ["", self.vector_table(names, columns)]
        if report.tau is not None:
            out.append(f"kappa = {format_rational(report.tau.kappa)}")

        satisfactions: Dict[str, Sequence[SatisfactionRow]] = {}
        if report.tau_satisfactions:
            satisfactions["tau"] = report.tau_satisfactions
        if report.nucleolus_satisfactions:
            satisfactions["eta"] = report.nucleolus_satisfactions
        if satisfactions:
            out += ["", self.satisfaction_text(satisfactions)]
        if report.tau_certificate is not None:
            out += ["", self.certificate_text("tau", report.tau_certificate)]
        if report.nucleolus_certificate is not None:
            out += ["", self.certificate_text("nucleolus", report.nucleolus_certificate)]
        if report.notes:
            out += ["", "notes:"] + [f"  - {note}" for note in report.notes]
        return "\n".join(out)

    def suites_text(self, results: Sequence[SuiteResult], seed: int, instances: int) -> str:
        rows = []
        for r in results:
            status = "SKIP" if r.skipped else ("PASS" if r.passed else "FAIL")
            rows.append([r.name, str(r.checked), str(len(r.failures)), status])
        header = f"verify-paper seed={seed} instances={instances}"
        out = [header, format_table(["suite", "cases", "failed", "status"], rows)]
        out += [f"{r.name}: {r.note}" for r in results if r.note and not r.skipped]
        for r in results:
            for failure in r.failures[:5]:
                out.append(f"{r.name}: {failure}")
            if len(r.failures) > 5:
                out.append(f"{r.name}: ... {len(r.failures) - 5} more")
        return "\n".join(out)

    def suites_dict(self, results: Sequence[SuiteResult], seed: int, instances: int) -> Dict[str, object]:
        return {
            "seed": seed,
            "instances": instances,
            "passed": all(r.passed for r in results),
            "suites": [
                {
                    "name": r.name,
                    "cases": r.checked,
                    "skipped": r.skipped,
                    "note": r.note or None,
                    "failures": list(r.failures),
                }
                for r in results
            ],
        }

    def membership_text(self, member: bool, violated: Optional[Coalition]) -> str:
        return "in core: yes" if member else f"in core: no (violated at {violated})"
