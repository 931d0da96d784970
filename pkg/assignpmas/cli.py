"""
Command-line front end.

Usage:
    assignpmas analyze game.matrix
    assignpmas pmas check game.matrix
    assignpmas pmas build game.matrix --point 3,2,3,0 --output scheme.txt
    assignpmas verify-paper --seed 7 --instances 100

Exit codes: 0 success or positive verdict, 1 negative verdict or refused precondition,
2 parse or structural error, 3 size limit, 4 point not in the core.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Iterable, Optional

from .config import get_settings
from .core.analysis import Analyzer
from .core.assignment import AssignmentGame, core_contains, core_system, core_vertices, side_optimal_vertices
from .core.blocks import classify_blocks
from .core.errors import (
    LpError,
    NotInCoreError,
    ParseError,
    PreconditionError,
    SizeLimitError,
    StructuralError,
)
from .core.game import TUGame, is_superadditive
from .core.pmas import build_pmas, pmas_exists_lp, pmas_extend_lp, verify_pmas
from .core.rational import Payoff, format_rational
from .core.solutions import kohlberg_check, nucleolus, shapley_value, tau_value, tau_value_assignment
from .harness.suites import MUTANTS, SUITES, SuiteOptions, run_suites
from .io.parser import LoadedInput, load_input, load_scheme, parse_point
from .io.reports import ReportGenerator

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INPUT = 2
EXIT_SIZE = 3
EXIT_NOT_IN_CORE = 4


def _configure_logging(verbosity: int) -> None:
    if verbosity >= 2:
        level = logging.DEBUG
    elif verbosity == 1:
        level = logging.INFO
    else:
        level = getattr(logging, get_settings().log_level, logging.WARNING)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def _emit(args: argparse.Namespace, text: str, data: object) -> None:
    print(ReportGenerator.to_json(data) if args.json else text)


def _load(args: argparse.Namespace) -> LoadedInput:
    loaded = load_input(args.path, args.format)
    game = loaded.game
    if not isinstance(game, AssignmentGame) and game.player_count <= get_settings().max_players:
        split = is_superadditive(game)
        if split is not None:
            s, t = split
            logger.warning("%s: game is not superadditive: w(%s) < w(%s) + w(%s)", args.path, s | t, s, t)
    return loaded


def _require_matrix(loaded: LoadedInput, command: str) -> AssignmentGame:
    game = loaded.assignment
    if game is None:
        raise StructuralError(f"{command} needs a matrix input, got an explicit game")
    return game


def _point(args: argparse.Namespace, game: TUGame) -> Payoff:
    return parse_point(args.point, expected=game.player_count)


def cmd_analyze(args: argparse.Namespace) -> int:
    loaded = _load(args)
    report = Analyzer(loaded.game, str(loaded.path)).analyze()
    reports = ReportGenerator()
    _emit(args, reports.analysis_text(report), report.to_dict())
    return EXIT_OK


def cmd_pmas(args: argparse.Namespace) -> int:
    loaded = _load(args)
    reports = ReportGenerator()
    game = loaded.game

    if args.pmas_command == "check":
        g = _require_matrix(loaded, "pmas check")
        decomposition = classify_blocks(g.matrix)
        _emit(args, reports.classification_text(decomposition), reports.classification_dict(decomposition))
        return EXIT_OK if decomposition.admissible else EXIT_NEGATIVE

    if args.pmas_command == "build":
        g = _require_matrix(loaded, "pmas build")
        scheme = build_pmas(g, _point(args, g))
        if args.output is not None:
            path = reports.write_scheme(scheme, str(args.output))
            _emit(args, f"scheme written to {path}", {"scheme": str(path), "coalitions": len(scheme)})
            return EXIT_OK
        _emit(args, scheme.serialize().rstrip("\n"), {"scheme": scheme.serialize().splitlines()})
        return EXIT_OK

    if args.pmas_command == "verify":
        scheme = load_scheme(args.scheme, game.player_count)
        check = verify_pmas(game, scheme)
        _emit(args, reports.check_text(check), reports.check_dict(check))
        return EXIT_OK if check.valid else EXIT_NEGATIVE

    if args.point is not None:
        result = pmas_extend_lp(game, _point(args, game))
    else:
        result = pmas_exists_lp(game)
    _emit(args, reports.oracle_text(result), reports.oracle_dict(result))
    return EXIT_OK if result.feasible else EXIT_NEGATIVE


def cmd_tau(args: argparse.Namespace) -> int:
    loaded = _load(args)
    reports = ReportGenerator()
    bundle = tau_value(loaded.game)
    text = reports.tau_text(loaded.game.names, bundle)
    data = bundle.to_dict()
    g = loaded.assignment
    if g is not None:
        midpoint = tau_value_assignment(g)
        text += "\nmidpoint = " + ",".join(format_rational(v) for v in midpoint)
        data.update(reports.vector_dict("midpoint", midpoint))
    _emit(args, text, data)
    return EXIT_OK


def cmd_nucleolus(args: argparse.Namespace) -> int:
    loaded = _load(args)
    reports = ReportGenerator()
    game = loaded.game
    eta = nucleolus(game, coalitions=args.coalitions)
    text = reports.vector_table(game.names, {"nucleolus": eta})
    data = reports.vector_dict("nucleolus", eta)
    if args.certificate:
        certificate = kohlberg_check(game, eta)
        text += "\n" + reports.certificate_text("nucleolus", certificate)
        data["certificate"] = reports.certificate_dict(certificate)
    _emit(args, text, data)
    return EXIT_OK


def cmd_shapley(args: argparse.Namespace) -> int:
    loaded = _load(args)
    reports = ReportGenerator()
    phi = shapley_value(loaded.game)
    _emit(args, reports.vector_table(loaded.game.names, {"shapley": phi}), reports.vector_dict("shapley", phi))
    return EXIT_OK


def cmd_core(args: argparse.Namespace) -> int:
    loaded = _load(args)
    reports = ReportGenerator()
    game = loaded.game

    if args.core_command == "contains":
        membership = core_contains(game, _point(args, game))
        text = reports.membership_text(membership.member, membership.violated)
        violated = membership.violated.label() if membership.violated is not None else None
        _emit(args, text, {"member": membership.member, "violated": violated})
        return EXIT_OK if membership.member else EXIT_NOT_IN_CORE

    g = _require_matrix(loaded, "core vertices")
    vertices = side_optimal_vertices(g)
    parts = [reports.core_system_text(core_system(g)), reports.side_optimal_text(g.names, vertices)]
    data: dict[str, object] = {
        "row_optimal": [format_rational(v) for v in vertices.row_optimal],
        "column_optimal": [format_rational(v) for v in vertices.column_optimal],
        "vertices": None,
    }
    if g.player_count <= get_settings().core_vertex_max_players:
        every = core_vertices(g)
        parts.append(reports.vertices_text(every))
        data["vertices"] = [[format_rational(v) for v in point] for point in every]
    else:
        parts.append(f"core vertices: skipped for more than {get_settings().core_vertex_max_players} players")
    _emit(args, "\n".join(parts), data)
    return EXIT_OK


def cmd_verify_paper(args: argparse.Namespace) -> int:
    settings = get_settings()
    seed = args.seed if args.seed is not None else settings.default_seed
    instances = args.instances if args.instances is not None else settings.default_instances
    options = SuiteOptions(exhaustive=args.exhaustive, mutant=args.mutant)
    progress = not args.json and sys.stderr.isatty()
    results = run_suites(seed, instances, names=args.suite, options=options, jobs=args.jobs, progress=progress)
    reports = ReportGenerator()
    _emit(args, reports.suites_text(results, seed, instances), reports.suites_dict(results, seed, instances))
    return EXIT_OK if all(r.passed for r in results) else EXIT_NEGATIVE


def _add_input(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("path", type=Path, help="Matrix (.matrix) or explicit game (.game) file")
    parser.add_argument("--format", choices=["matrix", "game"], default=None, help="Override format detection")
    parser.add_argument("--json", action="store_true", help="Emit JSON instead of text tables")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="assignpmas", description="Exact PMAS and solution analysis of TU games")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="Log more (-v info, -vv debug)")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze_parser = sub.add_parser("analyze", help="Full report: blocks, tau, nucleolus, Shapley, certificates")
    _add_input(analyze_parser)

    pmas_parser = sub.add_parser("pmas", help="PMAS classification, construction, verification and LP oracle")
    pmas_sub = pmas_parser.add_subparsers(dest="pmas_command", required=True)
    check_parser = pmas_sub.add_parser("check", help="Structural admissibility of a matrix")
    _add_input(check_parser)
    build_parser_ = pmas_sub.add_parser("build", help="Build a PMAS extending a core point")
    _add_input(build_parser_)
    build_parser_.add_argument("--point", required=True, help="Core point, comma separated rationals")
    build_parser_.add_argument("--output", "-o", type=Path, default=None, help="Write the scheme to this file")
    verify_parser = pmas_sub.add_parser("verify", help="Check a scheme file against the game")
    _add_input(verify_parser)
    verify_parser.add_argument("--scheme", type=Path, required=True, help="Scheme file (S=... -> ... lines)")
    oracle_parser = pmas_sub.add_parser("oracle", help="Decide PMAS existence (or extension of --point) by exact LP")
    _add_input(oracle_parser)
    oracle_parser.add_argument("--point", default=None, help="Core point to extend")

    tau_parser = sub.add_parser("tau", help="Upper and lower vectors, kappa and the tau-value")
    _add_input(tau_parser)

    nucleolus_parser = sub.add_parser("nucleolus", help="Nucleolus by sequential exact LP")
    _add_input(nucleolus_parser)
    nucleolus_parser.add_argument("--certificate", action="store_true", help="Also print the Kohlberg certificate")
    nucleolus_parser.add_argument(
        "--coalitions", choices=["essential", "all"], default="essential", help="Coalitions entering the LPs"
    )

    shapley_parser = sub.add_parser("shapley", help="Shapley value")
    _add_input(shapley_parser)

    core_parser = sub.add_parser("core", help="Core vertices and membership")
    core_sub = core_parser.add_subparsers(dest="core_command", required=True)
    vertices_parser = core_sub.add_parser("vertices", help="Side-optimal vertices and (small games) all vertices")
    _add_input(vertices_parser)
    contains_parser = core_sub.add_parser("contains", help="Is --point in the core?")
    _add_input(contains_parser)
    contains_parser.add_argument("--point", required=True, help="Payoff vector, comma separated rationals")

    suites_parser = sub.add_parser("verify-paper", help="Run the seeded property suites")
    suites_parser.add_argument("--seed", type=int, default=None)
    suites_parser.add_argument("--instances", type=int, default=None, help="Random cases per suite (0: golden only)")
    suites_parser.add_argument("--jobs", type=int, default=1, help="Worker processes")
    suites_parser.add_argument("--exhaustive", action="store_true", help="Full 2x3 grid over {0,1,2,3,5}")
    suites_parser.add_argument("--mutant", choices=sorted(MUTANTS), default=None, help="Inject a classifier mutant")
    suites_parser.add_argument("--suite", nargs="+", choices=list(SUITES), default=None, help="Run only these suites")
    suites_parser.add_argument("--json", action="store_true")
    return parser


def main(argv: Iterable[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(list(argv) if argv is not None else None)
    try:
        _configure_logging(args.verbose)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    handlers = {
        "analyze": cmd_analyze,
        "pmas": cmd_pmas,
        "tau": cmd_tau,
        "nucleolus": cmd_nucleolus,
        "shapley": cmd_shapley,
        "core": cmd_core,
        "verify-paper": cmd_verify_paper,
    }
    code: Optional[int] = None
    try:
        code = handlers[args.command](args)
    except NotInCoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_NOT_IN_CORE
    except (ParseError, StructuralError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_INPUT
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_SIZE
    except (PreconditionError, LpError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_NEGATIVE
    return code


if __name__ == "__main__":
    raise SystemExit(main())
