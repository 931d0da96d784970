"""Core domain types and algorithms."""

from .analysis import AnalysisReport, Analyzer
from .assignment import (
    AssignmentGame,
    CoreMembership,
    Matching,
    SideOptimal,
    SurplusMatrix,
    core_contains,
    core_system,
    core_vertices,
    max_weight_matching,
    side_optimal_vertices,
)
from .blocks import BlockDecomposition, BlockKind, Witness, classify_blocks, decompose_admissible
from .coalition import Coalition, all_coalitions
from .errors import (
    LpError,
    NotAdmissibleError,
    NotInCoreError,
    ParseError,
    PmasError,
    PreconditionError,
    SizeLimitError,
    StructuralError,
)
from .game import CompositeGame, ExplicitGame, TUGame, compose, essential_coalitions, is_inessential, subgame
from .lp import LinearProgram, LpResult, LpStatus, lp_feasible, lp_solve
from .pmas import OracleResult, PmasCheck, Scheme, build_pmas, pmas_exists_lp, pmas_extend_lp, verify_pmas
from .rational import Payoff, format_rational, parse_rational
from .solutions import (
    KohlbergCertificate,
    TauBundle,
    balanced_family,
    kohlberg_check,
    nucleolus,
    shapley_value,
    tau_value,
    tau_value_assignment,
)

__all__ = [
    # rational / lp
    "Payoff",
    "format_rational",
    "parse_rational",
    "LinearProgram",
    "LpResult",
    "LpStatus",
    "lp_solve",
    "lp_feasible",
    # games
    "Coalition",
    "all_coalitions",
    "TUGame",
    "ExplicitGame",
    "CompositeGame",
    "compose",
    "subgame",
    "is_inessential",
    "essential_coalitions",
    # assignment
    "SurplusMatrix",
    "AssignmentGame",
    "Matching",
    "max_weight_matching",
    "core_system",
    "core_contains",
    "CoreMembership",
    "SideOptimal",
    "side_optimal_vertices",
    "core_vertices",
    # pmas
    "BlockKind",
    "BlockDecomposition",
    "Witness",
    "classify_blocks",
    "decompose_admissible",
    "Scheme",
    "PmasCheck",
    "OracleResult",
    "verify_pmas",
    "build_pmas",
    "pmas_exists_lp",
    "pmas_extend_lp",
    # solutions
    "TauBundle",
    "tau_value",
    "tau_value_assignment",
    "balanced_family",
    "KohlbergCertificate",
    "kohlberg_check",
    "nucleolus",
    "shapley_value",
    # analysis
    "Analyzer",
    "AnalysisReport",
    # errors
    "PmasError",
    "StructuralError",
    "SizeLimitError",
    "PreconditionError",
    "NotInCoreError",
    "NotAdmissibleError",
    "ParseError",
    "LpError",
]
