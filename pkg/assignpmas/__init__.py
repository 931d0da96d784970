"""
assignpmas - exact analysis of assignment games.

Structure:
- core/: rationals, exact LP, games, assignment games, PMAS, tau / nucleolus / Shapley
- io/: input parsing and report rendering
- harness/: seeded property suites
"""

from .cli import main
from .core import (
    AssignmentGame,
    ExplicitGame,
    Scheme,
    SurplusMatrix,
    build_pmas,
    classify_blocks,
    nucleolus,
    pmas_exists_lp,
    shapley_value,
    tau_value,
    verify_pmas,
)
from .io.parser import load_input
from .io.reports import ReportGenerator

__version__ = "0.1.0"

__all__ = [
    "main",
    "load_input",
    "ReportGenerator",
    "SurplusMatrix",
    "AssignmentGame",
    "ExplicitGame",
    "Scheme",
    "classify_blocks",
    "build_pmas",
    "verify_pmas",
    "pmas_exists_lp",
    "tau_value",
    "nucleolus",
    "shapley_value",
]
