"""Input/output: parsing and reports."""

from .parser import LoadedInput, load_input, load_scheme, parse_game_text, parse_matrix_text, parse_point
from .reports import ReportGenerator

__all__ = [
    "LoadedInput",
    "load_input",
    "load_scheme",
    "parse_matrix_text",
    "parse_game_text",
    "parse_point",
    "ReportGenerator",
]
