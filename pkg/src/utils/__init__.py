from .errors import CausalGlueError, ParseError, SemanticError
from .logging_utils import print_status, print_warning, progress, set_verbosity
from .report import format_probability, format_rational, parse_rational
from .save_results import save_results

__all__ = [
    'CausalGlueError', 'ParseError', 'SemanticError',
    'print_status', 'print_warning', 'progress', 'set_verbosity',
    'format_probability', 'format_rational', 'parse_rational',
    'save_results',
]
