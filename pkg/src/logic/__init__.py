"""
Intuitionistic forcing over context posets and the seven-valued classifier.
"""
from .classifier import SevenValue, classify, classify_report
from .forcing import (
    KripkeModel, Violation, check_monotone, close_upward, default_order_valuation,
    forces, indeterminate_at, is_posed, restrict_to_posed,
)
from .propositions import (
    And, Atom, Bottom, Implies, Not, Or, Prec, parse_proposition, render_proposition,
)

__all__ = [
    'Atom', 'Prec', 'Bottom', 'And', 'Or', 'Implies', 'Not',
    'parse_proposition', 'render_proposition',
    'KripkeModel', 'Violation', 'default_order_valuation', 'forces', 'check_monotone',
    'indeterminate_at', 'is_posed', 'close_upward', 'restrict_to_posed',
    'SevenValue', 'classify', 'classify_report',
]
