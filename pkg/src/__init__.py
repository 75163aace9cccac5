"""
Causal-glue: indefinite causal order as failure of gluing.

This package contains modules for causal-order contexts, intuitionistic
forcing and the seven-valued classifier, exact gluability of behaviour
tables, and stochastic spin-network dynamics that induce such tables.
"""

from .contexts import build_context_poset, make_parties, make_partial_order
from .gluing import causal_fraction, check_global_section, l1_distance_to_gluable
from .logic import classify, forces, parse_proposition
from .spindyn import build_state_space, induced_behavior, stationary_density

__all__ = [
    'make_parties', 'make_partial_order', 'build_context_poset',
    'parse_proposition', 'forces', 'classify',
    'check_global_section', 'causal_fraction', 'l1_distance_to_gluable',
    'build_state_space', 'stationary_density', 'induced_behavior',
]
