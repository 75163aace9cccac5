"""
Gluability of behaviour tables over definite causal orders.
"""
from .behavior import BehaviorTable, Scenario, make_scenario
from .constraints import (
    LinearConstraint, deterministic_points, enumerate_deterministic_strategies,
    is_compatible_with_context, is_compatible_with_order, order_constraints,
    union_deterministic_points,
)
from .global_section import (
    GlueVerdict, SectionFamily, Witness, causal_fraction, check_global_section,
    l1_distance_to_gluable, verify_section_family,
)
from .oracle import vertex_causal_fraction, vertex_hull_membership, vertex_l1_distance
from .simplex import LPResult, solve_lp

__all__ = [
    'Scenario', 'BehaviorTable', 'make_scenario',
    'LinearConstraint', 'order_constraints', 'is_compatible_with_order',
    'is_compatible_with_context', 'deterministic_points', 'union_deterministic_points',
    'enumerate_deterministic_strategies',
    'GlueVerdict', 'Witness', 'SectionFamily', 'check_global_section', 'causal_fraction',
    'l1_distance_to_gluable', 'verify_section_family',
    'vertex_hull_membership', 'vertex_causal_fraction', 'vertex_l1_distance',
    'LPResult', 'solve_lp',
]
