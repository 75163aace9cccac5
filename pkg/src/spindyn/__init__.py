"""
Stochastic spin-network dynamics in parametric time.
"""
from .density import StationaryResult, evolve_density, exact_residual, stationary_density
from .generator import Generator, build_state_space, gibbs_density
from .interventions import InducedBehavior, KernelRow, ResponseKernel, induced_behavior
from .network import (
    MoveCatalogue, SpinNetworkConfig, admissible, moves_from, theta_graph,
)
from .trajectories import (
    ClockWindow, Envelope, EventPredicate, HelicityIs, OrderStatistics, SpinRange,
    TrajectorySample, envelope_histogram, envelope_overlap, hitting_time, order_statistics,
    simulate_trajectory,
)

__all__ = [
    'SpinNetworkConfig', 'MoveCatalogue', 'admissible', 'moves_from', 'theta_graph',
    'Generator', 'build_state_space', 'gibbs_density',
    'evolve_density', 'stationary_density', 'exact_residual', 'StationaryResult',
    'EventPredicate', 'SpinRange', 'HelicityIs', 'ClockWindow', 'TrajectorySample',
    'simulate_trajectory', 'hitting_time', 'order_statistics', 'OrderStatistics',
    'Envelope', 'envelope_histogram', 'envelope_overlap',
    'ResponseKernel', 'KernelRow', 'InducedBehavior', 'induced_behavior',
]
