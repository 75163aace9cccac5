"""
Global sections of the definite-order presheaf: gluability of a behaviour.

A behaviour glues when it is a convex mixture of tables each compatible with
one total order. Every routine here builds an exact LP over one cone copy
u_sigma of the table per order:

    u_sigma >= 0, order constraints of sigma on u_sigma,
    every settings row of u_sigma carries the same mass.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ..contexts import enumerate_total_orders
from ..utils.errors import (
    EmptyFamilyError, InfeasibleScenarioError, MissingContextError, NonTotalOrderError, SizeError,
)
from ..utils.logging_utils import print_status
from .behavior import BehaviorTable
from .constraints import (
    MAX_STRATEGIES, count_deterministic_strategies, is_compatible_with_context,
    order_constraints, union_deterministic_points,
)
from .simplex import solve_lp

MAX_LP_VARIABLES = 20000


@dataclass
class Witness:
    """
    Linear functional sum w(x, a) p(a|x) <= bound on every separable table.

    Coefficients and bound are integers with gcd 1; value is the tested
    behaviour's score, strictly above the bound.
    """
    coefficients: Dict[Tuple[tuple, tuple], int]
    bound: Fraction
    value: Fraction
    tight: bool = False

    def evaluate(self, table):
        return table.game_value(self.coefficients)

    @property
    def violation(self):
        return self.value - self.bound


@dataclass
class GlueVerdict:
    gluable: bool
    orders: List = field(default_factory=list)
    certificate: Optional[List[Tuple[object, Fraction, BehaviorTable]]] = None
    witness: Optional[Witness] = None
    causal_fraction: Fraction = Fraction(1)
    l1_distance: Fraction = Fraction(0)

    def reconstruct(self):
        """Sum of weight * component over the certificate."""
        if self.certificate is None:
            return None
        return BehaviorTable.mixture([(w, q) for _, w, q in self.certificate])


@dataclass(frozen=True)
class SectionFamily:
    poset: object
    tables: Dict[str, BehaviorTable]


class _ConeLP:
    """Variable and row bookkeeping shared by the three gluing LPs."""

    def __init__(self, scenario, orders, extra_vars=0):
        self.scenario = scenario
        self.orders = orders
        self.entries = scenario.entries()
        self.entry_index = {key: i for i, key in enumerate(self.entries)}
        self.E = len(self.entries)
        self.n_cone = len(orders) * self.E
        self.n_vars = self.n_cone + extra_vars
        if self.n_vars > MAX_LP_VARIABLES:
            raise SizeError(f"gluing LP needs {self.n_vars} variables, cap is {MAX_LP_VARIABLES}")
        self.rows = []
        self.rhs = []

    def var(self, s, key):
        return s * self.E + self.entry_index[key]

    def add_row(self, coefficients, rhs=0):
        row = [0] * self.n_vars
        for j, c in coefficients.items():
            row[j] += c
        self.rows.append(row)
        self.rhs.append(Fraction(rhs))

    def add_cone_rows(self):
        settings = self.scenario.settings_tuples()
        outcomes = self.scenario.outcome_tuples()
        x0 = settings[0]
        for s, order in enumerate(self.orders):
            for constraint in order_constraints(self.scenario, order):
                self.add_row({self.var(s, key): c for key, c in constraint.coefficients.items()})
            for x in settings[1:]:
                coefficients = {self.var(s, (x, a)): 1 for a in outcomes}
                for a in outcomes:
                    coefficients[self.var(s, (x0, a))] = -1
                self.add_row(coefficients)

    def mass(self, s, solution):
        x0 = self.scenario.settings_tuples()[0]
        return sum((solution[self.var(s, (x0, a))] for a in self.scenario.outcome_tuples()),
                   Fraction(0))

    def component(self, s, solution, weight):
        values = {key: solution[s * self.E + i] / weight for i, key in enumerate(self.entries)}
        return BehaviorTable(self.scenario, values)

    def solve(self, objective, maximize=False):
        return solve_lp(objective, self.rows, self.rhs, maximize=maximize)

    def optimum(self, objective, maximize=False):
        # any separable table plus slack satisfies the measure LPs
        result = self.solve(objective, maximize=maximize)
        if not result.feasible:
            raise InfeasibleScenarioError("measure LP reported infeasible")
        return result.objective


def _prepare_orders(table, orders):
    if orders is None:
        orders = enumerate_total_orders(table.scenario.parties)
    unique = []
    for order in orders:
        if not order.is_total():
            raise NonTotalOrderError(f"order '{order.render()}' is not total")
        if order.relation not in {o.relation for o in unique}:
            unique.append(order)
    if not unique:
        raise EmptyFamilyError("at least one total order is required")
    return unique


def _normalize_witness(scenario, weights, value, points):
    """Shift rows to nonnegative, tighten the bound, scale to coprime integers."""
    settings = scenario.settings_tuples()
    outcomes = scenario.outcome_tuples()
    bound = Fraction(0)
    shifted = dict(weights)
    for x in settings:
        low = min(shifted[(x, a)] for a in outcomes)
        for a in outcomes:
            shifted[(x, a)] -= low
        bound -= low
        value -= low
    tight = False
    if points is not None:
        bound = max(sum((shifted[(x, a)] for x, a in zip(settings, pt)), Fraction(0))
                    for pt in points)
        tight = True
    numbers = [v for v in shifted.values() if v] + [bound]
    scale = math.lcm(*(v.denominator for v in numbers))
    integers = [int(v * scale) for v in numbers]
    divisor = math.gcd(*integers) or 1
    factor = Fraction(scale, divisor)
    coefficients = {key: int(v * factor) for key, v in sorted(shifted.items()) if v}
    return Witness(coefficients, bound * factor, value * factor, tight)


def _witness_points(scenario, orders):
    total = sum(count_deterministic_strategies(scenario, o) for o in orders)
    if total > MAX_STRATEGIES:
        return None
    return union_deterministic_points(scenario, orders)


def check_global_section(table, orders=None, with_measures=True):
    """
    Decide whether `table` is a mixture of definite-order tables.

    Args:
        table: BehaviorTable
        orders: total CausalOrders to mix over (default: all of them)
        with_measures: also solve the causal-fraction and L1 LPs when not gluable

    Returns:
        GlueVerdict with a certificate on success and a witness otherwise
    """
    orders = _prepare_orders(table, orders)
    scenario = table.scenario
    lp = _ConeLP(scenario, orders)
    for key in lp.entries:
        lp.add_row({lp.var(s, key): 1 for s in range(len(orders))}, table.prob(*key))
    lp.add_cone_rows()
    print_status(f"Gluing LP: {lp.n_vars} variables, {len(lp.rows)} rows, {len(orders)} orders")
    result = lp.solve([0] * lp.n_vars)

    if result.feasible:
        certificate = []
        for s, order in enumerate(orders):
            weight = lp.mass(s, result.x)
            if weight > 0:
                certificate.append((order, weight, lp.component(s, result.x, weight)))
        return GlueVerdict(True, orders, certificate=certificate)

    # Farkas y: y.A <= 0 and y.b > 0, so the reconstruction multipliers score
    # every separable table at most 0 and this table strictly above
    weights = {key: result.farkas[i] for i, key in enumerate(lp.entries)}
    value = table.game_value(weights)
    witness = _normalize_witness(scenario, weights, value, _witness_points(scenario, orders))
    verdict = GlueVerdict(False, orders, witness=witness)
    if with_measures:
        verdict.causal_fraction = causal_fraction(table, orders)
        verdict.l1_distance = l1_distance_to_gluable(table, orders)
    return verdict


def causal_fraction(table, orders=None):
    """Largest weight of a separable part: maximize mass of u with sum_sigma u_sigma <= p."""
    orders = _prepare_orders(table, orders)
    lp = _ConeLP(table.scenario, orders, extra_vars=len(table.scenario.entries()))
    for i, key in enumerate(lp.entries):
        coefficients = {lp.var(s, key): 1 for s in range(len(orders))}
        coefficients[lp.n_cone + i] = 1
        lp.add_row(coefficients, table.prob(*key))
    lp.add_cone_rows()
    x0 = table.scenario.settings_tuples()[0]
    objective = [0] * lp.n_vars
    for s in range(len(orders)):
        for a in table.scenario.outcome_tuples():
            objective[lp.var(s, (x0, a))] = 1
    return lp.optimum(objective, maximize=True)


def l1_distance_to_gluable(table, orders=None):
    """min over separable q of sum over all entries of |p - q|."""
    orders = _prepare_orders(table, orders)
    E = len(table.scenario.entries())
    lp = _ConeLP(table.scenario, orders, extra_vars=2 * E)
    # p - sum_sigma u_sigma = d_plus - d_minus
    for i, key in enumerate(lp.entries):
        coefficients = {lp.var(s, key): 1 for s in range(len(orders))}
        coefficients[lp.n_cone + i] = 1
        coefficients[lp.n_cone + E + i] = -1
        lp.add_row(coefficients, table.prob(*key))
    lp.add_cone_rows()
    x0 = table.scenario.settings_tuples()[0]
    unit = {lp.var(s, (x0, a)): 1
            for s in range(len(orders)) for a in table.scenario.outcome_tuples()}
    lp.add_row(unit, 1)
    objective = [0] * lp.n_cone + [1] * (2 * E)
    return lp.optimum(objective)


def verify_section_family(family):
    """
    Check a context-indexed family of tables for being a compatible section.

    Restriction along refinement is the identity on tables, so comparable
    contexts must carry equal tables.
    """
    poset = family.poset
    missing = [c for c in poset.names if c not in family.tables]
    if missing:
        raise MissingContextError(f"no table assigned to context(s) {', '.join(missing)}")
    for name in poset.names:
        if not is_compatible_with_context(family.tables[name], poset.order(name)):
            return False
    for c in poset.names:
        for d in poset.names:
            if c != d and poset.leq(c, d) and family.tables[c] != family.tables[d]:
                return False
    return True
