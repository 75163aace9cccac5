"""
One-way-signalling constraints of a definite order and its deterministic vertices.

For a total order sigma, every proper prefix P of sigma must have outcome
marginals that do not depend on the settings of the parties after P. The
constraints are homogeneous linear equalities on table entries, so they
apply to unnormalized cone points as well as to behaviour tables.
"""
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

from ..contexts import linear_extensions
from ..utils.errors import NonTotalOrderError, SizeError
from .behavior import BehaviorTable

MAX_STRATEGIES = 10 ** 6


@dataclass(frozen=True)
class LinearConstraint:
    """sum of coefficients[(x, a)] * p(a|x) == 0"""
    coefficients: Dict[Tuple[tuple, tuple], int]
    label: str

    def evaluate(self, values):
        return sum((c * values.get(key, 0) for key, c in self.coefficients.items()), Fraction(0))


def _require_total(order):
    if not order.is_total():
        raise NonTotalOrderError(f"order '{order.render()}' is not total")
    return [p.index for p in order.chain()]


def _assemble(n, parts):
    # parts: list of (indices, values) covering every position once
    out = [None] * n
    for idx, vals in parts:
        for i, v in zip(idx, vals):
            out[i] = v
    return tuple(out)


def order_constraints(scenario, order):
    """
    Homogeneous equalities saying each prefix's marginal ignores later settings.

    For prefix P and rest R the marginal at every settings tuple x_R is equated
    with the marginal at x_R = (0, ..., 0). The lexicographically last outcome
    tuple of P is skipped: it follows from the others once every settings row
    carries the same mass.
    """
    chain = _require_total(order)
    n = scenario.n_parties
    ids = scenario.party_ids
    constraints = []
    for k in range(1, n):
        prefix, rest = chain[:k], chain[k:]
        rest_settings = list(itertools.product(*(range(scenario.settings[i]) for i in rest)))
        if len(rest_settings) < 2:
            continue
        reference = rest_settings[0]
        prefix_settings = itertools.product(*(range(scenario.settings[i]) for i in prefix))
        prefix_outcomes = list(itertools.product(*(range(scenario.outcomes[i]) for i in prefix)))[:-1]
        rest_outcomes = list(itertools.product(*(range(scenario.outcomes[i]) for i in rest)))
        for x_p in prefix_settings:
            for a_p in prefix_outcomes:
                for x_r in rest_settings[1:]:
                    coefficients = {}
                    for a_r in rest_outcomes:
                        a = _assemble(n, [(prefix, a_p), (rest, a_r)])
                        coefficients[(_assemble(n, [(prefix, x_p), (rest, x_r)]), a)] = 1
                        coefficients[(_assemble(n, [(prefix, x_p), (rest, reference)]), a)] = -1
                    label = (f"{'/'.join(ids[i] for i in prefix)} marginal a={a_p} at x={x_p}: "
                             f"later settings {x_r} vs {reference}")
                    constraints.append(LinearConstraint(coefficients, label))
    return constraints


def is_compatible_with_order(table, order):
    constraints = order_constraints(table.scenario, order)
    return all(c.evaluate(table.p) == 0 for c in constraints)


def is_compatible_with_context(table, order):
    """Compatibility with a partial order: with every one of its linear extensions."""
    if order.is_total():
        return is_compatible_with_order(table, order)
    return all(is_compatible_with_order(table, ext) for ext in linear_extensions(order))


def count_deterministic_strategies(scenario, order):
    chain = _require_total(order)
    total = 1
    seen_settings = 1
    for i in chain:
        seen_settings *= scenario.settings[i]
        total *= scenario.outcomes[i] ** seen_settings
    return total


def deterministic_points(scenario, order):
    """
    Deterministic strategies of `order` as tuples of outcome tuples, one per
    settings tuple in scenario order.

    Party k's outcome is a function of the settings of parties up to and
    including k in the chain.
    """
    total = count_deterministic_strategies(scenario, order)
    if total > MAX_STRATEGIES:
        raise SizeError(f"{total} deterministic strategies exceed the cap of {MAX_STRATEGIES}")
    chain = _require_total(order)
    n = scenario.n_parties
    settings = scenario.settings_tuples()
    # Per party: its visible settings index for every global settings tuple
    domains = []
    for pos, i in enumerate(chain):
        visible = chain[:pos + 1]
        shape = [scenario.settings[j] for j in visible]
        size = math.prod(shape)
        lookup = [sum(x[j] * math.prod(shape[t + 1:]) for t, j in enumerate(visible))
                  for x in settings]
        domains.append((i, size, lookup))
    tables = [itertools.product(range(scenario.outcomes[i]), repeat=size)
              for i, size, _ in domains]
    points = []
    for functions in itertools.product(*(list(t) for t in tables)):
        point = []
        for xi in range(len(settings)):
            a = [0] * n
            for (i, _, lookup), fn in zip(domains, functions):
                a[i] = fn[lookup[xi]]
            point.append(tuple(a))
        points.append(tuple(point))
    return points


def point_to_table(scenario, point):
    return BehaviorTable(scenario, {(x, a): Fraction(1)
                                    for x, a in zip(scenario.settings_tuples(), point)})


def enumerate_deterministic_strategies(scenario, order):
    return [point_to_table(scenario, pt) for pt in deterministic_points(scenario, order)]


def union_deterministic_points(scenario, orders):
    """Deduplicated, sorted deterministic points over several total orders."""
    total = sum(count_deterministic_strategies(scenario, o) for o in orders)
    if total > MAX_STRATEGIES:
        raise SizeError(f"{total} deterministic strategies exceed the cap of {MAX_STRATEGIES}")
    found = set()
    for order in orders:
        found.update(deterministic_points(scenario, order))
    return sorted(found)
