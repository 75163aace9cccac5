"""
Brute-force cross-check: LPs over the explicit list of deterministic vertices.

Independent of the cone formulation in global_section; used by the test
suite to confirm verdicts and measures on small scenarios.
"""
from fractions import Fraction

from ..contexts import enumerate_total_orders
from .constraints import union_deterministic_points
from .simplex import INFEASIBLE, solve_lp


def _vertices(table, orders):
    if orders is None:
        orders = enumerate_total_orders(table.scenario.parties)
    return union_deterministic_points(table.scenario, orders)


def _incidence(table, points):
    # column v has a 1 at every (x, point[x]) entry
    entries = table.scenario.entries()
    index = {key: i for i, key in enumerate(entries)}
    settings = table.scenario.settings_tuples()
    columns = []
    for pt in points:
        col = [0] * len(entries)
        for x, a in zip(settings, pt):
            col[index[(x, a)]] = 1
        columns.append(col)
    return entries, columns


def vertex_hull_membership(table, orders=None):
    """True iff the table is a convex combination of deterministic order strategies."""
    points = _vertices(table, orders)
    entries, columns = _incidence(table, points)
    rows = [[col[i] for col in columns] for i in range(len(entries))]
    rhs = [table.prob(*key) for key in entries]
    rows.append([1] * len(points))
    rhs.append(Fraction(1))
    result = solve_lp([0] * len(points), rows, rhs)
    return result.status != INFEASIBLE


def vertex_causal_fraction(table, orders=None):
    """max sum(lambda) with sum(lambda_v * v) <= p entrywise."""
    points = _vertices(table, orders)
    entries, columns = _incidence(table, points)
    E = len(entries)
    rows = []
    for i in range(E):
        slack = [0] * E
        slack[i] = 1
        rows.append([col[i] for col in columns] + slack)
    rhs = [table.prob(*key) for key in entries]
    result = solve_lp([1] * len(points) + [0] * E, rows, rhs, maximize=True)
    return result.objective


def vertex_l1_distance(table, orders=None):
    points = _vertices(table, orders)
    entries, columns = _incidence(table, points)
    E = len(entries)
    n = len(points)
    rows = []
    for i in range(E):
        plus = [0] * E
        minus = [0] * E
        plus[i] = 1
        minus[i] = -1
        rows.append([col[i] for col in columns] + plus + minus)
    rhs = [table.prob(*key) for key in entries]
    rows.append([1] * n + [0] * (2 * E))
    rhs.append(Fraction(1))
    result = solve_lp([0] * n + [1] * (2 * E), rows, rhs)
    return result.objective
