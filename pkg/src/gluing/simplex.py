"""
Exact two-phase simplex over rationals.

Solves   min (or max) c.x   subject to   A x = b,  x >= 0
with every number held as a fractions.Fraction. Pivoting follows Bland's
rule (smallest entering index, ties in the ratio test broken by the
smallest basic variable), so the method terminates and the reported basis
is a deterministic function of the input.

On infeasibility the phase-one duals give a Farkas certificate y with
y.A <= 0 componentwise and y.b > 0.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from ..utils.errors import CapExceededError

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

MAX_PIVOTS = 200000

_ZERO = Fraction(0)


@dataclass
class LPResult:
    status: str
    x: Optional[List[Fraction]] = None
    objective: Optional[Fraction] = None
    farkas: Optional[List[Fraction]] = None
    pivots: int = 0
    redundant_rows: List[int] = field(default_factory=list)

    @property
    def feasible(self):
        return self.status != INFEASIBLE


class _Tableau:
    """Dense tableau B^-1 [A | I] with the artificial columns kept."""

    def __init__(self, rows, rhs, n):
        self.m = len(rows)
        self.n = n
        self.T = rows
        self.b = rhs
        self.basis = [n + i for i in range(self.m)]
        self.reduced = None
        self.pivots = 0

    def set_costs(self, costs):
        # reduced_j = cost_j - sum_i cost_basis(i) T[i][j]
        width = self.n + self.m
        reduced = list(costs[:width])
        for i, bvar in enumerate(self.basis):
            cb = costs[bvar]
            if cb:
                row = self.T[i]
                for j in range(width):
                    if row[j]:
                        reduced[j] -= cb * row[j]
        self.reduced = reduced

    def pivot(self, i, j):
        self.pivots += 1
        if self.pivots > MAX_PIVOTS:
            raise CapExceededError(f"simplex exceeded {MAX_PIVOTS} pivots")
        row = self.T[i]
        piv = row[j]
        if piv != 1:
            for k in range(len(row)):
                if row[k]:
                    row[k] /= piv
            self.b[i] /= piv
        support = [k for k in range(len(row)) if row[k]]
        for r in range(self.m):
            if r == i:
                continue
            other = self.T[r]
            f = other[j]
            if f:
                for k in support:
                    other[k] -= f * row[k]
                self.b[r] -= f * self.b[i]
        f = self.reduced[j]
        if f:
            for k in support:
                self.reduced[k] -= f * row[k]
        self.basis[i] = j

    def run(self, allowed):
        """Bland iterations restricted to the entering columns in `allowed`."""
        while True:
            entering = next((j for j in allowed if self.reduced[j] < 0), None)
            if entering is None:
                return OPTIMAL
            best = None
            for i in range(self.m):
                a = self.T[i][entering]
                if a > 0:
                    key = (self.b[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], entering)

    def solution(self):
        x = [_ZERO] * self.n
        for i, bvar in enumerate(self.basis):
            if bvar < self.n:
                x[bvar] = self.b[i]
        return x


def solve_lp(c, A_eq, b_eq, maximize=False):
    """
    Solve an equality-form LP exactly.

    Args:
        c: objective coefficients, one per variable
        A_eq: list of constraint rows (dense lists, same length as c)
        b_eq: right-hand sides
        maximize: maximize instead of minimize

    Returns:
        LPResult; on INFEASIBLE, `farkas` holds y with y.A <= 0 and y.b > 0
    """
    n = len(c)
    m = len(A_eq)
    c = [Fraction(v) for v in c]
    flipped = []
    rows = []
    rhs = []
    for i, (row, bi) in enumerate(zip(A_eq, b_eq)):
        if len(row) != n:
            raise ValueError(f"constraint row {i} has {len(row)} entries, expected {n}")
        row = [Fraction(v) for v in row]
        bi = Fraction(bi)
        sign = -1 if bi < 0 else 1
        flipped.append(sign)
        if sign < 0:
            row = [-v for v in row]
            bi = -bi
        art = [_ZERO] * m
        art[i] = Fraction(1)
        rows.append(row + art)
        rhs.append(bi)

    tab = _Tableau(rows, rhs, n)

    # Phase one: minimize the sum of artificials
    phase_one = [_ZERO] * n + [Fraction(1)] * m
    tab.set_costs(phase_one)
    tab.run(range(n))
    infeasibility = sum((tab.b[i] for i, bvar in enumerate(tab.basis) if bvar >= n), _ZERO)
    if infeasibility > 0:
        # y_i = 1 - reduced cost of artificial i, sign restored for flipped rows
        farkas = [flipped[i] * (1 - tab.reduced[n + i]) for i in range(m)]
        return LPResult(INFEASIBLE, farkas=farkas, pivots=tab.pivots)

    redundant = []
    for i in range(m):
        if tab.basis[i] < n:
            continue
        j = next((j for j in range(n) if tab.T[i][j]), None)
        if j is None:
            redundant.append(i)
        else:
            tab.pivot(i, j)

    sense = -1 if maximize else 1
    phase_two = [sense * v for v in c] + [_ZERO] * m
    tab.set_costs(phase_two)
    status = tab.run(range(n))
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=tab.pivots, redundant_rows=redundant)
    x = tab.solution()
    objective = sum((ci * xi for ci, xi in zip(c, x) if xi), _ZERO)
    return LPResult(OPTIMAL, x=x, objective=objective, pivots=tab.pivots,
                    redundant_rows=redundant)
