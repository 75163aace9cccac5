"""
Density evolution by uniformization and stationary densities.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import networkx as nx
import numpy as np
import sympy
from scipy import linalg, sparse
from scipy.stats import poisson

from ..utils.errors import NormalizationError, NumericalRankError, ToleranceError
from ..utils.logging_utils import print_status

UNIFORMIZATION_TOL = 1e-12
MAX_UNIFORMIZATION_TERMS = 10 ** 6
RESIDUAL_TOL = 1e-10


def _check_density(rho0, n):
    rho0 = np.asarray(rho0, dtype=float)
    if rho0.shape != (n,):
        raise NormalizationError(f"density has shape {rho0.shape}, expected ({n},)")
    if (rho0 < 0).any() or abs(rho0.sum() - 1.0) > 1e-9:
        raise NormalizationError("initial density must be nonnegative with unit mass")
    return rho0


def evolve_density(rho0, tau, gen, tol=UNIFORMIZATION_TOL):
    """
    rho(tau) = sum_k Poisson(k; Lambda tau) rho0 P^k with P = I + L / Lambda.

    Terms are added until the Poisson tail is below `tol`, which bounds the
    total-variation error; the result is renormalized by the retained mass.

    Raises:
        ToleranceError if the tail bound needs more than MAX_UNIFORMIZATION_TERMS terms
    """
    rho0 = _check_density(rho0, gen.n_states)
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    rate = max((gen.exit_rate(i) for i in range(gen.n_states)), default=0.0)
    if tau == 0 or rate == 0:
        return rho0.copy()
    mu = rate * tau
    terms = int(poisson.isf(tol, mu)) + 1
    if terms > MAX_UNIFORMIZATION_TERMS or poisson.sf(terms, mu) > tol:
        raise ToleranceError(
            f"uniformization needs more than {MAX_UNIFORMIZATION_TERMS} terms at Lambda*tau={mu:g}")
    P = sparse.identity(gen.n_states, format="csr") + gen.matrix / rate
    PT = P.T.tocsr()
    weights = poisson.pmf(np.arange(terms + 1), mu)
    vec = rho0.copy()
    out = weights[0] * vec
    for k in range(1, terms + 1):
        vec = PT @ vec
        out += weights[k] * vec
    out = np.clip(out, 0.0, None)
    return out / out.sum()


@dataclass
class StationaryResult:
    density: np.ndarray
    exact: Optional[List[Fraction]]
    classes: List[List[int]]
    residual: float

    @property
    def multiplicity(self):
        return len(self.classes)


def recurrent_classes(gen, start=0):
    """Closed communicating classes reachable from `start`, sorted by smallest state."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(gen.n_states))
    for i in range(gen.n_states):
        cols, _ = gen.successors(i)
        graph.add_edges_from((i, int(j)) for j in cols)
    reachable = nx.descendants(graph, start) | {start}
    classes = [sorted(c) for c in nx.attracting_components(graph) if c & reachable]
    return sorted(classes)


def _exact_class_density(gen, members):
    position = {s: k for k, s in enumerate(members)}
    size = len(members)
    Q = sympy.zeros(size, size)
    for (i, j), r in gen.exact.items():
        if i in position and j in position:
            Q[position[i], position[j]] += sympy.Rational(r.numerator, r.denominator)
            Q[position[i], position[i]] -= sympy.Rational(r.numerator, r.denominator)
    null = Q.T.nullspace()
    if len(null) != 1:
        raise NumericalRankError(f"balance equations have a {len(null)}-dimensional null space")
    vec = null[0]
    total = sum(vec)
    shares = [sympy.Rational(v / total) for v in vec]
    return [Fraction(int(q.p), int(q.q)) for q in shares]


def _float_class_density(gen, members):
    Q = gen.matrix[members, :][:, members].toarray()
    null = linalg.null_space(Q.T, rcond=1e-10)
    if null.shape[1] != 1:
        raise NumericalRankError(f"balance equations have a {null.shape[1]}-dimensional null space")
    vec = null[:, 0]
    vec = vec / vec.sum()
    if (vec < -1e-12).any():
        raise NumericalRankError("stationary vector has mixed signs")
    return np.clip(vec, 0.0, None)


def stationary_density(gen, start=0):
    """
    Solve rho L = 0 on each recurrent class reachable from `start`.

    Several classes are mixed with equal weight; `classes` reports them.
    Rational generators are solved exactly with sympy.

    Raises:
        NumericalRankError if a class's null space is not one-dimensional
    """
    classes = recurrent_classes(gen, start)
    weight = Fraction(1, len(classes))
    exact = None
    if gen.is_exact:
        exact = [Fraction(0)] * gen.n_states
        for members in classes:
            for s, v in zip(members, _exact_class_density(gen, members)):
                exact[s] += weight * v
        density = np.array([float(v) for v in exact])
    else:
        density = np.zeros(gen.n_states)
        for members in classes:
            density[members] += float(weight) * _float_class_density(gen, members)
    residual = float(np.abs(gen.matrix.T @ density).max()) if gen.n_states else 0.0
    if exact is None and residual > RESIDUAL_TOL:
        raise NumericalRankError(f"stationary residual {residual:.3g} above {RESIDUAL_TOL}")
    if len(classes) > 1:
        print_status(f"{len(classes)} recurrent classes reachable; mixing them uniformly")
    return StationaryResult(density, exact, classes, residual)


def exact_residual(gen, exact):
    """max |(L^T rho)_j| in rational arithmetic."""
    out = [Fraction(0)] * gen.n_states
    for (i, j), r in gen.exact.items():
        out[j] += exact[i] * r
        out[i] -= exact[i] * r
    return max((abs(v) for v in out), default=Fraction(0))
