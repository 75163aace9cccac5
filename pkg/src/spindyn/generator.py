"""
Markov generators on enumerated spin-network state spaces.
"""
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import sparse

from ..utils.errors import CapExceededError, InadmissibleSeedError, SizeError
from ..utils.logging_utils import print_status, print_warning
from .network import admissible, move_rate, moves_from

MAX_STATES = 10 ** 5


@dataclass
class Generator:
    """
    Rate matrix L with L[i, j] = r(i -> j) for i != j and zero row sums.

    `states` is None for abstract chains built from a rate table. `exact`
    maps (i, j) to Fraction rates when every rate is rational.
    """
    n_states: int
    matrix: sparse.csr_matrix
    states: Optional[List] = None
    exact: Optional[Dict[Tuple[int, int], Fraction]] = None
    truncated: bool = False
    moves: Optional[object] = None
    _successors: list = field(default=None, repr=False)

    def __post_init__(self):
        self._successors = []
        for i in range(self.n_states):
            start, end = self.matrix.indptr[i], self.matrix.indptr[i + 1]
            cols = self.matrix.indices[start:end]
            vals = self.matrix.data[start:end]
            keep = (cols != i) & (vals > 0)
            self._successors.append((cols[keep], vals[keep]))

    @property
    def is_exact(self):
        return self.exact is not None

    def successors(self, i):
        """(target indices, rates) of the positive off-diagonal entries of row i."""
        return self._successors[i]

    def exit_rate(self, i):
        return float(self._successors[i][1].sum())

    def dense(self):
        return self.matrix.toarray()

    def state_label(self, i):
        if self.states is None:
            return f"s{i}"
        return self.states[i].describe()

    @classmethod
    def from_rate_table(cls, rates, n_states=None):
        """
        Abstract chain from {(i, j): rate}; self-rates and zero rates are ignored.
        """
        if n_states is None:
            n_states = 1 + max((max(i, j) for i, j in rates), default=0)
        exact = {}
        all_exact = True
        clean = {}
        for (i, j), r in rates.items():
            if i == j or r == 0:
                continue
            if r < 0:
                raise ValueError(f"negative rate {r} for {i} -> {j}")
            clean[(i, j)] = r
            if isinstance(r, (int, Fraction)):
                exact[(i, j)] = Fraction(r)
            else:
                all_exact = False
        return cls(n_states, _assemble(n_states, clean), exact=exact if all_exact else None)


def _assemble(n, rates):
    rows, cols, vals = [], [], []
    out = np.zeros(n)
    for (i, j), r in sorted(rates.items()):
        rows.append(i)
        cols.append(j)
        vals.append(float(r))
        out[i] += float(r)
    for i in range(n):
        rows.append(i)
        cols.append(i)
        vals.append(-out[i])
    return sparse.csr_matrix((vals, (rows, cols)), shape=(n, n))


def build_state_space(seed, moves, cap=10000):
    """
    Breadth-first closure of `seed` under the enabled moves.

    Moves leading outside the first `cap` discovered states are dropped
    (rate 0) and the generator is flagged as truncated.

    Raises:
        InadmissibleSeedError if the seed is not admissible
        CapExceededError if cap < 1
        SizeError if cap is above the hard state limit
    """
    if not admissible(seed):
        raise InadmissibleSeedError(f"seed configuration is not admissible: {seed.describe()}")
    if cap < 1:
        raise CapExceededError("state cap must allow at least the seed state")
    if cap > MAX_STATES:
        raise SizeError(f"state cap {cap} above the limit of {MAX_STATES}")

    states = [seed]
    index = {seed.key(): 0}
    rates = {}
    truncated = False
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for move in moves_from(states[i], moves):
            key = move.target.key()
            j = index.get(key)
            if j is None:
                if len(states) >= cap:
                    truncated = True
                    continue
                j = len(states)
                index[key] = j
                states.append(move.target)
                queue.append(j)
            if j == i:
                continue
            rates[(i, j)] = rates.get((i, j), 0) + move_rate(move, moves)

    if truncated:
        print_warning(f"state space truncated at {cap} states; boundary moves get rate 0")
    print_status(f"State space: {len(states)} states, {len(rates)} transitions")
    exact = None
    if all(isinstance(r, Fraction) for r in rates.values()):
        exact = dict(rates)
    return Generator(len(states), _assemble(len(states), rates), states=states, exact=exact,
                     truncated=truncated, moves=moves)


def gibbs_density(gen, moves=None):
    """
    Weights exp(-2 beta C) * gamma ** (#plus edges), normalized.

    Under r = r0 w exp(-beta dC) gamma ** dh_plus with symmetric weights and
    reversible flips, the forward/backward rate ratio is
    exp(-2 beta dC) * gamma ** (dh_plus - dh_minus), which this density balances.
    """
    moves = moves if moves is not None else gen.moves
    if gen.states is None or moves is None:
        raise ValueError("Gibbs density needs a spin-network generator")
    beta = float(moves.beta)
    gamma = float(moves.gamma)
    weights = np.array([np.exp(-2.0 * beta * s.cost()) * gamma ** s.plus_count()
                        for s in gen.states])
    return weights / weights.sum()
