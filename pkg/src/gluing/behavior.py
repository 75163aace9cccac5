"""
Scenarios and behaviour tables p(a|x) held as exact rationals.
"""
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

from ..contexts import make_parties
from ..utils.errors import NormalizationError, SizeError

MAX_TABLE_ENTRIES = 10 ** 6


@dataclass(frozen=True)
class Scenario:
    parties: tuple
    settings: Tuple[int, ...]
    outcomes: Tuple[int, ...]

    def __post_init__(self):
        n = len(self.parties)
        if len(self.settings) != n or len(self.outcomes) != n:
            raise SizeError(f"scenario has {n} parties but {len(self.settings)} settings "
                            f"and {len(self.outcomes)} outcome counts")
        if any(k < 1 for k in self.settings + self.outcomes):
            raise SizeError("settings and outcome counts must be at least 1")
        if self.size > MAX_TABLE_ENTRIES:
            raise SizeError(f"scenario table has {self.size} entries, cap is {MAX_TABLE_ENTRIES}")

    @property
    def n_parties(self):
        return len(self.parties)

    @property
    def size(self):
        return math.prod(self.settings) * math.prod(self.outcomes)

    @property
    def party_ids(self):
        return tuple(p.id for p in self.parties)

    def settings_tuples(self):
        return list(itertools.product(*(range(k) for k in self.settings)))

    def outcome_tuples(self):
        return list(itertools.product(*(range(k) for k in self.outcomes)))

    def entries(self):
        """All (x, a) keys, settings-major."""
        outcomes = self.outcome_tuples()
        return [(x, a) for x in self.settings_tuples() for a in outcomes]

    def check_key(self, x, a):
        if len(x) != self.n_parties or len(a) != self.n_parties:
            raise SizeError(f"entry {x} ; {a} has the wrong arity for {self.n_parties} parties")
        for k, (xi, ai) in enumerate(zip(x, a)):
            if not 0 <= xi < self.settings[k]:
                raise SizeError(f"setting {xi} out of range for party {self.parties[k].id}")
            if not 0 <= ai < self.outcomes[k]:
                raise SizeError(f"outcome {ai} out of range for party {self.parties[k].id}")


def make_scenario(party_ids, settings, outcomes):
    return Scenario(make_parties(list(party_ids)), tuple(int(k) for k in settings),
                    tuple(int(k) for k in outcomes))


@dataclass(frozen=True)
class BehaviorTable:
    """
    Conditional distribution p(a|x) over a scenario.

    Entries are stored sparsely; missing keys are zero. Construction checks
    nonnegativity and exact normalization of every settings row.
    """
    scenario: Scenario
    p: Dict[Tuple[tuple, tuple], Fraction]

    def __post_init__(self):
        clean = {}
        for (x, a), value in self.p.items():
            x, a = tuple(x), tuple(a)
            self.scenario.check_key(x, a)
            value = Fraction(value)
            if value < 0:
                raise NormalizationError(f"negative probability {value} at {x} ; {a}")
            if value:
                clean[(x, a)] = value
        object.__setattr__(self, "p", clean)
        totals = {x: Fraction(0) for x in self.scenario.settings_tuples()}
        for (x, _), value in clean.items():
            totals[x] += value
        for x, total in totals.items():
            if total != 1:
                raise NormalizationError(
                    f"row {' '.join(map(str, x))} sums to {total}, expected 1")

    def prob(self, x, a):
        return self.p.get((tuple(x), tuple(a)), Fraction(0))

    def row(self, x):
        return [self.prob(x, a) for a in self.scenario.outcome_tuples()]

    def vector(self):
        return [self.prob(x, a) for x, a in self.scenario.entries()]

    def support(self):
        return sorted(self.p)

    @classmethod
    def from_function(cls, scenario, fn):
        """Deterministic table with outcome tuple fn(x) for every settings tuple x."""
        return cls(scenario, {(x, tuple(fn(x))): Fraction(1) for x in scenario.settings_tuples()})

    @classmethod
    def uniform(cls, scenario):
        share = Fraction(1, math.prod(scenario.outcomes))
        return cls(scenario, {key: share for key in scenario.entries()})

    @classmethod
    def mixture(cls, weighted):
        """Convex combination of (weight, table) pairs over one scenario."""
        weighted = [(Fraction(w), t) for w, t in weighted]
        if not weighted:
            raise ValueError("mixture needs at least one component")
        scenario = weighted[0][1].scenario
        if sum(w for w, _ in weighted) != 1 or any(w < 0 for w, _ in weighted):
            raise NormalizationError("mixture weights must be nonnegative and sum to 1")
        values = {}
        for w, table in weighted:
            if table.scenario != scenario:
                raise SizeError("mixture components live on different scenarios")
            for key, value in table.p.items():
                values[key] = values.get(key, Fraction(0)) + w * value
        return cls(scenario, values)

    def l1_to(self, other):
        """Sum over all entries of |p - q|."""
        keys = set(self.p) | set(other.p)
        return sum((abs(self.p.get(k, 0) - other.p.get(k, 0)) for k in keys), Fraction(0))

    def game_value(self, coefficients):
        """Sum of w(x, a) p(a|x) for a coefficient map keyed by (x, a)."""
        return sum((Fraction(w) * self.prob(x, a) for (x, a), w in coefficients.items()),
                   Fraction(0))

    def __eq__(self, other):
        return isinstance(other, BehaviorTable) and self.scenario == other.scenario \
            and self.p == other.p

    def __hash__(self):
        return hash((self.scenario, frozenset(self.p.items())))
