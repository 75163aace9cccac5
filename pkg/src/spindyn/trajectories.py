"""
Event-driven trajectories, hitting times and their envelopes.

Hitting times use tau = +inf for runs that never satisfy the event within
the horizon. Per-run generators come from SeedSequence([master_seed, run]),
so every estimate is a deterministic function of the master seed.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from ..utils.errors import BinMismatchError
from ..utils.logging_utils import print_warning, progress

WALD_Z = 1.96
MISS_WARNING_FRACTION = 0.001


@dataclass(frozen=True)
class SpinRange:
    edge: str
    lo: int
    hi: int

    def holds(self, config, clock_edge):
        return self.lo <= config.spin(self.edge) <= self.hi

    def render(self):
        return f"edge {self.edge} spin in {self.lo}..{self.hi}"


@dataclass(frozen=True)
class HelicityIs:
    edge: str
    sign: int

    def holds(self, config, clock_edge):
        return config.helicity_of(self.edge) == self.sign

    def render(self):
        return f"helicity {self.edge} = {'+' if self.sign > 0 else '-'}"


@dataclass(frozen=True)
class ClockWindow:
    """T(config) = twice-spin of the clock edge lies in [lo, hi]."""
    lo: int
    hi: int

    def holds(self, config, clock_edge):
        if clock_edge is None:
            raise ValueError("clock window used without a clock edge")
        return self.lo <= config.spin(clock_edge) <= self.hi

    def render(self):
        return f"clock in {self.lo}..{self.hi}"


@dataclass(frozen=True)
class EventPredicate:
    """
    Conjunction of primitive tests on a configuration.

    For abstract chains, `states` lists the satisfying state indices instead.
    """
    name: str
    tests: Tuple = ()
    clock_edge: Optional[str] = None
    states: Optional[frozenset] = None

    def holds(self, config):
        return all(t.holds(config, self.clock_edge) for t in self.tests)

    def mask(self, gen):
        if self.states is not None:
            out = np.zeros(gen.n_states, dtype=bool)
            out[[s for s in self.states if s < gen.n_states]] = True
            return out
        if gen.states is None:
            raise ValueError(f"event {self.name} needs configurations to evaluate")
        return np.array([self.holds(s) for s in gen.states], dtype=bool)

    def render(self):
        if self.states is not None:
            return "states " + " ".join(str(s) for s in sorted(self.states))
        return " & ".join(t.render() for t in self.tests) or "true"

    @classmethod
    def from_states(cls, name, states):
        return cls(name, states=frozenset(states))


@dataclass
class TrajectorySample:
    seed_state: int
    jump_times: List[float]
    visited: List[int]
    rng_seed: object
    horizon: float

    def state_at(self, tau):
        k = int(np.searchsorted(self.jump_times, tau, side="right"))
        return self.visited[k]


def run_seed(master_seed, run):
    return np.random.SeedSequence([int(master_seed), int(run)])


def simulate_trajectory(gen, seed_state, horizon, rng_seed):
    """
    Exact jump-chain simulation up to `horizon`.

    Waiting times are exponential in the total exit rate; successors are
    chosen in proportion to their rates. Absorbing states wait out the horizon.
    """
    if not horizon > 0:
        raise ValueError("horizon must be positive")
    rng = np.random.default_rng(rng_seed)
    state = int(seed_state)
    t = 0.0
    times, visited = [], [state]
    while True:
        targets, rates = gen.successors(state)
        total = float(rates.sum())
        if total <= 0:
            break
        t += rng.exponential(1.0 / total)
        if t > horizon:
            break
        cumulative = np.cumsum(rates)
        k = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
        state = int(targets[min(k, len(targets) - 1)])
        times.append(t)
        visited.append(state)
    return TrajectorySample(int(seed_state), times, visited, rng_seed, float(horizon))


def first_hit(sample, mask):
    """(tau, state index) of the first visit to the event, or (inf, None)."""
    if mask[sample.visited[0]]:
        return 0.0, sample.visited[0]
    for t, s in zip(sample.jump_times, sample.visited[1:]):
        if mask[s]:
            return t, s
    return math.inf, None


def hitting_time(sample, event, gen):
    """First tau at which the event holds, or None if it never does before the horizon."""
    tau, _ = first_hit(sample, event.mask(gen))
    return None if math.isinf(tau) else tau


def hitting_times(gen, events, n_samples, horizon, master_seed, seed_state=0, desc="hitting times"):
    """
    Simulate n_samples runs and return an (n_samples, len(events)) array of
    hitting times with +inf for misses, plus the states at the hits (-1 for misses).
    """
    masks = [e.mask(gen) for e in events]
    taus = np.full((n_samples, len(events)), np.inf)
    states = np.full((n_samples, len(events)), -1, dtype=int)
    for run in progress(range(n_samples), desc=desc, total=n_samples):
        sample = simulate_trajectory(gen, seed_state, horizon, run_seed(master_seed, run))
        for k, mask in enumerate(masks):
            tau, s = first_hit(sample, mask)
            taus[run, k] = tau
            if s is not None:
                states[run, k] = s
    return taus, states


def wald_half_width(p, n):
    return WALD_Z * math.sqrt(max(p * (1.0 - p), 0.0) / n)


@dataclass
class OrderStatistics:
    n_samples: int
    a_first: int
    b_first: int
    tie_or_none: int
    miss_a: int
    miss_b: int

    @property
    def p_a_first(self):
        return Fraction(self.a_first, self.n_samples)

    @property
    def p_b_first(self):
        return Fraction(self.b_first, self.n_samples)

    @property
    def p_tie_or_none(self):
        return Fraction(self.tie_or_none, self.n_samples)

    def half_widths(self):
        return tuple(wald_half_width(float(p), self.n_samples)
                     for p in (self.p_a_first, self.p_b_first, self.p_tie_or_none))


def order_statistics(gen, event_a, event_b, n_samples, horizon, master_seed, seed_state=0):
    """
    Estimate P(tau_A < tau_B), P(tau_B < tau_A) and P(tie or neither) with
    Wald 95% half-widths. A run where both miss counts as a tie.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    taus, _ = hitting_times(gen, [event_a, event_b], n_samples, horizon, master_seed, seed_state,
                            desc="order statistics")
    return order_statistics_from_times(taus[:, 0], taus[:, 1], event_a.name, event_b.name)


def order_statistics_from_times(ta, tb, name_a="A", name_b="B"):
    """Order statistics from two aligned arrays of hitting times (inf = miss)."""
    n_samples = len(ta)
    a_first = int(np.sum(ta < tb))
    b_first = int(np.sum(tb < ta))
    stats = OrderStatistics(n_samples, a_first, b_first, n_samples - a_first - b_first,
                            int(np.isinf(ta).sum()), int(np.isinf(tb).sum()))
    for name, misses in ((name_a, stats.miss_a), (name_b, stats.miss_b)):
        if misses > MISS_WARNING_FRACTION * n_samples:
            print_warning(f"event {name} never fired in {misses}/{n_samples} runs within the horizon")
    return stats


@dataclass
class Envelope:
    """Histogram of hitting times conditioned on a hit, with unit total mass."""
    edges: np.ndarray
    masses: np.ndarray
    hits: int = 0
    n_samples: int = 0
    counts: np.ndarray = field(default=None)

    @property
    def hit_fraction(self):
        if self.n_samples == 0:
            return Fraction(0)
        return Fraction(self.hits, self.n_samples)

    @classmethod
    def prescribed(cls, edges, masses):
        masses = np.asarray(masses, dtype=float)
        total = masses.sum()
        return cls(np.asarray(edges, dtype=float), masses / total if total > 0 else masses)


def histogram_from_times(times, horizon, bins):
    if bins < 1:
        raise ValueError("bins must be at least 1")
    times = np.asarray(times, dtype=float)
    hit = times[np.isfinite(times)]
    counts, edges = np.histogram(hit, bins=bins, range=(0.0, float(horizon)))
    masses = counts / len(hit) if len(hit) else np.zeros(bins)
    return Envelope(edges, masses, len(hit), len(times), counts)


def envelope_histogram(gen, event, n_samples, horizon, bins, master_seed, seed_state=0):
    """Envelope f_E over [0, horizon]; an empty histogram when the event never fires."""
    taus, _ = hitting_times(gen, [event], n_samples, horizon, master_seed, seed_state,
                            desc=f"envelope {event.name}")
    return histogram_from_times(taus[:, 0], horizon, bins)


def envelope_overlap(f_a, f_b):
    """Overlap coefficient sum_bins min(f_A, f_B)."""
    if f_a.edges.shape != f_b.edges.shape or not np.array_equal(f_a.edges, f_b.edges):
        raise BinMismatchError("envelopes use different bin edges")
    return float(np.minimum(f_a.masses, f_b.masses).sum())
