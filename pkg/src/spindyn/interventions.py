"""
Operational statistics induced by interventions at event hitting times.

Each party acts once, at the first hit of its event, drawing an outcome from
its response kernel K(outcome | setting, features of the state). Trajectories
and kernel random numbers are shared by all settings tuples, so each run
contributes one deterministic one-way-signalling strategy and the returned
table is their uniform mixture.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

import numpy as np

from ..gluing.behavior import BehaviorTable, Scenario
from ..utils.errors import KernelNormalizationError, MissingInterventionError, UnknownPartyError
from ..utils.logging_utils import print_status, print_warning
from .trajectories import MISS_WARNING_FRACTION, hitting_times

WILDCARD = "*"
NO_HIT = "none"


@dataclass(frozen=True)
class KernelRow:
    setting: str
    features: Tuple[str, ...]
    distribution: Tuple[Fraction, ...]

    def matches(self, setting, values):
        if self.setting != WILDCARD and self.setting != str(setting):
            return False
        return all(p == WILDCARD or p == v for p, v in zip(self.features, values))


@dataclass(frozen=True)
class ResponseKernel:
    """
    K(outcome | setting, features) for one party as an ordered list of rows.

    The first row matching the setting and the feature values applies.
    Features: fired:<party>, seen:<party>, helicity:<edge>, spin:<edge>, clock.
    """
    party: str
    event: object
    features: Tuple[str, ...]
    rows: Tuple[KernelRow, ...]

    def __post_init__(self):
        widths = {len(row.distribution) for row in self.rows}
        if len(widths) > 1:
            raise KernelNormalizationError(
                f"kernel rows of {self.party} disagree on the number of outcomes")
        for row in self.rows:
            if len(row.features) != len(self.features):
                raise KernelNormalizationError(
                    f"kernel row for {self.party} has {len(row.features)} feature values, "
                    f"expected {len(self.features)}")
            if any(p < 0 for p in row.distribution) or sum(row.distribution) != 1:
                raise KernelNormalizationError(
                    f"kernel row for {self.party} does not sum to 1: "
                    f"{' '.join(str(p) for p in row.distribution)}")

    @property
    def n_outcomes(self):
        return len(self.rows[0].distribution) if self.rows else 0

    def distribution(self, setting, values):
        for row in self.rows:
            if row.matches(setting, values):
                return row.distribution
        raise KernelNormalizationError(
            f"no kernel row of {self.party} covers setting {setting} with features "
            f"{' '.join(values)}")


def _feature_value(name, party_index, run, x, taus, state, gen, scenario, clock_edge):
    kind, _, arg = name.partition(":")
    if kind in ("fired", "seen"):
        other = scenario.party_ids.index(arg)
        earlier = taus[run, other] < taus[run, party_index]
        if kind == "fired":
            return "1" if earlier else "0"
        return str(x[other]) if earlier else NO_HIT
    config = gen.states[state]
    if kind == "helicity":
        return "+" if config.helicity_of(arg) > 0 else "-"
    if kind == "spin":
        return str(config.spin(arg))
    if kind == "clock":
        return str(config.spin(clock_edge))
    raise KernelNormalizationError(f"unknown kernel feature {name!r}")


def _draw(distribution, u):
    cumulative = 0
    for outcome, p in enumerate(distribution):
        cumulative += p
        if u < cumulative:
            return outcome
    return max(k for k, p in enumerate(distribution) if p > 0)


@dataclass
class InducedBehavior:
    table: BehaviorTable
    counts: Dict[tuple, Dict[tuple, int]]
    no_hit: Dict[str, int] = field(default_factory=dict)
    misses: Dict[str, int] = field(default_factory=dict)


def induced_behavior(gen, kernels, scenario, n_samples, horizon, master_seed, seed_state=0):
    """
    Empirical table p(a|x) = count / n_samples over shared trajectories.

    Parties whose event misses in some run get one extra outcome, the
    no-hit outcome, numbered after the kernel outcomes.

    Raises:
        MissingInterventionError if a party has no kernel
        KernelNormalizationError on invalid kernels or uncovered feature values
    """
    by_party = {}
    for kernel in kernels:
        if kernel.party not in scenario.party_ids:
            raise UnknownPartyError(f"intervention for unknown party {kernel.party!r}")
        by_party[kernel.party] = kernel
    missing = [p for p in scenario.party_ids if p not in by_party]
    if missing:
        raise MissingInterventionError(f"no intervention for party {', '.join(missing)}")
    ordered = [by_party[p] for p in scenario.party_ids]
    for k, kernel in enumerate(ordered):
        if kernel.n_outcomes != scenario.outcomes[k]:
            raise KernelNormalizationError(
                f"kernel of {kernel.party} has {kernel.n_outcomes} outcomes, "
                f"scenario declares {scenario.outcomes[k]}")
        for name in kernel.features:
            kind, _, arg = name.partition(":")
            if kind in ("fired", "seen") and arg not in scenario.party_ids:
                raise UnknownPartyError(f"kernel feature {name} names an unknown party")

    taus, states = hitting_times(gen, [k.event for k in ordered], n_samples, horizon,
                                 master_seed, seed_state, desc="induced behaviour")
    misses = {p: int(np.isinf(taus[:, k]).sum()) for k, p in enumerate(scenario.party_ids)}
    no_hit = {p: scenario.outcomes[k] for k, p in enumerate(scenario.party_ids) if misses[p]}
    for p, m in misses.items():
        if m > MISS_WARNING_FRACTION * n_samples:
            print_warning(f"party {p}: event never fired in {m}/{n_samples} runs")
    outcomes = tuple(n + (1 if p in no_hit else 0)
                     for p, n in zip(scenario.party_ids, scenario.outcomes))
    induced = Scenario(scenario.parties, scenario.settings, outcomes)
    if no_hit:
        print_status("No-hit outcomes appended: "
                     + ", ".join(f"{p}={v}" for p, v in sorted(no_hit.items())))

    counts = {x: {} for x in scenario.settings_tuples()}
    for run in range(n_samples):
        uniforms = np.random.default_rng(
            np.random.SeedSequence([int(master_seed), run, 1])).random(len(ordered))
        for x in counts:
            a = []
            for k, kernel in enumerate(ordered):
                if math.isinf(taus[run, k]):
                    a.append(no_hit[kernel.party])
                    continue
                values = tuple(
                    _feature_value(name, k, run, x, taus, states[run, k], gen, scenario,
                                   kernel.event.clock_edge)
                    for name in kernel.features)
                a.append(_draw(kernel.distribution(x[k], values), Fraction(uniforms[k])))
            a = tuple(a)
            counts[x][a] = counts[x].get(a, 0) + 1

    table = BehaviorTable(induced, {(x, a): Fraction(c, n_samples)
                                    for x, row in counts.items() for a, c in row.items()})
    return InducedBehavior(table, counts, no_hit, misses)
