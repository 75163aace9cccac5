import math
from dataclasses import replace
import os
from fractions import Fraction

import numpy as np
import pytest
from scipy.linalg import expm

from src.data import load_model
from src.gluing import check_global_section
from src.spindyn import (
    EventPredicate, KernelRow, MoveCatalogue, ResponseKernel, SpinNetworkConfig, admissible,
    build_state_space, envelope_histogram, envelope_overlap, evolve_density, exact_residual,
    gibbs_density, hitting_time, induced_behavior, moves_from, order_statistics,
    simulate_trajectory, stationary_density, theta_graph,
)
from src.spindyn.generator import Generator
from src.spindyn.network import HELICITY_FLIP, RECOUPLE, SPIN_STEP, move_rate
from src.spindyn.trajectories import Envelope, hitting_times, run_seed
from src.utils.errors import (
    BinMismatchError, CapExceededError, InadmissibleSeedError, KernelNormalizationError,
    MissingInterventionError, NormalizationError, SizeError,
)


@pytest.fixture
def race(fixtures_dir):
    model = load_model(os.path.join(fixtures_dir, "theta_race.model"))
    return model, build_state_space(model.seed, model.moves)


@pytest.fixture
def birth_death(fixtures_dir):
    model = load_model(os.path.join(fixtures_dir, "birth_death.model"))
    return model, build_state_space(model.seed, model.moves)


def tetrahedron(twice_spin=2):
    vertices = ("v1", "v2", "v3", "v4")
    edges = tuple((f"e{u[1]}{v[1]}", u, v) for i, u in enumerate(vertices) for v in vertices[i + 1:])
    return SpinNetworkConfig(vertices, edges, (twice_spin,) * 6, (-1,) * 6)


def test_admissibility():
    assert admissible(theta_graph([2, 2, 2]))
    assert admissible(theta_graph([4, 4, 0]))
    assert not admissible(theta_graph([2, 2, 1]))
    assert not admissible(theta_graph([2, 2, 6]))
    assert admissible(tetrahedron())
    with pytest.raises(InadmissibleSeedError):
        build_state_space(theta_graph([2, 2, 1]), MoveCatalogue(kinds=(HELICITY_FLIP,)))


def test_moves_and_rates():
    seed = theta_graph([2, 2, 2])
    catalogue = MoveCatalogue(kinds=(HELICITY_FLIP,), gamma=Fraction(2), weights={"e3": Fraction(0)})
    moves = moves_from(seed, catalogue)
    assert [m.edge for m in moves] == ["e1", "e2"]
    assert all(move_rate(m, catalogue) == 2 for m in moves)
    # recoupling needs an edge whose neighbours are distinct edges
    assert moves_from(seed, MoveCatalogue(kinds=(RECOUPLE,))) == []


def test_recoupling_on_the_tetrahedron():
    moves = moves_from(tetrahedron(), MoveCatalogue(kinds=(RECOUPLE,)))
    assert moves
    for move in moves:
        assert admissible(move.target)
        assert move.target.edge_names == tetrahedron().edge_names
        assert move.target.key() != tetrahedron().key()


def test_spin_window_and_step():
    catalogue = MoveCatalogue(kinds=(SPIN_STEP,), spin_window=(0, 8),
                              weights={"e1": Fraction(0), "e2": Fraction(0)})
    targets = sorted(m.target.spin("e3") for m in moves_from(theta_graph([4, 4, 4]), catalogue))
    assert targets == [2, 6]
    with pytest.raises(ValueError):
        MoveCatalogue(kinds=("Teleport",))


def test_state_space_caps(birth_death):
    model, gen = birth_death
    assert gen.n_states == 5
    assert not gen.truncated
    small = build_state_space(model.seed, model.moves, cap=2)
    assert small.n_states == 2 and small.truncated
    with pytest.raises(CapExceededError):
        build_state_space(model.seed, model.moves, cap=0)
    with pytest.raises(SizeError):
        build_state_space(model.seed, model.moves, cap=10 ** 6)


def test_two_state_stationary_density_is_exact():
    gen = Generator.from_rate_table({(0, 1): Fraction(2), (1, 0): Fraction(1)})
    result = stationary_density(gen)
    assert result.exact == [Fraction(1, 3), Fraction(2, 3)]
    assert result.multiplicity == 1
    assert exact_residual(gen, result.exact) == 0


def test_helicity_bias_matches_gibbs(fixtures_dir):
    model = load_model(os.path.join(fixtures_dir, "helicity_bias.model"))
    gen = build_state_space(model.seed, model.moves)
    assert gen.n_states == 2 and gen.is_exact
    assert gen.states[1].helicity_of("e1") == 1
    result = stationary_density(gen)
    assert result.exact == [Fraction(1, 3), Fraction(2, 3)]
    assert np.allclose(gibbs_density(gen), [1 / 3, 2 / 3])


def test_boltzmann_chain_matches_gibbs(birth_death):
    _, gen = birth_death
    assert not gen.is_exact
    result = stationary_density(gen)
    assert result.exact is None
    assert result.residual < 1e-10
    assert np.allclose(result.density, gibbs_density(gen), atol=1e-10)


def test_absorbing_classes_are_mixed_uniformly():
    gen = Generator.from_rate_table({(0, 1): 1, (0, 2): 1}, n_states=3)
    result = stationary_density(gen)
    assert result.classes == [[1], [2]]
    assert result.exact == [0, Fraction(1, 2), Fraction(1, 2)]


def test_uniformization_matches_matrix_exponential(birth_death):
    _, gen = birth_death
    rho0 = np.zeros(gen.n_states)
    rho0[0] = 1.0
    for tau in (0.0, 0.3, 2.0, 10.0):
        expected = rho0 @ expm(gen.dense() * tau)
        assert np.allclose(evolve_density(rho0, tau, gen), expected, atol=1e-9)
    with pytest.raises(NormalizationError):
        evolve_density(np.full(gen.n_states, 0.5), 1.0, gen)


SHIPPED_MODELS = ["theta_race.model", "helicity_bias.model", "helicity_race.model",
                  "birth_death.model"]


@pytest.mark.parametrize("name", SHIPPED_MODELS)
def test_uniformization_matches_simulated_occupancy(fixtures_dir, name):
    model = load_model(os.path.join(fixtures_dir, name))
    gen = build_state_space(model.seed, model.moves)
    n, tau = 5000, 1.5
    counts = np.zeros(gen.n_states)
    for run in range(n):
        sample = simulate_trajectory(gen, 0, tau, run_seed(7, run))
        counts[sample.state_at(tau)] += 1
    expected = evolve_density(np.eye(gen.n_states)[0], tau, gen)
    p = np.clip(expected, 0.0, 1.0)
    sigma = np.sqrt(p * (1 - p) / n)
    assert np.all(np.abs(counts / n - expected) <= 3 * sigma + 1e-12)


def test_trajectories_are_deterministic(race):
    model, gen = race
    events = list(model.events.values())
    a, _ = hitting_times(gen, events, 200, 50.0, master_seed=11)
    b, _ = hitting_times(gen, events, 200, 50.0, master_seed=11)
    c, _ = hitting_times(gen, events, 200, 50.0, master_seed=12)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_hitting_time_miss_is_none(race):
    model, gen = race
    sample = simulate_trajectory(gen, 0, 1e-9, run_seed(1, 0))
    assert hitting_time(sample, model.events["A"], gen) is None
    assert sample.state_at(0.5e-9) == 0


def test_exponential_race(race):
    model, gen = race
    n = 20000
    stats = order_statistics(gen, model.events["A"], model.events["B"], n, 50.0, master_seed=42)
    se = math.sqrt(0.25 * 0.75 / n)
    assert abs(float(stats.p_a_first) - 0.25) < 3 * se
    assert stats.p_a_first + stats.p_b_first + stats.p_tie_or_none == 1
    assert stats.miss_a == 0 and stats.miss_b == 0


def test_envelopes(race):
    model, gen = race
    f_a = envelope_histogram(gen, model.events["A"], 2000, 10.0, 20, master_seed=3)
    f_b = envelope_histogram(gen, model.events["B"], 2000, 10.0, 20, master_seed=3)
    assert math.isclose(f_a.masses.sum(), 1.0)
    assert f_a.edges[0] == 0.0 and f_a.edges[-1] == 10.0
    assert math.isclose(envelope_overlap(f_a, f_a), 1.0)
    assert 0.0 < envelope_overlap(f_a, f_b) < 1.0
    coarse = envelope_histogram(gen, model.events["A"], 200, 10.0, 5, master_seed=3)
    with pytest.raises(BinMismatchError):
        envelope_overlap(f_a, coarse)


def test_prescribed_envelope_is_normalized():
    env = Envelope.prescribed([0.0, 1.0, 2.0], [1, 3])
    assert np.allclose(env.masses, [0.25, 0.75])


def test_event_on_abstract_chain():
    gen = Generator.from_rate_table({(0, 1): 1, (1, 2): 1})
    event = EventPredicate.from_states("end", [2])
    assert event.mask(gen).tolist() == [False, False, True]
    assert event.render() == "states 2"


def test_induced_behaviour_glues(race):
    model, gen = race
    induced = induced_behavior(gen, model.kernels, model.scenario, 3000, 50.0, master_seed=42)
    assert not induced.no_hit
    verdict = check_global_section(induced.table, with_measures=False)
    assert verdict.gluable
    # A reads B's setting only when B fired first, roughly three runs in four
    p = induced.table.prob((0, 1), (1, 0))
    assert 0.6 < float(p) < 0.9


def test_misses_append_a_no_hit_outcome(race):
    model, gen = race
    induced = induced_behavior(gen, model.kernels, model.scenario, 500, 0.2, master_seed=5)
    assert induced.no_hit == {"A": 2, "B": 2}
    assert induced.table.scenario.outcomes == (3, 3)
    assert check_global_section(induced.table, with_measures=False).gluable


def _random_kernel(party, other, event, rng):
    rows = []
    for setting in (0, 1):
        for seen in ("0", "1", "none"):
            k = int(rng.integers(0, 5))
            rows.append(KernelRow(str(setting), (seen,), (Fraction(k, 4), Fraction(4 - k, 4))))
    return ResponseKernel(party, event, (f"seen:{other}",), tuple(rows))


def test_random_kernels_always_glue(race, rng):
    model, gen = race
    for trial in range(50):
        kernels = [_random_kernel("A", "B", model.events["A"], rng),
                   _random_kernel("B", "A", model.events["B"], rng)]
        horizon = float(rng.choice([0.3, 1.0, 50.0]))
        induced = induced_behavior(gen, kernels, model.scenario, 300, horizon, master_seed=trial)
        assert check_global_section(induced.table, with_measures=False).gluable


def test_kernel_validation(race):
    model, gen = race
    with pytest.raises(KernelNormalizationError):
        ResponseKernel("A", model.events["A"], (), (KernelRow("*", (), (Fraction(1, 2), Fraction(1, 3))),))
    with pytest.raises(MissingInterventionError):
        induced_behavior(gen, model.kernels[:1], model.scenario, 10, 50.0, master_seed=1)


def test_hitting_time_is_zero_when_the_seed_satisfies_the_event():
    gen = Generator.from_rate_table({(0, 1): 1})
    sample = simulate_trajectory(gen, 0, 5.0, run_seed(3, 0))
    assert hitting_time(sample, EventPredicate.from_states("start", [0]), gen) == 0.0


def test_an_event_never_precedes_itself(race):
    model, gen = race
    event = model.events["A"]
    stats = order_statistics(gen, event, event, 500, 50.0, master_seed=9)
    assert stats.a_first == stats.b_first == 0
    assert stats.p_tie_or_none == 1


def test_single_jump_envelope_is_truncated_exponential():
    rate, horizon, n = 2.0, 2.5, 4000
    gen = Generator.from_rate_table({(0, 1): 2})
    env = envelope_histogram(gen, EventPredicate.from_states("jumped", [1]), n, horizon, 5,
                             master_seed=17)
    norm = 1 - math.exp(-rate * horizon)
    lo, hi = env.edges[:-1], env.edges[1:]
    expected = (np.exp(-rate * lo) - np.exp(-rate * hi)) / norm
    sigma = np.sqrt(expected * (1 - expected) / env.hits)
    assert np.all(np.abs(env.masses - expected) <= 3 * sigma)
    assert abs(float(env.hit_fraction) - norm) <= 3 * math.sqrt(norm * (1 - norm) / n)


def test_unreachable_event_has_an_empty_envelope():
    gen = Generator.from_rate_table({(0, 1): 1}, n_states=3)
    env = envelope_histogram(gen, EventPredicate.from_states("never", [2]), 100, 5.0, 4,
                             master_seed=2)
    assert env.hits == 0 and env.hit_fraction == 0
    assert not env.masses.any() and env.counts.sum() == 0


def test_symmetric_race_splits_evenly(race):
    model, _ = race
    moves = replace(model.moves, weights={"e1": Fraction(1), "e2": Fraction(1), "e3": Fraction(0)})
    gen = build_state_space(model.seed, moves)
    n = 10000
    stats = order_statistics(gen, model.events["A"], model.events["B"], n, 50.0, master_seed=21)
    pa, pb = float(stats.p_a_first), float(stats.p_b_first)
    assert abs(pa - pb) <= 3 * math.sqrt((pa + pb - (pa - pb) ** 2) / n)
    assert stats.tie_or_none == 0


@pytest.mark.parametrize("gamma", [1, 2, 3])
def test_gamma_tilts_the_helicity_race(fixtures_dir, gamma):
    model = load_model(os.path.join(fixtures_dir, "helicity_race.model"))
    gen = build_state_space(model.seed, replace(model.moves, gamma=Fraction(gamma)))
    n = 8000
    stats = order_statistics(gen, model.events["A"], model.events["B"], n, 50.0,
                             master_seed=100 + gamma)
    expected = gamma / (1 + gamma)
    assert abs(float(stats.p_a_first) - expected) < 3 * math.sqrt(expected * (1 - expected) / n)
    assert stats.tie_or_none == 0
