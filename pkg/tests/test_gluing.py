from fractions import Fraction

import pytest

from src.contexts import build_context_poset, enumerate_total_orders, make_partial_order
from src.gluing import (
    BehaviorTable, SectionFamily, causal_fraction, check_global_section, deterministic_points,
    is_compatible_with_context, is_compatible_with_order, l1_distance_to_gluable, make_scenario,
    order_constraints, union_deterministic_points, verify_section_family, vertex_causal_fraction,
    vertex_hull_membership, vertex_l1_distance,
)
from src.gluing.constraints import count_deterministic_strategies, point_to_table
from src.utils.errors import (
    EmptyFamilyError, MissingContextError, NonTotalOrderError, NormalizationError, SizeError,
)

N_RANDOM_BEHAVIOURS = 200


@pytest.fixture
def scenario():
    return make_scenario(["A", "B"], [2, 2], [2, 2])


@pytest.fixture
def orders(scenario):
    return enumerate_total_orders(scenario.parties)


@pytest.fixture
def guessing(scenario):
    """Each party outputs the other's setting."""
    return BehaviorTable.from_function(scenario, lambda x: (x[1], x[0]))


@pytest.fixture
def separable(scenario):
    q_ab = BehaviorTable.from_function(scenario, lambda x: (0, x[0]))
    q_ba = BehaviorTable.from_function(scenario, lambda x: (x[1], 0))
    return BehaviorTable.mixture([(Fraction(1, 2), q_ab), (Fraction(1, 2), q_ba)])


def _score(coefficients, scenario, point):
    return sum((coefficients.get((x, a), 0) for x, a in zip(scenario.settings_tuples(), point)),
               Fraction(0))


def test_normalization_is_exact(scenario):
    values = {(x, (0, 0)): Fraction(1) for x in scenario.settings_tuples()}
    values[((1, 1), (0, 0))] = Fraction(99, 100)
    with pytest.raises(NormalizationError):
        BehaviorTable(scenario, values)
    with pytest.raises(SizeError):
        BehaviorTable(scenario, {((0, 2), (0, 0)): 1})


def test_order_constraints_for_two_binary_parties(scenario, orders):
    a_first = orders[0]
    assert [p.id for p in a_first.chain()] == ["A", "B"]
    assert len(order_constraints(scenario, a_first)) == 2
    with pytest.raises(NonTotalOrderError):
        order_constraints(scenario, make_partial_order(scenario.parties, []))


def test_one_way_signalling(scenario, orders):
    b_reads_a = BehaviorTable.from_function(scenario, lambda x: (0, x[0]))
    assert is_compatible_with_order(b_reads_a, orders[0])
    assert not is_compatible_with_order(b_reads_a, orders[1])
    assert not is_compatible_with_context(b_reads_a, make_partial_order(scenario.parties, []))
    assert is_compatible_with_context(BehaviorTable.uniform(scenario),
                                      make_partial_order(scenario.parties, []))


def test_deterministic_strategy_counts(scenario, orders):
    assert [count_deterministic_strategies(scenario, o) for o in orders] == [64, 64]
    assert len(set(deterministic_points(scenario, orders[0]))) == 64
    union = union_deterministic_points(scenario, orders)
    # strategies ignoring the other party's setting belong to both orders
    assert len(union) == 112
    for point in deterministic_points(scenario, orders[0]):
        assert is_compatible_with_order(point_to_table(scenario, point), orders[0])


def test_guessing_game_bound_is_one_half(scenario, orders, guessing):
    game = {(x, (x[1], x[0])): Fraction(1, 4) for x in scenario.settings_tuples()}
    best = max(_score(game, scenario, pt) for pt in union_deterministic_points(scenario, orders))
    assert best == Fraction(1, 2)
    assert guessing.game_value(game) == 1


def test_guessing_is_not_gluable(scenario, orders, guessing):
    verdict = check_global_section(guessing, orders)
    assert not verdict.gluable
    assert verdict.certificate is None
    w = verdict.witness
    assert w.tight
    assert all(isinstance(c, int) and c > 0 for c in w.coefficients.values())
    assert w.bound.denominator == 1
    assert w.value > w.bound
    assert w.evaluate(guessing) == w.value
    points = union_deterministic_points(scenario, orders)
    assert max(_score(w.coefficients, scenario, pt) for pt in points) == w.bound
    assert verdict.causal_fraction == 0
    assert verdict.l1_distance == 4


def test_guessing_measures_match_vertex_oracle(orders, guessing):
    assert causal_fraction(guessing, orders) == vertex_causal_fraction(guessing, orders) == 0
    assert l1_distance_to_gluable(guessing, orders) == vertex_l1_distance(guessing, orders) == 4
    assert not vertex_hull_membership(guessing, orders)


def test_separable_mixture_glues(orders, separable):
    verdict = check_global_section(separable, orders)
    assert verdict.gluable
    assert verdict.witness is None
    assert verdict.causal_fraction == 1
    assert verdict.l1_distance == 0
    assert verdict.reconstruct() == separable
    assert sum(w for _, w, _ in verdict.certificate) == 1
    for order, _, component in verdict.certificate:
        assert is_compatible_with_order(component, order)


def test_l1_between_tables(separable, guessing):
    assert separable.l1_to(separable) == 0
    assert separable.l1_to(guessing) == guessing.l1_to(separable) == 4


def test_single_order_cannot_explain_the_mixture(orders, separable):
    verdict = check_global_section(separable, [orders[0]])
    assert not verdict.gluable
    assert verdict.witness.value > verdict.witness.bound
    assert 0 < verdict.causal_fraction < 1


def test_orders_are_checked(scenario, separable):
    with pytest.raises(EmptyFamilyError):
        check_global_section(separable, [])
    with pytest.raises(NonTotalOrderError):
        check_global_section(separable, [make_partial_order(scenario.parties, [])])


def test_three_party_no_signalling_table_glues():
    scenario = make_scenario(["A", "B", "C"], [2, 2, 1], [2, 1, 2])
    verdict = check_global_section(BehaviorTable.uniform(scenario), with_measures=False)
    assert verdict.gluable
    assert len(verdict.orders) == 6


def _random_row_table(scenario, rng):
    values = {}
    for x in scenario.settings_tuples():
        weights = [int(w) for w in rng.integers(0, 4, size=4)]
        if not sum(weights):
            weights[0] = 1
        for a, w in zip(scenario.outcome_tuples(), weights):
            values[(x, a)] = Fraction(w, sum(weights))
    return BehaviorTable(scenario, values)


def _random_behaviour(scenario, points, guessing, rng, k):
    picks = [points[int(i)] for i in rng.choice(len(points), size=3, replace=False)]
    weights = [int(w) for w in rng.integers(1, 10, size=3)]
    separable = BehaviorTable.mixture(
        [(Fraction(w, sum(weights)), point_to_table(scenario, pt)) for w, pt in zip(weights, picks)])
    kind = k % 4
    if kind == 0:
        return separable
    if kind == 1:
        t = Fraction(int(rng.integers(0, 11)), 10)
        return BehaviorTable.mixture([(1 - t, separable), (t, guessing)])
    if kind == 2:
        t = Fraction(int(rng.integers(1, 6)), 10)
        return BehaviorTable.mixture([(1 - t, separable), (t, _random_row_table(scenario, rng))])
    return _random_row_table(scenario, rng)


def test_agrees_with_vertex_oracle_on_random_behaviours(scenario, orders, guessing, rng):
    points = union_deterministic_points(scenario, orders)
    gluable_count = 0
    for k in range(N_RANDOM_BEHAVIOURS):
        table = _random_behaviour(scenario, points, guessing, rng, k)
        verdict = check_global_section(table, orders)
        assert verdict.gluable == vertex_hull_membership(table, orders)
        assert verdict.causal_fraction == vertex_causal_fraction(table, orders)
        assert verdict.l1_distance == vertex_l1_distance(table, orders)
        assert verdict.gluable == (verdict.causal_fraction == 1) == (verdict.l1_distance == 0)
        if verdict.gluable:
            gluable_count += 1
            assert verdict.reconstruct() == table
        else:
            w = verdict.witness
            assert w.value > w.bound
            assert all(_score(w.coefficients, scenario, pt) <= w.bound for pt in points)
    assert 0 < gluable_count < N_RANDOM_BEHAVIOURS


def test_section_family(scenario):
    parties = scenario.parties
    poset = build_context_poset([
        ("c_ico", make_partial_order(parties, [])),
        ("c_AB", make_partial_order(parties, [("A", "B")])),
    ])
    uniform = BehaviorTable.uniform(scenario)
    b_reads_a = BehaviorTable.from_function(scenario, lambda x: (0, x[0]))
    assert verify_section_family(SectionFamily(poset, {"c_ico": uniform, "c_AB": uniform}))
    assert not verify_section_family(SectionFamily(poset, {"c_ico": b_reads_a, "c_AB": b_reads_a}))
    assert not verify_section_family(SectionFamily(poset, {"c_ico": uniform, "c_AB": b_reads_a}))
    with pytest.raises(MissingContextError):
        verify_section_family(SectionFamily(poset, {"c_AB": uniform}))


def test_uniform_noise_raises_the_guessing_fraction(scenario, orders, guessing):
    noisy = BehaviorTable.mixture(
        [(Fraction(3, 5), guessing), (Fraction(2, 5), BehaviorTable.uniform(scenario))])
    verdict = check_global_section(noisy, orders)
    assert not verdict.gluable
    assert verdict.causal_fraction == Fraction(3, 5)
    assert verdict.l1_distance == Fraction(8, 5)
    assert verdict.causal_fraction > causal_fraction(guessing, orders)
    assert verdict.causal_fraction == vertex_causal_fraction(noisy, orders)


def test_l1_distance_is_one_lipschitz(scenario, orders, guessing, rng):
    points = union_deterministic_points(scenario, orders)
    tables = [_random_behaviour(scenario, points, guessing, rng, k) for k in range(10)]
    tables.append(guessing)
    distances = [l1_distance_to_gluable(t, orders) for t in tables]
    for i, p in enumerate(tables):
        for j, q in enumerate(tables):
            assert distances[i] <= distances[j] + p.l1_to(q)


def test_separable_noise_never_lowers_the_fraction(scenario, orders, guessing, rng):
    points = union_deterministic_points(scenario, orders)
    cases = [guessing] + [_random_behaviour(scenario, points, guessing, rng, k) for k in range(9)]
    for k, table in enumerate(cases):
        s = _random_behaviour(scenario, points, guessing, rng, 0)
        lam = Fraction(1 + k % 3, 4)
        mixed = BehaviorTable.mixture([(lam, table), (1 - lam, s)])
        assert causal_fraction(mixed, orders) >= lam * causal_fraction(table, orders) + (1 - lam)
