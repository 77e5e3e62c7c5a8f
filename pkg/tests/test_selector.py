"""Selection algorithm tests: greedy residual reduction, bisection to
exact feasibility, ball-union reachability, and the exhaustive oracles."""

import itertools

import numpy as np
import pytest

from conftest import random_actuators, random_system
from minreach import (
    Ball,
    CapacityError,
    GreedyTrace,
    HittingSetInstance,
    InputError,
    LtiSystem,
    TransferSpec,
    bisection_exact,
    brute_force_opt,
    epsilon_a,
    greedy_eps,
    is_feasible,
    min_hitting_set,
    residual,
    star,
    subset_reach,
    transfer_vector,
)

DIAG12 = LtiSystem(np.diag([1.0, 2.0]))


def star_transfer(x1):
    sys_ = star(4)
    spec = TransferSpec(x0=np.zeros(5), x1=np.array(x1, dtype=float))
    return sys_, transfer_vector(sys_, spec)


class TestGreedyTrace:
    def test_valid_trace(self):
        trace = GreedyTrace(chosen=(1, 2), residuals=(2.0, 1.0, 0.0), epsilon=1e-6)
        assert trace.chosen == (1, 2)

    def test_rejects_length_mismatch(self):
        with pytest.raises(InputError):
            GreedyTrace(chosen=(1,), residuals=(2.0, 1.0, 0.0), epsilon=1.0)

    def test_rejects_duplicates(self):
        with pytest.raises(InputError):
            GreedyTrace(chosen=(1, 1), residuals=(2.0, 1.0, 0.5), epsilon=1.0)

    def test_rejects_non_decreasing_residuals(self):
        with pytest.raises(InputError):
            GreedyTrace(chosen=(1, 2), residuals=(2.0, 1.0, 1.0), epsilon=2.0)

    def test_rejects_final_above_epsilon(self):
        with pytest.raises(InputError):
            GreedyTrace(chosen=(1,), residuals=(2.0, 1.0), epsilon=0.5)


class TestBall:
    def test_rejects_non_positive_radius(self):
        with pytest.raises(InputError):
            Ball(center=[1.0], radius_sq=0.0)
        with pytest.raises(InputError):
            Ball(center=[1.0], radius_sq=-1.0)

    def test_rejects_non_finite_center(self):
        with pytest.raises(InputError):
            Ball(center=[np.nan], radius_sq=1.0)


class TestGreedyEps:
    def test_loose_threshold_selects_nothing(self):
        rng = np.random.default_rng(113)
        sys_ = random_system(rng, 4)
        v = rng.standard_normal(4)
        delta, trace = greedy_eps(sys_, v, float(v @ v) + 1.0)
        assert delta.cardinality == 0
        assert trace.residuals == (pytest.approx(float(v @ v)),)

    def test_zero_vector_selects_nothing(self):
        delta, trace = greedy_eps(DIAG12, [0.0, 0.0], 1e-9)
        assert delta.cardinality == 0
        assert trace.residuals == (0.0,)

    def test_diagonal_axis_by_axis(self):
        delta, trace = greedy_eps(DIAG12, [1.0, 1.0], 1e-6)
        assert delta.indices == (1, 2)
        assert trace.chosen == (1, 2)
        assert trace.residuals == (
            pytest.approx(2.0, abs=1e-12),
            pytest.approx(1.0, abs=1e-12),
            pytest.approx(0.0, abs=1e-12),
        )

    def test_rejects_non_positive_eps(self):
        with pytest.raises(InputError):
            greedy_eps(DIAG12, [1.0, 1.0], 0.0)
        with pytest.raises(InputError):
            greedy_eps(DIAG12, [1.0, 1.0], -1.0)

    def test_terminates_below_threshold(self):
        rng = np.random.default_rng(127)
        for _ in range(30):
            n = int(rng.integers(2, 7))
            sys_ = random_system(rng, n)
            v = rng.standard_normal(n)
            eps = 1e-3 * float(v @ v)
            delta, trace = greedy_eps(sys_, v, eps)
            assert trace.residuals[-1] <= eps
            assert delta.cardinality <= n
            assert delta.indices == tuple(sorted(trace.chosen))

    def test_smallest_index_tie_break(self):
        # Both axes give an identical gain of 1 for the first pick.
        delta, trace = greedy_eps(DIAG12, [1.0, 1.0], 1.5)
        assert trace.chosen == (1,)


class TestBisectionExact:
    @pytest.mark.parametrize(
        "x1, expected",
        [
            ([1, 0, 0, 0, 0], (1,)),
            ([0, 1, 1, 0, 0], (2, 3)),
            ([1, 1, 1, 0, 0], (2, 3)),
        ],
    )
    def test_star_network_published_sets(self, x1, expected):
        sys_, v = star_transfer(x1)
        delta, final_eps, trace = bisection_exact(sys_, v, 0.001)
        assert delta.indices == expected
        report = is_feasible(sys_, delta, v)
        assert report.feasible
        assert abs(final_eps - epsilon_a(sys_, v)) <= 0.001 / 2.0

    def test_output_always_exactly_feasible(self):
        rng = np.random.default_rng(131)
        for _ in range(25):
            n = int(rng.integers(2, 7))
            sys_ = random_system(rng, n)
            v = rng.standard_normal(n)
            delta, final_eps, trace = bisection_exact(sys_, v, 1e-3 * float(v @ v))
            assert is_feasible(sys_, delta, v).feasible
            assert 0.0 < final_eps <= float(v @ v)
            assert trace.residuals[-1] <= final_eps

    def test_rejects_bad_inputs(self):
        with pytest.raises(InputError):
            bisection_exact(DIAG12, [1.0, 1.0], 0.0)
        with pytest.raises(InputError):
            bisection_exact(DIAG12, [0.0, 0.0], 1e-3)


class TestSubsetReach:
    def test_origin_ball_needs_nothing(self):
        rng = np.random.default_rng(137)
        sys_ = random_system(rng, 3)
        delta, ball_index = subset_reach(sys_, [Ball(np.zeros(3), 1e-6)])
        assert delta.cardinality == 0
        assert ball_index == 1

    def test_picks_cheaper_ball(self):
        balls = [
            Ball(center=[1.0, 1.0], radius_sq=1e-6),
            Ball(center=[1.0, 0.0], radius_sq=1e-6),
        ]
        delta, ball_index = subset_reach(DIAG12, balls)
        assert delta.indices == (1,)
        assert ball_index == 2

    def test_star_single_ball(self):
        sys_ = star(4)
        center = np.zeros(5)
        center[0] = 1.0
        delta, ball_index = subset_reach(sys_, [Ball(center, 1e-6)])
        assert delta.cardinality == 1
        assert ball_index == 1

    def test_duplicate_balls_tie_to_smallest_index(self):
        ball = Ball(center=[1.0, 1.0], radius_sq=1e-6)
        _, ball_index = subset_reach(DIAG12, [ball, ball])
        assert ball_index == 1

    def test_rejects_empty_list(self):
        with pytest.raises(InputError):
            subset_reach(DIAG12, [])

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(InputError):
            subset_reach(DIAG12, [Ball(center=[1.0, 2.0, 3.0], radius_sq=1.0)])

    def test_reported_ball_is_reached(self):
        rng = np.random.default_rng(139)
        for _ in range(15):
            n = int(rng.integers(2, 6))
            sys_ = random_system(rng, n)
            balls = [
                Ball(rng.standard_normal(n), float(rng.uniform(0.01, 1.0)))
                for _ in range(int(rng.integers(1, 4)))
            ]
            delta, ball_index = subset_reach(sys_, balls)
            winner = balls[ball_index - 1]
            assert residual(sys_, delta, winner.center) <= winner.radius_sq


class TestBruteForceOpt:
    def test_zero_vector(self):
        assert brute_force_opt(DIAG12, [0.0, 0.0], 1e-9).cardinality == 0

    def test_diagonal_needs_both(self):
        delta = brute_force_opt(DIAG12, [1.0, 1.0], 1e-6)
        assert delta.indices == (1, 2)

    def test_star_axis_needs_one(self):
        delta = brute_force_opt(star(4), [1.0, 0.0, 0.0, 0.0, 0.0], 1e-6)
        assert delta.cardinality == 1

    def test_exhausted_cap_returns_none(self):
        assert brute_force_opt(DIAG12, [1.0, 1.0], 1e-6, k_max=1) is None

    def test_capacity_cap(self):
        with pytest.raises(CapacityError):
            brute_force_opt(LtiSystem(np.eye(17)), np.ones(17), 1e-6)

    def test_rejects_negative_eps(self):
        with pytest.raises(InputError):
            brute_force_opt(DIAG12, [1.0, 1.0], -1e-6)

    def test_minimal_among_feasible(self):
        rng = np.random.default_rng(149)
        for _ in range(20):
            n = int(rng.integers(2, 6))
            sys_ = random_system(rng, n)
            v = rng.standard_normal(n)
            eps = 1e-2 * float(v @ v)
            opt = brute_force_opt(sys_, v, eps)
            assert opt is not None
            greedy, _ = greedy_eps(sys_, v, eps)
            assert opt.cardinality <= greedy.cardinality
            assert residual(sys_, opt, v) <= eps


def exhaustive_hitting_set(instance):
    """Independent oracle: first hitting set in cardinality-then-lex order."""
    families = [set(s) for s in instance.sets]
    for k in range(instance.m + 1):
        for combo in itertools.combinations(range(1, instance.m + 1), k):
            members = set(combo)
            if all(s & members for s in families):
                return combo
    raise AssertionError("universe itself must hit every non-empty set")


def random_instance(rng, m_max=8, p_max=6):
    m = int(rng.integers(1, m_max + 1))
    p = int(rng.integers(1, p_max + 1))
    sets = []
    for _ in range(p):
        size = int(rng.integers(1, m + 1))
        members = rng.choice(m, size=size, replace=False) + 1
        sets.append(tuple(int(j) for j in members))
    covered = set()
    for members in sets:
        covered.update(members)
    for j in range(1, m + 1):
        if j not in covered:
            k = int(rng.integers(0, len(sets)))
            sets[k] = tuple(sorted(set(sets[k]) | {j}))
    return HittingSetInstance(m=m, sets=tuple(sets))


class TestMinHittingSet:
    def test_disjoint_singletons(self):
        instance = HittingSetInstance(m=2, sets=((1,), (2,)))
        assert min_hitting_set(instance) == (1, 2)

    def test_common_element(self):
        instance = HittingSetInstance(m=3, sets=((1, 2), (2, 3)))
        assert min_hitting_set(instance) == (2,)

    def test_matches_exhaustive_oracle(self):
        rng = np.random.default_rng(151)
        for _ in range(60):
            instance = random_instance(rng)
            assert min_hitting_set(instance) == exhaustive_hitting_set(instance)

    def test_result_hits_every_set(self):
        rng = np.random.default_rng(157)
        for _ in range(30):
            instance = random_instance(rng)
            hit = set(min_hitting_set(instance))
            assert all(set(s) & hit for s in instance.sets)


class TestDeterminism:
    def test_greedy_identical_runs(self):
        rng = np.random.default_rng(163)
        for _ in range(20):
            n = int(rng.integers(2, 7))
            sys_ = random_system(rng, n)
            v = rng.standard_normal(n)
            eps = 1e-3 * float(v @ v)
            first = greedy_eps(sys_, v, eps)
            second = greedy_eps(sys_, v, eps)
            assert first[1].chosen == second[1].chosen
            assert first[1].residuals == second[1].residuals

    def test_bisection_identical_runs(self):
        rng = np.random.default_rng(167)
        sys_ = random_system(rng, 5)
        v = rng.standard_normal(5)
        first = bisection_exact(sys_, v, 1e-3)
        second = bisection_exact(sys_, v, 1e-3)
        assert first[0].indices == second[0].indices
        assert first[1] == second[1]
