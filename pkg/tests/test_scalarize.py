"""Subproblem builders: arithmetic, geometry and efficiency guarantees."""

import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from releasefront.bench import GeneratorParams, generate_instance
from releasefront.metrics import brute_force_front, supported_subset
from releasefront.model import NrpInstance, Point, build_bi_objective
from releasefront.oracle import INFEASIBLE, OPTIMAL, MaxPlusObjective, solve
from releasefront.scalarize import (
    Corners,
    augmecon_epsilon,
    augmecon_sub,
    default_augmecon_lambda,
    dichotomic_weights,
    epsilon_sub,
    in_concave_part,
    level_value,
    lexicographic_optima,
    tchebycheff_rho,
    tchebycheff_sub,
    tchebycheff_weights,
    weighted_sum_in_box,
)


def _call(sub):
    out = solve(sub)
    assert out.status in (OPTIMAL, INFEASIBLE)
    return out


corner_boxes = st.tuples(
    st.integers(-50, -1), st.integers(1, 50), st.integers(1, 50), st.integers(0, 50)
).map(lambda t: Corners(Point(t[0], t[3] + t[2]), Point(t[0] + t[1], t[3])))


class TestCorners:
    def test_invalid_corners_rejected(self):
        with pytest.raises(ValueError):
            Corners(Point(0, 1), Point(1, 2))
        with pytest.raises(ValueError):
            Corners(Point(1, 1), Point(1, 0))

    @given(corner_boxes)
    def test_level_line_identity(self, corners):
        w1, w2 = dichotomic_weights(corners)
        assert w1 > 0 and w2 > 0
        at_ul = w1 * corners.upper_left.f1 + w2 * corners.upper_left.f2
        at_lr = w1 * corners.lower_right.f1 + w2 * corners.lower_right.f2
        assert at_ul == at_lr == level_value(corners)


class TestLexicographic:
    def test_toy_extremes(self, toy):
        problem = build_bi_objective(toy)
        res = lexicographic_optima(problem, _call)
        assert res.z1 == Point(-9, 9)
        assert res.z2 == Point(0, 0)
        assert res.nadir == Point(0, 9)

    def test_single_point_front(self):
        # one stakeholder requesting the only requirement, zero cost
        inst = NrpInstance("solo", (0,), (3,), (frozenset({1}),), frozenset())
        problem = build_bi_objective(inst)
        res = lexicographic_optima(problem, _call)
        assert res.single_point
        assert res.z1 == res.z2 == Point(-3, 0)

    def test_incomparable_extremes(self, toy):
        problem = build_bi_objective(toy)
        res = lexicographic_optima(problem, _call)
        assert res.z1 != res.z2
        assert res.z1.f1 < res.z2.f1 and res.z1.f2 > res.z2.f2


class TestWeightedSumInBox:
    def test_toy_root_box(self, toy):
        problem = build_bi_objective(toy)
        sub = weighted_sum_in_box(problem, Corners(Point(-9, 9), Point(0, 0)))
        w1, w2 = dichotomic_weights(Corners(Point(-9, 9), Point(0, 0)))
        assert (w1, w2) == (9, 9)
        assert sub.constraints[0].bound == -1
        assert sub.constraints[1].bound == 8
        expected = tuple(9 * a + 9 * b for a, b in zip(problem.f1_coeffs, problem.f2_coeffs))
        assert sub.objective.coeffs == expected

    def test_unit_box_bounds(self, toy):
        problem = build_bi_objective(toy)
        sub = weighted_sum_in_box(problem, Corners(Point(0, 1), Point(1, 0)))
        assert sub.constraints[0].bound == 0
        assert sub.constraints[1].bound == 0

    @given(corner_boxes)
    def test_corners_share_objective_value(self, corners):
        w1, w2 = dichotomic_weights(corners)
        ul, lr = corners.upper_left, corners.lower_right
        assert w1 * ul.f1 + w2 * ul.f2 == w1 * lr.f1 + w2 * lr.f2


class TestAugmecon:
    def test_toy_epsilon_and_constraint(self, toy):
        problem = build_bi_objective(toy)
        corners = Corners(Point(-9, 9), Point(0, 0))
        assert augmecon_epsilon(corners, 1) == Fraction(9, 2)
        sub = augmecon_sub(problem, corners, 1, Fraction(1, 10))
        assert sub.constraints[0].coeffs == problem.f2_coeffs
        assert sub.constraints[0].bound == 4

    def test_adjacent_but_two_midline(self):
        corners = Corners(Point(0, 5), Point(4, 3))
        assert augmecon_epsilon(corners, 1) == 4  # the single interior line

    def test_toy_scale(self, toy):
        problem = build_bi_objective(toy)
        corners = Corners(Point(-9, 9), Point(0, 0))
        lam = Fraction(1, toy.total_cost + 1)
        sub = augmecon_sub(problem, corners, 1, lam)
        assert sub.scale == 10
        # objective is scale*f1 + numerator*f2
        expected = tuple(
            10 * a + 1 * b for a, b in zip(problem.f1_coeffs, problem.f2_coeffs)
        )
        assert sub.objective.coeffs == expected

    def test_default_lambda_inside_safe_range(self, toy):
        corners = Corners(Point(-9, 9), Point(0, 0))
        assert default_augmecon_lambda(corners, 1) == Fraction(1, 10)
        assert default_augmecon_lambda(corners, 2) == Fraction(1, 10)

    def test_optimum_is_efficient(self):
        rng = random.Random(99)
        for seed in range(50):
            inst = generate_instance(
                GeneratorParams(n=6 + seed % 4, m=3 + seed % 3, seed=seed)
            )
            problem = build_bi_objective(inst)
            front = brute_force_front(inst).points
            if len(front) < 2:
                continue
            corners = Corners(front[0], front[-1])
            obj = rng.choice((1, 2))
            sub = augmecon_sub(problem, corners, obj, default_augmecon_lambda(corners, obj))
            out = solve(sub)
            if out.status != OPTIMAL:
                continue
            z = problem.point_of(out.assignment)
            assert not any(p.dominates(z) for p in front)


class TestTchebycheff:
    def test_toy_construction(self, toy):
        problem = build_bi_objective(toy)
        corners = Corners(Point(-9, 9), Point(0, 0))
        assert tchebycheff_weights(corners) == (9, 9)
        sub = tchebycheff_sub(problem, corners)
        assert isinstance(sub.objective, MaxPlusObjective)
        # local ideal is (-9, 0); the search region caps at the far corners
        assert sub.constraints[0].bound == 0  # f1 <= lower-right f1
        assert sub.constraints[1].bound == 9  # f2 <= upper-left f2
        assert sub.objective.const_a == -sub.scale * 9 * -9

    def test_square_box_symmetric_weights(self):
        corners = Corners(Point(-6, 6), Point(-2, 2))
        w1, w2 = tchebycheff_weights(corners)
        assert w1 == w2 == 4

    def test_corners_share_max_term(self, toy):
        problem = build_bi_objective(toy)
        corners = Corners(Point(-9, 9), Point(0, 0))
        w1, w2 = tchebycheff_weights(corners)
        t1, t2 = corners.upper_left.f1, corners.lower_right.f2
        for corner in (corners.upper_left, corners.lower_right):
            value = max(w1 * (corner.f1 - t1), w2 * (corner.f2 - t2))
            assert value == corners.width * corners.height

    def test_rho_cannot_override_unit_gain(self):
        corners = Corners(Point(-9, 9), Point(0, 0))
        rho = tchebycheff_rho(corners)
        w1, w2 = tchebycheff_weights(corners)
        # the augmented term over the whole box stays under one weighted unit
        assert rho * (corners.width + corners.height) < min(w1, w2)

    def test_optimum_always_efficient_on_toy(self, toy):
        problem = build_bi_objective(toy)
        front = brute_force_front(toy).points
        boxes = [
            Corners(front[i], front[j])
            for i in range(len(front))
            for j in range(i + 1, len(front))
            if front[i].f1 < front[j].f1 and front[i].f2 > front[j].f2
        ]
        for corners in boxes:
            out = solve(tchebycheff_sub(problem, corners))
            assert out.status == OPTIMAL
            z = problem.point_of(out.assignment)
            assert z in front  # augmentation excludes weakly dominated images


class TestEpsilonSub:
    def test_toy_cap_excludes_extreme(self, toy):
        problem = build_bi_objective(toy)
        out = solve(epsilon_sub(problem, 1, 8))
        assert problem.point_of(out.assignment).f1 == -5  # (-9,9) is cut off

    def test_slack_constraint_gives_stage_one(self, toy):
        problem = build_bi_objective(toy)
        out = solve(epsilon_sub(problem, 1, 9))
        assert problem.point_of(out.assignment).f1 == -9

    def test_negative_cost_cap_infeasible(self, toy):
        problem = build_bi_objective(toy)
        assert solve(epsilon_sub(problem, 1, -1)).status == INFEASIBLE


class TestConvexConcave:
    def test_toy_collinear_front_is_convex_part(self, toy):
        corners = Corners(Point(-9, 9), Point(0, 0))
        for pair in [(-5, 5), (-4, 4)]:
            assert not in_concave_part(corners, Point(*pair))

    def test_point_above_line_is_concave(self):
        corners = Corners(Point(0, 10), Point(10, 0))
        assert in_concave_part(corners, Point(4, 7))
        assert not in_concave_part(corners, Point(4, 5))

    def test_weighted_sum_accepted_points_supported(self):
        # points accepted by the convexity test lie on the front's hull
        for seed in range(25):
            inst = generate_instance(GeneratorParams(n=7, m=4, seed=seed))
            problem = build_bi_objective(inst)
            front = brute_force_front(inst).points
            if len(front) < 3:
                continue
            corners = Corners(front[0], front[-1])
            sub = weighted_sum_in_box(problem, corners)
            out = solve(sub)
            if out.status != OPTIMAL:
                continue
            z = problem.point_of(out.assignment)
            if not in_concave_part(corners, z):
                assert z in supported_subset(front)
