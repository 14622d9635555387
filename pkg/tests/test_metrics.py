"""Archive discipline, hypervolume exactness, hull classification."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from releasefront.bench import GeneratorParams, generate_instance
from releasefront.metrics import (
    HvTracker,
    InstanceTooLargeError,
    ParetoArchive,
    brute_force_front,
    classify_supported,
    format_fraction,
    hypervolume,
    pareto_filter,
)
from releasefront.model import NrpInstance, Point, Solution

from conftest import TOY_FRONT, TOY_NADIR, TOY_TOTAL_HV, full_enumeration_front

point_lists = st.lists(
    st.tuples(st.integers(-30, 30), st.integers(-30, 30)).map(lambda t: Point(*t)),
    max_size=40,
)


def naive_filter(points):
    unique = {p.as_pair(): p for p in points}.values()
    return sorted(
        p for p in unique if not any(q.dominates(p) for q in unique)
    )


class TestParetoFilter:
    def test_mixed_set(self):
        points = [Point(1, 1), Point(1, 2), Point(2, 1), Point(0, 3)]
        assert pareto_filter(points) == [Point(0, 3), Point(1, 1)]

    def test_empty(self):
        assert pareto_filter([]) == []

    def test_toy_images(self, toy):
        images = [Point(*pair) for pair in full_enumeration_images(toy)]
        assert [p.as_pair() for p in pareto_filter(images)] == sorted(TOY_FRONT)

    @given(point_lists)
    def test_matches_naive(self, points):
        assert pareto_filter(points) == naive_filter(points)


def full_enumeration_images(instance):
    from releasefront.model import evaluate, feasible

    n, m = instance.n, instance.m
    out = []
    for code in range(1 << (n + m)):
        r = tuple((code >> i) & 1 for i in range(n))
        s = tuple((code >> (n + k)) & 1 for k in range(m))
        sol = Solution(r, s)
        if feasible(instance, sol):
            out.append(evaluate(instance, sol).as_pair())
    return out


class TestHypervolume:
    def test_three_points(self):
        pts = [Point(0, 10), Point(5, 5), Point(10, 0)]
        assert hypervolume(pts, Point(10, 10)) == 25

    def test_toy_front(self):
        pts = [Point(*pair) for pair in TOY_FRONT]
        assert hypervolume(pts, Point(*TOY_NADIR)) == TOY_TOTAL_HV

    def test_single_point_at_nadir(self):
        assert hypervolume([Point(3, 3)], Point(3, 3)) == 0

    def test_points_beyond_nadir_contribute_zero(self):
        pts = [Point(0, 10), Point(5, 5), Point(12, 0)]
        assert hypervolume(pts, Point(10, 10)) == hypervolume(pts[:2], Point(10, 10))

    @given(point_lists, st.integers(-5, 35), st.integers(-5, 35))
    @settings(max_examples=60)
    def test_matches_grid_count(self, points, nf1, nf2):
        nadir = Point(nf1, nf2)
        expected = 0
        front = pareto_filter(points)
        # unit-cell count of the dominated region bounded by the nadir
        for x in range(min((p.f1 for p in front), default=0), nf1):
            for y in range(min((p.f2 for p in front), default=0), nf2):
                if any(p.f1 <= x and p.f2 <= y for p in front):
                    expected += 1
        assert hypervolume(points, nadir) == expected

    def test_monotone_under_insertion(self):
        archive = ParetoArchive()
        nadir = Point(0, 9)
        previous = 0
        for pair in [(0, 0), (-9, 9), (-4, 4), (-4, 6), (-5, 5)]:
            archive.insert(Point(*pair))
            current = hypervolume(archive.points, nadir)
            assert current >= previous
            previous = current

    def test_dominated_insertion_changes_nothing(self):
        archive = ParetoArchive()
        for pair in TOY_FRONT:
            archive.insert(Point(*pair))
        before = hypervolume(archive.points, Point(*TOY_NADIR))
        result = archive.insert(Point(-4, 6))
        assert not result.added
        assert hypervolume(archive.points, Point(*TOY_NADIR)) == before


class TestArchive:
    def test_strict_monotonicity_invariant(self):
        archive = ParetoArchive()
        for pair in [(3, 3), (1, 5), (5, 1), (2, 4), (4, 4), (3, 3)]:
            archive.insert(Point(*pair))
            pts = archive.points
            assert all(a.f1 < b.f1 and a.f2 > b.f2 for a, b in zip(pts, pts[1:]))

    def test_first_solution_kept_for_duplicates(self):
        archive = ParetoArchive()
        first = Solution((1,), (0,))
        second = Solution((0,), (0,))
        archive.insert(Point(0, 0), first)
        archive.insert(Point(0, 0), second)
        assert archive.solution_for(Point(0, 0)) is first

    def test_removed_points_reported(self):
        archive = ParetoArchive()
        archive.insert(Point(0, 5))
        archive.insert(Point(5, 0))
        result = archive.insert(Point(-1, -1))
        assert set(result.removed) == {Point(0, 5), Point(5, 0)}

    @given(point_lists)
    def test_archive_equals_filter(self, points):
        archive = ParetoArchive()
        for p in points:
            archive.insert(p)
        assert list(archive.points) == pareto_filter(points)


class TestClassifySupported:
    def test_toy_all_supported(self):
        pts = [Point(*pair) for pair in sorted(TOY_FRONT)]
        assert classify_supported(pts) == [True] * 4

    def test_collinear(self):
        pts = [Point(0, 2), Point(1, 1), Point(2, 0)]
        assert classify_supported(pts) == [True, True, True]

    def test_concave_middle(self):
        pts = [Point(0, 3), Point(2, 2), Point(3, 0)]
        assert classify_supported(pts) == [True, False, True]

    def test_rescaling_invariance(self):
        pts = [Point(0, 7), Point(1, 3), Point(3, 2), Point(6, 0)]
        base = classify_supported(pts)
        scaled = [Point(3 * p.f1, 5 * p.f2) for p in pts]
        assert classify_supported(scaled) == base

    def test_rejects_dominated_input(self):
        with pytest.raises(ValueError):
            classify_supported([Point(0, 0), Point(1, 1)])


class TestBruteForce:
    def test_toy_front(self, toy):
        front = brute_force_front(toy)
        assert [p.as_pair() for p in front] == sorted(TOY_FRONT)
        # cross-checked against the independent full-assignment enumeration
        assert sorted(p.as_pair() for p in front) == full_enumeration_front(toy)
        for p in front:
            assert front.solution_for(p) is not None

    def test_single_request(self):
        inst = NrpInstance("one", (5,), (7,), (frozenset({1}),), frozenset())
        front = brute_force_front(inst)
        assert [p.as_pair() for p in front] == [(-7, 5), (0, 0)]

    def test_nested_requests_small_front(self):
        inst = NrpInstance(
            "nested",
            (1, 2, 3),
            (4, 2),
            (frozenset({1, 2, 3}), frozenset({1, 2})),
            frozenset(),
        )
        assert len(brute_force_front(inst)) <= 3

    def test_guard(self):
        inst = NrpInstance(
            "big",
            tuple([1] * 20),
            tuple([1] * 6),
            tuple(frozenset({1}) for _ in range(6)),
            frozenset(),
        )
        with pytest.raises(InstanceTooLargeError):
            brute_force_front(inst)

    def test_matches_full_enumeration_on_random(self):
        for seed in (3, 8, 21):
            inst = generate_instance(GeneratorParams(n=6, m=4, seed=seed))
            assert sorted(
                p.as_pair() for p in brute_force_front(inst)
            ) == full_enumeration_front(inst)


class TestHvTracker:
    def test_fraction_with_known_total(self):
        tracker = HvTracker(nadir=Point(*TOY_NADIR), total=TOY_TOTAL_HV)
        tracker.update([Point(*pair) for pair in TOY_FRONT])
        assert tracker.fraction == 1

    def test_fraction_unknown_total(self):
        tracker = HvTracker(nadir=Point(0, 9))
        tracker.update([Point(-4, 4)])
        assert tracker.fraction is None

    def test_single_point_front_complete(self):
        tracker = HvTracker(nadir=Point(0, 0), total=0)
        assert tracker.fraction == 1


class TestFormatFraction:
    def test_three_decimals(self):
        from fractions import Fraction

        assert format_fraction(Fraction(100), 3) == "100.000"
        assert format_fraction(Fraction(2, 3) * 100, 3) == "66.667"
        assert format_fraction(Fraction(999999, 10000), 3) == "100.000"

    def test_one_decimal_and_negative(self):
        from fractions import Fraction

        assert format_fraction(Fraction(1, 2), 1) == "0.5"
        assert format_fraction(Fraction(-1, 8), 2) == "-0.13"
