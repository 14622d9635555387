"""Pareto archive, exact hypervolume and ground-truth enumeration.

Hypervolume is computed with integer arithmetic against the Nadir point
spanned by the lexicographic extremes; fractions of the total are exact
rationals rendered to a fixed number of decimals only at the reporting
boundary.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .model import NrpInstance, Point, Solution

BRUTE_FORCE_LIMIT = 24


class InstanceTooLargeError(ValueError):
    """Raised when brute-force enumeration would be unreasonable."""


@dataclass(frozen=True)
class InsertResult:
    added: bool
    removed: tuple[Point, ...] = ()


class ParetoArchive:
    """Mutable set of mutually non-dominated points, sorted by rising f1.

    Strict monotonicity in both coordinates is an invariant: points are
    strictly increasing in f1 and strictly decreasing in f2.  The first
    solution found for an image is kept; later duplicates are ignored.
    """

    def __init__(self) -> None:
        self._points: list[Point] = []
        self._solutions: dict[tuple[int, int], Solution | None] = {}

    def __len__(self) -> int:
        return len(self._points)

    def __iter__(self):
        return iter(self._points)

    def __contains__(self, point: Point) -> bool:
        i = bisect_left(self._points, point)
        return i < len(self._points) and self._points[i] == point

    @property
    def points(self) -> tuple[Point, ...]:
        return tuple(self._points)

    def solution_for(self, point: Point) -> Solution | None:
        return self._solutions.get(point.as_pair())

    def insert(self, point: Point, solution: Solution | None = None) -> InsertResult:
        pts = self._points
        i = bisect_left(pts, (point.f1,), key=lambda p: (p.f1,))
        if i > 0 and pts[i - 1].f2 <= point.f2:
            return InsertResult(False)  # dominated by the point left of it
        if i < len(pts) and pts[i].f1 == point.f1:
            if pts[i].f2 <= point.f2:
                return InsertResult(False)  # duplicate or dominated
        # remove the run of points the new one dominates
        j = i
        while j < len(pts) and pts[j].f2 >= point.f2:
            j += 1
        removed = tuple(pts[i:j])
        for p in removed:
            self._solutions.pop(p.as_pair(), None)
        pts[i:j] = [point]
        self._solutions[point.as_pair()] = solution
        return InsertResult(True, removed)

    def snapshot(self) -> tuple[Point, ...]:
        return tuple(self._points)


def pareto_filter(points) -> list[Point]:
    """Deduplicated non-dominated subset, sorted by rising f1."""
    ordered = sorted(set((p.f1, p.f2) for p in points))
    kept: list[Point] = []
    best_f2: int | None = None
    for f1, f2 in ordered:
        if best_f2 is None or f2 < best_f2:
            kept.append(Point(f1, f2))
            best_f2 = f2
    return kept


def hypervolume(points, nadir: Point) -> int:
    """Exact area dominated by ``points`` and bounded by the Nadir point.

    Points beyond the Nadir in either coordinate contribute nothing.
    """
    front = [p for p in pareto_filter(points) if p.f1 <= nadir.f1 and p.f2 <= nadir.f2]
    total = 0
    for idx, p in enumerate(front):
        right = front[idx + 1].f1 if idx + 1 < len(front) else nadir.f1
        total += (right - p.f1) * (nadir.f2 - p.f2)
    return total


def _cross(o: Point, a: Point, b: Point) -> int:
    return (a.f1 - o.f1) * (b.f2 - o.f2) - (a.f2 - o.f2) * (b.f1 - o.f1)


def classify_supported(points) -> list[bool]:
    """Flag each front point lying on the lower-left convex hull frontier.

    Hull-edge interior points count as supported: they minimize the same
    positive weighted sum as the edge's endpoints.  Input must already be
    mutually non-dominated; flags align with the f1-sorted order.
    """
    front = pareto_filter(points)
    if sorted(set(p.as_pair() for p in points)) != [p.as_pair() for p in front]:
        raise ValueError("classify_supported expects a non-dominated set")
    if len(front) <= 2:
        return [True] * len(front)
    hull: list[Point] = []
    for p in front:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) <= 0:
            hull.pop()
        hull.append(p)
    flags: list[bool] = []
    edge = 0
    for p in front:
        while edge + 1 < len(hull) - 1 and hull[edge + 1].f1 <= p.f1:
            edge += 1
        a, b = hull[edge], hull[edge + 1]
        on_edge = a.f1 <= p.f1 <= b.f1 and _cross(a, b, p) == 0
        flags.append(on_edge)
    return flags


def supported_subset(points) -> list[Point]:
    front = pareto_filter(points)
    return [p for p, ok in zip(front, classify_supported(front)) if ok]


@dataclass
class HvTracker:
    """Running hypervolume against a fixed Nadir reference."""

    nadir: Point
    total: int | None = None
    current: int = 0

    def update(self, points) -> int:
        self.current = hypervolume(points, self.nadir)
        return self.current

    @property
    def fraction(self) -> Fraction | None:
        if self.total is None:
            return None
        if self.total == 0:
            return Fraction(1)  # single-point front: trivially complete
        return Fraction(self.current, self.total)


def brute_force_front(instance: NrpInstance, limit: int = BRUTE_FORCE_LIMIT) -> ParetoArchive:
    """Exact Pareto front by enumerating precedence-closed requirement sets.

    For each feasible requirement subset the maximal consistent stakeholder
    vector dominates every other choice, so only 2^n subsets are visited.
    Guarded to small instances; raises ``InstanceTooLargeError`` beyond.
    """
    n, m = instance.n, instance.m
    if n + m > limit:
        raise InstanceTooLargeError(
            f"brute force limited to n + m <= {limit}, got {n + m}"
        )
    costs = np.asarray(instance.costs, dtype=np.int64)
    weights = np.asarray(instance.weights, dtype=np.int64)
    best: dict[tuple[int, int], Solution] = {}
    chunk = 1 << min(n, 16)
    for start in range(0, 1 << n, chunk):
        idx = np.arange(start, min(start + chunk, 1 << n), dtype=np.int64)
        r = ((idx[:, None] >> np.arange(n)) & 1).astype(np.int8)
        ok = np.ones(len(idx), dtype=bool)
        for i, j in instance.precedence:
            ok &= r[:, i - 1] >= r[:, j - 1]
        r = r[ok]
        if not len(r):
            continue
        s = np.empty((len(r), m), dtype=np.int8)
        for k, req in enumerate(instance.requests):
            cols = [i - 1 for i in req]
            s[:, k] = r[:, cols].all(axis=1)
        f1 = -(s @ weights)
        f2 = r @ costs
        for row in range(len(r)):
            key = (int(f1[row]), int(f2[row]))
            if key not in best:
                best[key] = Solution(tuple(int(x) for x in r[row]),
                                     tuple(int(x) for x in s[row]))
    archive = ParetoArchive()
    for f1f2 in sorted(best):
        archive.insert(Point(*f1f2), best[f1f2])
    return archive


def format_fraction(value: Fraction, places: int) -> str:
    """Exact decimal rendering with round-half-up, e.g. percentages."""
    sign = "-" if value < 0 else ""
    value = abs(value)
    scaled = value * 10**places
    digits = scaled.numerator // scaled.denominator
    if 2 * (scaled.numerator % scaled.denominator) >= scaled.denominator:
        digits += 1
    text = str(digits).rjust(places + 1, "0")
    return f"{sign}{text[:-places]}.{text[-places:]}" if places else f"{sign}{text}"
