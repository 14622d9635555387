"""Single-objective subproblem builders used by the search algorithms.

Each builder turns the bi-objective problem plus a box of the objective
space into one exact binary program: lexicographic stages, the weighted sum
over a box, the augmented epsilon-constraint form (with its continuous
slack eliminated analytically), the augmented weighted Tchebycheff form,
and the plain epsilon-constraint form.  Rational parameters are scaled to
integers on the spot, so the oracle never sees a fraction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import BiObjectiveProblem, Point, Solution
from .oracle import (
    LinearConstraint,
    LinearObjective,
    MaxPlusObjective,
    OracleOutcome,
    Subproblem,
)


@dataclass(frozen=True)
class Corners:
    """A box of the objective space between two non-dominated points.

    ``upper_left`` minimizes f1 (and has the larger f2); ``lower_right``
    minimizes f2.  Corners may be virtual cut points rather than images of
    known solutions, but always satisfy the ordering invariant.
    """

    upper_left: Point
    lower_right: Point

    def __post_init__(self) -> None:
        if not (self.upper_left.f1 < self.lower_right.f1
                and self.upper_left.f2 > self.lower_right.f2):
            raise ValueError(
                f"degenerate box corners {self.upper_left} / {self.lower_right}"
            )

    @property
    def width(self) -> int:
        return self.lower_right.f1 - self.upper_left.f1

    @property
    def height(self) -> int:
        return self.upper_left.f2 - self.lower_right.f2

    @property
    def area(self) -> int:
        return self.width * self.height

    def strictly_inside(self, p: Point) -> bool:
        return (self.upper_left.f1 < p.f1 < self.lower_right.f1
                and self.lower_right.f2 < p.f2 < self.upper_left.f2)


def dichotomic_weights(corners: Corners) -> tuple[int, int]:
    """Positive weights putting both corners on one weighted-sum level line."""
    return corners.height, corners.width


def level_value(corners: Corners) -> int:
    """The common weighted-sum value of the two corners."""
    w1, w2 = dichotomic_weights(corners)
    return w1 * corners.upper_left.f1 + w2 * corners.upper_left.f2


def in_concave_part(corners: Corners, p: Point) -> bool:
    """True when ``p`` lies strictly above the corner level line."""
    w1, w2 = dichotomic_weights(corners)
    return w1 * p.f1 + w2 * p.f2 > level_value(corners)


def _objective_vector(problem: BiObjectiveProblem, which: int) -> tuple[int, ...]:
    return problem.f1_coeffs if which == 1 else problem.f2_coeffs


def _bound_constraint(problem, which: int, bound: int) -> LinearConstraint:
    return LinearConstraint(_objective_vector(problem, which), bound)


def objective_subproblem(
    problem: BiObjectiveProblem,
    which: int,
    extra: tuple[LinearConstraint, ...] = (),
) -> Subproblem:
    """``min f_which`` under the problem constraints plus ``extra``."""
    return Subproblem(
        n_vars=problem.n_vars,
        implications=problem.implications,
        constraints=tuple(extra),
        objective=LinearObjective(_objective_vector(problem, which)),
    )


def epsilon_sub(problem: BiObjectiveProblem, obj: int, eps: int) -> Subproblem:
    """``min f_obj`` with the other objective capped at ``eps``."""
    rest = 3 - obj
    return objective_subproblem(problem, obj, (_bound_constraint(problem, rest, eps),))


def weighted_sum_in_box(problem: BiObjectiveProblem, corners: Corners) -> Subproblem:
    """Dichotomic weighted sum restricted strictly inside the box.

    The bounds sit one unit inside the opposite corners, so neither corner
    image is feasible and any optimum is a new efficient point.
    """
    w1, w2 = dichotomic_weights(corners)
    coeffs = tuple(
        w1 * a + w2 * b for a, b in zip(problem.f1_coeffs, problem.f2_coeffs)
    )
    return Subproblem(
        n_vars=problem.n_vars,
        implications=problem.implications,
        constraints=(
            _bound_constraint(problem, 1, corners.lower_right.f1 - 1),
            _bound_constraint(problem, 2, corners.upper_left.f2 - 1),
        ),
        objective=LinearObjective(coeffs),
    )


def weighted_sum_unbounded(problem: BiObjectiveProblem, corners: Corners) -> Subproblem:
    """Dichotomic weighted sum without corner bounds (dichotomic search)."""
    w1, w2 = dichotomic_weights(corners)
    coeffs = tuple(
        w1 * a + w2 * b for a, b in zip(problem.f1_coeffs, problem.f2_coeffs)
    )
    return Subproblem(
        n_vars=problem.n_vars,
        implications=problem.implications,
        constraints=(),
        objective=LinearObjective(coeffs),
    )


def default_augmecon_lambda(corners: Corners, obj: int) -> Fraction:
    """Safe augmentation weight: one over the rest-objective range plus one.

    Any unit improvement of the main objective then outweighs the whole
    possible swing of the augmented term, so no efficient point is skipped.
    """
    rest_range = corners.height if obj == 1 else corners.width
    return Fraction(1, rest_range + 1)


def augmecon_epsilon(corners: Corners, obj: int) -> Fraction:
    """Midpoint of the rest coordinate between the two corners."""
    if obj == 1:
        return Fraction(corners.upper_left.f2 + corners.lower_right.f2, 2)
    return Fraction(corners.upper_left.f1 + corners.lower_right.f1, 2)


def augmecon_sub(
    problem: BiObjectiveProblem,
    corners: Corners,
    obj: int,
    lam: Fraction,
) -> Subproblem:
    """Augmented epsilon-constraint form over the box midline.

    The continuous slack of the textbook formulation is eliminated
    analytically: ``min f_obj - lam*t`` with ``f_rest + t <= eps, t >= 0``
    equals ``min f_obj + lam*f_rest`` with ``f_rest <= eps`` (constant
    dropped).  With integral objectives flooring epsilon loses nothing.
    """
    if lam <= 0:
        raise ValueError("augmentation weight must be positive")
    rest = 3 - obj
    eps = augmecon_epsilon(corners, obj)
    floor_eps = eps.numerator // eps.denominator
    scale = lam.denominator
    obj_vec = _objective_vector(problem, obj)
    rest_vec = _objective_vector(problem, rest)
    coeffs = tuple(
        scale * a + lam.numerator * b for a, b in zip(obj_vec, rest_vec)
    )
    return Subproblem(
        n_vars=problem.n_vars,
        implications=problem.implications,
        constraints=(_bound_constraint(problem, rest, floor_eps),),
        objective=LinearObjective(coeffs),
        scale=scale,
    )


def augmecon_sweep_sub(
    problem: BiObjectiveProblem, obj: int, eps: int, lam: Fraction
) -> Subproblem:
    """Augmented objective with an explicit epsilon (classic sweep step)."""
    if lam <= 0:
        raise ValueError("augmentation weight must be positive")
    rest = 3 - obj
    scale = lam.denominator
    coeffs = tuple(
        scale * a + lam.numerator * b
        for a, b in zip(_objective_vector(problem, obj), _objective_vector(problem, rest))
    )
    return Subproblem(
        n_vars=problem.n_vars,
        implications=problem.implications,
        constraints=(_bound_constraint(problem, rest, eps),),
        objective=LinearObjective(coeffs),
        scale=scale,
    )


def tchebycheff_weights(corners: Corners) -> tuple[int, int]:
    """Weights making both corners share one max-term level value."""
    return corners.height, corners.width


def tchebycheff_rho(corners: Corners) -> Fraction:
    """Largest augmentation that can never override a unit max-term gain.

    With integral objectives the augmented term over the search region is
    below ``min(w1, w2) / 2``, strictly less than one weighted unit.
    """
    w1, w2 = tchebycheff_weights(corners)
    return Fraction(min(w1, w2), 2 * (corners.width + corners.height + 1))


def tchebycheff_sub(problem: BiObjectiveProblem, corners: Corners) -> Subproblem:
    """Augmented weighted Tchebycheff form anchored at the local ideal point.

    Minimizes ``max(w1*(f1 - t1), w2*(f2 - t2)) + rho*((f1 - t1) + (f2 - t2))``
    over the region capped by the opposite corner coordinates.  Interior
    points always beat the corners, and among interior images only efficient
    ones can win, so a corner optimum certifies an empty box.
    """
    t1 = corners.upper_left.f1
    t2 = corners.lower_right.f2
    w1, w2 = tchebycheff_weights(corners)
    rho = tchebycheff_rho(corners)
    scale = rho.denominator
    f1v, f2v = problem.f1_coeffs, problem.f2_coeffs
    form_a = tuple(scale * w1 * c for c in f1v)
    form_b = tuple(scale * w2 * c for c in f2v)
    augment = tuple(rho.numerator * (a + b) for a, b in zip(f1v, f2v))
    return Subproblem(
        n_vars=problem.n_vars,
        implications=problem.implications,
        constraints=(
            _bound_constraint(problem, 1, corners.lower_right.f1),
            _bound_constraint(problem, 2, corners.upper_left.f2),
        ),
        objective=MaxPlusObjective(
            form_a=form_a,
            const_a=-scale * w1 * t1,
            form_b=form_b,
            const_b=-scale * w2 * t2,
            augment=augment,
            const_aug=-rho.numerator * (t1 + t2),
        ),
        scale=scale,
    )


@dataclass(frozen=True)
class LexicographicResult:
    z1: Point
    z2: Point
    sol1: Solution
    sol2: Solution

    @property
    def nadir(self) -> Point:
        return Point(self.z2.f1, self.z1.f2)

    @property
    def single_point(self) -> bool:
        return self.z1 == self.z2


def lexicographic_optima(problem: BiObjectiveProblem, call) -> LexicographicResult:
    """Both lexicographic extremes, one oracle call per stage.

    ``call`` maps a subproblem to an ``OracleOutcome`` and is expected to
    raise if the oracle did not reach an optimum; the all-zero solution is
    always feasible, so infeasibility cannot occur here.
    """
    def stage(which: int, cap: tuple[int, int] | None) -> OracleOutcome:
        extra = () if cap is None else (_bound_constraint(problem, cap[0], cap[1]),)
        return call(objective_subproblem(problem, which, extra))

    first = stage(1, None)
    z1_f1 = problem.point_of(first.assignment).f1
    second = stage(2, (1, z1_f1))
    z1 = problem.point_of(second.assignment)
    sol1 = problem.solution_of(second.assignment)

    third = stage(2, None)
    z2_f2 = problem.point_of(third.assignment).f2
    fourth = stage(1, (2, z2_f2))
    z2 = problem.point_of(fourth.assignment)
    sol2 = problem.solution_of(fourth.assignment)
    return LexicographicResult(z1, z2, sol1, sol2)
