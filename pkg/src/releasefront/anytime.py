"""Box-queue engine and the full algorithm suite.

Every run seeds the archive with the two lexicographic extremes and then
explores boxes of the objective space, one exact oracle call per step.
The anytime algorithms pick the largest-area box next, which keeps the
partial front well spread at any interruption point; the classic baselines
sweep lexicographically or walk boxes depth first.

A run is strictly sequential (each oracle call depends on the queue state)
but the control channel and event sink may live on other threads: control
flags are plain events checked between calls and each emitted event is an
immutable message.
"""

from __future__ import annotations

import heapq
import threading
import time
from dataclasses import dataclass
from fractions import Fraction

from .metrics import ParetoArchive
from .model import BiObjectiveProblem, Point, Solution
from .oracle import (
    BUDGET_EXHAUSTED,
    CANCELLED,
    DEFAULT_NODE_BUDGET,
    INFEASIBLE,
    OPTIMAL,
    CancelToken,
    LinearConstraint,
    OracleOutcome,
    Subproblem,
    solve,
)
from .scalarize import (
    Corners,
    augmecon_epsilon,
    augmecon_sub,
    augmecon_sweep_sub,
    default_augmecon_lambda,
    dichotomic_weights,
    epsilon_sub,
    in_concave_part,
    level_value,
    objective_subproblem,
    tchebycheff_sub,
    weighted_sum_in_box,
    weighted_sum_unbounded,
)

ANYTIME_ALGORITHMS = (
    "spf",
    "any-augmecon-1",
    "any-augmecon-2",
    "any-tchebycheff",
    "any-hybrid",
    "mix-ht",
    "mix-sht",
)
CLASSIC_ALGORITHMS = (
    "econst1-1",
    "econst1-2",
    "econst2-1",
    "econst2-2",
    "augmecon-1",
    "augmecon-2",
    "ehybrid",
    "tchebycheff",
    "ads",
)
ALGORITHMS = ANYTIME_ALGORITHMS + CLASSIC_ALGORITHMS

EXHAUSTED = "exhausted"
DEADLINE = "deadline"
CANCELLED_RUN = "cancelled"
BUDGET = "budget"

_ALIASES = {
    "spf": "spf",
    "ads": "ads",
    "anyaugmecon1": "any-augmecon-1",
    "anyaugmecon2": "any-augmecon-2",
    "anytchebycheff": "any-tchebycheff",
    "anyhybrid": "any-hybrid",
    "mixht": "mix-ht",
    "mixsht": "mix-sht",
    "econst11": "econst1-1",
    "econst12": "econst1-2",
    "econst21": "econst2-1",
    "econst22": "econst2-2",
    "augmecon1": "augmecon-1",
    "augmecon2": "augmecon-2",
    "ehybrid": "ehybrid",
    "ehybridclassic": "ehybrid",
    "tchebycheff": "tchebycheff",
    "tchebycheffclassic": "tchebycheff",
}


def normalize_algorithm(name: str) -> str:
    key = "".join(ch for ch in name.lower() if ch.isalnum())
    if name.lower().strip() in ALGORITHMS:
        return name.lower().strip()
    if key in _ALIASES:
        return _ALIASES[key]
    raise ValueError(f"unknown algorithm {name!r}; choose one of {', '.join(ALGORITHMS)}")


@dataclass(frozen=True)
class Box:
    corners: Corners
    tag: str | None = None  # H or T for the mixed variants

    @property
    def area(self) -> int:
        return self.corners.area

    @property
    def squared_diagonal(self) -> int:
        return self.corners.width**2 + self.corners.height**2


class BoxQueue:
    """Max-priority queue over boxes, FIFO among equal priorities.

    ``key`` is ``area`` for the anytime algorithms and ``diagonal`` for the
    dichotomic search (squared, to stay in integers).
    """

    def __init__(self, key: str = "area") -> None:
        if key not in ("area", "diagonal"):
            raise ValueError("key must be 'area' or 'diagonal'")
        self._key = key
        self._heap: list[tuple[int, int, Box]] = []
        self._seq = 0

    def _priority(self, box: Box) -> int:
        return box.area if self._key == "area" else box.squared_diagonal

    def push(self, box: Box) -> None:
        self._seq += 1
        heapq.heappush(self._heap, (-self._priority(box), self._seq, box))

    def extract(self) -> Box:
        return heapq.heappop(self._heap)[2]

    def max_priority(self) -> int | None:
        return -self._heap[0][0] if self._heap else None

    def __len__(self) -> int:
        return len(self._heap)

    def __bool__(self) -> bool:
        return bool(self._heap)


@dataclass(frozen=True)
class RunConfig:
    algorithm: str
    deadline: float | None = None  # seconds of wall clock, None = unlimited
    lam: Fraction | None = None  # augmentation weight override
    node_budget: int = DEFAULT_NODE_BUDGET
    max_oracle_calls: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "algorithm", normalize_algorithm(self.algorithm))
        if self.deadline is not None and self.deadline < 0:
            raise ValueError("deadline must be non-negative")
        if self.lam is not None and self.lam <= 0:
            raise ValueError("lambda override must be positive")


@dataclass(frozen=True)
class RunEvent:
    elapsed: float
    point: Point
    solution: Solution
    oracle_calls: int
    boxes_in_queue: int


@dataclass
class RunStats:
    oracle_calls: int = 0
    oracle_nodes: int = 0
    infeasible_outcomes: int = 0
    late_discards: int = 0


@dataclass
class RunReport:
    algorithm: str
    archive: ParetoArchive
    events: list[RunEvent]
    termination: str
    stats: RunStats
    root: Corners | None = None
    nadir: Point | None = None


class RunControl:
    """Pause/resume/cancel channel shared between a run and its steerers."""

    def __init__(self) -> None:
        self._paused = threading.Event()
        self.token = CancelToken()

    def request_pause(self) -> None:
        self._paused.set()

    def request_resume(self) -> None:
        self._paused.clear()

    def request_cancel(self) -> None:
        self.token.fire()

    @property
    def pause_requested(self) -> bool:
        return self._paused.is_set()

    @property
    def cancel_requested(self) -> bool:
        return self.token.fired


class _Stopped(Exception):
    def __init__(self, reason: str) -> None:
        super().__init__(reason)
        self.reason = reason


class _Engine:
    def __init__(self, problem, config, sink, control, oracle, trace):
        self.problem = problem
        self.config = config
        self.sink = sink
        self.control = control or RunControl()
        self.oracle = oracle
        self.trace = trace
        self.archive = ParetoArchive()
        self.events: list[RunEvent] = []
        self.stats = RunStats()
        self.start = time.monotonic()
        self.deadline_abs = (
            None if config.deadline is None else self.start + config.deadline
        )
        self.queue_size = lambda: 0

    def elapsed(self) -> float:
        return time.monotonic() - self.start

    def _gate(self) -> None:
        # pause blocks here, before the next oracle call; cancel wins over pause
        while self.control.pause_requested and not self.control.cancel_requested:
            time.sleep(0.002)
        if self.control.cancel_requested:
            raise _Stopped(CANCELLED_RUN)
        if self.deadline_abs is not None and time.monotonic() >= self.deadline_abs:
            raise _Stopped(DEADLINE)
        if (
            self.config.max_oracle_calls is not None
            and self.stats.oracle_calls >= self.config.max_oracle_calls
        ):
            raise _Stopped(BUDGET)

    def call(self, sub: Subproblem) -> OracleOutcome:
        """One oracle call; returns only optimal or infeasible outcomes."""
        self._gate()
        outcome = self.oracle(
            sub,
            cancel=self.control.token,
            deadline=self.deadline_abs,
            node_budget=self.config.node_budget,
        )
        self.stats.oracle_calls += 1
        self.stats.oracle_nodes += outcome.nodes
        if outcome.status == CANCELLED:
            raise _Stopped(CANCELLED_RUN)
        if outcome.status == BUDGET_EXHAUSTED:
            if self.deadline_abs is not None and time.monotonic() >= self.deadline_abs:
                raise _Stopped(DEADLINE)
            raise _Stopped(BUDGET)
        if outcome.status == INFEASIBLE:
            self.stats.infeasible_outcomes += 1
            return outcome
        # a solution completing after the deadline fired is discarded
        if self.deadline_abs is not None and time.monotonic() >= self.deadline_abs:
            self.stats.late_discards += 1
            raise _Stopped(DEADLINE)
        return outcome

    def emit(self, point: Point, solution: Solution) -> None:
        self.archive.insert(point, solution)
        event = RunEvent(
            elapsed=self.elapsed(),
            point=point,
            solution=solution,
            oracle_calls=self.stats.oracle_calls,
            boxes_in_queue=self.queue_size(),
        )
        self.events.append(event)
        if self.sink is not None:
            self.sink(event)

    def point_and_solution(self, outcome) -> tuple[Point, Solution]:
        point = self.problem.point_of(outcome.assignment)
        return point, self.problem.solution_of(outcome.assignment)

    # --- seeding ------------------------------------------------------------

    def seed(self):
        problem = self.problem

        def cap(which: int, bound: int) -> LinearConstraint:
            vec = problem.f1_coeffs if which == 1 else problem.f2_coeffs
            return LinearConstraint(vec, bound)

        first = self.call(objective_subproblem(problem, 1))
        v1 = problem.point_of(first.assignment).f1
        second = self.call(objective_subproblem(problem, 2, (cap(1, v1),)))
        z1, sol1 = self.point_and_solution(second)
        self.emit(z1, sol1)

        third = self.call(objective_subproblem(problem, 2))
        v2 = problem.point_of(third.assignment).f2
        fourth = self.call(objective_subproblem(problem, 1, (cap(2, v2),)))
        z2, sol2 = self.point_and_solution(fourth)
        if z2 != z1:
            self.emit(z2, sol2)
            return Corners(z1, z2), z1, z2
        return None, z1, z2

    # --- shared box helpers ---------------------------------------------------

    def maybe_box(self, upper_left: Point, lower_right: Point, tag=None) -> Box | None:
        """A box only when an integer point can lie strictly inside it."""
        if lower_right.f1 - upper_left.f1 < 2 or upper_left.f2 - lower_right.f2 < 2:
            return None
        return Box(Corners(upper_left, lower_right), tag)

    def push_child(self, queue, parent: Box, box: Box | None) -> None:
        if box is None:
            return
        queue.push(box)
        if self.trace is not None:
            self.trace("push", box=box, parent=parent)

    def extract(self, queue) -> Box:
        box = queue.extract()
        if self.trace is not None:
            self.trace("extract", box=box, queue_max=None)
        return box

    # --- anytime algorithms ---------------------------------------------------

    def run_spf(self, root: Corners) -> None:
        queue = BoxQueue("area")
        self.queue_size = lambda: len(queue)
        start_box = self.maybe_box(root.upper_left, root.lower_right)
        if start_box:
            queue.push(start_box)
        while queue:
            box = self.extract(queue)
            corners = box.corners
            outcome = self.call(weighted_sum_in_box(self.problem, corners))
            if outcome.status != OPTIMAL:
                continue
            z, sol = self.point_and_solution(outcome)
            w1, w2 = dichotomic_weights(corners)
            # convexity acceptance: on or below the corner level line
            if w1 * z.f1 + w2 * z.f2 <= level_value(corners):
                self.emit(z, sol)
                self.push_child(queue, box, self.maybe_box(corners.upper_left, z))
                self.push_child(queue, box, self.maybe_box(z, corners.lower_right))
            # concave-part images are not supported: point and box dropped

    def run_any_augmecon(self, root: Corners, obj: int) -> None:
        lam = self.config.lam or default_augmecon_lambda(root, obj)
        queue = BoxQueue("area")
        self.queue_size = lambda: len(queue)
        start_box = self.maybe_box(root.upper_left, root.lower_right)
        if start_box:
            queue.push(start_box)
        while queue:
            box = self.extract(queue)
            corners = box.corners
            outcome = self.call(augmecon_sub(self.problem, corners, obj, lam))
            if outcome.status != OPTIMAL:
                continue
            z, sol = self.point_and_solution(outcome)
            if corners.strictly_inside(z):
                self.emit(z, sol)
                self.push_child(queue, box, self.maybe_box(corners.upper_left, z))
                self.push_child(queue, box, self.maybe_box(z, corners.lower_right))
            else:
                # the searched half is settled; keep the other half of the box
                eps = augmecon_epsilon(corners, obj)
                floor_eps = eps.numerator // eps.denominator
                if obj == 1:
                    child = self.maybe_box(
                        corners.upper_left, Point(corners.lower_right.f1, floor_eps)
                    )
                else:
                    child = self.maybe_box(
                        Point(floor_eps, corners.upper_left.f2), corners.lower_right
                    )
                self.push_child(queue, box, child)

    def _explore_tchebycheff(self, queue, box: Box, tagger=None) -> None:
        corners = box.corners
        outcome = self.call(tchebycheff_sub(self.problem, corners))
        if outcome.status != OPTIMAL:
            return
        z, sol = self.point_and_solution(outcome)
        if not corners.strictly_inside(z):
            return  # image on a box extreme: no undiscovered point inside
        self.emit(z, sol)
        tag_left, tag_right = tagger(corners, z) if tagger else (None, None)
        self.push_child(queue, box, self.maybe_box(corners.upper_left, z, tag_left))
        self.push_child(queue, box, self.maybe_box(z, corners.lower_right, tag_right))

    def _explore_hybrid(self, queue, box: Box, tagger=None) -> bool:
        corners = box.corners
        outcome = self.call(weighted_sum_in_box(self.problem, corners))
        if outcome.status != OPTIMAL:
            return False
        z, sol = self.point_and_solution(outcome)
        self.emit(z, sol)  # bounded weighted-sum optima are always efficient
        tag_left, tag_right = tagger(corners, z) if tagger else (None, None)
        self.push_child(queue, box, self.maybe_box(corners.upper_left, z, tag_left))
        self.push_child(queue, box, self.maybe_box(z, corners.lower_right, tag_right))
        return True

    def run_any_tchebycheff(self, root: Corners) -> None:
        queue = BoxQueue("area")
        self.queue_size = lambda: len(queue)
        start_box = self.maybe_box(root.upper_left, root.lower_right)
        if start_box:
            queue.push(start_box)
        while queue:
            self._explore_tchebycheff(queue, self.extract(queue))

    def run_any_hybrid(self, root: Corners) -> None:
        queue = BoxQueue("area")
        self.queue_size = lambda: len(queue)
        start_box = self.maybe_box(root.upper_left, root.lower_right)
        if start_box:
            queue.push(start_box)
        while queue:
            self._explore_hybrid(queue, self.extract(queue))

    def run_mix_ht(self, root: Corners) -> None:
        queue = BoxQueue("area")
        self.queue_size = lambda: len(queue)
        start_box = self.maybe_box(root.upper_left, root.lower_right, "H")
        if start_box:
            queue.push(start_box)
        while queue:
            box = self.extract(queue)
            if box.tag == "T":
                self._explore_tchebycheff(queue, box, tagger=choose_method)
            else:
                self._explore_hybrid(queue, box, tagger=choose_method)

    def run_mix_sht(self, root: Corners) -> None:
        """Supported points first, then the mixed rule on the leftovers.

        Concave-part discoveries made during phase one are withheld (their
        boxes go to the second queue) and emitted in discovery order once
        the supported sweep exhausts, so no non-supported point ever
        precedes a supported one in the event stream.
        """
        boxes1 = BoxQueue("area")
        boxes2 = BoxQueue("area")
        self.queue_size = lambda: len(boxes1) + len(boxes2)
        deferred: list[tuple[Point, Solution]] = []
        start_box = self.maybe_box(root.upper_left, root.lower_right, "H")
        if start_box:
            boxes1.push(start_box)
        while boxes1:
            box = self.extract(boxes1)
            corners = box.corners
            outcome = self.call(weighted_sum_in_box(self.problem, corners))
            if outcome.status != OPTIMAL:
                continue
            z, sol = self.point_and_solution(outcome)
            if in_concave_part(corners, z):
                deferred.append((z, sol))
                self.push_child(boxes2, box, self.maybe_box(corners.upper_left, z, "H"))
                self.push_child(boxes2, box, self.maybe_box(z, corners.lower_right, "H"))
            else:
                self.emit(z, sol)
                self.push_child(boxes1, box, self.maybe_box(corners.upper_left, z, "H"))
                self.push_child(boxes1, box, self.maybe_box(z, corners.lower_right, "H"))
        for z, sol in deferred:
            self.emit(z, sol)
        while boxes2:
            box = self.extract(boxes2)
            if box.tag == "T":
                self._explore_tchebycheff(boxes2, box, tagger=choose_method)
            else:
                self._explore_hybrid(boxes2, box, tagger=choose_method)

    # --- classic baselines ------------------------------------------------------

    def run_econst1(self, obj: int, z_first: Point) -> None:
        eps = (z_first.f2 if obj == 1 else z_first.f1) - 1
        while True:
            outcome = self.call(epsilon_sub(self.problem, obj, eps))
            if outcome.status != OPTIMAL:
                return
            z, sol = self.point_and_solution(outcome)
            self.emit(z, sol)
            eps = (z.f2 if obj == 1 else z.f1) - 1

    def run_econst2(self, obj: int, z_first: Point) -> None:
        problem = self.problem
        rest = 3 - obj
        rest_vec = problem.f1_coeffs if rest == 1 else problem.f2_coeffs
        obj_vec = problem.f1_coeffs if obj == 1 else problem.f2_coeffs
        eps = (z_first.f2 if obj == 1 else z_first.f1) - 1
        while True:
            stage1 = self.call(epsilon_sub(problem, obj, eps))
            if stage1.status != OPTIMAL:
                return
            v = problem.point_of(stage1.assignment)
            v_obj = v.f1 if obj == 1 else v.f2
            stage2 = self.call(
                objective_subproblem(
                    problem,
                    rest,
                    (
                        LinearConstraint(obj_vec, v_obj),
                        LinearConstraint(rest_vec, eps),
                    ),
                )
            )
            z, sol = self.point_and_solution(stage2)
            self.emit(z, sol)
            eps = (z.f2 if obj == 1 else z.f1) - 1

    def run_augmecon_sweep(self, obj: int, root: Corners | None, z_first: Point) -> None:
        lam = self.config.lam
        if lam is None:
            lam = default_augmecon_lambda(root, obj) if root else Fraction(1, 2)
        eps = (z_first.f2 if obj == 1 else z_first.f1) - 1
        while True:
            outcome = self.call(augmecon_sweep_sub(self.problem, obj, eps, lam))
            if outcome.status != OPTIMAL:
                return
            z, sol = self.point_and_solution(outcome)
            self.emit(z, sol)
            eps = (z.f2 if obj == 1 else z.f1) - 1

    def run_classic_depth_first(self, root: Corners, method: str) -> None:
        stack: list[Box] = []
        self.queue_size = lambda: len(stack)

        class _Lifo:
            def push(inner, box):
                stack.append(box)

        lifo = _Lifo()
        start_box = self.maybe_box(root.upper_left, root.lower_right)
        if start_box:
            stack.append(start_box)
        while stack:
            box = stack.pop()
            if self.trace is not None:
                self.trace("extract", box=box, queue_max=None)
            if method == "tchebycheff":
                self._explore_tchebycheff(lifo, box)
            else:
                self._explore_hybrid(lifo, box)

    def run_ads(self, root: Corners) -> None:
        queue = BoxQueue("diagonal")
        self.queue_size = lambda: len(queue)
        start_box = self.maybe_box(root.upper_left, root.lower_right)
        if start_box:
            queue.push(start_box)
        while queue:
            box = self.extract(queue)
            corners = box.corners
            outcome = self.call(weighted_sum_unbounded(self.problem, corners))
            if outcome.status != OPTIMAL:
                continue
            z, sol = self.point_and_solution(outcome)
            w1, w2 = dichotomic_weights(corners)
            # strictly below the corner level line: a new hull vertex
            if w1 * z.f1 + w2 * z.f2 < level_value(corners):
                self.emit(z, sol)
                if corners.strictly_inside(z):
                    self.push_child(queue, box, self.maybe_box(corners.upper_left, z))
                    self.push_child(queue, box, self.maybe_box(z, corners.lower_right))
            # otherwise no strictly better weighted-sum point: box exhausted

    # --- top level ----------------------------------------------------------------

    def execute(self) -> RunReport:
        termination = EXHAUSTED
        root: Corners | None = None
        nadir: Point | None = None
        try:
            root, z1, z2 = self.seed()
            nadir = Point(z2.f1, z1.f2)
            algorithm = self.config.algorithm
            if root is not None:
                if algorithm == "spf":
                    self.run_spf(root)
                elif algorithm == "any-augmecon-1":
                    self.run_any_augmecon(root, 1)
                elif algorithm == "any-augmecon-2":
                    self.run_any_augmecon(root, 2)
                elif algorithm == "any-tchebycheff":
                    self.run_any_tchebycheff(root)
                elif algorithm == "any-hybrid":
                    self.run_any_hybrid(root)
                elif algorithm == "mix-ht":
                    self.run_mix_ht(root)
                elif algorithm == "mix-sht":
                    self.run_mix_sht(root)
                elif algorithm == "econst1-1":
                    self.run_econst1(1, z1)
                elif algorithm == "econst1-2":
                    self.run_econst1(2, z2)
                elif algorithm == "econst2-1":
                    self.run_econst2(1, z1)
                elif algorithm == "econst2-2":
                    self.run_econst2(2, z2)
                elif algorithm == "augmecon-1":
                    self.run_augmecon_sweep(1, root, z1)
                elif algorithm == "augmecon-2":
                    self.run_augmecon_sweep(2, root, z2)
                elif algorithm == "ehybrid":
                    self.run_classic_depth_first(root, "hybrid")
                elif algorithm == "tchebycheff":
                    self.run_classic_depth_first(root, "tchebycheff")
                elif algorithm == "ads":
                    self.run_ads(root)
                else:  # pragma: no cover - normalize_algorithm guards this
                    raise ValueError(f"unhandled algorithm {algorithm}")
        except _Stopped as stop:
            termination = stop.reason
        return RunReport(
            algorithm=self.config.algorithm,
            archive=self.archive,
            events=self.events,
            termination=termination,
            stats=self.stats,
            root=root,
            nadir=nadir,
        )


def close_to(c: int, a: int, b: int) -> tuple[bool, bool]:
    """Whether ``c`` in the open interval (a, b) hugs either endpoint.

    ``c`` is close to an endpoint when its distance is below a quarter of
    the interval length (exact integer comparison).
    """
    span = b - a
    return 4 * (c - a) < span, 4 * (b - c) < span


def choose_method(corners: Corners, z: Point) -> tuple[str, str]:
    """Method tags for the two child boxes of a mixed-variant discovery.

    Convex-part discoveries keep the fast hybrid exploration on both sides;
    a concave-part discovery whose coordinate hugs a box edge sends that
    child to the Tchebycheff exploration, which handles such slivers better.
    """
    if not in_concave_part(corners, z):
        return "H", "H"
    near_low_f1, near_high_f1 = close_to(z.f1, corners.upper_left.f1, corners.lower_right.f1)
    near_low_f2, near_high_f2 = close_to(z.f2, corners.lower_right.f2, corners.upper_left.f2)
    tag_left = "T" if (near_low_f1 or near_high_f1) else "H"
    tag_right = "T" if (near_low_f2 or near_high_f2) else "H"
    return tag_left, tag_right


def run(
    problem: BiObjectiveProblem,
    config: RunConfig,
    sink=None,
    control: RunControl | None = None,
    oracle=solve,
    trace=None,
) -> RunReport:
    """Execute one algorithm run to exhaustion, deadline, budget or cancel.

    ``sink`` receives each ``RunEvent`` as it is emitted; ``control`` allows
    pausing (takes effect before the next oracle call, resume is lossless)
    and cancelling from other threads.  ``trace`` is a diagnostics callback
    fed box extract/push activity.
    """
    return _Engine(problem, config, sink, control, oracle, trace).execute()


def run_classic(
    problem: BiObjectiveProblem,
    variant: str,
    config: RunConfig | None = None,
    sink=None,
    control: RunControl | None = None,
    oracle=solve,
) -> RunReport:
    """Run one of the classic baselines (thin wrapper over ``run``)."""
    variant = normalize_algorithm(variant)
    if variant not in CLASSIC_ALGORITHMS:
        raise ValueError(f"{variant} is not a classic variant")
    if config is None:
        config = RunConfig(algorithm=variant)
    elif config.algorithm != variant:
        config = RunConfig(
            algorithm=variant,
            deadline=config.deadline,
            lam=config.lam,
            node_budget=config.node_budget,
            max_oracle_calls=config.max_oracle_calls,
        )
    return run(problem, config, sink=sink, control=control, oracle=oracle)
