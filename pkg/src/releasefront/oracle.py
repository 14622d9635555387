"""Exact solver for binary scalarized subproblems.

Every algorithm in the suite reduces its work to single-objective binary
programs of one shape: minimize a linear (or max-of-two-linear-forms plus
linear) objective over 0/1 variables subject to implication constraints
``x_a >= x_b`` and linear ``<=`` constraints.  This module solves them
exactly with a best-first branch and bound.

All coefficients are integers; rational scalarization weights are
pre-multiplied by a common denominator recorded in ``Subproblem.scale``,
so no floating point ever enters the search.  Python integers are
unbounded, so coefficient arithmetic cannot overflow or wrap.
"""

from __future__ import annotations

import heapq
import os
import re
import shlex
import subprocess
import tempfile
import threading
import time
from dataclasses import dataclass
from fractions import Fraction

DEFAULT_NODE_BUDGET = 10**7

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
CANCELLED = "cancelled"
BUDGET_EXHAUSTED = "budget-exhausted"

FREE = 255  # sentinel in assignment bytearrays


class CancelToken:
    """Cooperative cancellation flag, safe to fire from any thread."""

    def __init__(self) -> None:
        self._event = threading.Event()

    def fire(self) -> None:
        self._event.set()

    @property
    def fired(self) -> bool:
        return self._event.is_set()


@dataclass(frozen=True)
class LinearObjective:
    coeffs: tuple[int, ...]
    constant: int = 0


@dataclass(frozen=True)
class MaxPlusObjective:
    """``max(form_a . x + const_a, form_b . x + const_b) + augment . x + const_aug``."""

    form_a: tuple[int, ...]
    const_a: int
    form_b: tuple[int, ...]
    const_b: int
    augment: tuple[int, ...]
    const_aug: int = 0


@dataclass(frozen=True)
class LinearConstraint:
    """``coeffs . x <= bound``."""

    coeffs: tuple[int, ...]
    bound: int


@dataclass(frozen=True)
class Subproblem:
    n_vars: int
    implications: tuple[tuple[int, int], ...]
    constraints: tuple[LinearConstraint, ...]
    objective: LinearObjective | MaxPlusObjective
    scale: int = 1

    def __post_init__(self) -> None:
        if self.scale < 1:
            raise ValueError("scale must be a positive integer")
        for a, b in self.implications:
            if not (0 <= a < self.n_vars and 0 <= b < self.n_vars):
                raise ValueError(f"implication ({a}, {b}) out of range")
        for ct in self.constraints:
            if len(ct.coeffs) != self.n_vars:
                raise ValueError("constraint coefficient vector has wrong length")
        for form in _forms(self.objective):
            if len(form[0]) != self.n_vars:
                raise ValueError("objective coefficient vector has wrong length")


@dataclass(frozen=True)
class OracleOutcome:
    status: str
    assignment: tuple[int, ...] | None = None
    value: Fraction | None = None
    nodes: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


def _forms(objective) -> list[tuple[tuple[int, ...], int]]:
    if isinstance(objective, LinearObjective):
        return [(objective.coeffs, objective.constant)]
    return [
        (objective.form_a, objective.const_a),
        (objective.form_b, objective.const_b),
        (objective.augment, objective.const_aug),
    ]


def evaluate_objective(sub: Subproblem, assignment) -> int:
    """Scaled integer objective value of a complete assignment."""
    obj = sub.objective
    if isinstance(obj, LinearObjective):
        return sum(c * x for c, x in zip(obj.coeffs, assignment)) + obj.constant
    va = sum(c * x for c, x in zip(obj.form_a, assignment)) + obj.const_a
    vb = sum(c * x for c, x in zip(obj.form_b, assignment)) + obj.const_b
    vg = sum(c * x for c, x in zip(obj.augment, assignment)) + obj.const_aug
    return max(va, vb) + vg


def satisfies(sub: Subproblem, assignment) -> bool:
    """Exact feasibility check of a complete assignment."""
    for a, b in sub.implications:
        if assignment[a] < assignment[b]:
            return False
    for ct in sub.constraints:
        if sum(c * x for c, x in zip(ct.coeffs, assignment)) > ct.bound:
            return False
    return True


# --- public node-level operations ------------------------------------------

def propagate(sub: Subproblem, partial) -> tuple[list[int | None], bool]:
    """Close the implication constraints over a partial assignment.

    ``partial`` maps each variable to 0, 1 or None (free).  Returns the
    fixpoint assignment and a conflict flag; on conflict the returned
    assignment is the state reached when the contradiction surfaced.
    """
    state: list[int | None] = list(partial)
    up: dict[int, list[int]] = {}
    down: dict[int, list[int]] = {}
    for a, b in sub.implications:
        up.setdefault(b, []).append(a)
        down.setdefault(a, []).append(b)
    stack = [(j, v) for j, v in enumerate(state) if v is not None]
    for j, _ in stack:
        state[j] = None  # re-fix through the stack so conflicts are caught
    while stack:
        j, v = stack.pop()
        cur = state[j]
        if cur is not None:
            if cur != v:
                return state, True
            continue
        state[j] = v
        if v == 1:
            stack.extend((a, 1) for a in up.get(j, ()))
        else:
            stack.extend((b, 0) for b in down.get(j, ()))
    return state, False


def _form_min(coeffs, constant, partial) -> int:
    total = constant
    for c, x in zip(coeffs, partial):
        if x is None:
            if c < 0:
                total += c
        else:
            total += c * x
    return total


def lower_bound(sub: Subproblem, partial) -> Fraction:
    """Admissible bound: fixed part plus the free negative coefficients.

    For max-plus objectives the bound is the max of the two form bounds
    plus the augment bound; each completion's value can only be larger.
    """
    obj = sub.objective
    if isinstance(obj, LinearObjective):
        raw = _form_min(obj.coeffs, obj.constant, partial)
    else:
        raw = max(
            _form_min(obj.form_a, obj.const_a, partial),
            _form_min(obj.form_b, obj.const_b, partial),
        ) + _form_min(obj.augment, obj.const_aug, partial)
    return Fraction(raw, sub.scale)


def prune_infeasible(sub: Subproblem, partial) -> bool:
    """True iff some constraint's minimal achievable left side exceeds its bound."""
    for ct in sub.constraints:
        if _form_min(ct.coeffs, 0, partial) > ct.bound:
            return True
    return False


# --- branch and bound -------------------------------------------------------

def solve(
    sub: Subproblem,
    cancel: CancelToken | None = None,
    deadline: float | None = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> OracleOutcome:
    """Solve a subproblem to proven optimality.

    Best-first search on the admissible lower bound, ties broken by deeper
    node first and FIFO after that, branching on the free variable with the
    largest absolute objective coefficient.  The cancellation token and the
    ``deadline`` (a ``time.monotonic`` instant) are checked once per node
    expansion.  Exceeding ``node_budget`` expansions yields
    ``BUDGET_EXHAUSTED``; a fired token yields ``CANCELLED``.
    """
    n = sub.n_vars
    scale = sub.scale
    forms = _forms(sub.objective)
    is_linear = isinstance(sub.objective, LinearObjective)
    consts = [c for _, c in forms]

    if n == 0:
        raw = max(consts[0], consts[1]) + consts[2] if not is_linear else consts[0]
        return OracleOutcome(OPTIMAL, (), Fraction(raw, scale), nodes=0)

    up: list[list[int]] = [[] for _ in range(n)]
    down: list[list[int]] = [[] for _ in range(n)]
    for a, b in sub.implications:
        up[b].append(a)
        down[a].append(b)

    form_coeffs = [f[0] for f in forms]
    cons = sub.constraints
    cons_coeffs = [ct.coeffs for ct in cons]
    cons_bounds = [ct.bound for ct in cons]

    def score(j: int) -> int:
        return max(abs(fc[j]) for fc in form_coeffs)

    order = sorted(range(n), key=lambda j: (-score(j), j))
    # preferred first value per variable: the one lowering the dominant form
    prefer = []
    for j in range(n):
        dom = max(form_coeffs, key=lambda fc: abs(fc[j]))
        prefer.append(1 if dom[j] < 0 else 0)

    def bound_of(form_sums) -> int:
        if is_linear:
            return form_sums[0] + consts[0]
        return max(form_sums[0] + consts[0], form_sums[1] + consts[1]) + (
            form_sums[2] + consts[2]
        )

    def fix(asg: bytearray, j: int, v: int, form_sums: list[int], cons_sums: list[int]) -> int:
        """Fix ``j`` to ``v`` and propagate; returns fixed count or -1 on conflict.

        The running sums carry fixed contributions plus ``min(0, c)`` for
        every free variable, so fixing a negative coefficient to 1 keeps its
        contribution and fixing it to 0 removes it.
        """
        fixed = 0
        stack = [(j, v)]
        while stack:
            jj, vv = stack.pop()
            cur = asg[jj]
            if cur != FREE:
                if cur != vv:
                    return -1
                continue
            asg[jj] = vv
            fixed += 1
            for fi, fc in enumerate(form_coeffs):
                c = fc[jj]
                if c < 0:
                    if not vv:
                        form_sums[fi] -= c
                elif vv:
                    form_sums[fi] += c
            for ki, kc in enumerate(cons_coeffs):
                c = kc[jj]
                if c < 0:
                    if not vv:
                        cons_sums[ki] -= c
                elif vv:
                    cons_sums[ki] += c
            if vv:
                stack.extend((a, 1) for a in up[jj])
            else:
                stack.extend((b, 0) for b in down[jj])
        return fixed

    root_asg = bytearray([FREE] * n)
    root_forms = [sum(c for c in fc if c < 0) for fc in form_coeffs]
    root_cons = [sum(c for c in kc if c < 0) for kc in cons_coeffs]
    if any(s > b for s, b in zip(root_cons, cons_bounds)):
        return OracleOutcome(INFEASIBLE, nodes=0)

    seq = 0
    heap: list = []
    root_bound = bound_of(root_forms)
    heapq.heappush(heap, (root_bound, 0, seq, root_asg, root_forms, root_cons, 0))
    best_value: int | None = None
    nodes = 0

    while heap:
        if cancel is not None and cancel.fired:
            return OracleOutcome(CANCELLED, nodes=nodes)
        if deadline is not None and time.monotonic() >= deadline:
            return OracleOutcome(BUDGET_EXHAUSTED, nodes=nodes)
        if nodes >= node_budget:
            return OracleOutcome(BUDGET_EXHAUSTED, nodes=nodes)
        bound, neg_depth, _, asg, form_sums, cons_sums, n_fixed = heapq.heappop(heap)
        nodes += 1
        if best_value is not None and bound >= best_value and n_fixed < n:
            continue
        if n_fixed == n:
            # best-first order makes the first complete pop a global optimum
            return OracleOutcome(
                OPTIMAL, tuple(asg), Fraction(bound, scale), nodes=nodes
            )
        j = next(k for k in order if asg[k] == FREE)
        first = prefer[j]
        for v in (first, 1 - first):
            child_asg = bytearray(asg)
            child_forms = list(form_sums)
            child_cons = list(cons_sums)
            added = fix(child_asg, j, v, child_forms, child_cons)
            if added < 0:
                continue
            if any(s > b for s, b in zip(child_cons, cons_bounds)):
                continue
            child_bound = bound_of(child_forms)
            child_fixed = n_fixed + added
            if child_fixed == n:
                if best_value is None or child_bound < best_value:
                    best_value = child_bound
                else:
                    continue
            elif best_value is not None and child_bound >= best_value:
                continue
            seq += 1
            heapq.heappush(
                heap,
                (child_bound, -child_fixed, seq, child_asg, child_forms, child_cons, child_fixed),
            )
    if best_value is not None:
        # only reachable if the best complete node was pruned from the heap,
        # which the push discipline prevents; kept as a safety net
        return OracleOutcome(BUDGET_EXHAUSTED, nodes=nodes)
    return OracleOutcome(INFEASIBLE, nodes=nodes)


# --- LP-file export and external-solver adapter ------------------------------

def _lp_terms(coeffs, names) -> str:
    parts = []
    for c, name in zip(coeffs, names):
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        parts.append(f"{sign} {abs(c)} {name}")
    if not parts:
        return "0"
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else text


def export_lp(sub: Subproblem, name: str = "subproblem") -> str:
    """Emit the subproblem in the standard LP-file dialect.

    Max-plus objectives introduce one free continuous variable ``z`` with
    two ``>=`` rows; everything else is binary.  Coefficients are the scaled
    integers, so integral optima round-trip exactly through text.
    """
    xs = [f"x{j + 1}" for j in range(sub.n_vars)]
    lines = [f"\\ {name} (objective scale {sub.scale})", "Minimize"]
    obj = sub.objective
    rows: list[str] = []
    if isinstance(obj, LinearObjective):
        terms = _lp_terms(obj.coeffs, xs)
        if obj.constant:
            terms += f" {'+' if obj.constant > 0 else '-'} {abs(obj.constant)}"
        lines.append(f" obj: {terms}")
    else:
        terms = _lp_terms(obj.augment, xs)
        terms = f"z + {terms}" if terms != "0" else "z"
        if obj.const_aug:
            terms += f" {'+' if obj.const_aug > 0 else '-'} {abs(obj.const_aug)}"
        lines.append(f" obj: {terms}")
        neg_a = [-c for c in obj.form_a]
        neg_b = [-c for c in obj.form_b]
        rows.append(f" maxa: z + {_lp_terms(neg_a, xs)} >= {obj.const_a}")
        rows.append(f" maxb: z + {_lp_terms(neg_b, xs)} >= {obj.const_b}")
    lines.append("Subject To")
    for idx, (a, b) in enumerate(sub.implications, start=1):
        lines.append(f" imp{idx}: x{a + 1} - x{b + 1} >= 0")
    for idx, ct in enumerate(sub.constraints, start=1):
        lines.append(f" lin{idx}: {_lp_terms(ct.coeffs, xs)} <= {ct.bound}")
    lines.extend(rows)
    if not isinstance(obj, LinearObjective):
        lines.append("Bounds")
        lines.append(" z free")
    lines.append("Binaries")
    lines.append(" " + " ".join(xs))
    lines.append("End")
    return "\n".join(lines) + "\n"


_OBJ_RE = re.compile(r"objective\s+value[^-\d]*(-?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?)", re.I)
_VAR_RE = re.compile(r"^\s*x(\d+)\s+(-?\d+(?:\.\d+)?)\s*$")
_INFEASIBLE_RE = re.compile(r"\binfeasible\b", re.I)


def solve_with_command(sub: Subproblem, command: str) -> OracleOutcome:
    """Spawn an external MILP solver on the exported LP file and parse it.

    The command is invoked with the LP file path appended.  Its stdout must
    contain either the word ``infeasible`` or an ``objective value`` line
    plus one ``x<i> <0|1>`` line per selected variable (missing variables
    default to 0).  The parsed assignment is re-evaluated exactly and must
    reproduce the reported objective.
    """
    with tempfile.NamedTemporaryFile("w", suffix=".lp", delete=False) as fh:
        fh.write(export_lp(sub))
        path = fh.name
    try:
        proc = subprocess.run(
            shlex.split(command) + [path],
            capture_output=True,
            text=True,
            check=False,
        )
        out = proc.stdout + "\n" + proc.stderr
        if _INFEASIBLE_RE.search(out):
            return OracleOutcome(INFEASIBLE)
        match = _OBJ_RE.search(out)
        if match is None:
            raise RuntimeError(
                f"external solver produced no objective value (command: {command})"
            )
        assignment = [0] * sub.n_vars
        for line in out.splitlines():
            var = _VAR_RE.match(line)
            if var:
                j = int(var.group(1)) - 1
                if 0 <= j < sub.n_vars:
                    assignment[j] = 1 if float(var.group(2)) > 0.5 else 0
        assignment_t = tuple(assignment)
        if not satisfies(sub, assignment_t):
            raise RuntimeError("external solver returned an infeasible assignment")
        raw = evaluate_objective(sub, assignment_t)
        reported = float(match.group(1))
        if abs(reported - raw) > 1e-4 * max(1, abs(raw)):
            raise RuntimeError(
                f"external solver objective {reported} disagrees with "
                f"re-evaluated value {raw}"
            )
        return OracleOutcome(OPTIMAL, assignment_t, Fraction(raw, sub.scale))
    finally:
        os.unlink(path)


ORACLE_CMD_ENV = "BIOBJ_ORACLE_CMD"


def make_oracle(command: str | None = None):
    """Oracle callable, backed by the external adapter when configured."""
    if command is None:
        command = os.environ.get(ORACLE_CMD_ENV) or None
    if command is None:
        return solve

    def external(sub, cancel=None, deadline=None, node_budget=DEFAULT_NODE_BUDGET):
        return solve_with_command(sub, command)

    return external
