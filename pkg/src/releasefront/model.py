"""Instance model and bi-objective formulation for requirements selection.

An instance couples candidate requirements (each with an implementation
cost) with stakeholders (each with an importance weight and a set of
requested requirements).  Two objectives are minimized jointly: the
negated weighted stakeholder satisfaction and the total cost of the
selected requirements.  Precedence pairs force prerequisite requirements
into the release; request pairs force all requirements of a satisfied
stakeholder into the release.

All data is integral and immutable after construction, so instances and
problems can be shared freely across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass


class InvalidInstanceError(ValueError):
    """Raised when instance data violates a structural invariant."""


class LengthMismatchError(ValueError):
    """Raised when a solution's bit vectors do not match the instance."""


@dataclass(frozen=True, order=True)
class Point:
    """Image of a solution in objective space.

    ``f1`` is the negated weighted satisfaction (never positive) and
    ``f2`` the total cost (never negative); both are exact integers.
    """

    f1: int
    f2: int

    def dominates(self, other: "Point") -> bool:
        return (
            self.f1 <= other.f1
            and self.f2 <= other.f2
            and (self.f1 < other.f1 or self.f2 < other.f2)
        )

    def as_pair(self) -> tuple[int, int]:
        return (self.f1, self.f2)


@dataclass(frozen=True)
class Solution:
    """A selection of requirements ``r`` and satisfied stakeholders ``s``."""

    r: tuple[int, ...]
    s: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(b not in (0, 1) for b in self.r) or any(b not in (0, 1) for b in self.s):
            raise ValueError("solution vectors must be 0/1")


@dataclass(frozen=True)
class NrpInstance:
    """A requirements-selection instance.

    Requirement ids are 1..n in the order of ``costs``; stakeholder ids are
    1..m in the order of ``weights``.  ``requests[k]`` holds the requirement
    ids stakeholder k+1 needs, and ``precedence`` holds ordered pairs
    ``(i, j)`` meaning requirement i is a prerequisite of requirement j.
    """

    name: str
    costs: tuple[int, ...]
    weights: tuple[int, ...]
    requests: tuple[frozenset[int], ...]
    precedence: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        n = len(self.costs)
        if any(not isinstance(c, int) or c < 0 for c in self.costs):
            raise InvalidInstanceError("costs must be non-negative integers")
        if any(not isinstance(w, int) or w < 1 for w in self.weights):
            raise InvalidInstanceError("weights must be integers >= 1")
        if len(self.requests) != len(self.weights):
            raise InvalidInstanceError("one request set per stakeholder required")
        for k, req in enumerate(self.requests, start=1):
            if not req:
                raise InvalidInstanceError(f"stakeholder {k} has an empty request set")
            for i in req:
                if not 1 <= i <= n:
                    raise InvalidInstanceError(
                        f"stakeholder {k} requests unknown requirement {i}"
                    )
        for i, j in self.precedence:
            if not (1 <= i <= n and 1 <= j <= n):
                raise InvalidInstanceError(f"precedence pair ({i}, {j}) out of range")

    @property
    def n(self) -> int:
        return len(self.costs)

    @property
    def m(self) -> int:
        return len(self.weights)

    @property
    def total_cost(self) -> int:
        return sum(self.costs)

    @property
    def total_weight(self) -> int:
        return sum(self.weights)

    def prerequisites_closure(self, requirement_ids) -> frozenset[int]:
        """All requirements transitively required by the given ids."""
        needed = set(requirement_ids)
        by_target: dict[int, list[int]] = {}
        for i, j in self.precedence:
            by_target.setdefault(j, []).append(i)
        stack = list(needed)
        while stack:
            j = stack.pop()
            for i in by_target.get(j, ()):
                if i not in needed:
                    needed.add(i)
                    stack.append(i)
        return frozenset(needed)

    def select_stakeholders(self, stakeholder_ids) -> Solution:
        """Smallest feasible solution satisfying the given stakeholders."""
        wanted = set()
        for k in stakeholder_ids:
            wanted.update(self.requests[k - 1])
        closed = self.prerequisites_closure(wanted)
        r = tuple(1 if i + 1 in closed else 0 for i in range(self.n))
        s = tuple(1 if k + 1 in set(stakeholder_ids) else 0 for k in range(self.m))
        return Solution(r, s)


@dataclass(frozen=True)
class BiObjectiveProblem:
    """The instance lowered to binary variables with implication constraints.

    Variables 0..n-1 are the requirements, n..n+m-1 the stakeholders.  Each
    implication ``(a, b)`` states ``x_a >= x_b``.  The two objective vectors
    have length ``n_vars``.
    """

    instance: NrpInstance
    implications: tuple[tuple[int, int], ...]
    f1_coeffs: tuple[int, ...]
    f2_coeffs: tuple[int, ...]

    @property
    def n_vars(self) -> int:
        return self.instance.n + self.instance.m

    def point_of(self, assignment) -> Point:
        f1 = sum(c * x for c, x in zip(self.f1_coeffs, assignment))
        f2 = sum(c * x for c, x in zip(self.f2_coeffs, assignment))
        return Point(f1, f2)

    def solution_of(self, assignment) -> Solution:
        n = self.instance.n
        return Solution(tuple(assignment[:n]), tuple(assignment[n:]))


def build_bi_objective(instance: NrpInstance) -> BiObjectiveProblem:
    """Lower an instance to its bi-objective binary formulation.

    Produces one implication per precedence pair and one per request pair;
    the satisfaction objective carries ``-weight`` on stakeholder variables
    and the cost objective carries ``cost`` on requirement variables.
    """
    n, m = instance.n, instance.m
    implications = []
    for i, j in sorted(instance.precedence):
        implications.append((i - 1, j - 1))
    for k, req in enumerate(instance.requests):
        for i in sorted(req):
            implications.append((i - 1, n + k))
    f1 = (0,) * n + tuple(-w for w in instance.weights)
    f2 = tuple(instance.costs) + (0,) * m
    return BiObjectiveProblem(instance, tuple(implications), f1, f2)


def evaluate(instance: NrpInstance, sol: Solution) -> Point:
    """Exact objective pair of a (not necessarily feasible) solution."""
    if len(sol.r) != instance.n or len(sol.s) != instance.m:
        raise LengthMismatchError(
            f"expected vectors of length {instance.n}/{instance.m}, "
            f"got {len(sol.r)}/{len(sol.s)}"
        )
    f1 = -sum(w * b for w, b in zip(instance.weights, sol.s))
    f2 = sum(c * b for c, b in zip(instance.costs, sol.r))
    return Point(f1, f2)


def feasible(instance: NrpInstance, sol: Solution) -> bool:
    """True iff all precedence and request implications hold."""
    if len(sol.r) != instance.n or len(sol.s) != instance.m:
        raise LengthMismatchError(
            f"expected vectors of length {instance.n}/{instance.m}, "
            f"got {len(sol.r)}/{len(sol.s)}"
        )
    for i, j in instance.precedence:
        if sol.r[i - 1] < sol.r[j - 1]:
            return False
    for k, req in enumerate(instance.requests):
        if sol.s[k]:
            for i in req:
                if not sol.r[i - 1]:
                    return False
    return True


# --- canonical JSON interchange ------------------------------------------

def instance_to_dict(instance: NrpInstance) -> dict:
    """Canonical JSON document shared by CLI, service and UI."""
    return {
        "name": instance.name,
        "costs": list(instance.costs),
        "weights": list(instance.weights),
        "precedence": [list(p) for p in sorted(instance.precedence)],
        "requests": [
            [k + 1, sorted(req)] for k, req in enumerate(instance.requests)
        ],
    }


def instance_from_dict(doc: dict) -> NrpInstance:
    try:
        name = str(doc.get("name", "unnamed"))
        costs = tuple(int(c) for c in doc["costs"])
        weights = tuple(int(w) for w in doc["weights"])
        precedence = frozenset((int(i), int(j)) for i, j in doc.get("precedence", []))
        request_entries = {int(k): frozenset(int(i) for i in ids)
                           for k, ids in doc.get("requests", [])}
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInstanceError(f"malformed instance document: {exc}") from exc
    if sorted(request_entries) != list(range(1, len(weights) + 1)):
        raise InvalidInstanceError("requests must cover stakeholder ids 1..m exactly")
    requests = tuple(request_entries[k] for k in range(1, len(weights) + 1))
    return NrpInstance(name, costs, weights, requests, precedence)


def dumps_instance(instance: NrpInstance) -> str:
    return json.dumps(instance_to_dict(instance), indent=2, sort_keys=True)


def loads_instance(text: str) -> NrpInstance:
    return instance_from_dict(json.loads(text))
