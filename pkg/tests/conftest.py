"""Shared fixtures: the tiny reference instance and independent oracles.

The expected values frozen into the tests were computed with the
enumeration helpers below (full assignment enumeration in pure Python and
a vectorized subproblem enumerator), which stay independent of the search
code they check.
"""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest

from releasefront.bench import GeneratorParams, generate_instance
from releasefront.model import NrpInstance, Solution, evaluate, feasible
from releasefront.oracle import (
    INFEASIBLE,
    OPTIMAL,
    LinearConstraint,
    LinearObjective,
    MaxPlusObjective,
    Subproblem,
)


@pytest.fixture
def toy() -> NrpInstance:
    """Three requirements, two stakeholders; the front is known by hand."""
    return NrpInstance(
        name="toy",
        costs=(2, 3, 4),
        weights=(5, 4),
        requests=(frozenset({2}), frozenset({3})),
        precedence=frozenset({(1, 2)}),
    )


TOY_FRONT = [(-9, 9), (-5, 5), (-4, 4), (0, 0)]
TOY_NADIR = (0, 9)
TOY_TOTAL_HV = 24


def full_enumeration_front(instance: NrpInstance) -> list[tuple[int, int]]:
    """Front by brute force over all 2^(n+m) assignments, pure Python."""
    n, m = instance.n, instance.m
    images = set()
    for code in range(1 << (n + m)):
        r = tuple((code >> i) & 1 for i in range(n))
        s = tuple((code >> (n + k)) & 1 for k in range(m))
        sol = Solution(r, s)
        if feasible(instance, sol):
            images.add(evaluate(instance, sol).as_pair())
    front = []
    for cand in images:
        if not any(
            o != cand and o[0] <= cand[0] and o[1] <= cand[1] for o in images
        ):
            front.append(cand)
    return sorted(front)


def enumerate_subproblem(sub: Subproblem):
    """Vectorized ground truth for a subproblem: (status, optimal value)."""
    n = sub.n_vars
    if n == 0:
        obj = sub.objective
        if isinstance(obj, LinearObjective):
            raw = obj.constant
        else:
            raw = max(obj.const_a, obj.const_b) + obj.const_aug
        return OPTIMAL, Fraction(raw, sub.scale)
    rows = 1 << n
    bits = ((np.arange(rows, dtype=np.int64)[:, None] >> np.arange(n)) & 1).astype(
        np.int64
    )
    mask = np.ones(rows, dtype=bool)
    for a, b in sub.implications:
        mask &= bits[:, a] >= bits[:, b]
    for ct in sub.constraints:
        mask &= bits @ np.asarray(ct.coeffs, dtype=np.int64) <= ct.bound
    if not mask.any():
        return INFEASIBLE, None
    obj = sub.objective
    if isinstance(obj, LinearObjective):
        values = bits @ np.asarray(obj.coeffs, dtype=np.int64) + obj.constant
    else:
        va = bits @ np.asarray(obj.form_a, dtype=np.int64) + obj.const_a
        vb = bits @ np.asarray(obj.form_b, dtype=np.int64) + obj.const_b
        vg = bits @ np.asarray(obj.augment, dtype=np.int64) + obj.const_aug
        values = np.maximum(va, vb) + vg
    return OPTIMAL, Fraction(int(values[mask].min()), sub.scale)


def random_subproblem(rng: random.Random) -> Subproblem:
    n = rng.randint(1, 16)
    implications = tuple(
        (rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, n))
    )
    constraints = []
    for _ in range(rng.randint(0, 3)):
        coeffs = tuple(rng.randint(-5, 5) for _ in range(n))
        lo = sum(min(0, c) for c in coeffs)
        hi = sum(max(0, c) for c in coeffs)
        # occasionally below the reachable range to exercise infeasibility
        bound = rng.randint(lo - 3, hi)
        constraints.append(LinearConstraint(coeffs, bound))
    scale = rng.randint(1, 4)
    if rng.random() < 0.5:
        objective = LinearObjective(
            tuple(rng.randint(-9, 9) for _ in range(n)), rng.randint(-5, 5)
        )
    else:
        objective = MaxPlusObjective(
            form_a=tuple(rng.randint(-9, 9) for _ in range(n)),
            const_a=rng.randint(-5, 5),
            form_b=tuple(rng.randint(-9, 9) for _ in range(n)),
            const_b=rng.randint(-5, 5),
            augment=tuple(rng.randint(-3, 3) for _ in range(n)),
            const_aug=rng.randint(-3, 3),
        )
    return Subproblem(
        n_vars=n,
        implications=implications,
        constraints=tuple(constraints),
        objective=objective,
        scale=scale,
    )


def acceptance_instance(seed: int) -> NrpInstance:
    """The pinned desk-scale instance family used by the acceptance suite."""
    return generate_instance(
        GeneratorParams(
            n=8 + seed % 7,
            m=4 + seed % 5,
            max_cost=9,
            max_weight=9,
            precedence_density=0.08,
            request_density=0.25,
            seed=seed,
        )
    )
