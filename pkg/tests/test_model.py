"""Model construction, evaluation, feasibility and the JSON format."""

import random

import pytest

from releasefront.model import (
    InvalidInstanceError,
    LengthMismatchError,
    NrpInstance,
    Point,
    Solution,
    build_bi_objective,
    evaluate,
    feasible,
    instance_from_dict,
    instance_to_dict,
)

from conftest import full_enumeration_front


class TestBuildBiObjective:
    def test_toy_counts(self, toy):
        problem = build_bi_objective(toy)
        assert problem.n_vars == 5
        assert len(problem.implications) == 3  # one from precedence, two from requests
        assert problem.f1_coeffs == (0, 0, 0, -5, -4)
        assert problem.f2_coeffs == (2, 3, 4, 0, 0)

    def test_empty_request_set_rejected(self):
        with pytest.raises(InvalidInstanceError):
            NrpInstance("bad", (1, 2), (3,), (frozenset(),), frozenset())

    def test_minimal_instance(self):
        inst = NrpInstance("min", (1,), (1,), (frozenset({1}),), frozenset())
        problem = build_bi_objective(inst)
        assert problem.n_vars == 2
        assert problem.implications == ((0, 1),)

    def test_dangling_ids_rejected(self):
        with pytest.raises(InvalidInstanceError):
            NrpInstance("bad", (1,), (1,), (frozenset({2}),), frozenset())
        with pytest.raises(InvalidInstanceError):
            NrpInstance("bad", (1,), (1,), (frozenset({1}),), frozenset({(1, 2)}))

    def test_invalid_weight_and_cost(self):
        with pytest.raises(InvalidInstanceError):
            NrpInstance("bad", (-1,), (1,), (frozenset({1}),), frozenset())
        with pytest.raises(InvalidInstanceError):
            NrpInstance("bad", (1,), (0,), (frozenset({1}),), frozenset())


class TestEvaluate:
    def test_toy_partial_selection(self, toy):
        assert evaluate(toy, Solution((1, 1, 0), (1, 0))) == Point(-5, 5)

    def test_all_zero(self, toy):
        assert evaluate(toy, Solution((0, 0, 0), (0, 0))) == Point(0, 0)

    def test_toy_full_selection(self, toy):
        assert evaluate(toy, Solution((1, 1, 1), (1, 1))) == Point(-9, 9)

    def test_length_mismatch(self, toy):
        with pytest.raises(LengthMismatchError):
            evaluate(toy, Solution((1, 0), (0, 0)))


class TestFeasible:
    def test_missing_prerequisite(self, toy):
        assert not feasible(toy, Solution((0, 1, 0), (0, 0)))

    def test_all_zero_feasible(self, toy):
        assert feasible(toy, Solution((0, 0, 0), (0, 0)))

    def test_satisfied_request(self, toy):
        assert feasible(toy, Solution((0, 0, 1), (0, 1)))

    def test_unsatisfied_request(self, toy):
        assert not feasible(toy, Solution((0, 0, 0), (1, 0)))

    def test_length_mismatch(self, toy):
        with pytest.raises(LengthMismatchError):
            feasible(toy, Solution((0, 0, 0), (0,)))


class TestProperties:
    def test_objective_rectangle(self, toy):
        rng = random.Random(7)
        for _ in range(1000):
            sol = Solution(
                tuple(rng.randint(0, 1) for _ in range(toy.n)),
                tuple(rng.randint(0, 1) for _ in range(toy.m)),
            )
            p = evaluate(toy, sol)
            assert -toy.total_weight <= p.f1 <= 0
            assert 0 <= p.f2 <= toy.total_cost

    def test_closure_selection_always_feasible(self, toy):
        rng = random.Random(11)
        for _ in range(200):
            chosen = [k for k in range(1, toy.m + 1) if rng.random() < 0.5]
            sol = toy.select_stakeholders(chosen)
            assert feasible(toy, sol)

    def test_objective_vectors_match_evaluate(self, toy):
        from releasefront.bench import GeneratorParams, generate_instance

        generated = generate_instance(GeneratorParams(n=11, m=6, seed=77))
        for instance in (toy, generated):
            problem = build_bi_objective(instance)
            rng = random.Random(13)
            for _ in range(1000):
                bits = tuple(rng.randint(0, 1) for _ in range(problem.n_vars))
                sol = problem.solution_of(bits)
                assert problem.point_of(bits) == evaluate(instance, sol)

    def test_cycles_in_precedence_allowed(self):
        inst = NrpInstance(
            "cycle", (1, 2), (1,), (frozenset({1}),), frozenset({(1, 2), (2, 1)})
        )
        # a cycle merely forces equal selection of both requirements
        assert feasible(inst, Solution((1, 1), (1,)))
        assert not feasible(inst, Solution((1, 0), (0,)))
        assert full_enumeration_front(inst) == [(-1, 3), (0, 0)]


class TestJsonFormat:
    def test_round_trip(self, toy):
        doc = instance_to_dict(toy)
        assert set(doc) == {"name", "costs", "weights", "precedence", "requests"}
        back = instance_from_dict(doc)
        assert back == toy
        assert instance_to_dict(back) == doc

    def test_malformed_document(self):
        with pytest.raises(InvalidInstanceError):
            instance_from_dict({"name": "x", "costs": [1]})
        with pytest.raises(InvalidInstanceError):
            instance_from_dict(
                {"name": "x", "costs": [1], "weights": [1], "requests": [[2, [1]]]}
            )
