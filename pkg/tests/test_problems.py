import itertools
import math

import numpy as np
import pytest

from fireflyopt.core import EncodingViolation, RngStream
from fireflyopt.problems import (STEPPED_DEMO_TABLE, KnapsackInstance,
                                 OracleSizeError, TspInstance, benchmark_eval,
                                 benchmark_problem, brute_force_optimum,
                                 ContinuousBenchmark, knapsack_eval,
                                 load_knapsack, load_tsp, random_instance,
                                 random_key_problem, rastrigin, save_knapsack,
                                 save_tsp, sphere, stepped_demo_continuous,
                                 stepped_demo_curve, stepped_demo_integer,
                                 tsp_eval, tsp_problem)


class TestKnapsackEval:
    def test_empty_selection(self):
        inst = KnapsackInstance([2.0, 3.0], [3.0, 4.0], 4.0)
        assert knapsack_eval(inst, np.array([0, 0])) == 0.0

    def test_single_item(self):
        inst = KnapsackInstance([7.0], [1.0], 2.0)
        assert knapsack_eval(inst, np.array([1])) == -7.0

    def test_overweight_worse_than_feasible(self):
        inst = KnapsackInstance([2.0, 3.0], [3.0, 4.0], 4.0)
        both = knapsack_eval(inst, np.array([1, 1]))  # weight 7 > 4
        second = knapsack_eval(inst, np.array([0, 1]))
        assert second < both

    def test_infeasible_dominated_by_every_feasible(self):
        rng = RngStream(1)
        for trial in range(50):
            inst = random_instance("knapsack", 10, seed=trial)
            worst_feasible = 0.0  # the empty selection
            for _ in range(50):
                bits = (rng.uniform(10) < 0.7).astype(np.int64)
                score = knapsack_eval(inst, bits)
                weight = float(inst.weights @ bits)
                if weight > inst.capacity:
                    assert score > worst_feasible

    def test_tiny_overweight_still_dominated(self):
        # excess below one unit must still not beat any feasible selection
        inst = KnapsackInstance([10.0, 10.0], [5.0, 0.001], 5.0)
        infeasible = knapsack_eval(inst, np.array([1, 1]))
        assert infeasible > 0.0
        assert infeasible > knapsack_eval(inst, np.array([1, 0]))

    def test_length_check(self):
        inst = KnapsackInstance([1.0], [1.0], 1.0)
        with pytest.raises(ValueError):
            knapsack_eval(inst, np.array([1, 0]))


class TestTspEval:
    def test_triangle(self):
        d = np.ones((3, 3)) - np.eye(3)
        inst = TspInstance(d)
        assert tsp_eval(inst, np.array([1, 2, 3])) == 3.0

    def test_reversal_invariant(self):
        inst = random_instance("tsp", 6, seed=2)
        tour = np.array([3, 1, 4, 6, 2, 5])
        assert tsp_eval(inst, tour) == pytest.approx(tsp_eval(inst, tour[::-1]))

    def test_rotation_invariant(self):
        inst = random_instance("tsp", 6, seed=3)
        tour = np.array([3, 1, 4, 6, 2, 5])
        rotated = np.roll(tour, 2)
        assert tsp_eval(inst, tour) == pytest.approx(tsp_eval(inst, rotated))

    def test_unit_square_perimeter(self):
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
        diff = pts[:, None, :] - pts[None, :, :]
        inst = TspInstance(np.sqrt((diff ** 2).sum(axis=2)))
        assert tsp_eval(inst, np.array([1, 2, 3, 4])) == pytest.approx(4.0)

    def test_invalid_tour_rejected(self):
        inst = random_instance("tsp", 4, seed=4)
        with pytest.raises(EncodingViolation):
            tsp_eval(inst, np.array([1, 1, 2, 3]))
        with pytest.raises(EncodingViolation):
            tsp_eval(inst, np.array([0, 1, 2, 3]))


def _knapsack_optimum_by_recursion(inst):
    """Independent oracle: include/exclude recursion over items."""
    n = inst.n

    def go(k, weight, value):
        if weight > inst.capacity:
            return -math.inf
        if k == n:
            return value
        return max(go(k + 1, weight, value),
                   go(k + 1, weight + inst.weights[k], value + inst.values[k]))

    return go(0, 0.0, 0.0)


def _tsp_optimum_all_permutations(inst):
    """Independent oracle: scan every one of the n! closed tours."""
    n = inst.n
    best = math.inf
    for perm in itertools.permutations(range(1, n + 1)):
        best = min(best, tsp_eval(inst, np.asarray(perm)))
    return best


class TestBruteForce:
    def test_single_fitting_item(self):
        inst = KnapsackInstance([5.0], [1.0], 2.0)
        bits, value = brute_force_optimum(inst)
        assert list(bits) == [1] and value == -5.0

    def test_triangle_all_tours_equal(self):
        d = np.ones((3, 3)) - np.eye(3)
        tour, length = brute_force_optimum(TspInstance(d))
        assert length == 3.0 and sorted(tour) == [1, 2, 3]

    def test_double_entry_knapsack(self):
        for seed in range(10):
            inst = random_instance("knapsack", 10, seed=100 + seed)
            _, value = brute_force_optimum(inst)
            assert -value == pytest.approx(_knapsack_optimum_by_recursion(inst), abs=1e-9)

    def test_double_entry_tsp(self):
        for seed in range(10):
            inst = random_instance("tsp", 6, seed=200 + seed)
            _, length = brute_force_optimum(inst)
            assert length == pytest.approx(_tsp_optimum_all_permutations(inst), abs=1e-12)

    def test_dominates_random_sampling(self):
        inst = random_instance("knapsack", 10, seed=5)
        _, optimum = brute_force_optimum(inst)
        rng = RngStream(6)
        for _ in range(10_000):
            bits = (rng.uniform(10) < 0.5).astype(np.int64)
            if float(inst.weights @ bits) <= inst.capacity:
                assert knapsack_eval(inst, bits) >= optimum

    def test_size_guards(self):
        with pytest.raises(OracleSizeError):
            brute_force_optimum(random_instance("knapsack", 21, seed=7))
        with pytest.raises(OracleSizeError):
            brute_force_optimum(random_instance("tsp", 10, seed=8))

    def test_oracle_solution_consistent_with_value(self):
        inst = random_instance("knapsack", 12, seed=9)
        bits, value = brute_force_optimum(inst)
        assert knapsack_eval(inst, bits) == pytest.approx(value, abs=1e-12)


class TestRandomInstance:
    def test_same_seed_identical(self):
        a = random_instance("knapsack", 8, seed=10)
        b = random_instance("knapsack", 8, seed=10)
        assert np.array_equal(a.values, b.values)
        assert np.array_equal(a.weights, b.weights)
        assert a.capacity == b.capacity

    def test_capacity_excludes_everything(self):
        inst = random_instance("knapsack", 8, seed=11)
        assert inst.capacity < inst.weights.sum()

    def test_tsp_matrix_shape(self):
        inst = random_instance("tsp", 6, seed=12)
        assert np.allclose(inst.distances, inst.distances.T)
        assert np.all(np.diag(inst.distances) == 0)
        assert inst.distances.max() <= math.sqrt(2.0)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            random_instance("scheduling", 5, seed=13)


class TestBenchmarks:
    def test_sphere_origin(self):
        assert sphere(np.zeros(4)) == 0.0

    def test_rastrigin_origin(self):
        assert rastrigin(np.zeros(4)) == pytest.approx(0.0, abs=1e-9)

    def test_benchmark_eval_bounds(self):
        bench = ContinuousBenchmark("sphere", 2, -5.0, 5.0)
        assert benchmark_eval(bench, np.array([1.0, 2.0])) == 5.0
        with pytest.raises(ValueError):
            benchmark_eval(bench, np.array([9.0, 0.0]))

    def test_demo_phenomenon_by_enumeration(self):
        table_argmin = int(np.argmin(STEPPED_DEMO_TABLE))
        xs, ys = stepped_demo_curve()
        continuous_argmin = float(xs[int(np.argmin(ys))])
        rounded = int(math.floor(abs(continuous_argmin) + 0.5))
        assert rounded != table_argmin
        # the deep continuous dip undercuts the integer optimum
        assert ys.min() < STEPPED_DEMO_TABLE.min()

    def test_demo_table_lookup(self):
        for k, expected in enumerate(STEPPED_DEMO_TABLE):
            assert stepped_demo_integer(np.array([k])) == expected
        with pytest.raises(ValueError):
            stepped_demo_integer(np.array([11]))

    def test_demo_interpolates_table(self):
        for k, expected in enumerate(STEPPED_DEMO_TABLE):
            assert stepped_demo_continuous(np.array([float(k)])) == pytest.approx(expected, abs=1e-9)

    def test_benchmark_problem_defaults(self):
        problem = benchmark_problem("rastrigin", 3)
        assert problem.lower[0] == -5.12 and problem.upper[0] == 5.12
        with pytest.raises(ValueError):
            benchmark_problem("ackley")


class TestRandomKeyWrapper:
    def test_decoded_objective(self):
        inst = random_instance("tsp", 5, seed=14)
        wrapped = random_key_problem(tsp_problem(inst))
        keys = np.array([0.9, 0.1, 0.5, 0.3, 0.7])
        expected = tsp_eval(inst, np.array([2, 4, 3, 5, 1]))
        assert wrapped.objective(keys) == pytest.approx(expected)

    def test_requires_permutation_problem(self):
        with pytest.raises(ValueError):
            random_key_problem(benchmark_problem("sphere", 2))


class TestInstanceFiles:
    def test_knapsack_roundtrip(self, tmp_path):
        inst = random_instance("knapsack", 7, seed=15)
        path = tmp_path / "inst.knap"
        save_knapsack(inst, path)
        loaded = load_knapsack(path)
        assert np.array_equal(loaded.values, inst.values)
        assert np.array_equal(loaded.weights, inst.weights)
        assert loaded.capacity == inst.capacity

    def test_tsp_roundtrip(self, tmp_path):
        inst = random_instance("tsp", 5, seed=16)
        path = tmp_path / "inst.tsp"
        save_tsp(inst, path)
        loaded = load_tsp(path)
        assert np.array_equal(loaded.distances, inst.distances)

    def test_knapsack_truncated_file(self, tmp_path):
        path = tmp_path / "bad.knap"
        path.write_text("3 10.0\n1.0 2.0\n")
        with pytest.raises(ValueError):
            load_knapsack(path)

    def test_tsp_truncated_file(self, tmp_path):
        path = tmp_path / "bad.tsp"
        path.write_text("3\n0 1 2\n1 0 3\n")
        with pytest.raises(ValueError):
            load_tsp(path)

    def test_instance_validation(self):
        with pytest.raises(ValueError):
            KnapsackInstance([1.0, -1.0], [1.0, 1.0], 1.0)
        with pytest.raises(ValueError):
            TspInstance(np.array([[0.0, 1.0], [2.0, 0.0]]))
