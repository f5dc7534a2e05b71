"""Benchmark objectives, instance generation and I/O, and exhaustive oracles.

Everything is posed as minimization.  Knapsack is negated total value with a
penalty that makes every overweight selection strictly worse than every
feasible one; TSP is plain tour length.  The stepped integer demo is a fixed
1-D table on {0..10} whose smooth interpolation bottoms out between two
integers far from the integer argmin, so rounding a continuous search's
answer is suboptimal.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import partial

import numpy as np

from .core import DimensionMismatch, Encoding, EncodingViolation, ProblemDescriptor, RngStream
from .discretize import decode_random_key


class OracleSizeError(ValueError):
    """Instance too large for exhaustive enumeration."""


@dataclass(frozen=True)
class KnapsackInstance:
    values: np.ndarray
    weights: np.ndarray
    capacity: float

    def __post_init__(self):
        object.__setattr__(self, "values", np.asarray(self.values, dtype=np.float64))
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=np.float64))
        if len(self.values) != len(self.weights):
            raise ValueError("values and weights must have equal length")
        if np.any(self.values <= 0) or np.any(self.weights <= 0):
            raise ValueError("item values and weights must be positive")
        if self.capacity <= 0:
            raise ValueError(f"capacity must be positive, got {self.capacity}")

    @property
    def n(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class TspInstance:
    distances: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.distances, dtype=np.float64)
        object.__setattr__(self, "distances", d)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise ValueError(f"distance matrix must be square, got {d.shape}")
        if not np.allclose(d, d.T):
            raise ValueError("distance matrix must be symmetric")
        if np.any(np.diag(d) != 0):
            raise ValueError("distance matrix must have a zero diagonal")
        if np.any(d < 0):
            raise ValueError("distances must be non-negative")

    @property
    def n(self) -> int:
        return self.distances.shape[0]


def knapsack_eval(instance: KnapsackInstance, bits: np.ndarray) -> float:
    """Negated selected value; overweight selections pay M*(1 + excess) with
    M the total value of all items, so they always score worse than any
    feasible selection (the worst feasible score is 0, the empty pick)."""
    bits = np.asarray(bits)
    if len(bits) != instance.n:
        raise DimensionMismatch(f"expected {instance.n} bits, got {len(bits)}")
    value = float(instance.values @ bits)
    weight = float(instance.weights @ bits)
    if weight <= instance.capacity:
        return -value
    m = float(instance.values.sum())
    return -value + m * (1.0 + (weight - instance.capacity))


def tsp_eval(instance: TspInstance, tour: np.ndarray) -> float:
    """Length of the closed tour (1-based city labels)."""
    n = instance.n
    idx = np.asarray(tour, dtype=np.int64) - 1
    if idx.shape != (n,):
        raise EncodingViolation(f"expected a tour of {n} cities, got shape {idx.shape}")
    try:
        counts = np.bincount(idx, minlength=n)
    except ValueError:
        raise EncodingViolation("tour contains out-of-range cities") from None
    if counts.shape[0] != n or (counts != 1).any():
        raise EncodingViolation("tour is not a permutation of the cities")
    d = instance.distances
    return float(d[idx[:-1], idx[1:]].sum() + d[idx[-1], idx[0]])


def knapsack_problem(instance: KnapsackInstance) -> ProblemDescriptor:
    return ProblemDescriptor(instance.n, Encoding.BINARY,
                             partial(knapsack_eval, instance), name="knapsack")


def tsp_problem(instance: TspInstance) -> ProblemDescriptor:
    return ProblemDescriptor(instance.n, Encoding.PERMUTATION,
                             partial(tsp_eval, instance), name="tsp")


def _decoded_objective(inner, keys: np.ndarray) -> float:
    return inner(decode_random_key(keys))


def random_key_problem(perm_problem: ProblemDescriptor) -> ProblemDescriptor:
    """Wrap a permutation problem as a continuous search over sort keys."""
    if perm_problem.encoding is not Encoding.PERMUTATION:
        raise ValueError("random-key wrapping applies to permutation problems")
    return ProblemDescriptor(perm_problem.dimension, Encoding.RANDOM_KEY,
                             partial(_decoded_objective, perm_problem.objective),
                             name=perm_problem.name + "+random-key")


def brute_force_optimum(instance):
    """Exact optimum by exhaustive enumeration.

    Knapsack enumerates all 2^n subsets (n <= 20); TSP enumerates the
    (n-1)!/2 distinct closed tours with city 1 fixed first and reversals
    collapsed (n <= 9).  Returns (solution vector, objective value) in the
    framework's minimization convention.
    """
    if isinstance(instance, KnapsackInstance):
        n = instance.n
        if n > 20:
            raise OracleSizeError(f"knapsack enumeration capped at n=20, got {n}")
        best_value = -math.inf
        best_bits = np.zeros(n, dtype=np.int64)
        block = 1 << min(n, 16)
        lanes = np.arange(n, dtype=np.int64)
        for start in range(0, 1 << n, block):
            codes = np.arange(start, start + block, dtype=np.int64)
            bits = ((codes[:, None] >> lanes) & 1).astype(np.float64)
            weights = bits @ instance.weights
            values = bits @ instance.values
            values[weights > instance.capacity] = -math.inf
            k = int(np.argmax(values))
            if values[k] > best_value:
                best_value = float(values[k])
                best_bits = bits[k].astype(np.int64)
        return best_bits, -best_value
    if isinstance(instance, TspInstance):
        n = instance.n
        if n > 9:
            raise OracleSizeError(f"tour enumeration capped at n=9, got {n}")
        if n == 1:
            return np.asarray([1], dtype=np.int64), 0.0
        best_len = math.inf
        best_tour = None
        for rest in itertools.permutations(range(2, n + 1)):
            if len(rest) > 1 and rest[0] > rest[-1]:
                continue  # reversal symmetry: keep one orientation
            tour = np.asarray((1,) + rest, dtype=np.int64)
            length = tsp_eval(instance, tour)
            if length < best_len:
                best_len = length
                best_tour = tour
        return best_tour, best_len
    raise TypeError(f"no oracle for {type(instance).__name__}")


def random_instance(kind: str, size: int, seed: int):
    """Seeded random instance: knapsack with values/weights uniform in
    [1, 100] and capacity half the total weight, or TSP from points uniform
    in the unit square with Euclidean distances."""
    rng = RngStream(seed)
    if kind == "knapsack":
        values = 1.0 + 99.0 * rng.uniform(size)
        weights = 1.0 + 99.0 * rng.uniform(size)
        return KnapsackInstance(values, weights, capacity=float(weights.sum()) / 2.0)
    if kind == "tsp":
        pts = rng.uniform((size, 2))
        diff = pts[:, None, :] - pts[None, :, :]
        d = np.sqrt((diff * diff).sum(axis=2))
        np.fill_diagonal(d, 0.0)
        return TspInstance(d)
    raise ValueError(f"unknown instance kind {kind!r}")


# --- continuous benchmarks -------------------------------------------------

BENCHMARK_NAMES = ("sphere", "rastrigin", "stepped-integer-demo")


@dataclass(frozen=True)
class ContinuousBenchmark:
    name: str
    dimension: int
    lower: float
    upper: float


def sphere(x) -> float:
    x = np.asarray(x, dtype=np.float64)
    return float(x @ x)


def rastrigin(x) -> float:
    x = np.asarray(x, dtype=np.float64)
    return float(10.0 * len(x) + np.sum(x * x - 10.0 * np.cos(2.0 * math.pi * x)))


# Objective table of the stepped integer demo on x in {0..10}.  The integer
# argmin sits at x=1, while the natural cubic interpolation of these values
# dives well below zero between x=5 and x=6, so the continuous argmin rounds
# to 5 or 6.
STEPPED_DEMO_TABLE = np.asarray(
    [30.0, 0.0, 30.0, 36.0, 40.0, 2.0, 2.0, 40.0, 36.0, 30.0, 34.0])

_DEMO_SPLINE = None


def _demo_spline():
    global _DEMO_SPLINE
    if _DEMO_SPLINE is None:
        from scipy.interpolate import CubicSpline
        _DEMO_SPLINE = CubicSpline(np.arange(len(STEPPED_DEMO_TABLE)),
                                   STEPPED_DEMO_TABLE, bc_type="natural")
    return _DEMO_SPLINE


def stepped_demo_integer(x) -> float:
    """Table value at an integer point of the demo."""
    k = int(np.asarray(x).reshape(-1)[0])
    if not 0 <= k < len(STEPPED_DEMO_TABLE):
        raise ValueError(f"demo table is defined on 0..{len(STEPPED_DEMO_TABLE) - 1}, got {k}")
    return float(STEPPED_DEMO_TABLE[k])


def stepped_demo_continuous(x) -> float:
    """Natural cubic interpolation of the demo table."""
    v = float(np.asarray(x).reshape(-1)[0])
    return float(_demo_spline()(v))


def stepped_demo_curve(n_points: int = 100_001):
    """(xs, ys) of the demo interpolation sampled over its whole domain."""
    xs = np.linspace(0.0, float(len(STEPPED_DEMO_TABLE) - 1), n_points)
    return xs, np.asarray(_demo_spline()(xs))


def stepped_demo_integer_problem() -> ProblemDescriptor:
    return ProblemDescriptor(1, Encoding.INTEGER, stepped_demo_integer,
                             lower=0, upper=len(STEPPED_DEMO_TABLE) - 1,
                             name="stepped-integer-demo")


def stepped_demo_continuous_problem() -> ProblemDescriptor:
    return ProblemDescriptor(1, Encoding.REAL, stepped_demo_continuous,
                             lower=0.0, upper=float(len(STEPPED_DEMO_TABLE) - 1),
                             name="stepped-integer-demo/continuous")


def benchmark_eval(benchmark: ContinuousBenchmark, x) -> float:
    """Evaluate a named benchmark at an in-bounds point."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (benchmark.dimension,):
        raise DimensionMismatch(f"expected {benchmark.dimension} coordinates, got {x.shape}")
    if np.any(x < benchmark.lower) or np.any(x > benchmark.upper):
        raise ValueError("point outside benchmark bounds")
    if benchmark.name == "sphere":
        return sphere(x)
    if benchmark.name == "rastrigin":
        return rastrigin(x)
    if benchmark.name == "stepped-integer-demo":
        return stepped_demo_integer(x)
    raise ValueError(f"unknown benchmark {benchmark.name!r}")


def benchmark_problem(name: str, dimension: int = 2,
                      lower=None, upper=None) -> ProblemDescriptor:
    """Real-encoded sphere/rastrigin with default boxes [-5,5] and
    [-5.12,5.12], or the integer demo (always 1-D on {0..10})."""
    if name == "sphere":
        lo = -5.0 if lower is None else lower
        hi = 5.0 if upper is None else upper
        return ProblemDescriptor(dimension, Encoding.REAL, sphere, lo, hi, name="sphere")
    if name == "rastrigin":
        lo = -5.12 if lower is None else lower
        hi = 5.12 if upper is None else upper
        return ProblemDescriptor(dimension, Encoding.REAL, rastrigin, lo, hi, name="rastrigin")
    if name == "stepped-integer-demo":
        return stepped_demo_integer_problem()
    raise ValueError(f"unknown benchmark {name!r}")


# --- instance files ---------------------------------------------------------


def save_knapsack(instance: KnapsackInstance, path) -> None:
    """Plain text: line 1 is "n capacity", then one "value weight" line per item."""
    lines = [f"{instance.n} {instance.capacity!r}"]
    for v, w in zip(instance.values, instance.weights):
        lines.append(f"{float(v)!r} {float(w)!r}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_knapsack(path) -> KnapsackInstance:
    with open(path, encoding="ascii") as fh:
        tokens = fh.read().split()
    if len(tokens) < 2:
        raise ValueError(f"{path}: missing knapsack header")
    n = int(tokens[0])
    capacity = float(tokens[1])
    body = tokens[2:]
    if len(body) != 2 * n:
        raise ValueError(f"{path}: expected {2 * n} item numbers, found {len(body)}")
    values = np.asarray([float(body[2 * k]) for k in range(n)])
    weights = np.asarray([float(body[2 * k + 1]) for k in range(n)])
    return KnapsackInstance(values, weights, capacity)


def save_tsp(instance: TspInstance, path) -> None:
    """Plain text: line 1 is "n", then n rows of n distances."""
    lines = [str(instance.n)]
    for row in instance.distances:
        lines.append(" ".join(repr(float(v)) for v in row))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_tsp(path) -> TspInstance:
    with open(path, encoding="ascii") as fh:
        tokens = fh.read().split()
    if not tokens:
        raise ValueError(f"{path}: empty TSP file")
    n = int(tokens[0])
    body = tokens[1:]
    if len(body) != n * n:
        raise ValueError(f"{path}: expected {n * n} distances, found {len(body)}")
    d = np.asarray([float(t) for t in body]).reshape(n, n)
    return TspInstance(d)
