"""Shared primitives: encodings, problem model, seeded randomness, ranking, distances.

Everything here is encoding-agnostic plumbing used by both the continuous
engine and the native discrete engines.  Solutions are plain value vectors
tagged by their problem's encoding; brightness is never materialized as a
separate quantity, comparisons always use the raw objective ("brighter"
means strictly smaller objective, minimization throughout).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

MASK64 = 0xFFFFFFFFFFFFFFFF


class Encoding(Enum):
    REAL = "real"
    BINARY = "binary"
    INTEGER = "integer"
    PERMUTATION = "permutation"
    RANDOM_KEY = "random-key"


class EncodingViolation(ValueError):
    """A value vector does not satisfy its encoding's invariants."""


class InvalidObjective(ValueError):
    """An objective value is NaN or otherwise unusable for comparison."""


class DimensionMismatch(ValueError):
    """Vectors of different lengths were combined."""


class ContractViolation(RuntimeError):
    """An operation was called outside its stated precondition."""


def derive_seed(master_seed: int, index: int) -> int:
    """Mix (master seed, stream index) into an independent 64-bit seed.

    Uses the splitmix64 finalizer as the avalanche mix, so adjacent indices
    produce statistically independent streams.
    """
    z = (master_seed + (index + 1) * 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


class RngStream:
    """Seeded, single-owner stream of uniform draws on [0, 1).

    Backed by the counter-based Philox generator: an identical seed always
    reproduces the identical draw sequence.  A stream must never be shared
    between concurrent runs; derive one per replicate with `spawn` or
    `derive_seed`.
    """

    def __init__(self, seed: int):
        self.seed = int(seed) & MASK64
        self._gen = np.random.Generator(np.random.Philox(key=self.seed))

    def uniform(self, size=None):
        """Uniform draw(s) on [0, 1); scalar float when size is None."""
        out = self._gen.random(size)
        return float(out) if size is None else out

    def integers(self, low, high, size=None):
        """Uniform integer draw(s) on [low, high], endpoints inclusive."""
        out = self._gen.integers(low, high, size=size, endpoint=True)
        return int(out) if size is None else out

    def normal(self, scale=1.0, size=None):
        out = self._gen.normal(0.0, scale, size)
        return float(out) if size is None else out

    def permutation(self, n: int) -> np.ndarray:
        """Uniform random permutation of {1..n}."""
        return (self._gen.permutation(n) + 1).astype(np.int64)

    def sample_indices(self, n: int, k: int) -> np.ndarray:
        """k indices drawn from {0..n-1} without replacement."""
        return self._gen.choice(n, size=k, replace=False)

    def spawn(self, index: int) -> "RngStream":
        """Independent child stream keyed off this stream's seed."""
        return RngStream(derive_seed(self.seed, index))


@dataclass
class ProblemDescriptor:
    """A minimization task: dimension, encoding, box bounds, objective handle.

    `lower`/`upper` apply to REAL and INTEGER encodings (RANDOM_KEY is fixed
    to [0, 1]); BINARY and PERMUTATION carry no bounds.  The objective maps a
    feasible value vector to a finite float; smaller is better.
    """

    dimension: int
    encoding: Encoding
    objective: Callable[[np.ndarray], float]
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    name: str = ""

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if self.encoding is Encoding.RANDOM_KEY:
            self.lower = np.zeros(self.dimension)
            self.upper = np.ones(self.dimension)
        if self.encoding in (Encoding.BINARY, Encoding.PERMUTATION):
            self.lower = None
            self.upper = None
        if self.lower is not None:
            dtype = np.int64 if self.encoding is Encoding.INTEGER else np.float64
            self.lower = np.broadcast_to(np.asarray(self.lower, dtype=dtype), (self.dimension,)).copy()
            self.upper = np.broadcast_to(np.asarray(self.upper, dtype=dtype), (self.dimension,)).copy()
            if not np.all(self.lower < self.upper):
                raise ValueError("lower bound must be strictly below upper bound in every dimension")

    def validate(self, values: np.ndarray) -> None:
        """Raise EncodingViolation unless `values` is feasible for this problem."""
        values = np.asarray(values)
        if values.shape != (self.dimension,):
            raise EncodingViolation(
                f"expected shape ({self.dimension},), got {values.shape}")
        enc = self.encoding
        if enc is Encoding.REAL:
            if not np.all(np.isfinite(values)):
                raise EncodingViolation("real vector contains non-finite entries")
            if self.lower is not None and (np.any(values < self.lower) or np.any(values > self.upper)):
                raise EncodingViolation("real vector outside bounds")
        elif enc is Encoding.BINARY:
            if not np.all((values == 0) | (values == 1)):
                raise EncodingViolation("binary vector has entries outside {0,1}")
        elif enc is Encoding.INTEGER:
            if not np.all(values == np.floor(values)):
                raise EncodingViolation("integer vector has fractional entries")
            if np.any(values < self.lower) or np.any(values > self.upper):
                raise EncodingViolation("integer vector outside bounds")
        elif enc is Encoding.PERMUTATION:
            if not np.array_equal(np.sort(values), np.arange(1, self.dimension + 1)):
                raise EncodingViolation("vector is not a permutation of {1..n}")
        elif enc is Encoding.RANDOM_KEY:
            if np.any(values < 0.0) or np.any(values > 1.0):
                raise EncodingViolation("random keys outside [0,1]")


@dataclass
class Solution:
    """A value vector plus its (possibly not yet computed) objective."""

    values: np.ndarray
    objective: Optional[float] = None

    @property
    def evaluated(self) -> bool:
        return self.objective is not None

    def copy(self) -> "Solution":
        return Solution(self.values.copy(), self.objective)


@dataclass
class Swarm:
    """Ordered population with iteration counter and best-so-far record.

    `best` is a defensive copy updated through `observe`; it only improves,
    so its objective is a lower bound on every objective ever seen.
    """

    members: list
    itr: int = 0
    max_itr: int = 0
    best: Optional[Solution] = None

    def observe(self, solution: Solution) -> None:
        """Fold a freshly evaluated solution into the best-so-far record."""
        if self.best is None or solution.objective < self.best.objective:
            self.best = solution.copy()


@dataclass
class TrialRecord:
    """Outcome of one seeded run: convergence trace plus final statistics.

    `best_trace[0]` is the best objective after initialization and
    `best_trace[t]` the best-so-far after iteration t, so the trace has
    max_itr + 1 entries and is non-increasing.  `evals_trace` holds the
    cumulative evaluation count at the same points.  `elapsed_ms` is
    informational only and never serialized into reproducible outputs.
    """

    replicate: int
    seed: int
    best_trace: list = field(default_factory=list)
    evals_trace: list = field(default_factory=list)
    best_values: Optional[np.ndarray] = None
    best_objective: float = math.inf
    evaluations: int = 0
    elapsed_ms: float = 0.0


def evaluate(problem: ProblemDescriptor, solution: Solution) -> float:
    """Evaluate the objective at `solution`, caching the result on it."""
    problem.validate(solution.values)
    f = float(problem.objective(solution.values))
    if math.isnan(f):
        raise InvalidObjective(f"objective returned NaN for {solution.values!r}")
    solution.objective = f
    return f


def is_brighter(f_a: float, f_b: float) -> bool:
    """True iff objective f_a is strictly better (smaller) than f_b."""
    if math.isnan(f_a) or math.isnan(f_b):
        raise InvalidObjective("cannot compare NaN objectives")
    return f_a < f_b


def rank(population: Sequence[Solution]) -> np.ndarray:
    """Rank vector over an evaluated population: 1 = smallest objective.

    Ties are broken by insertion index, so the result is always a
    permutation of {1..N}.
    """
    fs = []
    for k, member in enumerate(population):
        if not member.evaluated:
            raise ValueError(f"member {k} is unevaluated")
        fs.append(member.objective)
    order = np.argsort(np.asarray(fs), kind="stable")
    ranks = np.empty(len(fs), dtype=np.int64)
    ranks[order] = np.arange(1, len(fs) + 1)
    return ranks


def init_population(problem: ProblemDescriptor, n_pop: int, rng: RngStream) -> Swarm:
    """Draw N feasible solutions uniformly for the problem's encoding."""
    if n_pop < 1:
        raise ValueError(f"population size must be >= 1, got {n_pop}")
    n = problem.dimension
    members = []
    for _ in range(n_pop):
        enc = problem.encoding
        if enc is Encoding.REAL:
            u = rng.uniform(n)
            values = problem.lower + u * (problem.upper - problem.lower)
        elif enc is Encoding.BINARY:
            values = rng.integers(0, 1, size=n).astype(np.int64)
        elif enc is Encoding.INTEGER:
            values = rng.integers(problem.lower, problem.upper, size=n).astype(np.int64)
        elif enc is Encoding.PERMUTATION:
            values = rng.permutation(n)
        elif enc is Encoding.RANDOM_KEY:
            values = rng.uniform(n)
        members.append(Solution(values))
    return Swarm(members=members)


def distance_euclidean(x: np.ndarray, y: np.ndarray) -> float:
    """Euclidean norm of x - y."""
    if len(x) != len(y):
        raise DimensionMismatch(f"length {len(x)} vs {len(y)}")
    d = np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64)
    return float(math.sqrt(d @ d))


def distance_hamming(x: np.ndarray, y: np.ndarray) -> int:
    """Number of positions where two discrete vectors differ."""
    if len(x) != len(y):
        raise DimensionMismatch(f"length {len(x)} vs {len(y)}")
    return int(np.count_nonzero(np.asarray(x) != np.asarray(y)))


def clamp_to_bounds(x: np.ndarray, lower: Optional[np.ndarray], upper: Optional[np.ndarray]) -> np.ndarray:
    """Project each coordinate onto [lower, upper]; identity when unbounded."""
    if lower is None:
        return np.asarray(x).copy()
    return np.clip(x, lower, upper)
