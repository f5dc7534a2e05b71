"""Native discrete-space update schemes over binary, integer, and permutation
encodings: Hamming-distance attraction with probabilistic entry copying and a
rounded random step, familiarity-driven attraction, brightest-following,
swap-based moves, inversion-mutation pool selection for tours, per-dimension
updates restricted to a growing visual range, and a rank-gated scheme with
bounded attraction plus elite random flights and local search.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (ContractViolation, DimensionMismatch, Encoding,
                   ProblemDescriptor, RngStream, Solution, Swarm, TrialRecord,
                   distance_hamming, init_population, rank)
from .discretize import round_half_away, round_to_integer
from .schedules import AlphaSchedule, alpha_at, constant_alpha, floor_dim

VARIANTS = (
    "hamming-beta-alpha", "familiarity", "rho-follow", "swap-fixed",
    "swap-gamma", "tsp-inversion", "visual-range", "knapsack-gated",
)

_BETA_ALPHA_FAMILY = ("hamming-beta-alpha", "familiarity", "rho-follow")
_SWAP_FAMILY = ("swap-fixed", "swap-gamma")

_COMPATIBLE = {
    "hamming-beta-alpha": (Encoding.BINARY, Encoding.INTEGER, Encoding.PERMUTATION),
    "familiarity": (Encoding.BINARY, Encoding.INTEGER, Encoding.PERMUTATION),
    "rho-follow": (Encoding.BINARY, Encoding.INTEGER, Encoding.PERMUTATION),
    "swap-fixed": (Encoding.BINARY, Encoding.INTEGER, Encoding.PERMUTATION),
    "swap-gamma": (Encoding.BINARY, Encoding.INTEGER, Encoding.PERMUTATION),
    "tsp-inversion": (Encoding.PERMUTATION,),
    "visual-range": (Encoding.BINARY, Encoding.INTEGER),
    "knapsack-gated": (Encoding.BINARY,),
}


@dataclass
class DiscreteVariantConfig:
    """Which native-discrete scheme to run and its knobs.

    `alpha_schedule` feeds the rounded random step of the beta/alpha family
    (defaults: dimension staircase for `familiarity`, constant 2.0 otherwise).
    `move_brightest` controls the mandatory end-of-generation random move of
    the brightest firefly; left as None it is on for the beta/alpha and swap
    families and off for the schemes that define their own exploration.
    """

    variant: str
    n_pop: int = 25
    max_itr: int = 100
    gamma: float = 0.1
    alpha_schedule: Optional[AlphaSchedule] = None
    m: int = 2
    beta0: float = 1.0
    alpha: float = 1.0
    dv_max: float = 3.0
    dv_min: float = 0.2
    omega: float = 0.5
    elite_flight: bool = True
    local_search: bool = True
    flight_alpha: float = 2.0
    move_brightest: Optional[bool] = None
    literal_zero: bool = False

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown discrete variant {self.variant!r}")
        if self.n_pop < 1:
            raise ValueError(f"n_pop must be >= 1, got {self.n_pop}")
        if self.max_itr < 1:
            raise ValueError(f"max_itr must be >= 1, got {self.max_itr}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if not self.dv_min < self.dv_max:
            raise ValueError(f"dv_min {self.dv_min} must be below dv_max {self.dv_max}")
        if self.omega <= 0:
            raise ValueError(f"omega must be > 0, got {self.omega}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")


def beta_of_hamming(gamma: float, d: int) -> float:
    """Attraction probability 1/(1 + gamma * d^2) at Hamming distance d."""
    if d < 0:
        raise ValueError(f"distance must be >= 0, got {d}")
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    return 1.0 / (1.0 + gamma * d * d)


def _swap_to_value(values: list, k: int, v: int) -> None:
    # Swap the entry holding v into position k; keeps the vector a permutation.
    l = values.index(v)
    values[l] = values[k]
    values[k] = v


def beta_step(xi: np.ndarray, xj: np.ndarray, beta: float, rng: RngStream,
              encoding: Encoding) -> np.ndarray:
    """Attraction move: entries equal in xi and xj are preserved; each
    differing entry is copied from xj with a fresh rand < beta (one uniform
    is drawn per component).

    Permutations stay bijective because a differing entry is copied by
    swapping the entry that currently holds xj's value into place.
    """
    n = len(xi)
    if n != len(xj):
        raise DimensionMismatch(f"length {n} vs {len(xj)}")
    u = rng.uniform(n)
    if encoding is Encoding.PERMUTATION:
        out = [int(v) for v in xi]
        for k in range(n):
            want = int(xj[k])
            if out[k] != want and u[k] < beta:
                _swap_to_value(out, k, want)
        return np.asarray(out, dtype=np.int64)
    out = np.asarray(xi).copy()
    xj = np.asarray(xj)
    copy_mask = (out != xj) & (u < beta)
    out[copy_mask] = xj[copy_mask]
    return out


def alpha_step(xi: np.ndarray, alpha: float, rng: RngStream, encoding: Encoding,
               lower=None, upper=None) -> np.ndarray:
    """Random move: round(xi + alpha * (rand - 0.5)) per component.

    Binary vectors clamp to {0,1}, integer vectors to their bounds; for
    permutations every collision is resolved by swapping the duplicated value
    with the displaced one, so the result is always a valid permutation.
    """
    n = len(xi)
    u = rng.uniform(n)
    if encoding is Encoding.PERMUTATION:
        targets = round_half_away(np.asarray(xi, dtype=np.float64) + alpha * (u - 0.5))
        out = [int(v) for v in xi]
        for k in range(n):
            t = min(max(int(targets[k]), 1), n)
            if t != out[k]:
                _swap_to_value(out, k, t)
        return np.asarray(out, dtype=np.int64)
    if encoding is Encoding.BINARY:
        lower, upper = 0, 1
    return round_to_integer(np.asarray(xi, dtype=np.float64) + alpha * (u - 0.5), lower, upper)


def init_familiarity(n_pop: int, rng: RngStream) -> np.ndarray:
    """Fresh pairwise familiarity accumulator with random non-negative entries."""
    return rng.uniform(size=(n_pop, n_pop))


def familiarity_update(P: np.ndarray, ranks: np.ndarray) -> np.ndarray:
    """Add 1/|rank_i - rank_j| to every off-diagonal entry; diagonal untouched."""
    ranks = np.asarray(ranks, dtype=np.float64)
    gap = np.abs(ranks[:, None] - ranks[None, :])
    np.fill_diagonal(gap, 1.0)
    inc = 1.0 / gap
    np.fill_diagonal(inc, 0.0)
    return P + inc


def familiarity_beta(P: np.ndarray, i: int, j: int) -> float:
    """exp(-(max_k P_ik - P_ij)^2 / max_k P_ik); the max runs over k != i."""
    row = P[i]
    mask = np.ones(len(row), dtype=bool)
    mask[i] = False
    m = float(np.max(row[mask]))
    if m <= 0.0:
        raise ValueError(f"familiarity row {i} is degenerate (max is {m})")
    gap = m - float(P[i, j])
    return math.exp(-(gap * gap) / m)


def rho_at(itr: int, max_itr: int) -> float:
    """Probability of following the brighter partner rather than the swarm's
    brightest: 0.5 + 0.5 * itr/max_itr, rising from 0.5 to 1."""
    if not 0 <= itr <= max_itr:
        raise ValueError(f"itr must be in [0, {max_itr}], got {itr}")
    return 0.5 + 0.5 * itr / max_itr


def swap_move(xi: np.ndarray, xj: np.ndarray, R: int, rng: RngStream,
              encoding: Encoding) -> np.ndarray:
    """Copy xj's value into R uniformly chosen differing positions (without
    replacement, R capped at the Hamming distance); no-op when xi == xj."""
    if len(xi) != len(xj):
        raise DimensionMismatch(f"length {len(xi)} vs {len(xj)}")
    differ = np.nonzero(np.asarray(xi) != np.asarray(xj))[0]
    r = differ.size
    if r == 0:
        return np.asarray(xi).copy()
    if R < 1:
        raise ValueError(f"R must be >= 1, got {R}")
    R = min(R, r)
    positions = differ[rng.sample_indices(r, R)]
    if encoding is Encoding.PERMUTATION:
        out = [int(v) for v in xi]
        for k in positions:
            want = int(xj[k])
            if out[k] != want:
                _swap_to_value(out, int(k), want)
        return np.asarray(out, dtype=np.int64)
    out = np.asarray(xi).copy()
    out[positions] = np.asarray(xj)[positions]
    return out


def draw_swap_count(kind: str, r: int, gamma: float, itr: int, rng: RngStream) -> int:
    """Number of positions a swap move copies.

    swap-fixed draws uniformly from [1, r]; swap-gamma draws from
    [2, max(2, floor(r * gamma**itr))] and its caller accepts the move only
    when it improves.
    """
    if r < 1:
        raise ValueError(f"r must be >= 1, got {r}")
    if kind == "swap-fixed":
        return rng.integers(1, r)
    if kind == "swap-gamma":
        hi = max(2, int(math.floor(r * gamma ** itr)))
        return rng.integers(2, hi)
    raise ValueError(f"unknown swap variant {kind!r}")


def _tour_edges(tour: np.ndarray) -> set:
    n = len(tour)
    edges = set()
    for k in range(n):
        a, b = int(tour[k]), int(tour[(k + 1) % n])
        edges.add((a, b) if a < b else (b, a))
    return edges


def tsp_move_distance(tour_a: np.ndarray, tour_b: np.ndarray) -> float:
    """10 * A / n where A counts undirected edges of tour_a absent in tour_b."""
    if len(tour_a) != len(tour_b):
        raise DimensionMismatch(f"length {len(tour_a)} vs {len(tour_b)}")
    a = len(_tour_edges(tour_a) - _tour_edges(tour_b))
    return 10.0 * a / len(tour_a)


def inversion_moves(xi: np.ndarray, m: int, rng: RngStream) -> list:
    """m candidate tours, each obtained by reversing one uniformly chosen
    segment of xi; inversion preserves bijectivity."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    n = len(xi)
    candidates = []
    for _ in range(m):
        a, b = sorted(int(v) for v in rng.sample_indices(n, 2))
        cand = np.asarray(xi).copy()
        cand[a:b + 1] = cand[a:b + 1][::-1]
        candidates.append(cand)
    return candidates


def visual_range_at(dv_min: float, dv_max: float, itr: int, max_itr: int) -> float:
    """Visual range at iteration itr: ramps as 3*(dv_max-dv_min)*itr /
    (2*(max_itr-1)) while itr < 2*max_itr/3, then holds at dv_max."""
    if max_itr < 2:
        raise ValueError(f"max_itr must be >= 2, got {max_itr}")
    if itr < 0:
        raise ValueError(f"itr must be >= 0, got {itr}")
    if 3 * itr < 2 * max_itr:
        return 3.0 * (dv_max - dv_min) * itr / (2.0 * (max_itr - 1))
    return dv_max


def per_dim_update(xi: np.ndarray, xj: np.ndarray, alpha: float, beta0: float,
                   gamma: float, r: float, rng: RngStream, *,
                   literal_zero: bool = False,
                   f_i: Optional[float] = None, f_j: Optional[float] = None,
                   dv: Optional[float] = None) -> np.ndarray:
    """Per-dimension attraction: with a fresh rand for each component k, copy
    xj(k) when alpha*|rand - 0.5| < beta0*exp(-gamma*r^2) and the entries
    differ; equal entries are kept (or zeroed when `literal_zero`, binary only).

    Pass f_i/f_j and dv to enforce the brighter-target and visual-range
    contracts.
    """
    if f_i is not None and f_j is not None and not f_j < f_i:
        raise ContractViolation("per_dim_update requires a strictly brighter target")
    if dv is not None and r > dv:
        raise ContractViolation(f"target at distance {r} is outside visual range {dv}")
    xi = np.asarray(xi)
    xj = np.asarray(xj)
    u = rng.uniform(len(xi))
    fire = alpha * np.abs(u - 0.5) < beta0 * math.exp(-gamma * r * r)
    differ = xi != xj
    out = xi.copy()
    out[fire & differ] = xj[fire & differ]
    if literal_zero:
        out[fire & ~differ] = 0
    return out


def knapsack_move_gate(rank_i: int, itr: int, max_itr: int, rng: RngStream) -> bool:
    """Move gate rand < rank_i**(-((itr-1) mod max_itr)/max_itr); always open
    for the best-ranked firefly and on the first iteration."""
    if rank_i < 1:
        raise ValueError(f"rank must be >= 1, got {rank_i}")
    p = rank_i ** (-((itr - 1) % max_itr) / max_itr)
    return rng.uniform() < p


def beta_bounded(beta0: float, omega: float, r: float) -> float:
    """beta0 / (omega + r): attraction that stays finite at distance zero."""
    if omega <= 0:
        raise ValueError(f"omega must be > 0, got {omega}")
    if r < 0:
        raise ValueError(f"distance must be >= 0, got {r}")
    return beta0 / (omega + r)


def _elementary_perturb(values: np.ndarray, encoding: Encoding, rng: RngStream,
                        lower=None, upper=None) -> np.ndarray:
    """One minimal feasible move: flip a bit, nudge one coordinate by +-1, or
    swap two permutation positions."""
    out = np.asarray(values).copy()
    n = len(out)
    if encoding is Encoding.BINARY:
        k = rng.integers(0, n - 1)
        out[k] = 1 - out[k]
    elif encoding is Encoding.INTEGER:
        k = rng.integers(0, n - 1)
        step = 1 if rng.uniform() < 0.5 else -1
        lo = int(lower[k]) if lower is not None else None
        hi = int(upper[k]) if upper is not None else None
        v = out[k] + step
        if lo is not None:
            v = min(max(v, lo), hi)
        out[k] = v
    else:
        a, b = (int(v) for v in rng.sample_indices(n, 2))
        out[a], out[b] = out[b], out[a]
    return out


def elite_random_flight(swarm: Swarm, objective, encoding: Encoding, rng: RngStream, *,
                        flight_prob: float = 0.45, alpha: float = 2.0,
                        lower=None, upper=None) -> int:
    """Each of the top 10% (rounded up) of fireflies takes, with probability
    `flight_prob`, a random feasible flight that is kept only if it strictly
    improves.  Returns the number of evaluations spent."""
    members = swarm.members
    n_top = (len(members) + 9) // 10
    order = np.argsort(np.asarray([m.objective for m in members]), kind="stable")
    evals = 0
    for idx in order[:n_top]:
        if not rng.uniform() < flight_prob:
            continue
        member = members[idx]
        if encoding is Encoding.PERMUTATION:
            cand = inversion_moves(member.values, 1, rng)[0]
        else:
            cand = alpha_step(member.values, alpha, rng, encoding, lower, upper)
        f = float(objective(cand))
        evals += 1
        if f < member.objective:
            member.values = cand
            member.objective = f
            swarm.observe(member)
    return evals


def local_search_brightest(swarm: Swarm, objective, encoding: Encoding,
                           rng: RngStream, itr: int, max_itr: int, *,
                           lower=None, upper=None) -> int:
    """After the first 10% of the iterations, the brightest member samples one
    elementary neighbor and keeps it only on strict improvement."""
    if 10 * itr <= max_itr:
        return 0
    members = swarm.members
    idx = int(np.argmin(np.asarray([m.objective for m in members])))
    member = members[idx]
    cand = _elementary_perturb(member.values, encoding, rng, lower, upper)
    f = float(objective(cand))
    if f < member.objective:
        member.values = cand
        member.objective = f
        swarm.observe(member)
    return 1


class _DiscreteRun:
    """State of one seeded discrete run; composes the per-variant generations."""

    def __init__(self, problem: ProblemDescriptor, config: DiscreteVariantConfig,
                 rng: RngStream):
        if problem.encoding not in _COMPATIBLE[config.variant]:
            raise ValueError(
                f"variant {config.variant!r} does not support {problem.encoding.value} encoding")
        if config.variant == "visual-range" and config.max_itr < 2:
            raise ValueError("visual-range needs max_itr >= 2")
        if config.literal_zero and problem.encoding is not Encoding.BINARY:
            raise ValueError("literal_zero applies to binary encodings only")
        self.problem = problem
        self.config = config
        self.rng = rng
        self.evals = 0
        if config.alpha_schedule is not None:
            self.alpha_schedule = config.alpha_schedule
        elif config.variant == "familiarity":
            self.alpha_schedule = floor_dim(problem.dimension)
        else:
            self.alpha_schedule = constant_alpha(2.0)
        if config.move_brightest is not None:
            self.move_brightest = config.move_brightest
        else:
            self.move_brightest = config.variant in _BETA_ALPHA_FAMILY + _SWAP_FAMILY
        self.swarm = init_population(problem, config.n_pop, rng)
        self.swarm.max_itr = config.max_itr
        for member in self.swarm.members:
            member.objective = self._f(member.values)
            self.swarm.observe(member)
        self.P = init_familiarity(config.n_pop, rng) if config.variant == "familiarity" else None
        self.carried_alpha = (self.alpha_schedule.alpha0
                              if self.alpha_schedule.kind == "per-iter-factor" else None)

    def _f(self, values: np.ndarray) -> float:
        self.evals += 1
        return float(self.problem.objective(values))

    def _move_and_keep(self, member: Solution, values: np.ndarray) -> None:
        member.values = values
        member.objective = self._f(values)
        self.swarm.observe(member)

    def _alpha(self, itr: int) -> float:
        if self.alpha_schedule.kind == "per-iter-factor":
            alpha = self.carried_alpha
            self.carried_alpha = alpha_at(self.alpha_schedule, itr, self.config.max_itr,
                                          carried=self.carried_alpha)
            return alpha
        return alpha_at(self.alpha_schedule, itr, self.config.max_itr)

    def _random_move(self, member: Solution, alpha: float) -> None:
        enc = self.problem.encoding
        if self.config.variant in _BETA_ALPHA_FAMILY:
            values = alpha_step(member.values, alpha, self.rng, enc,
                                self.problem.lower, self.problem.upper)
        else:
            values = _elementary_perturb(member.values, enc, self.rng,
                                         self.problem.lower, self.problem.upper)
        self._move_and_keep(member, values)

    def _brightness_order(self) -> np.ndarray:
        fs = np.asarray([m.objective for m in self.swarm.members], dtype=np.float64)
        return np.argsort(-fs, kind="stable")

    def _generation_beta_alpha(self, gen: int) -> None:
        cfg, rng, enc = self.config, self.rng, self.problem.encoding
        members = self.swarm.members
        itr = gen - 1
        alpha = self._alpha(itr)
        if cfg.variant == "familiarity":
            self.P = familiarity_update(self.P, rank(members))
        order = self._brightness_order()
        n = len(members)
        for pi in range(n - 1):
            i = int(order[pi])
            xi = members[i]
            saw_brighter = False
            for pj in range(pi + 1, n):
                j = int(order[pj])
                xj = members[j]
                if not xj.objective < xi.objective:
                    continue
                saw_brighter = True
                if cfg.variant in _SWAP_FAMILY:
                    r = distance_hamming(xi.values, xj.values)
                    if r < 1:
                        continue
                    R = draw_swap_count(cfg.variant, r, cfg.gamma, itr, rng)
                    cand = swap_move(xi.values, xj.values, R, rng, enc)
                    f = self._f(cand)
                    if cfg.variant == "swap-fixed" or f < xi.objective:
                        xi.values = cand
                        xi.objective = f
                        self.swarm.observe(xi)
                    continue
                target, t_idx = xj, j
                if cfg.variant == "rho-follow":
                    if not rng.uniform() <= rho_at(itr, cfg.max_itr):
                        b = int(np.argmin(np.asarray([m.objective for m in members])))
                        target, t_idx = members[b], b
                if cfg.variant == "familiarity":
                    beta = familiarity_beta(self.P, i, t_idx)
                else:
                    d = distance_hamming(xi.values, target.values)
                    beta = beta_of_hamming(cfg.gamma, d)
                values = beta_step(xi.values, target.values, beta, rng, enc)
                values = alpha_step(values, alpha, rng, enc,
                                    self.problem.lower, self.problem.upper)
                self._move_and_keep(xi, values)
            if not saw_brighter:
                self._random_move(xi, alpha)
        if self.move_brightest:
            self._random_move(members[int(order[-1])], alpha)

    def _generation_visual(self, gen: int) -> None:
        cfg, rng = self.config, self.rng
        members = self.swarm.members
        itr = gen - 1
        dv = visual_range_at(cfg.dv_min, cfg.dv_max, itr, cfg.max_itr)
        order = self._brightness_order()
        n = len(members)
        for pi in range(n - 1):
            xi = members[int(order[pi])]
            for pj in range(pi + 1, n):
                xj = members[int(order[pj])]
                if not xj.objective < xi.objective:
                    continue
                r = distance_hamming(xi.values, xj.values)
                if r > dv:
                    continue
                values = per_dim_update(xi.values, xj.values, cfg.alpha, cfg.beta0,
                                        cfg.gamma, r, rng, literal_zero=cfg.literal_zero)
                self._move_and_keep(xi, values)
        if self.move_brightest:
            self._random_move(members[int(order[-1])], cfg.alpha)

    def _generation_knapsack(self, gen: int) -> None:
        cfg, rng = self.config, self.rng
        members = self.swarm.members
        order = self._brightness_order()
        n = len(members)
        for pi in range(n - 1):
            xi = members[int(order[pi])]
            rank_i = n - pi  # position 0 is the dimmest, so it carries rank N
            for pj in range(pi + 1, n):
                xj = members[int(order[pj])]
                if not xj.objective < xi.objective:
                    continue
                if not knapsack_move_gate(rank_i, gen, cfg.max_itr, rng):
                    continue
                r = distance_hamming(xi.values, xj.values)
                beta = beta_bounded(cfg.beta0, cfg.omega, r)
                values = beta_step(xi.values, xj.values, beta, rng, Encoding.BINARY)
                self._move_and_keep(xi, values)
        if self.move_brightest:
            self._random_move(members[int(order[-1])], cfg.flight_alpha)
        if cfg.elite_flight:
            self.evals += elite_random_flight(
                self.swarm, self.problem.objective, Encoding.BINARY, rng,
                alpha=cfg.flight_alpha)
        if cfg.local_search:
            self.evals += local_search_brightest(
                self.swarm, self.problem.objective, Encoding.BINARY, rng,
                gen, cfg.max_itr)

    def _generation_inversion(self, gen: int) -> None:
        cfg = self.config
        members = self.swarm.members
        pool = list(members)
        for member in members:
            for values in inversion_moves(member.values, cfg.m, self.rng):
                cand = Solution(values, self._f(values))
                self.swarm.observe(cand)
                pool.append(cand)
        pool.sort(key=lambda s: s.objective)  # stable: incumbents win ties
        self.swarm.members = pool[:cfg.n_pop]

    def run(self, replicate: int) -> TrialRecord:
        t0 = time.perf_counter()
        cfg = self.config
        best_trace = [self.swarm.best.objective]
        evals_trace = [self.evals]
        step = {
            "tsp-inversion": self._generation_inversion,
            "visual-range": self._generation_visual,
            "knapsack-gated": self._generation_knapsack,
        }.get(cfg.variant, self._generation_beta_alpha)
        for gen in range(1, cfg.max_itr + 1):
            step(gen)
            self.swarm.itr += 1
            best_trace.append(self.swarm.best.objective)
            evals_trace.append(self.evals)
        return TrialRecord(
            replicate=replicate,
            seed=self.rng.seed,
            best_trace=best_trace,
            evals_trace=evals_trace,
            best_values=self.swarm.best.values.copy(),
            best_objective=self.swarm.best.objective,
            evaluations=self.evals,
            elapsed_ms=(time.perf_counter() - t0) * 1000.0,
        )


def run_discrete(problem: ProblemDescriptor, config: DiscreteVariantConfig,
                 rng: RngStream, replicate: int = 0) -> TrialRecord:
    """Full seeded run of the configured discrete variant.

    Move operators keep the encoding feasible by construction, so the loop
    calls the objective directly; use `core.evaluate` when validation is
    wanted.
    """
    return _DiscreteRun(problem, config, rng).run(replicate)
