"""The standard firefly algorithm on real vectors, and the same updater driven
through a discretizer for binary / integer / random-key problems.

One generation follows the classic sweep: sort the population so the worst
solution comes first, walk every pair (i, j) with j later in the order, and
whenever j is strictly brighter (smaller objective) move i towards it,
re-evaluating immediately so later comparisons see the new objective
(asynchronous update).  A firefly that never saw a strictly brighter partner
performs a random move instead, and the brightest firefly ends the
generation with a mandatory random move of its own (disable with
`move_brightest=False`); the best-so-far record is kept safe regardless.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (ContractViolation, ProblemDescriptor, RngStream,
                   Solution, Swarm, TrialRecord, clamp_to_bounds,
                   distance_euclidean, init_population, is_brighter)
from .discretize import BinarizationRule, TransferBinarizer, mixed_binary_update
from .schedules import (AlphaSchedule, GammaSchedule, RandomDirection,
                        UNIFORM_DIRECTION, alpha_at, gamma_at, random_direction)


@dataclass
class ContinuousParams:
    """Parameters of the continuous updater.

    beta0 is the attractiveness at distance zero, gamma the absorption
    coefficient, alpha the randomness step length.  `gate_lambda`, when set,
    gates every attraction move on rand < |tanh(gate_lambda * r)| so that
    close pairs rarely move.
    """

    beta0: float = 1.0
    gamma: float = 1.0
    alpha: float = 0.2
    n_pop: int = 20
    max_gen: int = 100
    move_brightest: bool = True
    gate_lambda: Optional[float] = None

    def __post_init__(self):
        if self.beta0 < 0:
            raise ValueError(f"beta0 must be >= 0, got {self.beta0}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if self.n_pop < 1:
            raise ValueError(f"n_pop must be >= 1, got {self.n_pop}")


def attractiveness(beta0: float, gamma: float, r: float) -> float:
    """beta0 * exp(-gamma * r^2): pull strength at distance r."""
    if r < 0:
        raise ValueError(f"distance must be >= 0, got {r}")
    return beta0 * math.exp(-gamma * r * r)


def move_random(values: np.ndarray, alpha: float, rng: RngStream,
                lower=None, upper=None,
                direction: RandomDirection = UNIFORM_DIRECTION) -> np.ndarray:
    """Exploratory move: values + alpha * direction draw, clamped to bounds."""
    d = random_direction(direction, len(values), rng, lower, upper)
    return clamp_to_bounds(np.asarray(values, dtype=np.float64) + alpha * d, lower, upper)


def move_towards(xi: Solution, xj: Solution, params: ContinuousParams,
                 rng: RngStream, lower=None, upper=None,
                 direction: RandomDirection = UNIFORM_DIRECTION) -> np.ndarray:
    """Attraction move of xi towards a strictly brighter xj, clamped to bounds."""
    if not is_brighter(xj.objective, xi.objective):
        raise ContractViolation("move_towards requires a strictly brighter target")
    raw = attraction_update(xi.values, xj.values, params.beta0, params.gamma,
                            params.alpha, rng, direction, lower, upper)
    return clamp_to_bounds(raw, lower, upper)


def attraction_update(xi_values, xj_values, beta0, gamma, alpha, rng,
                      direction=UNIFORM_DIRECTION, lower=None, upper=None) -> np.ndarray:
    """Raw (unclamped, undiscretized) update: xi + beta(r)*(xj - xi) + alpha*dir."""
    xi = np.asarray(xi_values, dtype=np.float64)
    xj = np.asarray(xj_values, dtype=np.float64)
    diff = xj - xi
    beta = beta0 * math.exp(-gamma * float(diff @ diff))
    d = random_direction(direction, len(xi), rng, lower, upper)
    return xi + beta * diff + alpha * d


# Random moves of the mixed-binary engine fall back to this conversion.
_MIXED_FALLBACK = None


def _mixed_fallback() -> TransferBinarizer:
    global _MIXED_FALLBACK
    if _MIXED_FALLBACK is None:
        _MIXED_FALLBACK = TransferBinarizer("S2", BinarizationRule("probabilistic"))
    return _MIXED_FALLBACK


def generation_step(swarm: Swarm, problem: ProblemDescriptor, params: ContinuousParams,
                    rng: RngStream, *, alpha: Optional[float] = None,
                    gamma: Optional[float] = None,
                    direction: RandomDirection = UNIFORM_DIRECTION,
                    discretizer=None, mixed_binary: bool = False) -> int:
    """Run one generation in place; returns the number of evaluations performed.

    `alpha`/`gamma` override the constants in `params` (that is how schedules
    feed the loop).  With a `discretizer`, every move's raw continuous result
    is converted back to the problem's encoding before evaluation; with
    `mixed_binary`, attraction moves use the direct bit-producing component
    formula instead.
    """
    alpha = params.alpha if alpha is None else alpha
    gamma = params.gamma if gamma is None else gamma
    members = swarm.members
    n = len(members)
    fs = np.asarray([m.objective for m in members], dtype=np.float64)
    # Ascending brightness: position 0 holds the worst (largest) objective.
    order = np.argsort(-fs, kind="stable")
    evals = 0
    lower, upper = problem.lower, problem.upper

    def random_update(sol: Solution) -> None:
        nonlocal evals
        raw = np.asarray(sol.values, dtype=np.float64) \
            + alpha * random_direction(direction, problem.dimension, rng, lower, upper)
        if mixed_binary:
            new_values = _mixed_fallback().apply(raw, sol.values, swarm.best.values, rng)
        elif discretizer is not None:
            new_values = discretizer.apply(raw, sol.values, swarm.best.values, rng)
        else:
            new_values = clamp_to_bounds(raw, lower, upper)
        sol.values = new_values
        sol.objective = float(problem.objective(new_values))
        evals += 1
        swarm.observe(sol)

    for pi in range(n - 1):
        xi = members[order[pi]]
        saw_brighter = False
        for pj in range(pi + 1, n):
            xj = members[order[pj]]
            if not xj.objective < xi.objective:
                continue
            saw_brighter = True
            if params.gate_lambda is not None:
                r = distance_euclidean(xi.values, xj.values)
                if not rng.uniform() < abs(math.tanh(params.gate_lambda * r)):
                    continue
            if mixed_binary:
                new_values = mixed_binary_update(xi.values, xj.values, rng)
            else:
                raw = attraction_update(xi.values, xj.values, params.beta0, gamma,
                                        alpha, rng, direction, lower, upper)
                if discretizer is not None:
                    new_values = discretizer.apply(raw, xi.values, swarm.best.values, rng)
                else:
                    new_values = clamp_to_bounds(raw, lower, upper)
            xi.values = new_values
            xi.objective = float(problem.objective(new_values))
            evals += 1
            swarm.observe(xi)
        if not saw_brighter:
            random_update(xi)
    if params.move_brightest:
        # Best-so-far is already recorded, so the incumbent survives this.
        random_update(members[order[-1]])
    swarm.itr += 1
    return evals


def run(problem: ProblemDescriptor, params: ContinuousParams, rng: RngStream, *,
        alpha_schedule: Optional[AlphaSchedule] = None,
        gamma_schedule: Optional[GammaSchedule] = None,
        direction: RandomDirection = UNIFORM_DIRECTION,
        discretizer=None, mixed_binary: bool = False,
        replicate: int = 0) -> TrialRecord:
    """Full seeded run: init, max_gen generations, convergence trace.

    Schedules are evaluated at itr = generation - 1, so the first generation
    uses the schedule's itr=0 value.  Move operators keep the encoding
    feasible by construction, so member evaluations call the objective
    directly; use `core.evaluate` when validation is wanted.
    """
    if params.max_gen < 1:
        raise ValueError(f"max_gen must be >= 1, got {params.max_gen}")
    t0 = time.perf_counter()
    swarm = init_population(problem, params.n_pop, rng)
    swarm.max_itr = params.max_gen
    evals = 0
    for member in swarm.members:
        member.objective = float(problem.objective(member.values))
        evals += 1
        swarm.observe(member)
    best_trace = [swarm.best.objective]
    evals_trace = [evals]
    carried_alpha = alpha_schedule.alpha0 if (
        alpha_schedule is not None and alpha_schedule.kind == "per-iter-factor") else None
    for gen in range(1, params.max_gen + 1):
        itr = gen - 1
        if alpha_schedule is None:
            alpha = params.alpha
        elif alpha_schedule.kind == "per-iter-factor":
            alpha = carried_alpha
            carried_alpha = alpha_at(alpha_schedule, itr, params.max_gen, carried=carried_alpha)
        else:
            alpha = alpha_at(alpha_schedule, itr, params.max_gen)
        gamma = params.gamma if gamma_schedule is None else gamma_at(gamma_schedule, itr, params.max_gen)
        evals += generation_step(swarm, problem, params, rng, alpha=alpha, gamma=gamma,
                                 direction=direction, discretizer=discretizer,
                                 mixed_binary=mixed_binary)
        best_trace.append(swarm.best.objective)
        evals_trace.append(evals)
    return TrialRecord(
        replicate=replicate,
        seed=rng.seed,
        best_trace=best_trace,
        evals_trace=evals_trace,
        best_values=swarm.best.values.copy(),
        best_objective=swarm.best.objective,
        evaluations=evals,
        elapsed_ms=(time.perf_counter() - t0) * 1000.0,
    )
