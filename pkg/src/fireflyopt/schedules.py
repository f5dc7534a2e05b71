"""Iteration-dependent parameter rules: randomness step-length schedules,
absorption-coefficient ramps, and random direction generators (uniform or
Levy-tailed, with optional range scaling)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import RngStream

ALPHA_KINDS = ("constant", "geometric", "per-iter-factor", "sigmoid-decay", "linear", "floor-dim")
GAMMA_KINDS = ("constant", "exp-ramp")
DIRECTION_KINDS = ("uniform", "levy")

# Total shrink factor the per-iteration rule compounds to over a full run.
PER_ITER_TOTAL_FACTOR = 1e-4 / 9.0


@dataclass(frozen=True)
class AlphaSchedule:
    """One of the step-length rules; build instances via the factory helpers."""

    kind: str
    alpha0: float = 0.0
    theta: float = 0.0
    alpha_max: float = 0.0
    alpha_min: float = 0.0
    n: int = 0


def constant_alpha(alpha: float) -> AlphaSchedule:
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    return AlphaSchedule("constant", alpha0=alpha)


def geometric(alpha0: float, theta: float) -> AlphaSchedule:
    """alpha0 * theta**itr; requires 0 < theta < 1."""
    if not 0.0 < theta < 1.0:
        raise ValueError(f"theta must be in (0,1), got {theta}")
    if alpha0 < 0:
        raise ValueError(f"alpha0 must be >= 0, got {alpha0}")
    return AlphaSchedule("geometric", alpha0=alpha0, theta=theta)


def per_iter_factor(alpha0: float) -> AlphaSchedule:
    """Stateful rule: alpha is multiplied by (1e-4/9)**(1/max_itr) every
    iteration, compounding to alpha0 * 1e-4/9 over a full run."""
    if alpha0 < 0:
        raise ValueError(f"alpha0 must be >= 0, got {alpha0}")
    return AlphaSchedule("per-iter-factor", alpha0=alpha0)


def sigmoid_decay(alpha0: float) -> AlphaSchedule:
    """alpha0 - 1/(1 + exp(-(itr - max_itr/2))); alpha0 >= 1 keeps it non-negative."""
    if alpha0 < 1.0:
        raise ValueError(f"sigmoid-decay needs alpha0 >= 1 to stay non-negative, got {alpha0}")
    return AlphaSchedule("sigmoid-decay", alpha0=alpha0)


def linear(alpha_max: float, alpha_min: float) -> AlphaSchedule:
    """Linear ramp from alpha_max at itr=0 down to alpha_min at itr=max_itr."""
    if alpha_min > alpha_max:
        raise ValueError(f"alpha_min {alpha_min} exceeds alpha_max {alpha_max}")
    if alpha_min < 0:
        raise ValueError(f"alpha_min must be >= 0, got {alpha_min}")
    return AlphaSchedule("linear", alpha_max=alpha_max, alpha_min=alpha_min)


def floor_dim(n: int) -> AlphaSchedule:
    """Integer staircase floor(n - itr/max_itr * n), from n down to 0."""
    if n < 1:
        raise ValueError(f"dimension must be >= 1, got {n}")
    return AlphaSchedule("floor-dim", n=n)


def alpha_at(schedule: AlphaSchedule, itr: int, max_itr: int,
             carried: Optional[float] = None) -> float:
    """Step length at iteration `itr` of a `max_itr`-iteration run.

    All kinds are pure functions of (itr, max_itr) except per-iter-factor:
    when `carried` is given it is multiplied by the per-iteration factor
    (the engine owns that state); otherwise the compounded closed form
    alpha0 * factor**itr is returned.
    """
    if max_itr < 1:
        raise ValueError(f"max_itr must be >= 1, got {max_itr}")
    if not 0 <= itr <= max_itr:
        raise ValueError(f"itr must be in [0, {max_itr}], got {itr}")
    k = schedule.kind
    if k == "constant":
        return schedule.alpha0
    if k == "geometric":
        return schedule.alpha0 * schedule.theta ** itr
    if k == "per-iter-factor":
        factor = PER_ITER_TOTAL_FACTOR ** (1.0 / max_itr)
        if carried is not None:
            return carried * factor
        return schedule.alpha0 * factor ** itr
    if k == "sigmoid-decay":
        return schedule.alpha0 - 1.0 / (1.0 + math.exp(-(itr - max_itr / 2.0)))
    if k == "linear":
        return schedule.alpha_max - (itr / max_itr) * (schedule.alpha_max - schedule.alpha_min)
    if k == "floor-dim":
        return float(math.floor(schedule.n - (itr / max_itr) * schedule.n))
    raise ValueError(f"unknown alpha schedule {k!r}")


@dataclass(frozen=True)
class GammaSchedule:
    kind: str
    gamma: float = 1.0
    gamma_max: float = 1.0
    gamma_min: float = 1.0


def constant_gamma(gamma: float) -> GammaSchedule:
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    return GammaSchedule("constant", gamma=gamma)


def exp_ramp(gamma_max: float, gamma_min: float) -> GammaSchedule:
    """gamma_max * exp((itr/max_itr) * ln(gamma_min/gamma_max)): runs from
    gamma_max at itr=0 to gamma_min at itr=max_itr along a geometric path."""
    if gamma_max <= 0 or gamma_min <= 0:
        raise ValueError("exp-ramp gamma bounds must be positive")
    return GammaSchedule("exp-ramp", gamma_max=gamma_max, gamma_min=gamma_min)


def gamma_at(schedule: GammaSchedule, itr: int, max_itr: int) -> float:
    """Absorption coefficient at iteration `itr`; endpoints are exact."""
    if max_itr < 1:
        raise ValueError(f"max_itr must be >= 1, got {max_itr}")
    if not 0 <= itr <= max_itr:
        raise ValueError(f"itr must be in [0, {max_itr}], got {itr}")
    if schedule.kind == "constant":
        return schedule.gamma
    if schedule.kind == "exp-ramp":
        if itr == 0:
            return schedule.gamma_max
        if itr == max_itr:
            return schedule.gamma_min
        return schedule.gamma_max * math.exp(
            (itr / max_itr) * math.log(schedule.gamma_min / schedule.gamma_max))
    raise ValueError(f"unknown gamma schedule {schedule.kind!r}")


@dataclass(frozen=True)
class RandomDirection:
    """Random-move direction generator: centered uniform (default) or a
    heavy-tailed Levy draw; `range_scale` multiplies per-coordinate by
    (upper - lower), off by default."""

    kind: str = "uniform"
    exponent: float = 1.5
    range_scale: bool = False

    def __post_init__(self):
        if self.kind not in DIRECTION_KINDS:
            raise ValueError(f"unknown direction kind {self.kind!r}")
        if self.kind == "levy" and not 0.0 < self.exponent < 2.0:
            raise ValueError(f"levy exponent must be in (0,2), got {self.exponent}")


UNIFORM_DIRECTION = RandomDirection()


def _mantegna_sigma(beta: float) -> float:
    num = math.gamma(1.0 + beta) * math.sin(math.pi * beta / 2.0)
    den = math.gamma((1.0 + beta) / 2.0) * beta * 2.0 ** ((beta - 1.0) / 2.0)
    return (num / den) ** (1.0 / beta)


def random_direction(direction: RandomDirection, dim: int, rng: RngStream,
                     lower=None, upper=None) -> np.ndarray:
    """Draw one direction vector of length `dim`.

    Uniform components lie in [-0.5, 0.5); Levy components follow the
    Mantegna construction u / |v|^(1/beta) with u ~ N(0, sigma_u), v ~ N(0,1).
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if direction.kind == "uniform":
        d = rng.uniform(dim) - 0.5
    else:
        sigma = _mantegna_sigma(direction.exponent)
        u = rng.normal(sigma, dim)
        v = rng.normal(1.0, dim)
        d = u / np.abs(v) ** (1.0 / direction.exponent)
    if direction.range_scale:
        if lower is None or upper is None:
            raise ValueError("range scaling requires bounds")
        d = d * (np.asarray(upper, dtype=np.float64) - np.asarray(lower, dtype=np.float64))
    return d


def emit_curve(schedule, max_itr: int) -> list:
    """Series [(itr, value)] for itr in 0..max_itr.

    Per-iter-factor is emitted by compounding, exactly as an engine applies
    it; every other kind is evaluated in closed form.
    """
    if max_itr < 1:
        raise ValueError(f"max_itr must be >= 1, got {max_itr}")
    if isinstance(schedule, GammaSchedule):
        return [(itr, gamma_at(schedule, itr, max_itr)) for itr in range(max_itr + 1)]
    if schedule.kind == "per-iter-factor":
        series = [(0, schedule.alpha0)]
        value = schedule.alpha0
        for itr in range(1, max_itr + 1):
            value = alpha_at(schedule, itr, max_itr, carried=value)
            series.append((itr, value))
        return series
    return [(itr, alpha_at(schedule, itr, max_itr)) for itr in range(max_itr + 1)]
