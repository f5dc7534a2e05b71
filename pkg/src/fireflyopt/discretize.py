"""Mechanisms that map continuous-space updates onto binary, integer, and
permutation values: S/V-shaped transfer functions, bit-conversion rules,
random-key decoding, integer rounding, a distance-based move gate, and a
self-contained mixed-binary component update.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import erf, expit

from .core import RngStream

S_FAMILY = ("S1", "S2", "S3", "S4", "ErfS")
V_FAMILY = ("V1", "V2", "V3", "V4")
TRANSFER_IDS = ("S1", "S2", "S3", "S4", "V1", "V2", "V3", "V4", "ErfS")

# Constant inside V1's erf: the printed form is sqrt(2)/pi, the form common
# elsewhere in the transfer-function literature is sqrt(pi)/2.
V1_DEFAULT_CONSTANT = math.sqrt(2.0) / math.pi
V1_CONVENTIONAL_CONSTANT = math.sqrt(math.pi) / 2.0

BINARIZATION_KINDS = ("probabilistic", "elite", "complement", "tanh-threshold")


def transfer(fn_id: str, v, *, v1_conventional: bool = False):
    """Map a real update value into [0, 1] with the named transfer function.

    S1..S4 and ErfS are increasing sigmoids with value 0.5 at zero; V1..V4
    are even functions vanishing at zero.  Accepts scalars or arrays; every
    form is overflow-safe for arbitrary finite input.
    """
    x = np.asarray(v, dtype=np.float64)
    if fn_id == "S1":
        t = expit(2.0 * x)
    elif fn_id == "S2":
        t = expit(x)
    elif fn_id == "S3":
        t = expit(0.5 * x)
    elif fn_id == "S4":
        t = expit(x / 3.0)
    elif fn_id == "ErfS":
        t = 0.5 * (1.0 + erf(x))
    elif fn_id == "V1":
        c = V1_CONVENTIONAL_CONSTANT if v1_conventional else V1_DEFAULT_CONSTANT
        t = np.abs(erf(c * x))
    elif fn_id == "V2":
        t = np.tanh(np.abs(x))
    elif fn_id == "V3":
        t = np.abs(x) / np.hypot(1.0, x)
    elif fn_id == "V4":
        t = np.abs((2.0 / math.pi) * np.arctan((math.pi / 2.0) * x))
    else:
        raise ValueError(f"unknown transfer function {fn_id!r}")
    return t if t.ndim else float(t)


@dataclass(frozen=True)
class BinarizationRule:
    """How a transfer probability becomes a concrete bit.

    probabilistic    bit = 1 with probability t, else 0
    elite            bit = best-so-far bit with probability t, else 0
    complement       bit flips with probability t, else keeps its value
    tanh-threshold   bit = 1 iff tau < tanh(|raw|); deterministic
    """

    kind: str = "probabilistic"
    tau: float = 0.5

    def __post_init__(self):
        if self.kind not in BINARIZATION_KINDS:
            raise ValueError(f"unknown binarization rule {self.kind!r}")
        if self.kind == "tanh-threshold" and not 0.0 < self.tau < 1.0:
            raise ValueError(f"tanh-threshold tau must be in (0,1), got {self.tau}")


def binarize(rule: BinarizationRule, t, rng: Optional[RngStream] = None, *,
             previous=None, best=None, raw=None) -> np.ndarray:
    """Convert transfer value(s) t in [0,1] into bit(s) under `rule`.

    `previous` (the bit from the last iteration), `best` (the best-so-far
    bit), and `raw` (the unconverted update value) supply the context the
    elite, complement, and tanh-threshold rules need.
    """
    t = np.asarray(t, dtype=np.float64)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    if rule.kind == "probabilistic":
        u = rng.uniform(t.shape[0])
        bits = (u < t).astype(np.int64)
    elif rule.kind == "elite":
        if best is None:
            raise ValueError("elite binarization requires the best-so-far bits")
        best = np.atleast_1d(np.asarray(best, dtype=np.int64))
        u = rng.uniform(t.shape[0])
        bits = np.where(u < t, best, 0).astype(np.int64)
    elif rule.kind == "complement":
        if previous is None:
            raise ValueError("complement binarization requires the previous bits")
        prev = np.atleast_1d(np.asarray(previous, dtype=np.int64))
        u = rng.uniform(t.shape[0])
        bits = np.where(u < t, 1 - prev, prev).astype(np.int64)
    else:  # tanh-threshold
        if raw is None:
            raise ValueError("tanh-threshold binarization requires the raw values")
        raw = np.atleast_1d(np.asarray(raw, dtype=np.float64))
        bits = (rule.tau < np.tanh(np.abs(raw))).astype(np.int64)
    return int(bits[0]) if scalar else bits


def decode_random_key(keys: np.ndarray) -> np.ndarray:
    """Decode keys in [0,1]^n into the permutation that visits positions in
    ascending key order; ties broken by index.  1-based values."""
    order = np.argsort(np.asarray(keys), kind="stable")
    return (order + 1).astype(np.int64)


def round_half_away(x):
    """Round to nearest integer, ties away from zero."""
    x = np.asarray(x, dtype=np.float64)
    return np.copysign(np.floor(np.abs(x) + 0.5), x)


def round_to_integer(x, lower, upper) -> np.ndarray:
    """Round each coordinate half-away-from-zero, then clamp to the bounds."""
    r = round_half_away(x)
    if lower is not None:
        r = np.clip(r, lower, upper)
    return r.astype(np.int64)


def move_gate(lam: float, r: float, rng: RngStream) -> bool:
    """Distance-controlled gate: the move fires iff rand < |tanh(lam * r)|.

    Close pairs (small r) rarely move, far pairs almost always do; a gated-out
    firefly keeps its position.
    """
    if r < 0:
        raise ValueError(f"distance must be >= 0, got {r}")
    return rng.uniform() < abs(math.tanh(lam * r))


def mixed_binary_update(x_i, x_j, rng: RngStream):
    """Direct bit-producing component update for binary problems.

    Each component draws a fresh uniform u and becomes
    round(1 / (1 + exp(-x_i + u*(x_i - x_j))) - 0.06), which is always 0 or 1
    because the inner expression stays inside (-0.06, 0.94).
    """
    xi = np.asarray(x_i, dtype=np.float64)
    scalar = xi.ndim == 0
    xi = np.atleast_1d(xi)
    xj = np.atleast_1d(np.asarray(x_j, dtype=np.float64))
    u = rng.uniform(xi.shape[0])
    z = expit(xi - u * (xi - xj))
    bits = round_half_away(z - 0.06).astype(np.int64)
    return int(bits[0]) if scalar else bits


class TransferBinarizer:
    """Discretizer for binary problems: transfer the raw update component-wise
    into [0,1], then apply a binarization rule to get the new bits."""

    def __init__(self, transfer_id: str, rule: BinarizationRule, *, v1_conventional: bool = False):
        if transfer_id not in TRANSFER_IDS:
            raise ValueError(f"unknown transfer function {transfer_id!r}")
        self.transfer_id = transfer_id
        self.rule = rule
        self.v1_conventional = v1_conventional

    def apply(self, raw: np.ndarray, previous: np.ndarray, best: np.ndarray,
              rng: RngStream) -> np.ndarray:
        t = transfer(self.transfer_id, raw, v1_conventional=self.v1_conventional)
        return binarize(self.rule, t, rng, previous=previous, best=best, raw=raw)


class IntegerRounder:
    """Discretizer for integer problems: nearest-integer rounding plus clamp."""

    def __init__(self, lower, upper):
        self.lower = lower
        self.upper = upper

    def apply(self, raw, previous, best, rng) -> np.ndarray:
        return round_to_integer(raw, self.lower, self.upper)
