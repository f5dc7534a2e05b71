"""Experiment harness: flat key/value config files, replicated seeded runs,
summary statistics, and deterministic CSV/JSON emission.

Reruns of the same config produce byte-identical trace CSV and summary JSON:
floats are written in shortest round-trip form, JSON keys are sorted, and
wall-clock timing never enters either file.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from . import continuous
from .core import Encoding, ProblemDescriptor, RngStream, TrialRecord, derive_seed
from .discrete import _COMPATIBLE, DiscreteVariantConfig, run_discrete
from .discretize import (BINARIZATION_KINDS, BinarizationRule, IntegerRounder,
                         TRANSFER_IDS, TransferBinarizer, decode_random_key)
from .problems import (benchmark_problem, knapsack_problem, load_knapsack,
                       load_tsp, random_instance, random_key_problem,
                       stepped_demo_continuous_problem, tsp_problem)
from .schedules import (AlphaSchedule, GammaSchedule, RandomDirection,
                        UNIFORM_DIRECTION, constant_alpha, constant_gamma,
                        exp_ramp, floor_dim, geometric, linear,
                        per_iter_factor, sigmoid_decay)

ENGINES = ("continuous", "binary-transfer", "integer-round", "random-key",
           "mixed-binary", "discrete")
PROBLEM_KINDS = ("sphere", "rastrigin", "stepped-integer-demo", "knapsack", "tsp")

_ENGINE_ENCODING = {
    "continuous": Encoding.REAL,
    "binary-transfer": Encoding.BINARY,
    "mixed-binary": Encoding.BINARY,
    "integer-round": Encoding.INTEGER,
    "random-key": Encoding.PERMUTATION,
}


class ConfigError(ValueError):
    """Configuration is malformed; the message names the offending field."""


@dataclass
class ExperimentConfig:
    """Fully resolved experiment description; see README for the file schema."""

    problem_kind: str = ""
    problem_dimension: int = 2
    problem_lower: Optional[float] = None
    problem_upper: Optional[float] = None
    problem_size: Optional[int] = None
    problem_instance: Optional[str] = None
    problem_instance_seed: int = 0
    problem_space: str = "integer"

    engine: str = ""
    beta0: float = 1.0
    gamma: float = 1.0
    alpha: float = 0.2
    alpha_schedule: Optional[AlphaSchedule] = None
    gamma_schedule: Optional[GammaSchedule] = None
    direction: RandomDirection = UNIFORM_DIRECTION
    gate_lambda: Optional[float] = None
    move_brightest: Optional[bool] = None
    transfer: str = "S2"
    binarization: BinarizationRule = field(default_factory=BinarizationRule)
    v1_conventional: bool = False

    discrete_variant: Optional[str] = None
    discrete_gamma: float = 0.1
    discrete_m: int = 2
    discrete_beta0: float = 1.0
    discrete_alpha: float = 1.0
    discrete_dv_max: float = 3.0
    discrete_dv_min: float = 0.2
    discrete_omega: float = 0.5
    discrete_elite_flight: bool = True
    discrete_local_search: bool = True
    discrete_flight_alpha: float = 2.0
    discrete_literal_zero: bool = False

    n_pop: int = 20
    max_itr: int = 100
    replicates: int = 1
    master_seed: int = 0
    oracle_value: Optional[float] = None
    oracle_tol_abs: float = 1e-9
    oracle_tol_rel: float = 0.0


def _parse_bool(field_name: str, raw: str) -> bool:
    if raw.lower() in ("true", "yes", "1", "on"):
        return True
    if raw.lower() in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"{field_name}: expected a boolean, got {raw!r}")


def _parse_int(field_name: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{field_name}: expected an integer, got {raw!r}") from None


def _parse_float(field_name: str, raw: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"{field_name}: expected a number, got {raw!r}") from None


def _parse_choice(field_name: str, raw: str, choices) -> str:
    if raw not in choices:
        raise ConfigError(f"{field_name}: unknown value {raw!r}; expected one of {', '.join(choices)}")
    return raw


# key -> (attribute on ExperimentConfig or pseudo-field, parser)
_KEYS = {
    "problem.kind": ("problem_kind", lambda r: _parse_choice("problem.kind", r, PROBLEM_KINDS)),
    "problem.dimension": ("problem_dimension", lambda r: _parse_int("problem.dimension", r)),
    "problem.lower": ("problem_lower", lambda r: _parse_float("problem.lower", r)),
    "problem.upper": ("problem_upper", lambda r: _parse_float("problem.upper", r)),
    "problem.size": ("problem_size", lambda r: _parse_int("problem.size", r)),
    "problem.instance": ("problem_instance", lambda r: r),
    "problem.instance_seed": ("problem_instance_seed", lambda r: _parse_int("problem.instance_seed", r)),
    "problem.space": ("problem_space", lambda r: _parse_choice("problem.space", r, ("integer", "continuous"))),
    "engine": ("engine", lambda r: _parse_choice("engine", r, ENGINES)),
    "beta0": ("beta0", lambda r: _parse_float("beta0", r)),
    "gamma": ("gamma", lambda r: _parse_float("gamma", r)),
    "alpha": ("alpha", lambda r: _parse_float("alpha", r)),
    "alpha.kind": ("_alpha_kind", lambda r: _parse_choice(
        "alpha.kind", r, ("constant", "geometric", "per-iter-factor", "sigmoid-decay", "linear", "floor-dim"))),
    "alpha.alpha0": ("_alpha_alpha0", lambda r: _parse_float("alpha.alpha0", r)),
    "alpha.theta": ("_alpha_theta", lambda r: _parse_float("alpha.theta", r)),
    "alpha.max": ("_alpha_max", lambda r: _parse_float("alpha.max", r)),
    "alpha.min": ("_alpha_min", lambda r: _parse_float("alpha.min", r)),
    "alpha.n": ("_alpha_n", lambda r: _parse_int("alpha.n", r)),
    "gamma.kind": ("_gamma_kind", lambda r: _parse_choice("gamma.kind", r, ("constant", "exp-ramp"))),
    "gamma.max": ("_gamma_max", lambda r: _parse_float("gamma.max", r)),
    "gamma.min": ("_gamma_min", lambda r: _parse_float("gamma.min", r)),
    "direction": ("_direction_kind", lambda r: _parse_choice("direction", r, ("uniform", "levy"))),
    "levy.exponent": ("_levy_exponent", lambda r: _parse_float("levy.exponent", r)),
    "range_scale": ("_range_scale", lambda r: _parse_bool("range_scale", r)),
    "move_gate.lambda": ("gate_lambda", lambda r: _parse_float("move_gate.lambda", r)),
    "move_brightest": ("move_brightest", lambda r: _parse_bool("move_brightest", r)),
    "transfer": ("transfer", lambda r: _parse_choice("transfer", r, TRANSFER_IDS)),
    "binarization": ("_binarization_kind", lambda r: _parse_choice("binarization", r, BINARIZATION_KINDS)),
    "binarization.tau": ("_binarization_tau", lambda r: _parse_float("binarization.tau", r)),
    "v1.conventional": ("v1_conventional", lambda r: _parse_bool("v1.conventional", r)),
    "discrete.variant": ("discrete_variant", lambda r: _parse_choice(
        "discrete.variant", r, tuple(_COMPATIBLE.keys()))),
    "discrete.gamma": ("discrete_gamma", lambda r: _parse_float("discrete.gamma", r)),
    "discrete.m": ("discrete_m", lambda r: _parse_int("discrete.m", r)),
    "discrete.beta0": ("discrete_beta0", lambda r: _parse_float("discrete.beta0", r)),
    "discrete.alpha": ("discrete_alpha", lambda r: _parse_float("discrete.alpha", r)),
    "discrete.dv_max": ("discrete_dv_max", lambda r: _parse_float("discrete.dv_max", r)),
    "discrete.dv_min": ("discrete_dv_min", lambda r: _parse_float("discrete.dv_min", r)),
    "discrete.omega": ("discrete_omega", lambda r: _parse_float("discrete.omega", r)),
    "discrete.elite_flight": ("discrete_elite_flight", lambda r: _parse_bool("discrete.elite_flight", r)),
    "discrete.local_search": ("discrete_local_search", lambda r: _parse_bool("discrete.local_search", r)),
    "discrete.flight_alpha": ("discrete_flight_alpha", lambda r: _parse_float("discrete.flight_alpha", r)),
    "discrete.literal_zero": ("discrete_literal_zero", lambda r: _parse_bool("discrete.literal_zero", r)),
    "n_pop": ("n_pop", lambda r: _parse_int("n_pop", r)),
    "max_itr": ("max_itr", lambda r: _parse_int("max_itr", r)),
    "replicates": ("replicates", lambda r: _parse_int("replicates", r)),
    "master_seed": ("master_seed", lambda r: _parse_int("master_seed", r)),
    "oracle.value": ("oracle_value", lambda r: _parse_float("oracle.value", r)),
    "oracle.tol_abs": ("oracle_tol_abs", lambda r: _parse_float("oracle.tol_abs", r)),
    "oracle.tol_rel": ("oracle_tol_rel", lambda r: _parse_float("oracle.tol_rel", r)),
}


def _build_alpha_schedule(kind: str, raw: dict, config: ExperimentConfig) -> AlphaSchedule:
    def need(key):
        if key not in raw:
            raise ConfigError(f"{key}: required for alpha.kind = {kind}")
        return raw[key]
    try:
        if kind == "constant":
            return constant_alpha(raw.get("_alpha_alpha0", config.alpha))
        if kind == "geometric":
            return geometric(need("_alpha_alpha0"), need("_alpha_theta"))
        if kind == "per-iter-factor":
            return per_iter_factor(need("_alpha_alpha0"))
        if kind == "sigmoid-decay":
            return sigmoid_decay(need("_alpha_alpha0"))
        if kind == "linear":
            return linear(need("_alpha_max"), need("_alpha_min"))
        return floor_dim(raw.get("_alpha_n", config.problem_dimension))
    except ValueError as exc:
        raise ConfigError(f"alpha.kind = {kind}: {exc}") from None


def _need_key(raw: dict, key: str, display: str):
    if key not in raw:
        raise ConfigError(f"{display}: required")
    return raw[key]


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a flat "key = value" config document.

    Lines are `key = value`; blank lines and `#` comments are ignored.
    Unknown and duplicate keys are rejected, and every error names the field
    it concerns.
    """
    raw = {}
    config = ExperimentConfig()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        attr, parser = _KEYS[key]
        if attr in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[attr] = parser(value)
    for attr, value in raw.items():
        if not attr.startswith("_"):
            setattr(config, attr, value)

    if not config.problem_kind:
        raise ConfigError("problem.kind: required")
    if not config.engine:
        raise ConfigError("engine: required")
    if config.replicates < 1:
        raise ConfigError(f"replicates: must be >= 1, got {config.replicates}")
    if config.n_pop < 1:
        raise ConfigError(f"n_pop: must be >= 1, got {config.n_pop}")
    if config.max_itr < 1:
        raise ConfigError(f"max_itr: must be >= 1, got {config.max_itr}")
    if config.problem_dimension < 1:
        raise ConfigError(f"problem.dimension: must be >= 1, got {config.problem_dimension}")

    if "_alpha_kind" in raw:
        config.alpha_schedule = _build_alpha_schedule(raw["_alpha_kind"], raw, config)
    if raw.get("_gamma_kind") == "exp-ramp":
        try:
            config.gamma_schedule = exp_ramp(_need_key(raw, "_gamma_max", "gamma.max"),
                                             _need_key(raw, "_gamma_min", "gamma.min"))
        except ValueError as exc:
            raise ConfigError(f"gamma.kind = exp-ramp: {exc}") from None
    elif raw.get("_gamma_kind") == "constant":
        config.gamma_schedule = constant_gamma(config.gamma)
    if "_direction_kind" in raw or "_levy_exponent" in raw or "_range_scale" in raw:
        try:
            config.direction = RandomDirection(
                kind=raw.get("_direction_kind", "uniform"),
                exponent=raw.get("_levy_exponent", 1.5),
                range_scale=raw.get("_range_scale", False))
        except ValueError as exc:
            raise ConfigError(f"direction: {exc}") from None
    if "_binarization_kind" in raw or "_binarization_tau" in raw:
        try:
            config.binarization = BinarizationRule(
                kind=raw.get("_binarization_kind", "probabilistic"),
                tau=raw.get("_binarization_tau", 0.5))
        except ValueError as exc:
            raise ConfigError(f"binarization: {exc}") from None

    _validate_pairing(config)
    return config


def _problem_encoding(config: ExperimentConfig) -> Encoding:
    kind = config.problem_kind
    if kind in ("sphere", "rastrigin"):
        return Encoding.REAL
    if kind == "stepped-integer-demo":
        return Encoding.INTEGER if config.problem_space == "integer" else Encoding.REAL
    if kind == "knapsack":
        return Encoding.BINARY
    return Encoding.PERMUTATION


def _validate_pairing(config: ExperimentConfig) -> None:
    encoding = _problem_encoding(config)
    if config.engine == "discrete":
        if config.discrete_variant is None:
            raise ConfigError("discrete.variant: required when engine = discrete")
        if encoding not in _COMPATIBLE[config.discrete_variant]:
            raise ConfigError(
                f"discrete.variant: {config.discrete_variant!r} does not support "
                f"{encoding.value}-encoded problem {config.problem_kind!r}")
        return
    if config.engine == "random-key":
        if encoding is not Encoding.PERMUTATION:
            raise ConfigError("engine: random-key requires a permutation problem")
        return
    wanted = _ENGINE_ENCODING[config.engine]
    if encoding is not wanted:
        raise ConfigError(
            f"engine: {config.engine!r} requires a {wanted.value}-encoded problem, "
            f"but {config.problem_kind!r} is {encoding.value}-encoded")
    if config.problem_kind in ("knapsack", "tsp") and config.problem_size is None \
            and config.problem_instance is None:
        raise ConfigError("problem.size: required unless problem.instance is given")


def build_problem(config: ExperimentConfig) -> ProblemDescriptor:
    """Materialize the problem a config describes (loads or generates instances)."""
    kind = config.problem_kind
    if kind in ("sphere", "rastrigin"):
        return benchmark_problem(kind, config.problem_dimension,
                                 config.problem_lower, config.problem_upper)
    if kind == "stepped-integer-demo":
        if config.problem_space == "integer":
            return benchmark_problem(kind)
        return stepped_demo_continuous_problem()
    if kind == "knapsack":
        if config.problem_instance:
            instance = load_knapsack(config.problem_instance)
        else:
            instance = random_instance("knapsack", config.problem_size, config.problem_instance_seed)
        return knapsack_problem(instance)
    if config.problem_instance:
        instance = load_tsp(config.problem_instance)
    else:
        instance = random_instance("tsp", config.problem_size, config.problem_instance_seed)
    problem = tsp_problem(instance)
    if config.engine == "random-key":
        problem = random_key_problem(problem)
    return problem


def run_replicate(config: ExperimentConfig, index: int) -> TrialRecord:
    """Run one replicate with its derived seed."""
    rng = RngStream(derive_seed(config.master_seed, index))
    problem = build_problem(config)
    if config.engine == "discrete":
        variant = DiscreteVariantConfig(
            variant=config.discrete_variant,
            n_pop=config.n_pop,
            max_itr=config.max_itr,
            gamma=config.discrete_gamma,
            alpha_schedule=config.alpha_schedule,
            m=config.discrete_m,
            beta0=config.discrete_beta0,
            alpha=config.discrete_alpha,
            dv_max=config.discrete_dv_max,
            dv_min=config.discrete_dv_min,
            omega=config.discrete_omega,
            elite_flight=config.discrete_elite_flight,
            local_search=config.discrete_local_search,
            flight_alpha=config.discrete_flight_alpha,
            move_brightest=config.move_brightest,
            literal_zero=config.discrete_literal_zero,
        )
        return run_discrete(problem, variant, rng, replicate=index)
    params = continuous.ContinuousParams(
        beta0=config.beta0, gamma=config.gamma, alpha=config.alpha,
        n_pop=config.n_pop, max_gen=config.max_itr,
        move_brightest=True if config.move_brightest is None else config.move_brightest,
        gate_lambda=config.gate_lambda)
    discretizer = None
    mixed = False
    if config.engine == "binary-transfer":
        discretizer = TransferBinarizer(config.transfer, config.binarization,
                                        v1_conventional=config.v1_conventional)
    elif config.engine == "integer-round":
        discretizer = IntegerRounder(problem.lower, problem.upper)
    elif config.engine == "mixed-binary":
        mixed = True
    return continuous.run(problem, params, rng,
                          alpha_schedule=config.alpha_schedule,
                          gamma_schedule=config.gamma_schedule,
                          direction=config.direction,
                          discretizer=discretizer, mixed_binary=mixed,
                          replicate=index)


def run_experiment(config: ExperimentConfig, workers: int = 1) -> list:
    """All replicates, ordered by replicate index regardless of scheduling."""
    indices = list(range(config.replicates))
    if workers <= 1 or config.replicates == 1:
        return [run_replicate(config, i) for i in indices]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        records = list(pool.map(run_replicate, [config] * len(indices), indices))
    records.sort(key=lambda r: r.replicate)
    return records


def aggregate(records, oracle_value: Optional[float] = None,
              tol_abs: float = 1e-9, tol_rel: float = 0.0) -> dict:
    """Summary statistics of the final objectives (population std)."""
    if not records:
        raise ValueError("aggregate needs at least one record")
    finals = np.asarray([r.best_objective for r in records], dtype=np.float64)
    stats = {
        "replicates": len(records),
        "best": float(finals.min()),
        "worst": float(finals.max()),
        "mean": float(finals.mean()),
        "median": float(np.median(finals)),
        "std": float(finals.std()),
        "mean_evaluations": float(np.mean([r.evaluations for r in records])),
    }
    if oracle_value is not None:
        bar = oracle_value + tol_abs + tol_rel * abs(oracle_value)
        stats["oracle_value"] = oracle_value
        stats["success_rate"] = float(np.mean(finals <= bar))
    return stats


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


def write_trace_csv(records, path) -> None:
    """Convergence traces: replicate, seed, iteration, best_so_far, evaluations."""
    lines = ["replicate,seed,iteration,best_so_far,evaluations"]
    for rec in records:
        for t, value in enumerate(rec.best_trace):
            lines.append(f"{rec.replicate},{rec.seed},{t},{_fmt(value)},{rec.evals_trace[t]}")
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def read_trace_csv(path) -> list:
    """Rebuild (replicate, seed, best_trace, evals_trace) tuples from a trace file."""
    with open(path, encoding="ascii") as fh:
        lines = fh.read().splitlines()
    rows = {}
    for line in lines[1:]:
        rep, seed, itr, best, evals = line.split(",")
        entry = rows.setdefault(int(rep), (int(seed), [], []))
        entry[1].append(float(best))
        entry[2].append(int(evals))
    return [(rep, seed, best, evals) for rep, (seed, best, evals) in sorted(rows.items())]


def _config_as_dict(config: ExperimentConfig) -> dict:
    d = asdict(config)
    d["binarization"] = {"kind": config.binarization.kind, "tau": config.binarization.tau}
    return d


def summarize(config: ExperimentConfig, records) -> dict:
    """The deterministic summary document written next to the trace."""
    stats = aggregate(records, config.oracle_value, config.oracle_tol_abs,
                      config.oracle_tol_rel)
    best = min(records, key=lambda r: (r.best_objective, r.replicate))
    best_values = [float(v) if isinstance(v, (float, np.floating)) else int(v)
                   for v in best.best_values]
    summary = {
        "config": _config_as_dict(config),
        "stats": stats,
        "per_replicate": [
            {"replicate": r.replicate, "seed": r.seed,
             "objective": r.best_objective, "evaluations": r.evaluations}
            for r in records
        ],
        "best": {
            "replicate": best.replicate,
            "objective": best.best_objective,
            "values": best_values,
        },
    }
    if config.engine == "random-key":
        decoded = decode_random_key(np.asarray(best.best_values))
        summary["best"]["decoded"] = [int(v) for v in decoded]
    return summary


def write_summary_json(summary: dict, path) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        json.dump(summary, fh, sort_keys=True, indent=2)
        fh.write("\n")
