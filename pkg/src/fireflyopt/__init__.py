"""Firefly-algorithm optimization toolkit.

Continuous firefly search plus the discretization routes (transfer-function
binarization, integer rounding, random keys, a direct mixed-binary update)
and native discrete-space variants (Hamming-attraction beta/alpha steps,
familiarity degrees, brightest-following, swap moves, inversion pools,
visual-range per-dimension updates, rank-gated knapsack search), with
benchmark problems, exhaustive oracles, and a reproducible experiment
harness.
"""

from .core import (ContractViolation, DimensionMismatch, Encoding,
                   EncodingViolation, InvalidObjective, ProblemDescriptor,
                   RngStream, Solution, Swarm, TrialRecord, clamp_to_bounds,
                   derive_seed, distance_euclidean, distance_hamming,
                   evaluate, init_population, is_brighter, rank)
from .continuous import (ContinuousParams, attractiveness, generation_step,
                         move_random, move_towards, run)
from .discrete import (DiscreteVariantConfig, alpha_step, beta_bounded,
                       beta_of_hamming, beta_step, draw_swap_count,
                       elite_random_flight, familiarity_beta,
                       familiarity_update, init_familiarity, inversion_moves,
                       knapsack_move_gate, local_search_brightest,
                       per_dim_update, rho_at, run_discrete, swap_move,
                       tsp_move_distance, visual_range_at)
from .discretize import (BinarizationRule, IntegerRounder, TransferBinarizer,
                         binarize, decode_random_key, mixed_binary_update,
                         move_gate, round_to_integer, transfer)
from .harness import (ConfigError, ExperimentConfig, aggregate, build_problem,
                      parse_config, run_experiment, run_replicate, summarize,
                      write_summary_json, write_trace_csv)
from .problems import (ContinuousBenchmark, KnapsackInstance, OracleSizeError,
                       TspInstance, benchmark_eval, benchmark_problem,
                       brute_force_optimum, knapsack_eval, knapsack_problem,
                       load_knapsack, load_tsp, random_instance,
                       random_key_problem, rastrigin, save_knapsack, save_tsp,
                       sphere, tsp_eval, tsp_problem)
from .schedules import (AlphaSchedule, GammaSchedule, RandomDirection,
                        alpha_at, constant_alpha, constant_gamma, emit_curve,
                        exp_ramp, floor_dim, gamma_at, geometric, linear,
                        per_iter_factor, random_direction, sigmoid_decay)

__version__ = "0.1.0"
