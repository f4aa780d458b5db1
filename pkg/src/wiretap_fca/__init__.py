"""Fast correlation attacks on LFSR keystreams observed through a noisy
wiretap channel: sequence generation, the two-BSC observation model,
parity-check reliability statistics, both classic attacks, and a seeded
experiment harness."""

from .gf2 import (
    BitSequence,
    DimensionError,
    Gf2Matrix,
    SingularMatrixError,
    rank_extend,
    solve_gf2,
    xor_sequences,
)
from .lfsr import (
    ConnectionPolynomial,
    DegenerateKeyError,
    LfsrKey,
    generate,
    output_matrix,
    output_row,
    small_period_ok,
)
from .channel import ChannelParams, PipelineTrace, bsc_transmit, cascade, run_pipeline
from .checks import (
    CheckSystem,
    InsufficientLengthError,
    ReliabilityModel,
    build_checks,
    even_parity_prob,
    posterior,
)
from .attack_a import (
    AttackAConfig,
    AttackAReport,
    SelectionFailureError,
    bound_trials,
    estimate_rbar,
    exhaustive_correlation_key,
    run_attack_a,
    select_reliable,
)
from .attack_b import (
    AttackBConfig,
    AttackBReport,
    CorrectionAnalysis,
    UndefinedRatioError,
    derive_threshold,
    operational_flip_rule,
    predict_capability,
    run_attack_b,
)
from .harness import ConfigError, ExperimentConfig, config_from_mapping, run_experiment

__version__ = "0.1.0"

__all__ = [
    "BitSequence", "Gf2Matrix", "DimensionError", "SingularMatrixError",
    "xor_sequences", "solve_gf2", "rank_extend",
    "ConnectionPolynomial", "LfsrKey", "DegenerateKeyError",
    "generate", "output_row", "output_matrix", "small_period_ok",
    "ChannelParams", "PipelineTrace", "cascade", "bsc_transmit", "run_pipeline",
    "CheckSystem", "ReliabilityModel", "InsufficientLengthError",
    "build_checks", "even_parity_prob", "posterior",
    "AttackAConfig", "AttackAReport", "SelectionFailureError",
    "select_reliable", "run_attack_a", "bound_trials", "estimate_rbar",
    "exhaustive_correlation_key",
    "AttackBConfig", "AttackBReport", "CorrectionAnalysis", "UndefinedRatioError",
    "derive_threshold", "operational_flip_rule", "predict_capability", "run_attack_b",
    "ConfigError", "ExperimentConfig", "config_from_mapping", "run_experiment",
    "__version__",
]
