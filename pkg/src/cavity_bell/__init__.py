"""Entangled Bernoulli states of two cavity fields.

Analytic field statistics and CHSH Bell functions for superpositions of
one-photon binomial states in two separate single-mode cavities, together
with a simulation of the atom-based protocol that measures and generates
them. Closed forms and protocol unitaries are kept side by side so every
number can be checked two independent ways.
"""

from .bell import (
    BellConfig,
    DichotomicParams,
    analytic_s_b,
    angle_preset,
    bell_correlation,
    bell_function,
    bell_function_at_half,
    bell_function_operator,
    degree_of_entanglement,
    dichotomic_eigenstates,
    dichotomic_operator,
    eta_for_degree,
    optimal_p_scan,
    preset_config,
    violation_threshold,
)
from .binomial import (
    BinomialParams,
    GbsParams,
    binomial_overlap,
    binomial_state,
    gbs_state,
    orthogonal_partner,
    wrap_angle,
)
from .dynamics import (
    ALPHA_THRESHOLD,
    AtomFieldState,
    BellEstimate,
    DetectionReport,
    ExperimentConfig,
    GenerationResult,
    InitialAtomPair,
    RamseyParams,
    SensitivityRow,
    detection_threshold_check,
    generate_entangled_gbs,
    jc_evolve,
    probe_measure,
    ramsey_rotate,
    run_bell_experiment,
    timing_sensitivity,
)
from .fields import (
    EntangledGbsParams,
    FieldStats,
    entangled_gbs_state,
    field_correlation,
    field_covariance,
    field_expectation,
)
from .fock import (
    DEFAULT_N_MAX,
    FieldOperator,
    RandomStream,
    StateVector,
    TwoCavityState,
    annihilation,
    creation,
    expectation,
    fidelity,
    inner,
    number_operator,
    quadrature,
    tensor,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHA_THRESHOLD",
    "AtomFieldState",
    "BellConfig",
    "BellEstimate",
    "BinomialParams",
    "DEFAULT_N_MAX",
    "DetectionReport",
    "DichotomicParams",
    "EntangledGbsParams",
    "ExperimentConfig",
    "FieldOperator",
    "FieldStats",
    "GbsParams",
    "GenerationResult",
    "InitialAtomPair",
    "RamseyParams",
    "RandomStream",
    "SensitivityRow",
    "StateVector",
    "TwoCavityState",
    "analytic_s_b",
    "angle_preset",
    "annihilation",
    "bell_correlation",
    "bell_function",
    "bell_function_at_half",
    "bell_function_operator",
    "binomial_overlap",
    "binomial_state",
    "creation",
    "degree_of_entanglement",
    "detection_threshold_check",
    "dichotomic_eigenstates",
    "dichotomic_operator",
    "entangled_gbs_state",
    "eta_for_degree",
    "expectation",
    "fidelity",
    "field_correlation",
    "field_covariance",
    "field_expectation",
    "gbs_state",
    "generate_entangled_gbs",
    "inner",
    "jc_evolve",
    "number_operator",
    "optimal_p_scan",
    "orthogonal_partner",
    "preset_config",
    "probe_measure",
    "quadrature",
    "ramsey_rotate",
    "run_bell_experiment",
    "tensor",
    "timing_sensitivity",
    "violation_threshold",
    "wrap_angle",
]
