"""Finite-dimensional teleportation simulator.

Dense-matrix simulation of entanglement-assisted state transfer between
a sender, a reference and a receiver, with channel effects on either
line.  Supports qudit dimensions up to 32, tunable-strength taps on the
reference, and exact cross-validation between a full-state oracle and
per-outcome transfer operators.
"""
from .bell import (
    BellFamily,
    BellOutcome,
    EntangledResource,
    bell_outcome_state,
    clock_unitary,
    completeness_deviation,
    make_bell_family,
    make_entangled_resource,
    mirror_operator,
    shift_unitary,
    weyl_unitary,
)
from .eavesdrop import (
    EavesdropReport,
    NullBranchError,
    analyze_eavesdropping,
    conditional_fidelity,
    conditional_output,
    distinguishability,
    eavesdrop_operator,
    joint_probability,
    joint_probability_table,
    marginal_l,
    marginal_m,
    projective_case_analysis,
    sequential_decomposition_check,
    total_fidelity,
)
from .effects import (
    EffectOperator,
    MeasurementFamily,
    kraus_mixture,
    make_measurement_family,
    strength_family,
    unitary_effect,
    validate_family,
)
from .engine import (
    ScenarioConfig,
    TeleportRecord,
    fast_run,
    ideal_decomposition_check,
    make_scenario,
    run_oracle,
    transfer_operator,
)
from .linalg import (
    DEFAULT_TOL,
    basis_state,
    check_predicates,
    dagger,
    hermitian_sqrt,
    partial_trace,
    tensor_product,
    transpose_in_basis,
    uniform_state,
)
from .sampling import child_rng, random_hermitian, random_state, random_unitary
from .verify import run_verification

__version__ = "0.1.0"

__all__ = [
    "BellFamily",
    "BellOutcome",
    "DEFAULT_TOL",
    "EavesdropReport",
    "EffectOperator",
    "EntangledResource",
    "MeasurementFamily",
    "NullBranchError",
    "ScenarioConfig",
    "TeleportRecord",
    "analyze_eavesdropping",
    "basis_state",
    "bell_outcome_state",
    "check_predicates",
    "child_rng",
    "clock_unitary",
    "completeness_deviation",
    "conditional_fidelity",
    "conditional_output",
    "dagger",
    "distinguishability",
    "eavesdrop_operator",
    "fast_run",
    "hermitian_sqrt",
    "ideal_decomposition_check",
    "joint_probability",
    "joint_probability_table",
    "kraus_mixture",
    "make_bell_family",
    "make_entangled_resource",
    "make_measurement_family",
    "make_scenario",
    "marginal_l",
    "marginal_m",
    "mirror_operator",
    "partial_trace",
    "projective_case_analysis",
    "random_hermitian",
    "random_state",
    "random_unitary",
    "run_oracle",
    "run_verification",
    "sequential_decomposition_check",
    "shift_unitary",
    "strength_family",
    "tensor_product",
    "total_fidelity",
    "transfer_operator",
    "transpose_in_basis",
    "uniform_state",
    "unitary_effect",
    "validate_family",
    "weyl_unitary",
]
