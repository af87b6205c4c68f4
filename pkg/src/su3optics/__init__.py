"""Exact numerics for three-mode quantum optical fields: truncated Fock
spaces, the nine bilinear mode observables generating SU(3), polarization
degrees from coherency-matrix invariants, linear-optical detection
networks, and amplitude-observable counting statistics.
"""
from __future__ import annotations

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    DimensionMismatchError,
    DomainError,
    Su3OpticsError,
    TruncationError,
    UndefinedStatisticError,
)
from .fock import (
    COHERENT_TAIL_TOLERANCE,
    FockSpace,
    QuantumState,
    Su3Params,
    coherent_state,
    expectation,
    mode_correlations,
    psi_n_state,
    qutrit_w_state,
    total_number_distribution,
    unit_vector,
    variance,
)
from .su3 import (
    GellMannSet,
    WitnessRecord,
    build_gellmann,
    gellmann_vector,
    squeezing_witness,
    structure_constant,
    structure_constant_check,
)
from .polarimetry import (
    CoherencyMatrix,
    PolarizationReport,
    coherency2,
    coherency3,
    complete_polarization_test,
    degree_p2,
    degree_p2_stokes,
    degree_p3,
    p3_from_invariants,
    report_from_correlations,
    stokes_parameters,
)
from .network import (
    DetectionStats,
    Element,
    HomodyneEstimate,
    ModeNetwork,
    balanced_bs,
    build_splitter_stage,
    build_twelve_port,
    detection_stats,
    embed_signal,
    evolve_pure,
    homodyne_limit,
    measured_combination_matrix,
    mode_unitary,
    splitter_stage,
)
from .amplitude import (
    AmplitudeStats,
    ConditioningPolicy,
    CountingDistribution,
    amplitude_statistics,
    counting_distribution,
    linearized_variances,
    number_covariances,
    poisson_product_distribution,
    weak_field_statistics,
)
from .serialization import (
    canonical_json,
    config_hash,
    network_to_record,
    record_to_network,
    record_to_state,
    state_to_record,
)

__all__ = [
    "COHERENT_TAIL_TOLERANCE",
    "AmplitudeStats",
    "CapacityError",
    "CoherencyMatrix",
    "ConditioningPolicy",
    "CountingDistribution",
    "DetectionStats",
    "DimensionMismatchError",
    "DomainError",
    "Element",
    "FockSpace",
    "GellMannSet",
    "HomodyneEstimate",
    "ModeNetwork",
    "PolarizationReport",
    "QuantumState",
    "Su3OpticsError",
    "Su3Params",
    "TruncationError",
    "UndefinedStatisticError",
    "WitnessRecord",
    "amplitude_statistics",
    "balanced_bs",
    "build_gellmann",
    "build_splitter_stage",
    "build_twelve_port",
    "canonical_json",
    "coherency2",
    "coherency3",
    "coherent_state",
    "complete_polarization_test",
    "config_hash",
    "counting_distribution",
    "degree_p2",
    "degree_p2_stokes",
    "degree_p3",
    "detection_stats",
    "embed_signal",
    "evolve_pure",
    "expectation",
    "gellmann_vector",
    "homodyne_limit",
    "linearized_variances",
    "measured_combination_matrix",
    "mode_correlations",
    "mode_unitary",
    "network_to_record",
    "number_covariances",
    "p3_from_invariants",
    "poisson_product_distribution",
    "psi_n_state",
    "qutrit_w_state",
    "record_to_network",
    "record_to_state",
    "report_from_correlations",
    "splitter_stage",
    "squeezing_witness",
    "state_to_record",
    "stokes_parameters",
    "structure_constant",
    "structure_constant_check",
    "total_number_distribution",
    "unit_vector",
    "variance",
    "weak_field_statistics",
]
