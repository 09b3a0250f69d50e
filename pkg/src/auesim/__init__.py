"""Counting active users from the 2 x 2 pilot covariance under carrier frequency offsets.

The package simulates a grant-free uplink where every active user sends the
same two-symbol pilot, forms the sample covariance of the two received symbol
snapshots, and compares four integer counting schemes on it, together with the
closed-form error curve of the eigenvalue-sum scheme.
"""

from .covariance import EigenPair, SampleCovariance, eigenvalues, sample_covariance
from .estimators import (
    ALPHA_MIN,
    EstimatorContext,
    EstimatorDomainError,
    Scheme,
    characteristic_function,
    eig_diff,
    eig_diff_statistic,
    eig_sum,
    eig_sum_statistic,
    estimate,
    mle,
    mle_statistic,
    multiplication_count,
    orthogonal,
    orthogonal_statistic,
    statistic,
)
from .harness import (
    CSV_HEADER,
    DEFAULT_TRIALS,
    ExperimentConfig,
    SweepAxis,
    SweepResult,
    SweepRow,
    SweepSpec,
    apply_axis_value,
    collect_estimates,
    nrmse,
    point_seed,
    run_point,
    run_sweep,
    snr_db_to_noise_variance,
    write_csv,
    write_json,
)
from .model import (
    CfoKind,
    CfoModel,
    ReceivedPilot,
    SystemConfig,
    draw_cfos,
    generate_received,
    phase_rotation,
)
from .theory import (
    CovarianceMoments,
    PopulationSpec,
    gamma_exact,
    moment_oracles,
    nrmse_eig_sum_theory,
    population_eigenvalues,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHA_MIN",
    "CSV_HEADER",
    "CfoKind",
    "CfoModel",
    "CovarianceMoments",
    "DEFAULT_TRIALS",
    "EigenPair",
    "EstimatorContext",
    "EstimatorDomainError",
    "ExperimentConfig",
    "PopulationSpec",
    "ReceivedPilot",
    "SampleCovariance",
    "Scheme",
    "SweepAxis",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "SystemConfig",
    "apply_axis_value",
    "characteristic_function",
    "collect_estimates",
    "draw_cfos",
    "eig_diff",
    "eig_diff_statistic",
    "eig_sum",
    "eig_sum_statistic",
    "eigenvalues",
    "estimate",
    "gamma_exact",
    "generate_received",
    "mle",
    "mle_statistic",
    "moment_oracles",
    "multiplication_count",
    "nrmse",
    "nrmse_eig_sum_theory",
    "orthogonal",
    "orthogonal_statistic",
    "phase_rotation",
    "point_seed",
    "population_eigenvalues",
    "run_point",
    "run_sweep",
    "sample_covariance",
    "snr_db_to_noise_variance",
    "statistic",
    "write_csv",
    "write_json",
]
