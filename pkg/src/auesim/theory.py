"""Closed-form population quantities the simulation is checked against.

For K active users with offsets omega_n, the population covariance of the
two received pilot symbols is

    E[R] = [[K + sigma_z^2,  g],
            [g*,             K + sigma_z^2]],    g = sum_n e^{j omega_n},

whose eigenvalues are K + sigma_z^2 +- |g|.  Averaging over the offset
distribution replaces e^{j omega} by its mean alpha, which is where the
second-order moments and the eig-sum error formula below come from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .covariance import EigenPair

_GAMMA_TOL = 1e-9


@dataclass(frozen=True)
class PopulationSpec:
    """Operating point for the closed-form quantities."""

    k_active: int
    noise_variance: float
    alpha: float = 1.0

    def __post_init__(self) -> None:
        if self.k_active < 0:
            raise ValueError(f"k_active must be >= 0, got {self.k_active}")
        if not math.isfinite(self.noise_variance) or self.noise_variance < 0.0:
            raise ValueError(f"noise_variance must be finite and >= 0, got {self.noise_variance}")
        if not -1.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [-1, 1], got {self.alpha}")


@dataclass(frozen=True)
class CovarianceMoments:
    """First and second moments of the diagonal covariance entries."""

    r1_mean: float
    r1_square_mean: float
    r1_r2_mean: float


def gamma_exact(omegas: np.ndarray) -> float:
    """Coherent offset sum |sum_n e^{j omega_n}| for one realized offset draw."""
    phasor = np.exp(1j * np.asarray(omegas, dtype=float)).sum()
    return float(abs(phasor))


def population_eigenvalues(spec: PopulationSpec, gamma: float) -> EigenPair:
    """Population covariance eigenvalues K + sigma_z^2 +- gamma.

    ``gamma`` is the realized coherent sum, which the triangle inequality
    bounds by K; values outside [0, K] are rejected.
    """
    k = spec.k_active
    if gamma < -_GAMMA_TOL or gamma > k * (1.0 + _GAMMA_TOL) + _GAMMA_TOL:
        raise ValueError(f"gamma must lie in [0, k_active={k}], got {gamma}")
    level = k + spec.noise_variance
    return EigenPair(lambda_max=level + gamma, lambda_min=level - gamma)


def nrmse_eig_sum_theory(
    k_active: int, m_antennas: int, noise_variance: float, alpha: float
) -> float:
    """Predicted normalized RMS error of the eig-sum scheme before rounding.

    The estimate is (R1 + R2)/2 - sigma_z^2 with per-antenna averaging over M
    i.i.d. snapshots, and its mean-squared error follows from the covariance
    moments (see ``moment_oracles``):

        MSE = (K + K(K-1) alpha^2 + (K + sigma_z^2)^2) / (2 M)

    Integer rounding of the final estimate adds roughly 1/12 to the MSE on
    top of this, which only matters when the MSE itself is order one.
    """
    if k_active < 1:
        raise ValueError(f"k_active must be >= 1 (the error is normalized by it), got {k_active}")
    if m_antennas < 1:
        raise ValueError(f"m_antennas must be >= 1, got {m_antennas}")
    if not math.isfinite(noise_variance) or noise_variance < 0.0:
        raise ValueError(f"noise_variance must be finite and >= 0, got {noise_variance}")
    if not -1.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [-1, 1], got {alpha}")
    k = float(k_active)
    mse = (k + k * (k - 1.0) * alpha**2 + (k + noise_variance) ** 2) / (2.0 * m_antennas)
    return math.sqrt(mse) / k


def moment_oracles(spec: PopulationSpec, m_antennas: int) -> CovarianceMoments:
    """Exact moments of R1 (and the R1*R2 cross moment) at the operating point.

    With P = K + sigma_z^2:

        E[R1]      = P
        E[R1^2]    = (1 + 1/M) P^2
        E[R1 R2]   = (K + K(K-1) alpha^2) / M + P^2

    R1 and R2 are identically distributed, so the same numbers serve for R2.
    """
    if m_antennas < 1:
        raise ValueError(f"m_antennas must be >= 1, got {m_antennas}")
    k = float(spec.k_active)
    power = k + spec.noise_variance
    return CovarianceMoments(
        r1_mean=power,
        r1_square_mean=(1.0 + 1.0 / m_antennas) * power**2,
        r1_r2_mean=(k + k * (k - 1.0) * spec.alpha**2) / m_antennas + power**2,
    )
