"""Active-count schemes operating on the 2 x 2 sample covariance.

All four schemes reduce to scalar statistics of (r1, r2, r12):

    eig-sum      (r1 + r2)/2 - sigma_z^2
    eig-diff     sqrt((r1 - r2)^2 + 4 |r12|^2) / (2 alpha)
    orthogonal   Re(r12)
    mle          (r1 + r2 + 2 Re(r12))/4 - sigma_z^2 / 2

where alpha = E[e^{j omega}] is the characteristic function of the CFO
distribution evaluated at 1.  The first two are the sum and difference of the
covariance eigenvalues recentred by their known population offsets; the
orthogonal scheme correlates the two received symbols directly, and the mle
scheme is the maximum-likelihood count for the zero-offset model.  The
``*_statistic`` functions return these real values; the scheme functions round
them half away from zero and clamp to the population range [0, n_potential].
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .covariance import SampleCovariance
from .model import CfoKind, CfoModel

# below this the eig-diff division by alpha amplifies covariance noise past
# any useful range, and alpha = 0 (offsets near half the symbol rate) would
# divide by zero outright
ALPHA_MIN = 1e-3


class Scheme(enum.Enum):
    EIG_SUM = "eig-sum"
    EIG_DIFF = "eig-diff"
    ORTHOGONAL = "orthogonal"
    MLE = "mle"


class EstimatorDomainError(ValueError):
    """A scheme was evaluated outside the parameter region where it is defined."""


@dataclass(frozen=True)
class EstimatorContext:
    """Side information shared by the schemes at one operating point.

    ``alpha`` may be any value in [-1, 1] here; the eig-diff scheme itself
    rejects values at or below ``ALPHA_MIN`` since it divides by alpha.
    """

    noise_variance: float
    alpha: float
    n_potential: int

    def __post_init__(self) -> None:
        if not math.isfinite(self.noise_variance) or self.noise_variance < 0.0:
            raise ValueError(f"noise_variance must be finite and >= 0, got {self.noise_variance}")
        if not -1.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [-1, 1], got {self.alpha}")
        if self.n_potential < 1:
            raise ValueError(f"n_potential must be >= 1, got {self.n_potential}")


def characteristic_function(cfo: CfoModel) -> float:
    """alpha = E[e^{j omega}] of the offset distribution; real since omega is symmetric.

    Uniform on [-a, a] gives sin(a)/a with a = 2*pi*epsilon_max; Gaussian with
    std a/3 gives exp(-a^2/18); no offset gives 1.
    """
    if cfo.kind is CfoKind.NONE or cfo.epsilon_max == 0.0:
        return 1.0
    bound = cfo.omega_max
    if cfo.kind is CfoKind.UNIFORM:
        return math.sin(bound) / bound
    std = bound / 3.0
    return math.exp(-0.5 * std * std)


def _round_half_away_from_zero(x: float) -> int:
    # round() ties to even, which would bias counts at exact .5 values
    return math.floor(x + 0.5) if x >= 0.0 else math.ceil(x - 0.5)


def _clamped_count(value: float, n_potential: int) -> int:
    return min(max(_round_half_away_from_zero(value), 0), n_potential)


def eig_sum_statistic(cov: SampleCovariance, ctx: EstimatorContext) -> float:
    """Half the covariance trace minus the known noise floor."""
    return 0.5 * (cov.r1 + cov.r2) - ctx.noise_variance


def eig_diff_statistic(cov: SampleCovariance, ctx: EstimatorContext) -> float:
    """Half the eigenvalue spread divided by alpha."""
    if ctx.alpha <= ALPHA_MIN:
        raise EstimatorDomainError(
            f"characteristic function too small (alpha = {ctx.alpha:.3e}, "
            f"limit {ALPHA_MIN}); the eig-diff scheme divides by it"
        )
    spread = math.sqrt((cov.r1 - cov.r2) ** 2 + 4.0 * (cov.r12.real**2 + cov.r12.imag**2))
    return spread / (2.0 * ctx.alpha)


def orthogonal_statistic(cov: SampleCovariance, ctx: EstimatorContext) -> float:
    """Symbol correlation Re(r12), exact in the mean when all offsets are zero."""
    return cov.r12.real


def mle_statistic(cov: SampleCovariance, ctx: EstimatorContext) -> float:
    """Maximum-likelihood count for the zero-offset model, before rounding."""
    return 0.25 * (cov.r1 + cov.r2 + 2.0 * cov.r12.real) - 0.5 * ctx.noise_variance


def eig_sum(cov: SampleCovariance, ctx: EstimatorContext) -> int:
    return _clamped_count(eig_sum_statistic(cov, ctx), ctx.n_potential)


def eig_diff(cov: SampleCovariance, ctx: EstimatorContext) -> int:
    return _clamped_count(eig_diff_statistic(cov, ctx), ctx.n_potential)


def orthogonal(cov: SampleCovariance, ctx: EstimatorContext) -> int:
    return _clamped_count(orthogonal_statistic(cov, ctx), ctx.n_potential)


def mle(cov: SampleCovariance, ctx: EstimatorContext) -> int:
    return _clamped_count(mle_statistic(cov, ctx), ctx.n_potential)


_DISPATCH = {
    Scheme.EIG_SUM: eig_sum,
    Scheme.EIG_DIFF: eig_diff,
    Scheme.ORTHOGONAL: orthogonal,
    Scheme.MLE: mle,
}

_STATISTIC_DISPATCH = {
    Scheme.EIG_SUM: eig_sum_statistic,
    Scheme.EIG_DIFF: eig_diff_statistic,
    Scheme.ORTHOGONAL: orthogonal_statistic,
    Scheme.MLE: mle_statistic,
}

# multiplications per estimate as (per-antenna slope, constant): the M-linear
# part accumulates the covariance entries each scheme touches, the constant
# covers the scalar combine step
_MULT_COUNTS = {
    Scheme.EIG_SUM: (2, 3),
    Scheme.EIG_DIFF: (3, 7),
    Scheme.ORTHOGONAL: (1, 1),
    Scheme.MLE: (3, 5),
}


def estimate(scheme: Scheme, cov: SampleCovariance, ctx: EstimatorContext) -> int:
    """Run one scheme on one sample covariance."""
    return _DISPATCH[scheme](cov, ctx)


def statistic(scheme: Scheme, cov: SampleCovariance, ctx: EstimatorContext) -> float:
    """Real-valued statistic of one scheme before rounding and clamping."""
    return _STATISTIC_DISPATCH[scheme](cov, ctx)


def multiplication_count(scheme: Scheme, m_antennas: int) -> int:
    """Real multiplications one estimate costs at array size ``m_antennas``."""
    if m_antennas < 1:
        raise ValueError(f"m_antennas must be >= 1, got {m_antennas}")
    slope, constant = _MULT_COUNTS[scheme]
    return slope * m_antennas + constant
