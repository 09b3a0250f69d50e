"""Received-pilot generation for a grant-free uplink with a two-symbol common pilot.

Every active user transmits the same pilot s = [1, 1]^T over a flat Rayleigh
channel to an M-antenna receiver.  A per-user carrier frequency offset (CFO)
rotates the second pilot symbol, so the received 2 x M block is

    Y = sum_n tau(omega_n) h_n^T + Z,      tau(omega) = [1, e^{j omega}]^T,

with channel rows h_n ~ CN(0, I_M), i.i.d. CN(0, noise_variance) noise, and
omega_n = 2*pi*epsilon_n the CFO of user n in radians per symbol.  Receive
power is assumed perfectly controlled (unit power per active user), so the
active count is the only amplitude parameter in the model.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

_SQRT2 = math.sqrt(2.0)


class CfoKind(enum.Enum):
    """Distribution family of the per-user normalized frequency offset."""

    UNIFORM = "uniform"
    GAUSSIAN = "gaussian"
    NONE = "none"


@dataclass(frozen=True)
class CfoModel:
    """CFO distribution with worst-case normalized offset ``epsilon_max``.

    ``UNIFORM`` draws omega uniformly on [-2*pi*epsilon_max, 2*pi*epsilon_max].
    ``GAUSSIAN`` draws omega from N(0, (2*pi*epsilon_max / 3)^2), untruncated,
    so the nominal worst case sits at three standard deviations.
    ``NONE`` pins every offset to zero and ignores ``epsilon_max``.
    """

    kind: CfoKind
    epsilon_max: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.epsilon_max) or self.epsilon_max < 0.0:
            raise ValueError(f"epsilon_max must be finite and >= 0, got {self.epsilon_max}")

    @property
    def omega_max(self) -> float:
        """Worst-case offset in radians per symbol, 2*pi*epsilon_max."""
        return 2.0 * math.pi * self.epsilon_max

    @classmethod
    def uniform(cls, epsilon_max: float) -> "CfoModel":
        return cls(kind=CfoKind.UNIFORM, epsilon_max=epsilon_max)

    @classmethod
    def gaussian(cls, epsilon_max: float) -> "CfoModel":
        return cls(kind=CfoKind.GAUSSIAN, epsilon_max=epsilon_max)

    @classmethod
    def none(cls) -> "CfoModel":
        return cls(kind=CfoKind.NONE, epsilon_max=0.0)


@dataclass(frozen=True)
class SystemConfig:
    """Static parameters of one simulated uplink.

    Attributes:
        n_potential: size of the user population; estimates are clamped to
            [0, n_potential].
        k_active: number of users actually transmitting in the pilot slot.
        m_antennas: receive array size M.
        noise_variance: per-entry noise power sigma_z^2 (linear, > 0).
        cfo: offset distribution shared by all users.
    """

    n_potential: int
    k_active: int
    m_antennas: int
    noise_variance: float
    cfo: CfoModel

    def __post_init__(self) -> None:
        if self.n_potential < 1:
            raise ValueError(f"n_potential must be >= 1, got {self.n_potential}")
        if not 0 <= self.k_active <= self.n_potential:
            raise ValueError(
                f"k_active must lie in [0, n_potential={self.n_potential}], got {self.k_active}"
            )
        if self.m_antennas < 1:
            raise ValueError(f"m_antennas must be >= 1, got {self.m_antennas}")
        if not math.isfinite(self.noise_variance) or self.noise_variance <= 0.0:
            raise ValueError(f"noise_variance must be finite and > 0, got {self.noise_variance}")

    @property
    def snr_db(self) -> float:
        """Per-user SNR in dB implied by unit receive power: -10*log10(sigma_z^2)."""
        return -10.0 * math.log10(self.noise_variance)


@dataclass(frozen=True, eq=False)
class ReceivedPilot:
    """One received 2 x M pilot block; row i is the array snapshot for symbol i."""

    samples: np.ndarray

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=complex)
        if samples.ndim != 2 or samples.shape[0] != 2 or samples.shape[1] < 1:
            raise ValueError(f"samples must have shape (2, M) with M >= 1, got {samples.shape}")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        object.__setattr__(self, "samples", samples)

    @property
    def m_antennas(self) -> int:
        return self.samples.shape[1]

    @property
    def y1(self) -> np.ndarray:
        return self.samples[0]

    @property
    def y2(self) -> np.ndarray:
        return self.samples[1]


def draw_cfos(cfo: CfoModel, k_active: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``k_active`` offsets omega (radians per symbol) from the CFO model."""
    if k_active < 0:
        raise ValueError(f"k_active must be >= 0, got {k_active}")
    if cfo.kind is CfoKind.UNIFORM:
        return rng.uniform(-cfo.omega_max, cfo.omega_max, size=k_active)
    if cfo.kind is CfoKind.GAUSSIAN:
        return rng.normal(0.0, cfo.omega_max / 3.0, size=k_active)
    return np.zeros(k_active)


def phase_rotation(omega: float) -> np.ndarray:
    """Pilot steering vector tau(omega) = [1, e^{j omega}]^T."""
    return np.array([1.0 + 0.0j, np.exp(1j * omega)])


def generate_received(
    cfg: SystemConfig, rng: np.random.Generator, *, with_noise: bool = True
) -> ReceivedPilot:
    """Simulate one pilot slot and return the received 2 x M block.

    Draw order is fixed (active set, offsets, channels, noise) so a given
    generator state always produces the same block.  ``with_noise=False``
    zeroes the additive noise; it exists for tests that need the noise-free
    signal component, which the configuration itself cannot express because
    ``noise_variance`` must stay positive.
    """
    k, m = cfg.k_active, cfg.m_antennas
    # cardinality is all the downstream schemes use; indices are drawn anyway
    # so the stream layout matches a full system simulation
    _active = rng.choice(cfg.n_potential, size=k, replace=False)
    omegas = draw_cfos(cfg.cfo, k, rng)
    channels = (rng.standard_normal((k, m)) + 1j * rng.standard_normal((k, m))) / _SQRT2
    rotation = np.vstack([np.ones(k), np.exp(1j * omegas)])
    samples = rotation @ channels
    if with_noise:
        scale = math.sqrt(cfg.noise_variance / 2.0)
        samples = samples + scale * (rng.standard_normal((2, m)) + 1j * rng.standard_normal((2, m)))
    return ReceivedPilot(samples=samples)
