"""Tests for the received-pilot signal model."""

import math

import numpy as np
import pytest

from auesim.model import (
    CfoKind,
    CfoModel,
    ReceivedPilot,
    SystemConfig,
    draw_cfos,
    generate_received,
    phase_rotation,
)

BASE_CFG = SystemConfig(
    n_potential=100,
    k_active=25,
    m_antennas=32,
    noise_variance=0.1,
    cfo=CfoModel.uniform(0.15),
)


class TestCfoModel:
    def test_omega_max_is_two_pi_epsilon(self):
        cfo = CfoModel.uniform(0.15)
        assert cfo.omega_max == pytest.approx(2.0 * math.pi * 0.15, rel=1e-15)

    def test_constructors_set_kind(self):
        assert CfoModel.uniform(0.1).kind is CfoKind.UNIFORM
        assert CfoModel.gaussian(0.1).kind is CfoKind.GAUSSIAN
        assert CfoModel.none().kind is CfoKind.NONE
        assert CfoModel.none().epsilon_max == 0.0

    @pytest.mark.parametrize("bad", [-0.01, math.nan, math.inf])
    def test_rejects_bad_epsilon(self, bad):
        with pytest.raises(ValueError):
            CfoModel.uniform(bad)


class TestDrawCfos:
    def test_uniform_respects_bounds(self):
        rng = np.random.default_rng(11)
        cfo = CfoModel.uniform(0.15)
        omegas = draw_cfos(cfo, 100_000, rng)
        assert omegas.shape == (100_000,)
        assert np.all(np.abs(omegas) <= cfo.omega_max)

    def test_uniform_phasor_mean_matches_sinc(self):
        """The empirical mean of e^{j omega} estimates sin(a)/a for uniform offsets."""
        rng = np.random.default_rng(12)
        cfo = CfoModel.uniform(0.15)
        omegas = draw_cfos(cfo, 200_000, rng)
        phasor_mean = np.exp(1j * omegas).mean()
        a = cfo.omega_max
        expected = math.sin(a) / a
        # five-sigma band on the real part; imaginary part is zero-mean
        sigma = np.std(np.cos(omegas)) / math.sqrt(omegas.size)
        assert abs(phasor_mean.real - expected) < 5 * sigma
        assert abs(phasor_mean.imag) < 5 / math.sqrt(2 * omegas.size)

    def test_gaussian_std_is_third_of_omega_max(self):
        rng = np.random.default_rng(13)
        cfo = CfoModel.gaussian(0.15)
        omegas = draw_cfos(cfo, 200_000, rng)
        target = cfo.omega_max / 3.0
        assert abs(omegas.mean()) < 5 * target / math.sqrt(omegas.size)
        assert omegas.std() == pytest.approx(target, rel=0.02)

    def test_gaussian_is_untruncated(self):
        """About 0.27% of draws should exceed the nominal worst case (3 sigma)."""
        rng = np.random.default_rng(14)
        cfo = CfoModel.gaussian(0.15)
        omegas = draw_cfos(cfo, 100_000, rng)
        assert np.count_nonzero(np.abs(omegas) > cfo.omega_max) > 0

    def test_none_and_zero_epsilon_give_zero_offsets(self):
        rng = np.random.default_rng(15)
        assert np.all(draw_cfos(CfoModel.none(), 50, rng) == 0.0)
        assert np.all(draw_cfos(CfoModel.uniform(0.0), 50, rng) == 0.0)

    def test_empty_draw(self):
        rng = np.random.default_rng(16)
        assert draw_cfos(CfoModel.uniform(0.1), 0, rng).shape == (0,)

    def test_negative_count_rejected(self):
        rng = np.random.default_rng(17)
        with pytest.raises(ValueError):
            draw_cfos(CfoModel.uniform(0.1), -1, rng)


class TestSystemConfig:
    def test_snr_db_property(self):
        assert BASE_CFG.snr_db == pytest.approx(10.0, rel=1e-12)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n_potential=0),
            dict(k_active=101),
            dict(k_active=-1),
            dict(m_antennas=0),
            dict(noise_variance=0.0),
            dict(noise_variance=-0.1),
            dict(noise_variance=math.nan),
        ],
    )
    def test_rejects_bad_parameters(self, kwargs):
        base = dict(
            n_potential=100,
            k_active=25,
            m_antennas=32,
            noise_variance=0.1,
            cfo=CfoModel.uniform(0.15),
        )
        base.update(kwargs)
        with pytest.raises(ValueError):
            SystemConfig(**base)


class TestPhaseRotation:
    def test_zero_offset_is_all_ones(self):
        np.testing.assert_allclose(phase_rotation(0.0), np.array([1.0, 1.0]), atol=1e-15)

    def test_unit_modulus_and_phase(self):
        omega = 0.37
        tau = phase_rotation(omega)
        np.testing.assert_allclose(np.abs(tau), 1.0, atol=1e-15)
        assert np.angle(tau[1]) == pytest.approx(omega, rel=1e-12)


class TestReceivedPilot:
    def test_row_views(self):
        samples = np.arange(6, dtype=float).reshape(2, 3) + 0j
        pilot = ReceivedPilot(samples=samples)
        assert pilot.m_antennas == 3
        np.testing.assert_array_equal(pilot.y1, samples[0])
        np.testing.assert_array_equal(pilot.y2, samples[1])

    @pytest.mark.parametrize("shape", [(3, 4), (2, 0), (2,)])
    def test_rejects_bad_shapes(self, shape):
        with pytest.raises(ValueError):
            ReceivedPilot(samples=np.zeros(shape, dtype=complex))

    def test_rejects_non_finite(self):
        samples = np.zeros((2, 4), dtype=complex)
        samples[1, 2] = np.nan
        with pytest.raises(ValueError):
            ReceivedPilot(samples=samples)


class TestGenerateReceived:
    def test_shape_and_dtype(self):
        pilot = generate_received(BASE_CFG, np.random.default_rng(20))
        assert pilot.samples.shape == (2, 32)
        assert pilot.samples.dtype == np.complex128

    def test_equal_seeds_give_identical_blocks(self):
        """One seed, one block: the generator is the only source of randomness."""
        a = generate_received(BASE_CFG, np.random.default_rng(21))
        b = generate_received(BASE_CFG, np.random.default_rng(21))
        np.testing.assert_array_equal(a.samples, b.samples)
        c = generate_received(BASE_CFG, np.random.default_rng(22))
        assert not np.array_equal(a.samples, c.samples)

    def test_noise_free_single_user_rows_are_proportional(self):
        """Without noise, K=1 gives y2 = e^{j omega} y1 exactly (rank-one block)."""
        cfg = SystemConfig(
            n_potential=100,
            k_active=1,
            m_antennas=16,
            noise_variance=0.1,
            cfo=CfoModel.uniform(0.15),
        )
        pilot = generate_received(cfg, np.random.default_rng(23), with_noise=False)
        ratio = pilot.y2 / pilot.y1
        np.testing.assert_allclose(ratio, ratio[0], rtol=1e-12)
        assert abs(ratio[0]) == pytest.approx(1.0, rel=1e-12)

    def test_noise_free_zero_users_is_silent(self):
        cfg = SystemConfig(
            n_potential=100,
            k_active=0,
            m_antennas=8,
            noise_variance=0.1,
            cfo=CfoModel.uniform(0.15),
        )
        pilot = generate_received(cfg, np.random.default_rng(24), with_noise=False)
        np.testing.assert_array_equal(pilot.samples, np.zeros((2, 8), dtype=complex))

    def test_noise_only_power(self):
        """With K=0 the block is pure noise with per-entry power noise_variance."""
        cfg = SystemConfig(
            n_potential=100,
            k_active=0,
            m_antennas=64,
            noise_variance=0.5,
            cfo=CfoModel.none(),
        )
        rng = np.random.default_rng(25)
        powers = [np.mean(np.abs(generate_received(cfg, rng).samples) ** 2) for _ in range(200)]
        mean_power = np.mean(powers)
        # 200 blocks of 128 entries; |z|^2 has mean 0.5 and std 0.5
        sigma = 0.5 / math.sqrt(200 * 128)
        assert abs(mean_power - 0.5) < 5 * sigma

    def test_received_power_matches_population_value(self):
        """Per-entry received power should average to k_active + noise_variance."""
        rng = np.random.default_rng(26)
        trials = 400
        power = np.mean(
            [np.mean(np.abs(generate_received(BASE_CFG, rng).samples) ** 2) for _ in range(trials)]
        )
        expected = BASE_CFG.k_active + BASE_CFG.noise_variance
        # per-entry power is roughly exponential-like; entries within a block
        # are correlated across the 2 rows, so take a generous sigma
        sigma = expected / math.sqrt(trials * BASE_CFG.m_antennas / 2)
        assert abs(power - expected) < 5 * sigma
