"""Gaussian spectral amplitudes and free envelopes."""

import numpy as np
import pytest

from zrdelay.wavepackets import (PacketSpec, envelope_norm_prefactor,
                                 envelope_sigma_sq, free_envelope,
                                 gaussian_spectral, spread_width)


def packet(**kw):
    base = dict(p=1.0, dx=10.0, x_i=-30.0, dispersion="quadratic")
    base.update(kw)
    return PacketSpec(**base)


class TestPacketSpec:
    def test_momentum_width(self):
        assert packet(dx=10.0).dk == pytest.approx(0.2)

    def test_velocity_by_law(self):
        assert packet().velocity == pytest.approx(1.0)
        assert packet(dispersion="linear", c=2.0).velocity == pytest.approx(2.0)

    def test_rejects_launch_too_close(self):
        with pytest.raises(ValueError, match="clear of the scatterer"):
            packet(x_i=-5.0)

    def test_rejects_nonpositive_parameters(self):
        with pytest.raises(ValueError):
            packet(p=-1.0)
        with pytest.raises(ValueError):
            packet(dx=0.0)
        with pytest.raises(ValueError):
            packet(dispersion="cubic")

    def test_group_velocities(self):
        k = np.array([0.5, 2.0])
        assert np.allclose(packet().group_velocities(k), k)
        assert np.allclose(packet(dispersion="linear", c=3.0).group_velocities(k), 3.0)


class TestSpectral:
    def test_packet_norm_is_one(self):
        """2*pi * integral |A|^2 dk = 1, i.e. the x-space packet has unit norm."""
        spectral = gaussian_spectral(packet())
        norm = 2.0 * np.pi * np.trapezoid(np.abs(spectral.values) ** 2, spectral.k)
        assert norm == pytest.approx(1.0, abs=1e-8)

    def test_narrow_momentum_grid_rejected(self):
        with pytest.raises(ValueError, match="too narrow"):
            gaussian_spectral(packet(), k_min=0.5, k_max=1.5)

    def test_launch_phase(self):
        spectral = gaussian_spectral(packet())
        i = np.argmin(np.abs(spectral.k - 1.1))
        expected = np.exp(-1j * (spectral.k[i] - 1.0) * (-30.0))
        ratio = spectral.values[i] / np.abs(spectral.values[i])
        assert ratio == pytest.approx(expected, abs=1e-12)


class TestEnvelope:
    def test_spreading_law(self):
        spec = packet()
        assert spread_width(spec, 0.0) == pytest.approx(10.0)
        assert spread_width(spec, 100.0) == pytest.approx(np.hypot(10.0, 0.2 * 100.0))
        assert spread_width(packet(dispersion="linear"), 1e5) == pytest.approx(10.0)

    def test_unit_norm_both_laws(self):
        for law in ("quadratic", "linear"):
            spec = packet(dispersion=law)
            for t in (0.0, 40.0, 400.0):
                x = np.linspace(-3000.0, 3000.0, 200001)
                rho = np.abs(free_envelope(spec, x, t)) ** 2
                assert np.trapezoid(rho, x) == pytest.approx(1.0, abs=1e-8), (law, t)

    def test_linear_translates_rigidly(self):
        spec = packet(dispersion="linear", c=1.5)
        x = np.linspace(-100.0, 100.0, 4001)
        a = free_envelope(spec, x, 0.0)
        b = free_envelope(spec, x + 1.5 * 20.0, 20.0)
        assert np.allclose(a, b, atol=1e-12)

    def test_prefactor_and_width_consistent(self):
        spec = packet()
        t = 25.0
        x = np.array([-3.0, 0.0, 4.0])
        direct = envelope_norm_prefactor(spec, t) * np.exp(
            -(x - spec.velocity * t - spec.x_i) ** 2 / envelope_sigma_sq(spec, t))
        assert np.allclose(direct, free_envelope(spec, x, t), rtol=1e-12)

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            free_envelope(packet(), np.zeros(3), -1.0)
