"""Complex shifts, phase times, asymptotes, and the generic weak average."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from zrdelay import weakvalues as wv
from zrdelay.amplitudes import (PotentialSpec, shift_distribution_reflection,
                                shift_distribution_transmission)

from oracles import brute_weak_average, transfer_matrix_amplitudes


class TestComplexShift:
    def test_zero_range_closed_form(self):
        shift = wv.complex_shift_transmission(1.0, PotentialSpec.zero_range(1.0))
        assert shift.value == pytest.approx(-0.5 + 0.5j, abs=1e-12)

    def test_free_is_zero(self):
        shift = wv.complex_shift_transmission(1.0, PotentialSpec.zero_range(0.0))
        assert shift.value == pytest.approx(0.0, abs=1e-12)

    def test_rectangular_matches_transfer_matrix_derivative(self):
        pot = PotentialSpec.rectangular(2.0, 0.0, 1.0)
        h = 1e-6
        t_plus, _ = transfer_matrix_amplitudes(1.0 + h, 2.0, 0.0, 1.0)
        t_minus, _ = transfer_matrix_amplitudes(1.0 - h, 2.0, 0.0, 1.0)
        expected = 1j * (np.log(t_plus) - np.log(t_minus)) / (2.0 * h)
        shift = wv.complex_shift_transmission(1.0, pot)
        assert shift.value == pytest.approx(expected, abs=1e-8)

    @given(p=st.floats(min_value=0.15, max_value=5.0),
           omega=st.floats(min_value=-3.0, max_value=3.0))
    @settings(max_examples=100)
    def test_analytic_vs_finite_difference(self, p, omega):
        pot = PotentialSpec.zero_range(omega)
        analytic = wv.complex_shift_transmission(p, pot).value
        h = 1e-6 * max(p, 1.0)
        from zrdelay.amplitudes import transmission_zero_range
        fd = 1j * (np.log(transmission_zero_range(p + h, omega))
                   - np.log(transmission_zero_range(p - h, omega))) / (2.0 * h)
        assert analytic == pytest.approx(fd, abs=1e-8)


class TestPhaseTime:
    def test_zero_range_value(self):
        assert wv.phase_time(1.0, PotentialSpec.zero_range(1.0)) == pytest.approx(0.5)
        assert wv.phase_time(2.0, PotentialSpec.zero_range(1.0)) == pytest.approx(0.1)

    def test_free_rectangular_is_traversal(self):
        pot = PotentialSpec.rectangular(0.0, 0.0, 3.0)
        assert wv.phase_time(2.0, pot) == pytest.approx(1.5, abs=1e-7)


class TestAsymptotes:
    def test_transmission(self):
        assert wv.asymptote_transmission_broad(1.0, 1.0) == pytest.approx(-0.5)
        two_term = wv.asymptote_transmission_dispersive(1.0, 1.0, 0.2, 100.0)
        assert two_term == pytest.approx(-0.5 + 0.5 * 0.04 / 2.0 * 100.0)

    def test_reflection(self):
        assert wv.asymptote_reflection(1.0, 1.0) == pytest.approx(0.5)
        assert wv.asymptote_reflection(1.0, -2.0) == pytest.approx(-0.4)
        assert wv.asymptote_reflection(1.0, 0.0) == 0.0
        assert wv.asymptote_reflection_narrow(1.0) == pytest.approx(0.5)
        assert wv.asymptote_reflection_narrow(-1.0) == pytest.approx(-0.5)

    def test_radial(self):
        assert wv.asymptote_radial(1.0, 1.0) == pytest.approx(1.0)
        assert wv.asymptote_radial(1.0, 1e-12) == pytest.approx(0.0, abs=1e-11)

    def test_radial_equals_phase_derivative(self):
        from zrdelay.amplitudes import s_matrix_radial
        p, alpha, h = 1.3, 0.8, 1e-6
        dphi = (np.angle(s_matrix_radial(p + h, alpha))
                - np.angle(s_matrix_radial(p - h, alpha))) / (2.0 * h)
        assert wv.asymptote_radial(p, alpha) == pytest.approx(-dphi, abs=1e-8)

    def test_radial_shift_is_real(self):
        """All momenta reflect perfectly, so there is no filtering: the
        radial mean shift has no imaginary part."""
        from zrdelay.amplitudes import shift_distribution_radial
        for p, alpha in [(1.0, 1.0), (0.7, -2.0), (2.5, 0.3)]:
            eta = shift_distribution_radial(p, alpha)
            assert abs(np.imag(eta.mean_shift())) < 1e-12


class TestWeakAverage:
    def test_pure_delta_returns_envelope_center(self):
        from zrdelay.amplitudes import shift_distribution_transmission
        eta = shift_distribution_transmission(1.0, 0.0)
        env = wv.GaussianEnvelope.real_normalized(2.5, 7.0)
        _, mean = wv.weak_average(eta, env, mode=wv.EXACT)
        assert mean == pytest.approx(2.5, abs=1e-9)

    def test_first_order_real_envelope(self):
        eta = shift_distribution_transmission(1.0, 1.0)
        env = wv.GaussianEnvelope.real_normalized(0.0, 30.0)
        shift, mean = wv.weak_average(eta, env, mode=wv.FIRST_ORDER)
        assert shift == pytest.approx(-0.5 + 0.5j, abs=1e-12)
        assert mean == pytest.approx(-0.5, abs=1e-12)

    def test_third_term_vanishes_for_real_envelope(self):
        env = wv.GaussianEnvelope.real_normalized(0.0, 12.0)
        assert abs(wv._envelope_phase_moment(env)) < 1e-12

    def test_exact_matches_brute_force(self):
        eta = shift_distribution_transmission(1.0, 1.0)
        env = wv.GaussianEnvelope.real_normalized(0.0, 8.0)
        _, mean = wv.weak_average(eta, env, mode=wv.EXACT)
        x = np.linspace(-70.0, 70.0, 7001)
        xp = np.linspace(-45.0, 0.0, 90001)
        brute = brute_weak_average(env.values, eta.branch_values, eta.delta_weight, x, xp)
        assert mean == pytest.approx(brute, abs=1e-6)

    def test_exact_matches_brute_force_reflection(self):
        eta = shift_distribution_reflection(1.0, 1.5)
        env = wv.GaussianEnvelope.real_normalized(0.0, 6.0)
        _, mean = wv.weak_average(eta, env, mode=wv.EXACT)
        x = np.linspace(-60.0, 60.0, 6001)
        xp = np.linspace(-35.0, 0.0, 70001)
        brute = brute_weak_average(env.values, eta.branch_values, eta.delta_weight, x, xp)
        assert mean == pytest.approx(brute, abs=1e-6)

    def test_expansion_converges_quadratically(self):
        eta = shift_distribution_transmission(1.0, 1.0)
        errs = []
        for dx in (5.0, 10.0, 20.0, 40.0):
            env = wv.GaussianEnvelope.real_normalized(0.0, dx)
            _, exact = wv.weak_average(eta, env, mode=wv.EXACT)
            _, first = wv.weak_average(eta, env, mode=wv.FIRST_ORDER)
            errs.append(abs(exact - first))
        ratios = [a / b for a, b in zip(errs, errs[1:])]
        for r in ratios:
            assert r > 1.5          # error at least halves per width doubling
            assert r == pytest.approx(4.0, abs=1.0)  # the symmetric envelope quarters it

    def test_unknown_mode_rejected(self):
        eta = shift_distribution_transmission(1.0, 1.0)
        env = wv.GaussianEnvelope.real_normalized(0.0, 5.0)
        with pytest.raises(ValueError):
            wv.weak_average(eta, env, mode="sloppy")
