"""Complex shifts, phase times, asymptotic delay predictions, and the generic
weak-value average of an amplitude distribution against a broad envelope."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .amplitudes import (
    MASS,
    PotentialSpec,
    ShiftDistribution,
    transmission_rectangular,
    transmission_zero_range,
)

FD_STEP_SCALE = 1e-6


@dataclass(frozen=True)
class ComplexShift:
    """Complex first moment of a shift distribution (length units)."""

    value: complex
    channel: str = "transmitted"


@dataclass(frozen=True)
class GaussianEnvelope:
    """G(x) = prefactor * exp(-(x - center)^2 / sigma_sq), L2-normalized."""

    center: float
    sigma_sq: complex
    prefactor: complex

    @classmethod
    def real_normalized(cls, center: float, width: float) -> "GaussianEnvelope":
        return cls(center=center, sigma_sq=complex(width**2),
                   prefactor=complex((2.0 / (np.pi * width**2)) ** 0.25))

    def values(self, x):
        x = np.asarray(x, dtype=float)
        return self.prefactor * np.exp(-((x - self.center) ** 2) / self.sigma_sq)

    def abs_width(self) -> float:
        """Width of |G| (scale of the probability envelope)."""
        inv = np.real(1.0 / self.sigma_sq)
        return float(1.0 / np.sqrt(inv))


def _log_derivative_t(p: float, potential: PotentialSpec) -> complex:
    """d ln T / dp by central differences with branch-safe phase handling."""
    h = FD_STEP_SCALE * max(p, 1.0)
    if potential.kind == "zero_range":
        t_plus = transmission_zero_range(p + h, potential.omega)
        t_minus = transmission_zero_range(p - h, potential.omega)
    elif potential.kind == "rectangular":
        t_plus = transmission_rectangular(p + h, potential.height, potential.a, potential.b)
        t_minus = transmission_rectangular(p - h, potential.height, potential.a, potential.b)
    else:
        raise ValueError("complex shift defined for transmission geometries only")
    if min(abs(t_plus), abs(t_minus)) < 1e-300:
        raise ValueError("|T| underflow: log-derivative ill-posed")
    ratio = t_plus / t_minus
    return (np.log(abs(ratio)) + 1j * np.angle(ratio)) / (2.0 * h)


def complex_shift_transmission(p: float, potential: PotentialSpec) -> ComplexShift:
    """x'_bar(p) = i * d[ln T(p)]/dp; closed form for the zero-range case."""
    if potential.kind == "zero_range":
        omega = potential.omega
        if omega == 0.0:
            return ComplexShift(value=0.0 + 0.0j)
        d = p * p + omega * omega
        return ComplexShift(value=complex(-omega / d, omega**2 / (p * d)))
    return ComplexShift(value=1j * _log_derivative_t(p, potential))


def phase_time(p: float, potential: PotentialSpec) -> float:
    """Stationary-phase traversal estimate: (b-a)/v - Re[x'_bar]/v, v = p/m."""
    v = p / MASS
    width = potential.width if potential.kind == "rectangular" else 0.0
    return width / v - np.real(complex_shift_transmission(p, potential).value) / v


def asymptote_transmission_dispersive(p: float, omega: float, dk: float, t: float) -> float:
    """Two-term broad-packet prediction: Re[x'_bar] plus the momentum-filtering
    excess drift Im[x'_bar] * dk^2 t / (2m)."""
    shift = complex_shift_transmission(p, PotentialSpec.zero_range(omega)).value
    return float(np.real(shift) + np.imag(shift) * dk * dk * t / (2.0 * MASS))


def asymptote_transmission_broad(p: float, omega: float) -> float:
    """Broad-packet limit Re[x'_bar] = -omega / (p^2 + omega^2)."""
    return float(np.real(complex_shift_transmission(p, PotentialSpec.zero_range(omega)).value))


def asymptote_reflection(p: float, omega: float) -> float:
    """Broad-packet reflection delay: omega / (p^2 + omega^2)."""
    return omega / (p * p + omega * omega)


def asymptote_reflection_narrow(omega: float) -> float:
    """Narrow dispersionless-packet reflection delay: 1/(2*omega)."""
    if omega == 0.0:
        raise ValueError("omega must be nonzero")
    return 1.0 / (2.0 * omega)


def asymptote_radial(p: float, alpha: float) -> float:
    """Broad-packet radial shift: 2*alpha / (1 + p^2 alpha^2)."""
    return 2.0 * alpha / (1.0 + (p * alpha) ** 2)


EXACT = "exact"
FIRST_ORDER = "first_order"


def weak_average(eta: ShiftDistribution, envelope: GaussianEnvelope,
                 mode: str = EXACT, n: int = 1 << 15) -> tuple[complex, float]:
    """Mean position of |convolution(G, eta)|^2 and the complex shift of eta.

    EXACT evaluates the inner convolution in closed form, then integrates by
    trapezoid.  FIRST_ORDER returns the broad-envelope three-term expansion,
    whose final term vanishes for a real envelope.
    """
    shift = eta.mean_shift()
    if mode == FIRST_ORDER:
        third = 2.0 * np.imag(shift) * _envelope_phase_moment(envelope)
        return shift, float(envelope.center + np.real(shift) + third)
    if mode != EXACT:
        raise ValueError(f"unknown mode {mode!r}")
    w = envelope.abs_width()
    extent = 0.0
    if eta.branch_side is not None:
        extent = 20.0 / eta.decay_rate
    x = np.linspace(envelope.center - 8.0 * w - extent, envelope.center + 8.0 * w + extent, n)
    conv = eta.convolve_gaussian(x, envelope.center, envelope.sigma_sq, envelope.prefactor)
    rho = np.abs(conv) ** 2
    denom = np.trapezoid(rho, x)
    if denom <= 1e-300:
        raise ValueError("vanishing weak-average denominator")
    return shift, float(np.trapezoid(x * rho, x) / denom)


def _envelope_phase_moment(envelope: GaussianEnvelope) -> float:
    """integral x Im[G*(x) G'(x)] dx / integral |G|^2 dx, closed form."""
    inv = 1.0 / envelope.sigma_sq
    a2 = 2.0 * np.real(inv)
    # int x Im[G* G'] dx = -|N|^2 sqrt(pi) Im(inv) a2^(-3/2); int |G|^2 = |N|^2 sqrt(pi/a2)
    return float(-np.imag(inv) / a2)
