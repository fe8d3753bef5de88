"""Clock-pointer simulator for traversal durations of a rectangular region.

The pointer's final state is computed in the momentum (lambda) representation,
where the Gaussian pointer profile regulates the otherwise conditionally
convergent duration integral:

    Phi(f) = (2*pi)^-1 * integral Ghat(lambda) T(p, U + lambda) exp(i lambda f) dlambda.

The pointer has no kinetic term (infinite-mass pointer), so its profile is
displaced without spreading.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .amplitudes import MASS, PotentialSpec, transmission_rectangular
from .propagator import synthesize_on_grid

LAMBDA_SPAN_SIGMAS = 12.0
DEFAULT_N_LAMBDA = 4096
DEFAULT_N_F = 8192
FD_STEP = 1e-6


@dataclass(frozen=True)
class PointerSpec:
    """Initial Gaussian pointer profile G(f) of width df, centred at 0, L2-normalized."""

    df: float

    def __post_init__(self):
        if self.df <= 0:
            raise ValueError("pointer width must be positive")

    def profile_prefactor(self) -> float:
        return (2.0 / (np.pi * self.df**2)) ** 0.25

    def fourier(self, lam):
        """Ghat(lambda) = integral G(f) exp(-i lambda f) df (real Gaussian)."""
        lam = np.asarray(lam, dtype=float)
        return self.profile_prefactor() * np.sqrt(np.pi) * self.df * np.exp(
            -(lam * self.df) ** 2 / 4.0)


@dataclass(frozen=True)
class ComplexTime:
    """Complex first moment of the clock amplitude distribution (time units)."""

    value: complex


def _transmission_shifted(p: float, potential: PotentialSpec, lam):
    """T(p, U + lambda) on the region [a, b]; lambda may be an array."""
    if potential.kind != "rectangular":
        raise ValueError("clock operations require a rectangular potential")
    return transmission_rectangular(p, potential.height + np.asarray(lam, dtype=complex),
                                    potential.a, potential.b)


def _lambda_grid(pointer: PointerSpec, n: int) -> np.ndarray:
    span = LAMBDA_SPAN_SIGMAS * 2.0 / pointer.df
    lam = np.linspace(-span, span, n)
    ghat = pointer.fourier(lam)
    if ghat[0] > 1e-12 * ghat.max() or ghat[-1] > 1e-12 * ghat.max():
        raise ValueError("lambda grid truncates the pointer spectrum")
    return lam


def pointer_final_state(pointer: PointerSpec, p: float, potential: PotentialSpec,
                        f: np.ndarray | None = None,
                        n_lambda: int = DEFAULT_N_LAMBDA,
                        n_f: int = DEFAULT_N_F) -> tuple[np.ndarray, np.ndarray]:
    """Final pointer profile Phi on a reading grid f; returns (f, Phi)."""
    if f is None:
        tau0 = MASS * potential.width / p
        half = 8.0 * pointer.df + 30.0 * tau0
        f = np.linspace(-half, half + 10.0 * tau0, n_f)
    lam = _lambda_grid(pointer, n_lambda)
    coeff = pointer.fourier(lam) * np.asarray(_transmission_shifted(p, potential, lam))
    phi = synthesize_on_grid(f, lam, coeff, sign=+1) / (2.0 * np.pi)
    return f, phi


def mean_pointer_reading(pointer: PointerSpec, p: float, potential: PotentialSpec,
                         n_lambda: int = DEFAULT_N_LAMBDA, n_f: int = DEFAULT_N_F) -> float:
    """<f> over |Phi|^2; converges to Re[complex_time] as df grows."""
    f, phi = pointer_final_state(pointer, p, potential, n_lambda=n_lambda, n_f=n_f)
    rho = np.abs(phi) ** 2
    denom = np.trapezoid(rho, f)
    if denom <= 1e-300:
        raise ValueError("vanishing pointer norm")
    return float(np.trapezoid(f * rho, f) / denom)


def transmitted_weight(pointer: PointerSpec, p: float, potential: PotentialSpec,
                       n_lambda: int = DEFAULT_N_LAMBDA) -> float:
    """integral |Phi|^2 df = (2*pi)^-1 integral Ghat^2 |T|^2 dlambda (Parseval)."""
    lam = _lambda_grid(pointer, n_lambda)
    integrand = pointer.fourier(lam) ** 2 * np.abs(_transmission_shifted(p, potential, lam)) ** 2
    return float(np.trapezoid(integrand, lam) / (2.0 * np.pi))


def complex_time(p: float, potential: PotentialSpec) -> ComplexTime:
    """First moment of the clock amplitude: i * d[ln T(p, U + lambda)]/dlambda at 0.

    Sign fixed by the duration-Fourier convention T(U + lambda) =
    integral A_T(tau) exp(-i lambda tau) dtau, which makes the free-region
    value exactly (b-a)/v.
    """
    h = FD_STEP
    t_plus = complex(_transmission_shifted(p, potential, h))
    t_minus = complex(_transmission_shifted(p, potential, -h))
    if min(abs(t_plus), abs(t_minus)) < 1e-300:
        raise ValueError("|T| underflow: log-derivative ill-posed")
    ratio = t_plus / t_minus
    dlog = (np.log(abs(ratio)) + 1j * np.angle(ratio)) / (2.0 * h)
    return ComplexTime(value=1j * dlog)


def larmor_moment_zero_range(p: float, omega: float, width: float) -> ComplexTime:
    """First moment of the analytic narrow-region clock amplitude: 1/s with
    s = p/width + i*omega/width; both parts vanish linearly as width -> 0."""
    from .amplitudes import larmor_distribution_zero_range

    dist = larmor_distribution_zero_range(p, omega, width)
    return ComplexTime(value=dist.mean_duration())
