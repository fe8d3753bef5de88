"""Gaussian spectral amplitudes and free envelopes for both dispersion laws.

Wave functions are synthesized as psi(x, t) = integral A(k) exp(ikx - iE_k t) dk
with A(k) carrying the prefactor 2^(-1/4) pi^(-3/4) dk^(-1/2), so that the
x-space wave is unit-normalized (2*pi * integral |A|^2 dk = 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .amplitudes import MASS

QUADRATIC = "quadratic"
LINEAR = "linear"

DEFAULT_NK = 4096
SPECTRAL_SPAN_SIGMAS = 8.0


@dataclass(frozen=True)
class PacketSpec:
    """Gaussian probe packet: mean momentum p, spatial width dx, launch x_i.

    Momentum width dk = 2/dx.  dispersion is "quadratic" (E = k^2/2, m = 1)
    or "linear" (E = c*k, rigid translation at speed c).
    """

    p: float
    dx: float
    x_i: float
    dispersion: str = QUADRATIC
    c: float = 1.0
    separation: float = 3.0  # required |x_i| >= separation * dx

    def __post_init__(self):
        if self.p <= 0:
            raise ValueError("mean momentum must be positive")
        if self.dx <= 0:
            raise ValueError("packet width must be positive")
        if self.dispersion not in (QUADRATIC, LINEAR):
            raise ValueError(f"unknown dispersion law {self.dispersion!r}")
        if self.dispersion == LINEAR and self.c <= 0:
            raise ValueError("linear dispersion requires c > 0")
        if abs(self.x_i) < self.separation * self.dx:
            raise ValueError(
                f"|x_i| = {abs(self.x_i)} must be >= {self.separation} * dx = "
                f"{self.separation * self.dx}: packet must start clear of the scatterer"
            )

    @property
    def dk(self) -> float:
        return 2.0 / self.dx

    @property
    def velocity(self) -> float:
        """Group velocity at the mean momentum."""
        return self.p / MASS if self.dispersion == QUADRATIC else self.c

    def energies(self, k):
        k = np.asarray(k, dtype=float)
        if self.dispersion == QUADRATIC:
            return k * k / (2.0 * MASS)
        return self.c * k

    def group_velocities(self, k):
        k = np.asarray(k, dtype=float)
        if self.dispersion == QUADRATIC:
            return k / MASS
        return np.full_like(k, self.c)


@dataclass(frozen=True)
class SpectralAmplitude:
    """Complex A(k) on a uniform momentum grid, immutable after construction."""

    k: np.ndarray
    values: np.ndarray
    spec: PacketSpec = field(repr=False)

    @property
    def dk_grid(self) -> float:
        return float(self.k[1] - self.k[0])

    def weight_density(self) -> np.ndarray:
        """|A(k)|^2 (momentum probability density up to the 2*pi synthesis factor)."""
        return np.abs(self.values) ** 2


def spectral_prefactor(dk: float) -> float:
    return 2.0 ** (-0.25) * np.pi ** (-0.75) / np.sqrt(dk)


def gaussian_spectral(spec: PacketSpec, n: int = DEFAULT_NK,
                      k_min: float | None = None, k_max: float | None = None) -> SpectralAmplitude:
    """Gaussian spectral amplitude on a uniform grid spanning at least p +- 8*dk."""
    lo = spec.p - SPECTRAL_SPAN_SIGMAS * spec.dk
    hi = spec.p + SPECTRAL_SPAN_SIGMAS * spec.dk
    if k_min is None:
        k_min = lo
    if k_max is None:
        k_max = hi
    if k_min > lo or k_max < hi:
        raise ValueError("momentum grid too narrow: must span at least p +- 8*dk")
    k = np.linspace(k_min, k_max, n)
    u = k - spec.p
    values = spectral_prefactor(spec.dk) * np.exp(-(u / spec.dk) ** 2 - 1j * u * spec.x_i)
    peak = np.max(np.abs(values))
    if abs(values[0]) > 1e-12 * peak or abs(values[-1]) > 1e-12 * peak:
        raise ValueError("momentum grid endpoints carry non-negligible amplitude")
    return SpectralAmplitude(k=k, values=values, spec=spec)


def spread_width(spec: PacketSpec, t: float) -> float:
    """|envelope| width at time t: (dx^2 + dk^2 t^2 / m^2)^(1/2); constant for E = c*k."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if spec.dispersion == LINEAR:
        return spec.dx
    return float(np.hypot(spec.dx, spec.dk * t / MASS))


def free_envelope(spec: PacketSpec, x, t: float):
    """Free envelope G0(x, t); psi0 = exp(i p x - i E_p t) * G0.

    Quadratic law: complex width sigma_t^2 = dx^2 + 2it/m.  Linear law:
    rigid translation by c*t with no spreading.
    """
    if t < 0:
        raise ValueError("t must be nonnegative")
    x = np.asarray(x, dtype=float)
    if spec.dispersion == LINEAR:
        arg = x - spec.c * t - spec.x_i
        out = (2.0 / (np.pi * spec.dx**2)) ** 0.25 * np.exp(-(arg / spec.dx) ** 2)
        return out if out.ndim else complex(out)
    sigma_sq = spec.dx**2 + 2j * t / MASS
    arg = x - spec.velocity * t - spec.x_i
    pref = (2.0 * spec.dx**2 / (np.pi * sigma_sq**2)) ** 0.25
    out = pref * np.exp(-(arg**2) / sigma_sq)
    return out if out.ndim else complex(out)


def envelope_sigma_sq(spec: PacketSpec, t: float) -> complex:
    """Squared (possibly complex) envelope width entering the Gaussian exponent."""
    if spec.dispersion == LINEAR:
        return complex(spec.dx**2)
    return spec.dx**2 + 2j * t / MASS


def envelope_norm_prefactor(spec: PacketSpec, t: float) -> complex:
    """Prefactor of the free envelope Gaussian."""
    if spec.dispersion == LINEAR:
        return complex((2.0 / (np.pi * spec.dx**2)) ** 0.25)
    sigma_sq = envelope_sigma_sq(spec, t)
    return (2.0 * spec.dx**2 / (np.pi * sigma_sq**2)) ** 0.25
