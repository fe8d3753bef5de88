"""Spectral synthesis of scattered wave functions on spatial grids.

The scattering amplitudes of zero-range and rectangular potentials are
closed forms, so the time-evolved channels are single momentum integrals,
evaluated by trapezoid quadrature on a uniform k-grid.  The synthesis
sum_j w_j c_j exp(i k_j x_i) over a uniform x-grid is a chirp-z transform,
computed in O(n log n).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import czt

from . import amplitudes as amp
from .amplitudes import MASS, PotentialSpec
from .wavepackets import PacketSpec, SpectralAmplitude, gaussian_spectral, spread_width

TRANSMITTED = "transmitted"
REFLECTED = "reflected"
RADIAL = "radial"
FREE = "free"

DEFAULT_NX = 8192
MAX_NX = 1 << 21
COMPLETION_NORM_FRACTION = 1e-8


class CompletionError(ValueError):
    """Raised when a completed-event time cannot be constructed."""


@dataclass(frozen=True)
class SpatialWave:
    """Channel wave function psi(x) at a fixed time on a uniform grid."""

    x: np.ndarray
    values: np.ndarray
    t: float
    channel: str
    completed: bool = True

    @property
    def dx_grid(self) -> float:
        return float(self.x[1] - self.x[0])

    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def norm(self) -> float:
        return float(np.trapezoid(self.density(), self.x))

    def com(self) -> float:
        rho = self.density()
        n = np.trapezoid(rho, self.x)
        if n <= 1e-12:
            raise ValueError("vanishing channel norm: COM undefined")
        return float(np.trapezoid(self.x * rho, self.x) / n)


def synthesize_on_grid(x: np.ndarray, k: np.ndarray, coeff: np.ndarray, sign: int = +1) -> np.ndarray:
    """sum of trapezoid weights * coeff_j * exp(sign * i k_j x) on uniform grids."""
    hk = k[1] - k[0]
    hx = x[1] - x[0]
    w = np.full(k.shape, hk)
    w[0] = w[-1] = hk / 2.0
    c = w * coeff
    s = 1j * sign
    # psi(x_i) = exp(s k_0 x_i) * sum_j c_j exp(s j hk x_i); chirp-z over i
    inner = czt(c, m=x.size, w=np.exp(s * hk * hx), a=np.exp(-s * hk * x[0]))
    return np.exp(s * k[0] * x) * inner


def _auto_nx(window: float, feature: float, grid_scale: float = 1.0) -> int:
    """Points needed to resolve the smallest feature with ~16 samples."""
    n = max(DEFAULT_NX, int(16.0 * window / max(feature, 1e-12)))
    n = int(n * grid_scale)
    return min(1 << int(np.ceil(np.log2(max(n, 2)))), MAX_NX)


def _zero_range_margin(potential: PotentialSpec) -> float:
    """Spatial extent of the exponential branch the potential imprints."""
    if potential.kind == "zero_range" and potential.omega != 0.0:
        return 14.0 / abs(potential.omega)
    if potential.kind == "radial":
        return 14.0 * abs(potential.alpha)
    if potential.kind == "rectangular":
        return potential.width + 14.0 / max(abs(potential.height) * potential.width, 1e-6)
    return 0.0


def transmission_window(spec: PacketSpec, potential: PotentialSpec, t: float,
                        grid_scale: float = 1.0) -> np.ndarray:
    """Default spatial grid for the transmitted (or free) channel."""
    w = spread_width(spec, t)
    margin = _zero_range_margin(potential)
    lo = spec.x_i - 6.0 * w - margin
    hi = spec.x_i + spec.velocity * t + 6.0 * w + margin
    n = _auto_nx(hi - lo, min(spec.dx, margin if margin > 0 else spec.dx), grid_scale)
    return np.linspace(lo, hi, n)


def reflection_window(spec: PacketSpec, potential: PotentialSpec, t: float,
                      grid_scale: float = 1.0) -> np.ndarray:
    """Spatial grid mirrored about the origin, centred on the reflected packet."""
    w = spread_width(spec, t)
    margin = _zero_range_margin(potential)
    center = -spec.x_i - spec.velocity * t  # mirror of the free COM
    lo = center - 6.0 * w - margin
    hi = center + 6.0 * w + margin
    n = _auto_nx(hi - lo, min(spec.dx, margin if margin > 0 else spec.dx), grid_scale)
    return np.linspace(lo, hi, n)


def radial_window(spec: PacketSpec, alpha: float, t: float, grid_scale: float = 1.0) -> np.ndarray:
    """Strictly positive r-grid from the origin past the outgoing packet."""
    w = spread_width(spec, t)
    margin = 14.0 * abs(alpha)
    hi = (spec.velocity * t - abs(spec.x_i)) + 6.0 * w + margin
    n = _auto_nx(hi, min(spec.dx, margin if margin > 0 else spec.dx), grid_scale)
    return np.linspace(0.0, max(hi, 10.0 * spec.dx), n)


def _amplitude_on_grid(potential: PotentialSpec, k: np.ndarray, channel: str) -> np.ndarray:
    if channel == FREE:
        return np.ones_like(k, dtype=complex)
    if potential.kind == "zero_range":
        if channel == TRANSMITTED:
            return np.asarray(amp.transmission_zero_range(k, potential.omega), dtype=complex)
        if channel == REFLECTED:
            return np.asarray(amp.reflection_zero_range(k, potential.omega), dtype=complex)
    if potential.kind == "rectangular":
        if channel == TRANSMITTED:
            return np.asarray(
                amp.transmission_rectangular(k, potential.height, potential.a, potential.b),
                dtype=complex)
        if channel == REFLECTED:
            return np.asarray(
                amp.reflection_rectangular(k, potential.height, potential.a, potential.b),
                dtype=complex)
    if potential.kind == "radial" and channel == RADIAL:
        return np.asarray(amp.s_matrix_radial(k, potential.alpha), dtype=complex)
    raise ValueError(f"channel {channel!r} undefined for potential kind {potential.kind!r}")


def _check_completed(wave: SpatialWave, spec: PacketSpec) -> SpatialWave:
    """Flag the wave if > 1e-8 of its norm sits within 3 spread widths of the origin."""
    w = 3.0 * spread_width(spec, wave.t)
    rho = wave.density()
    total = np.trapezoid(rho, wave.x)
    if total <= 0.0:
        return wave
    near = np.abs(wave.x) <= w
    frac = np.trapezoid(np.where(near, rho, 0.0), wave.x) / total
    completed = bool(frac < COMPLETION_NORM_FRACTION)
    if completed == wave.completed:
        return wave
    return SpatialWave(x=wave.x, values=wave.values, t=wave.t,
                       channel=wave.channel, completed=completed)


def synthesize_transmitted(spectral: SpectralAmplitude, potential: PotentialSpec,
                           t: float, x: np.ndarray | None = None,
                           grid_scale: float = 1.0) -> SpatialWave:
    """psi_T(x, t) = integral T(k) A(k) exp(ikx - i E_k t) dk."""
    spec = spectral.spec
    if x is None:
        x = transmission_window(spec, potential, t, grid_scale)
    tk = _amplitude_on_grid(potential, spectral.k, TRANSMITTED)
    coeff = tk * spectral.values * np.exp(-1j * spec.energies(spectral.k) * t)
    values = synthesize_on_grid(x, spectral.k, coeff, sign=+1)
    return _check_completed(SpatialWave(x=x, values=values, t=t, channel=TRANSMITTED), spec)


def synthesize_reflected(spectral: SpectralAmplitude, potential: PotentialSpec,
                         t: float, x: np.ndarray | None = None,
                         grid_scale: float = 1.0) -> SpatialWave:
    """psi_R(x, t) = integral R(k) A(k) exp(-ikx - i E_k t) dk."""
    spec = spectral.spec
    if x is None:
        x = reflection_window(spec, potential, t, grid_scale)
    rk = _amplitude_on_grid(potential, spectral.k, REFLECTED)
    coeff = rk * spectral.values * np.exp(-1j * spec.energies(spectral.k) * t)
    values = synthesize_on_grid(x, spectral.k, coeff, sign=-1)
    return _check_completed(SpatialWave(x=x, values=values, t=t, channel=REFLECTED), spec)


def synthesize_free(spectral: SpectralAmplitude, t: float, x: np.ndarray | None = None,
                    grid_scale: float = 1.0) -> SpatialWave:
    """Free propagation of the same packet (T = 1)."""
    spec = spectral.spec
    if x is None:
        x = transmission_window(spec, PotentialSpec.zero_range(0.0), t, grid_scale)
    coeff = spectral.values * np.exp(-1j * spec.energies(spectral.k) * t)
    values = synthesize_on_grid(x, spectral.k, coeff, sign=+1)
    return SpatialWave(x=x, values=values, t=t, channel=FREE)


def radial_spectral(spec: PacketSpec, n: int = 0) -> SpectralAmplitude:
    """Converging radial packet psi(r, 0) = integral A(k) exp(-ik(r - r_I)) dk.

    A(k) is the real Gaussian (no launch phase); spec.x_i < 0 encodes
    r_I = |x_i|, mirroring the 1D launch convention.
    """
    flat = PacketSpec(p=spec.p, dx=spec.dx, x_i=-spec.separation * spec.dx,
                      dispersion=spec.dispersion, c=spec.c, separation=spec.separation)
    base = gaussian_spectral(flat, n=n) if n else gaussian_spectral(flat)
    values = np.abs(base.values).astype(complex)  # strip the launch phase
    return SpectralAmplitude(k=base.k, values=values, spec=spec)


def synthesize_radial(spectral: SpectralAmplitude, alpha: float, t: float,
                      r: np.ndarray | None = None, grid_scale: float = 1.0,
                      s_override: np.ndarray | None = None) -> SpatialWave:
    """Outgoing radial wave after a completed event.

    Full wave: integral A(k) [exp(-ik(r - r_I)) + S(k) exp(ik(r + r_I))] e^{-iEt} dk;
    after completion only the outgoing part survives on r > 0.
    s_override replaces S(k) (used for the hard-wall reference, S = -1).
    """
    spec = spectral.spec
    r_i = abs(spec.x_i)
    if r is None:
        r = radial_window(spec, alpha, t, grid_scale)
    if s_override is None:
        sk = np.asarray(amp.s_matrix_radial(spectral.k, alpha), dtype=complex)
    else:
        sk = np.asarray(s_override, dtype=complex)
    phase = np.exp(1j * spectral.k * r_i - 1j * spec.energies(spectral.k) * t)
    out = synthesize_on_grid(r, spectral.k, sk * spectral.values * phase, sign=+1)
    incoming = synthesize_on_grid(r, spectral.k,
                                  spectral.values * np.exp(-1j * spec.energies(spectral.k) * t)
                                  * np.exp(1j * spectral.k * r_i), sign=-1)
    return _check_completed(SpatialWave(x=r, values=out + incoming, t=t, channel=RADIAL), spec)


def required_nk(spec: PacketSpec, t: float, x_lo: float, x_hi: float,
                grid_scale: float = 1.0) -> int:
    """Momentum grid size resolving the synthesis phase ikx - iE_k t.

    The phase derivative in k is x - v(k) t; the trapezoid step must keep
    its swing below ~0.5 rad per sample across the whole spatial window.
    """
    span = 2.0 * 8.0 * spec.dk
    ks = np.array([spec.p - 8.0 * spec.dk, spec.p + 8.0 * spec.dk])
    vs = spec.group_velocities(ks)
    excursion = max(abs(x - v * t) for x in (x_lo, x_hi) for v in vs)
    n = max(DEFAULT_NX // 2, int(span * excursion / 0.5))
    n = int(n * grid_scale)
    return min(1 << int(np.ceil(np.log2(max(n, 2)))), MAX_NX)


def completed_event_time(spec: PacketSpec, k_sep: float | None = None) -> float:
    """Earliest evaluation time placing the free COM k_sep spread-widths past the origin.

    Quadratic law: t = 2 m p dx K / (p^2 - K^2 dk^2), which requires p > K*dk.
    Linear law: t = (|x_i| + K*dx)/c (no spreading).
    """
    k_factor = spec.separation if k_sep is None else k_sep
    if spec.dispersion == "linear":
        return (abs(spec.x_i) + k_factor * spec.dx) / spec.c
    if spec.p <= k_factor * spec.dk:
        raise CompletionError(
            f"p = {spec.p} must exceed K*dk = {k_factor * spec.dk}: the packet is too "
            "momentum-broad for a completed dispersive event (t(p,dk,K) singular)")
    return 2.0 * MASS * spec.p * spec.dx * k_factor / (spec.p**2 - (k_factor * spec.dk) ** 2)


def reflection_event_time(spec: PacketSpec, k_sep: float | None = None) -> float:
    """Time for the reflected packet to clear the origin by K spread-widths."""
    k_factor = spec.separation if k_sep is None else k_sep
    v = spec.velocity
    if spec.dispersion == "linear":
        return (2.0 * abs(spec.x_i) + k_factor * spec.dx) / v
    # solve v t = 2 |x_i| + K * dx_t(t) by fixed point (dx_t grows slower than t)
    t = (2.0 * abs(spec.x_i) + k_factor * spec.dx) / v
    for _ in range(60):
        t_next = (2.0 * abs(spec.x_i) + k_factor * spread_width(spec, t)) / v
        if abs(t_next - t) < 1e-12 * max(1.0, t):
            return t_next
        t = t_next
    return t
