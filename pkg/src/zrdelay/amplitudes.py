"""Closed-form scattering amplitudes and the analytic distributions they generate.

All amplitudes use the convention of an incoming exp(ikx) from the left;
the transmitted wave is T * exp(ikx) to the right of the potential.  A
barrier displaced by s leaves T unchanged and multiplies R by exp(2iks),
so reflection comparisons always place the left edge at the origin.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import wofz

MASS = 1.0

# branch sides of a one-sided exponential distribution
NEG = "neg"
POS = "pos"


class PoleError(ValueError):
    """Momentum hit a pole of a scattering amplitude."""


@dataclass(frozen=True)
class PotentialSpec:
    """Scatterer under study: zero-range, rectangular, or radial zero-range.

    kind: "zero_range" (strength omega), "rectangular" (height, edges a < b),
    or "radial" (scattering length alpha != 0, positive for a well).
    """

    kind: str
    omega: float = 0.0
    height: float = 0.0
    a: float = 0.0
    b: float = 0.0
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind not in ("zero_range", "rectangular", "radial"):
            raise ValueError(f"unknown potential kind {self.kind!r}")
        if self.kind == "rectangular" and not self.b > self.a:
            raise ValueError("rectangular potential requires b > a")
        if self.kind == "radial" and self.alpha == 0.0:
            raise ValueError("radial zero-range potential requires alpha != 0")

    @classmethod
    def zero_range(cls, omega: float) -> "PotentialSpec":
        return cls(kind="zero_range", omega=omega)

    @classmethod
    def rectangular(cls, height: float, a: float, b: float) -> "PotentialSpec":
        return cls(kind="rectangular", height=height, a=a, b=b)

    @classmethod
    def radial(cls, alpha: float) -> "PotentialSpec":
        return cls(kind="radial", alpha=alpha)

    @property
    def width(self) -> float:
        return self.b - self.a


def transmission_zero_range(k, omega: float):
    """T(k, omega) = k / (k + i*omega).  Pole at k = -i*omega."""
    k = np.asarray(k)
    denom = k + 1j * omega
    if np.any(denom == 0):
        raise PoleError("transmission amplitude pole hit: k = -i*omega")
    out = k / denom
    return out if out.ndim else complex(out)


def reflection_zero_range(k, omega: float):
    """R(k, omega) = -i*omega / (k + i*omega); |T|^2 + |R|^2 = 1 for real k."""
    k = np.asarray(k)
    denom = k + 1j * omega
    if np.any(denom == 0):
        raise PoleError("reflection amplitude pole hit: k = -i*omega")
    out = -1j * omega / denom
    return out if out.ndim else complex(out)


def s_matrix_radial(k, alpha: float):
    """S(k, alpha) = -(k + i/alpha) / (k - i/alpha); unimodular for real k."""
    if alpha == 0.0:
        raise ValueError("alpha must be nonzero")
    k = np.asarray(k)
    inv = 1.0 / alpha
    denom = k - 1j * inv
    if np.any(denom == 0):
        raise PoleError("S-matrix pole hit: k = i/alpha")
    out = -(k + 1j * inv) / denom
    return out if out.ndim else complex(out)


def pole_transmission_zero_range(omega: float) -> complex:
    """Location of the single pole of T(k, omega) in the complex k-plane.

    On the positive imaginary axis (bound state) for omega < 0, on the
    negative imaginary axis for omega > 0.
    """
    return complex(0.0, -omega)


def _sin_over_q(q, width: float):
    """sin(q*w)/q, even in q, finite at q = 0 (series below |q*w| = 1e-5)."""
    qw = q * width
    small = np.abs(qw) < 1e-5
    qw_safe = np.where(small, 1.0, qw)
    ratio = np.where(small, width * (1.0 - qw * qw / 6.0), width * np.sin(qw_safe) / qw_safe)
    return ratio


def _rect_t_and_r(k, height, width: float):
    """Barrier on [0, w]: (T, R) with T referenced to exp(ikx) for x > w.

    height may be complex (used for clock scans over a shifted potential).
    Depends on the interior wavenumber q only through even functions of q,
    so the square-root branch is immaterial.
    """
    k = np.asarray(k, dtype=complex)
    height = np.asarray(height, dtype=complex)
    q2 = k * k - 2.0 * MASS * height
    q = np.sqrt(q2)
    cosq = np.cos(q * width)
    soq = _sin_over_q(q, width)
    denom = cosq - 0.5j * (k * k + q2) / k * soq
    t = np.exp(-1j * k * width) / denom
    r = 0.5j * (q2 - k * k) / k * soq / denom
    return t, r


def transmission_rectangular(k, height, a: float = 0.0, b: float = 1.0):
    """Transmission amplitude of a rectangular barrier or well on [a, b].

    Continuous across E = height (evanescent/oscillatory interior handled by
    even-in-q evaluation); translation of the barrier leaves T unchanged.
    """
    if not b > a:
        raise ValueError("rectangular potential requires b > a")
    t, _ = _rect_t_and_r(k, height, b - a)
    return t if np.asarray(t).ndim else complex(t)


def reflection_rectangular(k, height, a: float = 0.0, b: float = 1.0):
    """Reflection amplitude of a rectangular barrier on [a, b].

    Carries the exp(2ika) phase of the left edge.
    """
    if not b > a:
        raise ValueError("rectangular potential requires b > a")
    _, r = _rect_t_and_r(k, height, b - a)
    r = r * np.exp(2j * np.asarray(k, dtype=complex) * a)
    return r if np.asarray(r).ndim else complex(r)


@dataclass(frozen=True)
class ShiftDistribution:
    """Piecewise-analytic amplitude density over virtual spatial shifts.

    An optional Dirac weight at the origin plus one one-sided exponential
    branch:  branch(x) = amplitude * exp(-i*p*x) * exp(-decay*|x|) on the
    chosen side.  Stored analytically; moments and Gaussian convolutions are
    closed forms.
    """

    delta_weight: complex = 0.0
    branch_side: Optional[str] = None  # NEG, POS or None
    branch_amplitude: complex = 0.0
    decay_rate: float = 1.0
    oscillation_momentum: float = 0.0

    def _beta(self) -> complex:
        # exponent coefficient of the branch written as exp(sgn * beta * x)
        return self.decay_rate - 1j * self.oscillation_momentum \
            if self.branch_side == NEG else self.decay_rate + 1j * self.oscillation_momentum

    def branch_values(self, x):
        """Branch density evaluated on an array (zero off its side)."""
        x = np.asarray(x, dtype=float)
        if self.branch_side is None:
            return np.zeros(x.shape, dtype=complex)
        osc = np.exp(-1j * self.oscillation_momentum * x)
        env = np.exp(-self.decay_rate * np.abs(x))
        mask = x <= 0 if self.branch_side == NEG else x >= 0
        return np.where(mask, self.branch_amplitude * osc * env, 0.0)

    def moment0(self) -> complex:
        """Analytic integral over the whole axis; equals the generating amplitude."""
        total = complex(self.delta_weight)
        if self.branch_side is not None:
            total += self.branch_amplitude / self._beta()
        return total

    def moment1(self) -> complex:
        """Analytic first moment integral (delta term contributes nothing)."""
        if self.branch_side is None:
            return 0.0
        beta = self._beta()
        m = self.branch_amplitude / beta**2
        return -m if self.branch_side == NEG else m

    def mean_shift(self) -> complex:
        """First moment over zeroth moment (the complex shift)."""
        return self.moment1() / self.moment0()

    def convolve_gaussian(self, x, center: float, sigma_sq: complex, norm: complex):
        """Closed-form convolution with G(y) = norm * exp(-(y - center)^2 / sigma_sq).

        Returns integral of G(x - x') * eta(x') dx' on an array of x.
        sigma_sq may be complex (spreading envelope); Re(sigma_sq) > 0.
        """
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        if self.delta_weight != 0.0:
            out += self.delta_weight * norm * np.exp(-((x - center) ** 2) / sigma_sq)
        if self.branch_side is not None:
            xt = x - center
            beta = self._beta()
            if self.branch_side == POS:
                xt = -xt  # mirror: integral over x' >= 0 of exp(-beta x')
            out += self.branch_amplitude * _gauss_onesided_exp(xt, beta, sigma_sq, norm)
        return out


def _gauss_onesided_exp(xt, beta: complex, sigma_sq: complex, norm: complex):
    """integral_{-inf}^{0} norm*exp(-(xt - u)^2/sigma_sq) * exp(beta*u) du.

    Overflow-safe split of the scaled complementary error function:
    erfc(z) = exp(-z^2) wofz(iz) on Re z >= 0, reflection formula otherwise.
    """
    xt = np.asarray(xt, dtype=float)
    sigma = np.sqrt(np.asarray(sigma_sq, dtype=complex))
    z = (xt + beta * sigma_sq / 2.0) / sigma
    pref = norm * np.sqrt(np.pi) * sigma / 2.0
    gauss = np.exp(-(xt * xt) / sigma_sq)
    use_right = np.real(z) >= 0.0
    # evaluate each branch only where it is overflow-safe
    z_r = np.where(use_right, z, 0.0)
    z_l = np.where(use_right, 0.0, z)
    exponent = np.where(use_right, 0.0, beta * xt + beta * beta * sigma_sq / 4.0)
    right = pref * gauss * wofz(1j * z_r)
    left = pref * (2.0 * np.exp(exponent) - gauss * wofz(-1j * z_l))
    return np.where(use_right, right, left)


def shift_distribution_transmission(p: float, omega: float) -> ShiftDistribution:
    """Shift density for zero-range transmission: delta(x') minus a one-sided
    exponential on the negative axis for a barrier, positive for a well."""
    if omega == 0.0:
        return ShiftDistribution(delta_weight=1.0)
    side = NEG if omega > 0 else POS
    return ShiftDistribution(
        delta_weight=1.0,
        branch_side=side,
        branch_amplitude=-abs(omega),
        decay_rate=abs(omega),
        oscillation_momentum=p,
    )


def shift_distribution_reflection(p: float, omega: float) -> ShiftDistribution:
    """Shift density for zero-range reflection; no delta term (R -> 0 at large k)."""
    if omega == 0.0:
        return ShiftDistribution()
    side = NEG if omega > 0 else POS
    return ShiftDistribution(
        delta_weight=0.0,
        branch_side=side,
        branch_amplitude=-abs(omega),
        decay_rate=abs(omega),
        oscillation_momentum=p,
    )


def shift_distribution_radial(p: float, alpha: float) -> ShiftDistribution:
    """Shift density of the radial zero-range S-matrix: -delta(r') plus a
    one-sided exponential of rate 1/|alpha| (negative side for alpha < 0)."""
    if alpha == 0.0:
        raise ValueError("alpha must be nonzero")
    side = NEG if alpha < 0 else POS
    return ShiftDistribution(
        delta_weight=-1.0,
        branch_side=side,
        branch_amplitude=2.0 / abs(alpha),
        decay_rate=1.0 / abs(alpha),
        oscillation_momentum=p,
    )


@dataclass(frozen=True)
class LarmorDistribution:
    """Zero-range limit of the clock amplitude over traversal durations:
    A_T(p, tau) = prefactor * exp(-s*tau) for tau >= 0, Re(s) > 0."""

    prefactor: complex
    complex_decay: complex

    def values(self, tau):
        tau = np.asarray(tau, dtype=float)
        return np.where(tau >= 0.0, self.prefactor * np.exp(-self.complex_decay * tau), 0.0)

    def integral(self) -> complex:
        """Zeroth moment; equals the zero-range transmission amplitude."""
        return self.prefactor / self.complex_decay

    def mean_duration(self) -> complex:
        """First moment over zeroth moment."""
        return 1.0 / self.complex_decay


def larmor_distribution_zero_range(p: float, omega: float, width: float) -> LarmorDistribution:
    """Analytic clock amplitude for a narrow barrier of area omega and the
    given width; tau0 = width/p sets both the prefactor and the decay."""
    if width <= 0.0:
        raise ValueError("width must be positive")
    if p <= 0.0:
        raise ValueError("p must be positive")
    tau0 = MASS * width / p
    return LarmorDistribution(prefactor=1.0 / tau0, complex_decay=1.0 / tau0 + 1j * omega / width)


def classical_traversal_time(energy: float, potential: PotentialSpec) -> float:
    """Time a classical particle of the given energy spends inside a
    rectangular region: (b-a)/sqrt(2(E-U)) with m = 1."""
    if potential.kind != "rectangular":
        raise ValueError("classical traversal time needs a rectangular potential")
    if energy <= potential.height:
        raise ValueError("classically forbidden: E <= U")
    v = np.sqrt(2.0 * (energy - potential.height) / MASS)
    return potential.width / v


def phase_derivative_zero_range(k, omega: float):
    """d(arg T)/dk = d(arg R)/dk = omega / (k^2 + omega^2) for the zero-range case."""
    k = np.asarray(k, dtype=float)
    out = omega / (k * k + omega * omega)
    return out if out.ndim else float(out)


def phase_derivative_radial(k, alpha: float):
    """d(arg S)/dk = -2*alpha / (1 + k^2 alpha^2)."""
    k = np.asarray(k, dtype=float)
    out = -2.0 * alpha / (1.0 + (k * alpha) ** 2)
    return out if out.ndim else float(out)
