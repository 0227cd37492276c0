"""Mode definitions: accelerated frame, Rindler wavepackets, Unruh coefficients
and overlaps of Unruh modes restricted to a Minkowski detector band."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm as _normal

from .errors import DomainError, ValidityWindowError
from .numerics import (
    DEFAULT_QUADRATURE,
    QuadratureSpec,
    integrate_1d,
    log_gamma_one_minus_ix,
)

VALIDITY_RATIO = 0.4  # δ/ω0 upper limit


@dataclass(frozen=True)
class AccelerationFrame:
    a: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0):
            raise DomainError(f"acceleration must be finite and > 0, got {self.a}")


@dataclass(frozen=True)
class DetectorBand:
    """Minkowski frequency window [k_min, k_max]."""

    k_min: float
    k_max: float

    def __post_init__(self):
        if not (0 < self.k_min < self.k_max and math.isfinite(self.k_max)):
            raise DomainError(f"need 0 < k_min < k_max < inf, got ({self.k_min}, {self.k_max})")

    @classmethod
    def from_center(cls, k_med: float, k_wid: float) -> "DetectorBand":
        if not (k_med > 0 and k_wid > 1):
            raise DomainError(f"need k_med > 0 and k_wid > 1, got ({k_med}, {k_wid})")
        return cls(k_med / k_wid, k_med * k_wid)

    @property
    def k_med(self) -> float:
        return math.sqrt(self.k_max * self.k_min)

    @property
    def k_wid(self) -> float:
        return math.sqrt(self.k_max / self.k_min)

    @property
    def log_width(self) -> float:
        """ln(k_max/k_min) = 2·ln k_wid."""
        return math.log(self.k_max) - math.log(self.k_min)


@dataclass(frozen=True)
class WavepacketMode:
    """Gaussian Rindler wavepacket g(ω) = B√ω (2πδ²)^{-1/4} e^{-(ω−ω0)²/4δ² − iωv_c}.

    Construct through :func:`normalize_wavepacket` to get B right.
    """

    omega0: float
    delta: float
    v_c: float = 0.0
    B: float = 1.0

    def __post_init__(self):
        if not (self.omega0 > 0 and math.isfinite(self.omega0)):
            raise DomainError(f"omega0 must be > 0, got {self.omega0}")
        if not (self.delta > 0 and math.isfinite(self.delta)):
            raise DomainError(f"delta must be > 0, got {self.delta}")
        # the boundary δ = 0.4·ω0 itself is accepted
        if self.delta > VALIDITY_RATIO * self.omega0 * (1 + 1e-12):
            raise ValidityWindowError(
                f"delta = {self.delta} exceeds {VALIDITY_RATIO}·omega0 = {VALIDITY_RATIO * self.omega0}"
            )
        if not (self.B > 0 and math.isfinite(self.B)):
            raise DomainError(f"B must be > 0, got {self.B}")
        if not math.isfinite(self.v_c):
            raise DomainError("v_c must be finite")

    def support(self, n_sigma: float = 10.0) -> tuple[float, float]:
        """Frequency interval outside which |g|² is below e^{-n_sigma²/2}."""
        return max(0.0, self.omega0 - n_sigma * self.delta), self.omega0 + n_sigma * self.delta


def _check_positive(name, value):
    if np.any(np.asarray(value) <= 0):
        raise DomainError(f"{name} must be > 0")


def squeeze_param_r(omega, frame: AccelerationFrame = AccelerationFrame()):
    """r_ω = atanh(e^{−πω/a})."""
    _check_positive("omega", omega)
    return np.arctanh(np.exp(-np.pi * np.asarray(omega, dtype=float) / frame.a))


def sinh_sq_r(omega, frame: AccelerationFrame = AccelerationFrame()):
    """sinh²r_ω = 1/(e^{2πω/a} − 1), the Planck occupation."""
    _check_positive("omega", omega)
    with np.errstate(over="ignore"):
        return 1.0 / np.expm1(2 * np.pi * np.asarray(omega, dtype=float) / frame.a)


def cosh_sinh_r(omega, frame: AccelerationFrame = AccelerationFrame()):
    """(cosh r_ω, sinh r_ω) without going through r_ω (accurate for large ω)."""
    s2 = sinh_sq_r(omega, frame)
    return np.sqrt(1.0 + s2), np.sqrt(s2)


def unruh_factor(omega, frame: AccelerationFrame = AccelerationFrame()):
    """√(2 sinh(πω/a))·Γ(1 − iω/a)/√ω, evaluated in log space."""
    _check_positive("omega", omega)
    omega = np.asarray(omega, dtype=float)
    lg = log_gamma_one_minus_ix(omega / frame.a)
    x = np.pi * omega / frame.a
    logmag = 0.5 * (x + np.log(-np.expm1(-2 * x))) + lg.real - 0.5 * np.log(omega)
    return np.exp(logmag + 1j * lg.imag)


def unruh_coefficient_A(k, omega, frame: AccelerationFrame = AccelerationFrame()):
    """A_{kω} = i·f(ω)/(2π√k)·(k/a)^{iω/a}; the partner coefficient is its conjugate."""
    _check_positive("k", k)
    _check_positive("omega", omega)
    k = np.asarray(k, dtype=float)
    omega = np.asarray(omega, dtype=float)
    phase = omega / frame.a * np.log(k / frame.a)
    return 1j * unruh_factor(omega, frame) / (2 * np.pi * np.sqrt(k)) * np.exp(1j * phase)


def normal_first_moment(omega0: float, delta: float) -> float:
    """∫₀^∞ ω N(ω; ω0, δ²) dω in closed form (used as a test oracle)."""
    z = omega0 / delta
    return omega0 * _normal.cdf(z) + delta * _normal.pdf(z)


def _unit_profile_sq(omega, omega0, delta):
    # ω·N(ω; ω0, δ²)
    return omega * np.exp(-((omega - omega0) ** 2) / (2 * delta**2)) / math.sqrt(2 * math.pi * delta**2)


def normalize_wavepacket(
    omega0: float, delta: float, v_c: float = 0.0, spec: QuadratureSpec = DEFAULT_QUADRATURE
) -> WavepacketMode:
    """Wavepacket with B fixed by quadrature so that ∫₀^∞ |g|² dω = 1."""
    probe = WavepacketMode(omega0, delta, v_c)  # validates
    lo, hi = probe.support(12.0)
    m = integrate_1d(lambda w: _unit_profile_sq(w, omega0, delta), lo, hi, spec,
                     points=[omega0]).value
    return WavepacketMode(omega0, delta, v_c, 1.0 / math.sqrt(m))


def wavepacket_amplitude(mode: WavepacketMode, omega):
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise DomainError("wavepacket is defined for omega >= 0")
    d = mode.delta
    return (mode.B * np.sqrt(omega) * (2 * np.pi * d * d) ** -0.25
            * np.exp(-((omega - mode.omega0) ** 2) / (4 * d * d) - 1j * omega * mode.v_c))


def wavepacket_intensity(mode: WavepacketMode, omega):
    """|g(ω)|²."""
    return mode.B**2 * _unit_profile_sq(np.asarray(omega, dtype=float), mode.omega0, mode.delta)


def overlap_Ic_Is(
    mode: WavepacketMode, frame: AccelerationFrame = AccelerationFrame(),
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> tuple[float, float]:
    """(∫cosh²r_ω|g|², ∫sinh²r_ω|g|²)."""
    lo, hi = mode.support(12.0)
    lo = max(lo, 1e-300)

    def fs(w):
        return sinh_sq_r(w, frame) * wavepacket_intensity(mode, w)

    i_s = integrate_1d(fs, lo, hi, spec, points=[mode.omega0]).value
    norm = integrate_1d(lambda w: wavepacket_intensity(mode, w), lo, hi, spec,
                        points=[mode.omega0]).value
    return norm + i_s, i_s


def band_overlap(band: DetectorBand, omega, omega_p, frame: AccelerationFrame = AccelerationFrame(),
                 kind: int = 1):
    """Band-restricted Unruh overlaps.

    kind 1: ∫_band dk A*_{kω} A_{kω′};  kind 2: ∫_band dk A*_{kω} A*_{kω′}.

    Both reduce to ∫ e^{iμu} du over u = ln(k/a) ∈ [m − h, m + h], i.e.
    2h·e^{iμm}·sinc(μh), which stays exact as μ → 0.
    """
    omega = np.asarray(omega, dtype=float)
    omega_p = np.asarray(omega_p, dtype=float)
    a = frame.a
    m = math.log(band.k_med / a)
    h = math.log(band.k_wid)
    fw = unruh_factor(omega, frame)
    fp = unruh_factor(omega_p, frame)
    if kind == 1:
        mu = (omega_p - omega) / a
        pref = np.conj(fw) * fp
    elif kind == 2:
        mu = -(omega + omega_p) / a
        pref = -np.conj(fw) * np.conj(fp)
    else:
        raise ValueError(f"kind must be 1 or 2, got {kind}")
    out = pref / (4 * np.pi**2) * np.exp(1j * mu * m) * (2 * h) * np.sinc(mu * h / np.pi)
    return out[()] if np.ndim(out) == 0 else out


def band_overlap_numeric(band: DetectorBand, omega: float, omega_p: float,
                         frame: AccelerationFrame = AccelerationFrame(), kind: int = 1,
                         spec: QuadratureSpec = DEFAULT_QUADRATURE) -> complex:
    """Direct k-quadrature of the band overlap; slow, for cross-checks only."""
    def integrand(u):
        k = math.exp(u)
        A = unruh_coefficient_A(k, omega, frame)
        Ap = unruh_coefficient_A(k, omega_p, frame)
        val = np.conj(A) * Ap if kind == 1 else np.conj(A) * np.conj(Ap)
        return complex(val) * k

    return integrate_1d(integrand, math.log(band.k_min), math.log(band.k_max), spec).value


def field_profile(mode: WavepacketMode, v):
    """Position-space envelope (1/2π)^{1/4}√(δ/ω0)·e^{−δ²(v−v_c)²}·e^{−iω0(v−v_c)}.

    Diagnostic only; it is not normalised against g(ω).
    """
    v = np.asarray(v, dtype=float)
    dv = v - mode.v_c
    return ((2 * np.pi) ** -0.25 * math.sqrt(mode.delta / mode.omega0)
            * np.exp(-(mode.delta * dv) ** 2 - 1j * mode.omega0 * dv))
