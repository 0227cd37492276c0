"""Ideal (unbounded-band) self-homodyne statistics."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, UnsupportedScenarioError
from .modes import (
    AccelerationFrame,
    WavepacketMode,
    cosh_sinh_r,
    overlap_Ic_Is,
    wavepacket_amplitude,
)
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec, integrate_1d, integrate_harmonics
from .scenarios import Identity, Mirror, Scenario, TimeDelay, correlation_kernel, plateau_kernel


@dataclass(frozen=True)
class DisplacementConfig:
    """Coherent reference: |α|e^{iφ} on the right wedge, optionally |β|e^{−iφ} on the left."""

    alpha_mag: float = 1.0
    phi: float = 0.0
    beta_mag: float = 0.0

    def __post_init__(self):
        if not (self.alpha_mag >= 0 and self.beta_mag >= 0):
            raise DomainError("displacement magnitudes must be >= 0")
        if self.alpha_mag == 0 and self.beta_mag == 0:
            raise DomainError("at least one displacement magnitude must be nonzero")
        if not all(math.isfinite(v) for v in (self.alpha_mag, self.beta_mag, self.phi)):
            raise DomainError("displacement parameters must be finite")

    @property
    def dual(self) -> bool:
        return self.beta_mag > 0

    @property
    def alpha(self) -> complex:
        return self.alpha_mag * complex(math.cos(self.phi), math.sin(self.phi))


@dataclass(frozen=True)
class HomodyneResult:
    X: float
    V1: float
    V2_bar: float
    theta_sq: float

    def V_of_phi(self, phi):
        return 1.0 + self.V1 - self.V2_bar * np.cos(2 * np.asarray(phi) - self.theta_sq)

    @property
    def V(self) -> float:
        """Variance when it is φ-independent (V2_bar = 0)."""
        return 1.0 + self.V1 - self.V2_bar * math.cos(self.theta_sq)


def displacement_overlaps(
    config: DisplacementConfig, mode: WavepacketMode, frame: AccelerationFrame = AccelerationFrame()
) -> tuple[Callable, Callable]:
    """Overlaps (g_c(ω), g_d(ω)) of the displaced mode with the Unruh operators."""
    if not config.dual:
        alpha = config.alpha

        def g_c(w):
            C, _ = cosh_sinh_r(w, frame)
            return np.conj(wavepacket_amplitude(mode, w)) * C * alpha

        def g_d(w):
            _, S = cosh_sinh_r(w, frame)
            return -wavepacket_amplitude(mode, w) * S * np.conj(alpha)

        return g_c, g_d

    am, bm, ph = config.alpha_mag, config.beta_mag, np.exp(1j * config.phi)

    def g_c(w):
        C, S = cosh_sinh_r(w, frame)
        return wavepacket_amplitude(mode, w) * ph * (C * am - S * bm)

    def g_d(w):
        C, S = cosh_sinh_r(w, frame)
        return np.conj(wavepacket_amplitude(mode, w)) * np.conj(ph) * (C * bm - S * am)

    return g_c, g_d


def quadrature_amplitude_ideal(config, mode, scenario, frame=AccelerationFrame()) -> float:
    """Both scenarios leave ⟨c′⟩ = ⟨d′⟩ = 0, so the amplitude vanishes identically."""
    return 0.0


def _oscillation_split(lo: float, hi: float, delay: float) -> float:
    # below this frequency integrate the recombined (regular) integrand directly
    if delay == 0:
        return hi
    return min(hi, max(lo, 40 * math.pi / abs(delay)))


def variance_ideal(
    config: DisplacementConfig,
    mode: WavepacketMode,
    scenario: Scenario,
    frame: AccelerationFrame = AccelerationFrame(),
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    ir_cutoff: float | None = None,
) -> HomodyneResult:
    """Phase-insensitive and phase-sensitive variance of the measured quadrature.

    V1 = ∫ 2[(|g_c|² + |g_d|²)F1 + 2Re(g_c* g_d* F2)] / ∫(|g_c|² + |g_d|²)
    K  = 4∫ g_c g_d* ⟨c′†d′⟩ / ∫(|g_c|² + |g_d|²),  V2_bar = |K|, θ = π − arg K.

    Large delays are handled by splitting F1, F2 into e^{iνω} harmonics and
    using oscillatory-weight quadrature above a small-ω cut.

    The mirror kernel grows like 1/ω² at low frequency, so a packet whose
    12σ support reaches ω = 0 needs an explicit ``ir_cutoff``.
    """
    kern = correlation_kernel(scenario, frame)
    g_c, g_d = displacement_overlaps(config, mode, frame)
    lo, hi = mode.support(12.0)
    if ir_cutoff is not None:
        if not ir_cutoff > 0:
            raise DomainError(f"ir_cutoff must be > 0, got {ir_cutoff}")
        lo = max(lo, ir_cutoff)
    elif isinstance(scenario, Mirror) and scenario.theta != 0 and lo <= 0:
        raise UnsupportedScenarioError(
            "mirror variance diverges for a packet reaching omega = 0; pass ir_cutoff"
        )
    lo = max(lo, 1e-300)
    if not lo < hi:
        raise DomainError("ir_cutoff lies above the packet support")

    def P(w):
        return abs(g_c(w)) ** 2 + abs(g_d(w)) ** 2

    def Q(w):
        return np.conj(g_c(w)) * np.conj(g_d(w))

    norm = integrate_1d(P, lo, hi, spec, points=[mode.omega0]).value

    if isinstance(scenario, Identity):
        num = 0.0
    else:
        def direct(w):
            return float(2 * P(w) * kern.F1(w) + 4 * np.real(Q(w) * kern.F2(w)))

        delay = scenario.delay if isinstance(scenario, TimeDelay) else 0.0
        split = _oscillation_split(lo, hi, delay)
        num = 0.0
        if split > lo:
            pts = [mode.omega0] if lo < mode.omega0 < split else None
            num += integrate_1d(direct, lo, split, spec, points=pts).value
        if split < hi:
            h1, h2 = kern.harmonics()
            terms = [(nu, lambda w, p=p: 2 * P(w) * p(w)) for nu, p in h1]
            terms += [(nu, lambda w, q=q: 4 * Q(w) * q(w)) for nu, q in h2]
            num += integrate_harmonics(terms, split, hi, spec).value

    # phase-sensitive part: only the ⟨c′†d′⟩ moment contributes
    K = integrate_1d(lambda w: complex(4 * g_c(w) * np.conj(g_d(w)) * kern.cross_cd_dag(w)),
                     lo, hi, spec).value / norm
    v2 = abs(K)
    theta = math.pi - math.atan2(K.imag, K.real) if v2 > 0 else 0.0
    return HomodyneResult(0.0, num / norm, v2, theta)


def variance_ideal_closed_form(mode: WavepacketMode, delay: float, frame=AccelerationFrame(),
                               spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Right-only time-delay variance in its reduced single-integral form (reference)."""
    from .modes import sinh_sq_r, wavepacket_intensity
    from .numerics import delay_weight

    _, i_s = overlap_Ic_Is(mode, frame, spec)
    lo, hi = mode.support(12.0)
    lo = max(lo, 1e-300)

    def f(w):
        s2 = sinh_sq_r(w, frame)
        # 8(1+2s²)c²s²(1 − cos) = 2(1+2s²)·csch²x·(1 − cos)
        return 2 * (1 + 2 * s2) * delay_weight(w, delay, frame.a) * wavepacket_intensity(mode, w)

    split = _oscillation_split(lo, hi, delay)
    num = 0.0
    if split > lo:
        num += integrate_1d(f, lo, split, spec).value
    if split < hi:
        # (1 − cos ωΔ) = Re(1 − e^{iΔω})
        def env(w):
            s2 = sinh_sq_r(w, frame)
            x = math.pi * w / frame.a
            return 2 * (1 + 2 * s2) * wavepacket_intensity(mode, w) / math.sinh(x) ** 2
        num += integrate_harmonics([(0.0, env), (delay, lambda w: -env(w))], split, hi, spec).value
    return 1 + num / (1 + 2 * i_s)


def variance_vacuum(config: DisplacementConfig, mode: WavepacketMode,
                    frame: AccelerationFrame = AccelerationFrame(),
                    spec: QuadratureSpec = DEFAULT_QUADRATURE) -> HomodyneResult:
    """Thermal reference V = 1 + 2I_s seen by the Rindler mode in the Minkowski vacuum."""
    if config.dual:
        raise DomainError("the vacuum reference is defined for right-only displacement")
    _, i_s = overlap_Ic_Is(mode, frame, spec)
    return HomodyneResult(0.0, 2 * i_s, 0.0, 0.0)


def variance_single_frequency(
    scenario: Scenario, omega: float, frame: AccelerationFrame = AccelerationFrame(),
    config: DisplacementConfig | None = None, exact_delay: bool = False,
) -> float:
    """Variance for a monochromatic mode at ω.

    A time delay is evaluated on its Δ-averaged plateau unless ``exact_delay``.
    """
    if not omega > 0:
        raise DomainError(f"omega must be > 0, got {omega}")
    if config is None:
        config = DisplacementConfig()
    if isinstance(scenario, Identity):
        return 1.0
    if isinstance(scenario, TimeDelay) and not exact_delay:
        kern = plateau_kernel(frame)
    else:
        kern = correlation_kernel(scenario, frame)
    C, S = cosh_sinh_r(omega, frame)
    A = C * config.alpha_mag - S * config.beta_mag
    B = C * config.beta_mag - S * config.alpha_mag
    F1 = float(kern.F1(omega))
    F2 = complex(kern.F2(omega)).real
    return float(1 + 2 * ((A * A + B * B) * F1 + 2 * A * B * F2) / (A * A + B * B))


def purification_ratio(omega: float, frame: AccelerationFrame = AccelerationFrame()) -> float:
    """|α|/|β| = coth(2r_ω) = cosh(πω/a)."""
    if not omega > 0:
        raise DomainError(f"omega must be > 0, got {omega}")
    return math.cosh(math.pi * omega / frame.a)


def purification_equal_amplitude(omega: float, frame: AccelerationFrame = AccelerationFrame(),
                                 theta: float = math.pi / 2) -> float:
    """Mirror variance with |α| = |β|: 1 − (1 − cos θ)·sinh(2r_ω)e^{−2r_ω}."""
    if not omega > 0:
        raise DomainError(f"omega must be > 0, got {omega}")
    x = math.pi * omega / frame.a
    # sinh 2r = csch x, e^{−2r} = coth x − csch x = tanh(x/2)
    return 1.0 - (1 - math.cos(theta)) * math.tanh(0.5 * x) / math.sinh(x)
