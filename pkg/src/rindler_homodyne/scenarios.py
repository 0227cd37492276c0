"""Accelerated passive unitaries, represented by the second moments they leave
on the Unruh operators (c, d) when the input is the Minkowski vacuum."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DomainError, UnsupportedScenarioError
from .modes import AccelerationFrame
from .numerics import x_over_expm1, x_over_sinh


@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class TimeDelay:
    delay: float

    def __post_init__(self):
        if not math.isfinite(self.delay):
            raise DomainError(f"delay must be finite, got {self.delay}")


@dataclass(frozen=True)
class Mirror:
    """Beam splitter between left- and right-movers with a constant angle θ."""

    theta: float

    def __post_init__(self):
        if not (0.0 <= self.theta < 2 * math.pi):
            raise DomainError(f"theta must lie in [0, 2π), got {self.theta}")


Scenario = Union[Identity, TimeDelay, Mirror]


# Products of cosh r_ω, sinh r_ω multiplied by ω; all tend to a/2π at ω = 0,
# which is what keeps the time-delay kernel regular there.
def _cs_omega(omega, a):
    return a / (2 * np.pi) * x_over_sinh(np.pi * omega / a)


def _s2_omega(omega, a):
    return a / (2 * np.pi) * x_over_expm1(2 * np.pi * omega / a)


def _hyperbolics(omega, a):
    """(cs, c², s²) = (cosh r sinh r, cosh² r, sinh² r) for ω > 0."""
    x = np.pi * np.asarray(omega, dtype=float) / a
    with np.errstate(over="ignore"):
        s2 = 1.0 / np.expm1(2 * x)
        cs = np.exp(-x) / -np.expm1(-2 * x)
    return cs, 1.0 + s2, s2


def _phase_factor(omega, delay):
    # (1 − e^{iωΔ})/ω, exact through ω = 0
    return -1j * delay * np.exp(0.5j * omega * delay) * np.sinc(omega * delay / (2 * np.pi))


@dataclass(frozen=True)
class CorrelationKernel:
    """Second moments of the output Unruh operators at frequency ω.

    F1 = ⟨c′†c′⟩ = ⟨d′†d′⟩, F2 = ⟨c′d′⟩, cross_cd_dag = ⟨c′†d′⟩.  Also exposes
    a split of F1 and F2 into pieces proportional to e^{iνω} for oscillatory
    quadrature.
    """

    scenario: Scenario
    frame: AccelerationFrame

    def F1(self, omega):
        omega = np.asarray(omega, dtype=float)
        a = self.frame.a
        sc = self.scenario
        if isinstance(sc, Identity):
            return np.zeros_like(omega)[()]
        if isinstance(sc, TimeDelay):
            # csch²x·sin²(ωΔ/2) in a form regular at ω = 0
            q = _cs_omega(omega, a)
            return (q * sc.delay * np.sinc(omega * sc.delay / (2 * np.pi))) ** 2
        _positive(omega)
        cs, _, _ = _hyperbolics(omega, a)
        return 2 * cs * cs * (1 - math.cos(sc.theta))

    def F2(self, omega):
        omega = np.asarray(omega, dtype=float)
        a = self.frame.a
        sc = self.scenario
        if isinstance(sc, Identity):
            return np.zeros_like(omega, dtype=complex)[()]
        if isinstance(sc, TimeDelay):
            ph = _phase_factor(omega, sc.delay)
            c2w = omega + _s2_omega(omega, a)
            u = _cs_omega(omega, a) * ph
            v = 1.0 - c2w * np.conj(ph)  # c²e^{−iωΔ} − s²
            return u * v
        _positive(omega)
        cs, c2, s2 = _hyperbolics(omega, a)
        return (-cs * (c2 + s2) * (1 - math.cos(sc.theta))).astype(complex)

    def cross_cd_dag(self, omega):
        return np.zeros_like(np.asarray(omega, dtype=float), dtype=complex)[()]

    def harmonics(self) -> tuple[list[tuple[float, Callable]], list[tuple[float, Callable]]]:
        """([(ν, p_ν)] for F1, [(ν, q_ν)] for F2) with F = Σ p_ν(ω)e^{iνω}.

        The individual envelopes can be singular at ω = 0 even where the sum is
        not; use them away from the origin.
        """
        a = self.frame.a
        sc = self.scenario
        if isinstance(sc, TimeDelay) and sc.delay != 0:
            D = sc.delay

            def c2s2(w):
                cs, _, _ = _hyperbolics(w, a)
                return cs * cs

            h1 = [
                (0.0, lambda w: 2 * c2s2(w)),
                (D, lambda w: -c2s2(w)),
                (-D, lambda w: -c2s2(w)),
            ]

            def q0(w):
                cs, c2, s2 = _hyperbolics(w, a)
                return -cs * (c2 + s2)

            def qm(w):
                cs, c2, _ = _hyperbolics(w, a)
                return cs * c2

            def qp(w):
                cs, _, s2 = _hyperbolics(w, a)
                return cs * s2

            return h1, [(0.0, q0), (-D, qm), (D, qp)]
        return [(0.0, self.F1)], [(0.0, self.F2)]


def _positive(omega):
    if np.any(omega <= 0):
        raise DomainError("mirror kernel is defined for omega > 0")


def correlation_kernel(scenario: Scenario, frame: AccelerationFrame = AccelerationFrame()) -> CorrelationKernel:
    if not isinstance(scenario, (Identity, TimeDelay, Mirror)):
        raise TypeError(f"not a scenario: {scenario!r}")
    return CorrelationKernel(scenario, frame)


def plateau_kernel(frame: AccelerationFrame = AccelerationFrame()) -> CorrelationKernel:
    """Zero-frequency harmonic of the time-delay kernel (its Δ-average).

    It coincides with the mirror kernel at θ = π/2.
    """
    return CorrelationKernel(Mirror(math.pi / 2), frame)


def wrap_angle(x):
    """Reduce to (−π, π]."""
    x = np.asarray(x, dtype=float)
    out = -np.remainder(-x + np.pi, 2 * np.pi) + np.pi
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class SchrodingerDecomposition:
    """Two-mode squeeze magnitude and phase-shifter angles per frequency."""

    delay: TimeDelay
    frame: AccelerationFrame

    def _z(self, omega):
        # cosh²r e^{−iωΔ} − sinh²r, written as 1 + c²(e^{−iωΔ} − 1)
        omega = np.asarray(omega, dtype=float)
        _positive(omega)
        _, c2, _ = _hyperbolics(omega, self.frame.a)
        return 1.0 + c2 * np.expm1(-1j * omega * self.delay.delay)

    def r_sq(self, omega):
        return np.arccosh(np.maximum(np.abs(self._z(omega)), 1.0))

    def theta1(self, omega):
        return wrap_angle(np.angle(self._z(omega)))

    def theta2(self, omega):
        omega = np.asarray(omega, dtype=float)
        e = np.expm1(-1j * omega * self.delay.delay)
        # 0/0 where e^{−iωΔ} = 1 (to rounding): the squeeze vanishes, phase set to 0
        return wrap_angle(np.where(np.abs(e) < 1e-12, 0.0, np.angle(e)))

    def total_angle(self, omega):
        omega = np.asarray(omega, dtype=float)
        return wrap_angle(self.theta1(omega) + self.theta2(omega) + omega * self.delay.delay)


def squeeze_decomposition(delay: TimeDelay, frame: AccelerationFrame = AccelerationFrame()) -> SchrodingerDecomposition:
    if not isinstance(delay, TimeDelay):
        raise UnsupportedScenarioError("the squeezing decomposition exists only for a time delay")
    return SchrodingerDecomposition(delay, frame)
