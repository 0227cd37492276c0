"""Statistics seen by a Minkowski photon counter restricted to [k_min, k_max].

All frequency integrals are evaluated as matrix products on composite
Gauss–Legendre grids: a packet grid carrying the displacement and an outer
grid over (0, ω_tail) carrying the correlation kernel.  Panel widths are tied
to the fastest phase in the integrands (band centre, band width, packet
position and delay).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NonConvergenceError, UnsupportedScenarioError
from .homodyne import DisplacementConfig
from .modes import (
    AccelerationFrame,
    DetectorBand,
    WavepacketMode,
    cosh_sinh_r,
    overlap_Ic_Is,
    unruh_factor,
    wavepacket_amplitude,
)
from .numerics import DEFAULT_QUADRATURE, QuadratureSpec, gauss_legendre_panels, integrate_1d, tail_cutoff
from .scenarios import Identity, Mirror, Scenario, TimeDelay, correlation_kernel

EULER_GAMMA = 0.5772156649015329
GUARD_FACTOR = 10.0  # "≫" taken as a factor of ten


@dataclass(frozen=True)
class PracticalResult:
    n_pr: float
    n_pr0: float
    x_pr: float
    v12: float
    v2_bar: float
    theta: float
    v10: float
    # raw pieces for the exact φ-dependent variance
    alpha_mag: float = 1.0
    n_in: float = 0.0
    n_phase: complex = 0.0
    e_in: float = 0.0
    k_phase: complex = 0.0
    var0: float = 0.0

    def n0(self, phi: float) -> float:
        return self.alpha_mag**2 * self.n_in + 2 * (self.alpha_mag**2 * np.exp(-2j * phi) * self.n_phase).real

    def variance(self, phi: float = 0.0) -> float:
        """Full (ΔN)²/N0 at reference phase φ, including the zeroth-order term."""
        a2 = self.alpha_mag**2
        exc = a2 * (self.e_in + (np.exp(2j * phi) * self.k_phase).real) + self.var0
        return float(1 + exc / self.n0(phi))

    def variance_leading(self, phi: float = 0.0) -> float:
        """1 + V′₁,₂ − V̄′₂·cos(2φ − θ): the large-|α| form."""
        return float(1 + self.v12 - self.v2_bar * math.cos(2 * phi - self.theta))


# ---------------------------------------------------------------------------
# grids and band kernels
# ---------------------------------------------------------------------------

def _band_logs(band: DetectorBand, frame: AccelerationFrame) -> tuple[float, float]:
    return math.log(band.k_med / frame.a), math.log(band.k_wid)


def _packet_grid(mode: WavepacketMode, band: DetectorBand, frame: AccelerationFrame, refine: int = 1):
    m, h = _band_logs(band, frame)
    lo, hi = mode.support(10.0)
    rate = (h + abs(m) + abs(mode.v_c) + 3.0) / frame.a
    width = min(mode.delta / 2, 2.0 / rate) / refine
    n = max(2, int(math.ceil((hi - lo) / width)))
    return gauss_legendre_panels(np.linspace(lo, hi, n + 1), 8)


def _outer_grid(scenario: Scenario, band: DetectorBand, frame: AccelerationFrame, spec: QuadratureSpec,
                ir_cutoff: float | None, refine: int = 1):
    m, h = _band_logs(band, frame)
    a = frame.a
    delay = abs(scenario.delay) if isinstance(scenario, TimeDelay) else 0.0
    hi = tail_cutoff(a, spec.abs_tol)
    lo = 0.0 if ir_cutoff is None else ir_cutoff
    rate = (h + abs(m) + delay * a + 3.0) / a
    width = 2.0 / rate / refine
    n = max(4, int(math.ceil((hi - lo) / width)))
    breaks = np.linspace(lo, hi, n + 1)
    if lo > 0:
        # the mirror kernel grows like 1/ω² toward the infrared cutoff
        geo = np.geomspace(lo, min(hi, a), 8 * refine * max(1, int(math.log(a / lo) + 1)))
        breaks = np.unique(np.concatenate([breaks, geo]))
    return gauss_legendre_panels(breaks, 8)


def _band_matrices(w_row, w_col, band: DetectorBand, frame: AccelerationFrame):
    """(A1(ω_i, ω′_j), A2(ω_i, ω′_j)) on a grid product."""
    m, h = _band_logs(band, frame)
    a = frame.a
    fr = unruh_factor(w_row, frame)[:, None]
    fc = unruh_factor(w_col, frame)[None, :]
    mu1 = (w_col[None, :] - w_row[:, None]) / a
    mu2 = -(w_col[None, :] + w_row[:, None]) / a
    c = 2 * h / (4 * np.pi**2)
    A1 = c * np.conj(fr) * fc * np.exp(1j * mu1 * m) * np.sinc(mu1 * h / np.pi)
    A2 = -c * np.conj(fr) * np.conj(fc) * np.exp(1j * mu2 * m) * np.sinc(mu2 * h / np.pi)
    return A1, A2


def _band_abs_sq(w_row, w_col, band: DetectorBand, frame: AccelerationFrame):
    """|A1|² + |A2|²; the Unruh prefactors drop out since |f(ω)|² = 2π/a."""
    _, h = _band_logs(band, frame)
    a = frame.a
    c = (2 * h / (2 * np.pi * a)) ** 2
    d = (w_col[None, :] - w_row[:, None]) / a
    s = (w_col[None, :] + w_row[:, None]) / a
    return c * (np.sinc(d * h / np.pi) ** 2 + np.sinc(s * h / np.pi) ** 2)


def band_diagonal(band: DetectorBand, frame: AccelerationFrame = AccelerationFrame()) -> float:
    """A1(ω, ω) = ln(k_max/k_min)/(2πa), independent of ω."""
    return band.log_width / (2 * np.pi * frame.a)


# ---------------------------------------------------------------------------
# pieces
# ---------------------------------------------------------------------------

def _require_right_only(config: DisplacementConfig):
    if config.dual:
        raise DomainError("the band-limited detector is modelled for right-only displacement")


def _kernel_integral(scenario: Scenario, frame: AccelerationFrame, spec: QuadratureSpec,
                     ir_cutoff: float | None) -> float:
    """∫ F1 dω over the outer domain."""
    if isinstance(scenario, Identity):
        return 0.0
    if isinstance(scenario, Mirror) and scenario.theta != 0 and ir_cutoff is None:
        raise UnsupportedScenarioError(
            "the mirror occupation integral diverges at low frequency; pass ir_cutoff"
        )
    if isinstance(scenario, TimeDelay) and ir_cutoff is None:
        return time_delay_occupation_integral(scenario.delay, frame)
    kern = correlation_kernel(scenario, frame)
    hi = tail_cutoff(frame.a, spec.abs_tol)
    lo = ir_cutoff or 0.0
    pts = list(np.geomspace(lo, hi, 12)[1:-1]) if lo > 0 else None
    return integrate_1d(lambda w: float(kern.F1(w)), lo, hi, spec, points=pts).value


def time_delay_occupation_integral(delay: float, frame: AccelerationFrame = AccelerationFrame()) -> float:
    """∫₀^∞ csch²(πω/a) sin²(ωΔ/2) dω = (a/2π)[(aΔ/2)coth(aΔ/2) − 1]."""
    y = 0.5 * abs(delay) * frame.a
    if y < 1e-4:
        return frame.a / (2 * np.pi) * (y * y / 3 - y**4 / 45)
    return frame.a / (2 * np.pi) * (y / math.tanh(y) - 1)


def ideal_count(config: DisplacementConfig, mode: WavepacketMode,
                frame: AccelerationFrame = AccelerationFrame(),
                spec: QuadratureSpec = DEFAULT_QUADRATURE) -> float:
    """Unbounded-band reference count |α|²(I_c + I_s)."""
    i_c, i_s = overlap_Ic_Is(mode, frame, spec)
    return config.alpha_mag**2 * (i_c + i_s)


def _packet_vectors(mode, frame, nodes):
    g = wavepacket_amplitude(mode, nodes)
    C, S = cosh_sinh_r(nodes, frame)
    return np.conj(g) * C, -g * S  # g_c/α, g_d/α*


def _reference_counts(mode, band, frame, refine=1):
    """(n_in, n_phase) with N0(φ) = |α|²n_in + 2Re(α*²·n_phase)."""
    x, w = _packet_grid(mode, band, frame, refine)
    uc, ud = _packet_vectors(mode, frame, x)
    A1, A2 = _band_matrices(x, x, band, frame)
    uc_w, ud_w = uc * w, ud * w
    n_in = np.conj(uc_w) @ A1 @ uc_w + ud_w @ A1 @ np.conj(ud_w)
    n_phase = np.conj(uc_w) @ A2 @ ud_w
    return float(n_in.real), complex(n_phase)


def particle_count_practical(
    config: DisplacementConfig, mode: WavepacketMode, scenario: Scenario,
    frame: AccelerationFrame = AccelerationFrame(), band: DetectorBand | None = None,
    spec: QuadratureSpec = DEFAULT_QUADRATURE, ir_cutoff: float | None = None,
) -> tuple[float, float]:
    """(⟨N_Pr⟩, ⟨N_Pr,0⟩) at the configured reference phase."""
    _require_right_only(config)
    if band is None:
        raise DomainError("a detector band is required")
    n_in, n_phase = _reference_counts(mode, band, frame)
    alpha = config.alpha
    n0 = abs(alpha) ** 2 * n_in + 2 * (np.conj(alpha) ** 2 * n_phase).real
    excess = 2 * band_diagonal(band, frame) * _kernel_integral(scenario, frame, spec, ir_cutoff)
    return float(n0 + excess), float(n0)


def count_excess_quadrature(scenario: Scenario, frame: AccelerationFrame, band: DetectorBand,
                            spec: QuadratureSpec = DEFAULT_QUADRATURE,
                            ir_cutoff: float | None = None) -> float:
    """⟨N_Pr⟩ − ⟨N_Pr,0⟩ = 2∫A1(ω,ω)F1(ω)dω by adaptive quadrature (no closed form)."""
    kern = correlation_kernel(scenario, frame)
    hi = tail_cutoff(frame.a, spec.abs_tol)
    lo = ir_cutoff or 0.0
    diag = band_diagonal(band, frame)
    if isinstance(scenario, TimeDelay) and scenario.delay != 0:
        # split at the first zeros of sin(ωΔ/2) so the oscillation is resolved
        n = int(min(5000, hi * abs(scenario.delay) / (2 * np.pi)))
        pts = list(2 * np.pi * np.arange(1, n + 1) / abs(scenario.delay))
        spec = QuadratureSpec(spec.rel_tol, spec.abs_tol, max(spec.max_subdivisions, 4 * n + 50))
    else:
        pts = None
    val = integrate_1d(lambda w: float(2 * diag * kern.F1(w)), lo, hi, spec, points=pts).value
    return val


def quadrature_amplitude_practical(
    config: DisplacementConfig, mode: WavepacketMode, scenario: Scenario,
    frame: AccelerationFrame = AccelerationFrame(), band: DetectorBand | None = None,
    spec: QuadratureSpec = DEFAULT_QUADRATURE, ir_cutoff: float | None = None,
) -> float:
    """Residual amplitude (⟨N_Pr⟩ − ⟨N_Pr,0⟩)/√⟨N_Pr,0⟩; falls off as 1/|α|."""
    n_pr, n_pr0 = particle_count_practical(config, mode, scenario, frame, band, spec, ir_cutoff)
    if n_pr0 <= 0:
        raise DomainError("reference count is not positive")
    return (n_pr - n_pr0) / math.sqrt(n_pr0)


def _variance_pieces(mode, scenario, frame, band, spec, ir_cutoff, refine):
    kern = correlation_kernel(scenario, frame)
    xo, wo = _outer_grid(scenario, band, frame, spec, ir_cutoff, refine)
    xp, wp = _packet_grid(mode, band, frame, refine)
    uc, ud = _packet_vectors(mode, frame, xp)
    A1, A2 = _band_matrices(xo, xp, band, frame)
    # h_c = α P + α* Q,  h_d = α R + α* S on the outer grid
    P = A1 @ (uc * wp)
    Q = A2 @ (ud * wp)
    A1r, A2r = _band_matrices(xp, xo, band, frame)
    R = np.conj(A2) @ (uc * wp)
    S = A1r.T @ (ud * wp)
    F1 = kern.F1(xo)
    F2 = kern.F2(xo)
    e_in = np.sum(wo * (2 * F1 * (abs(P) ** 2 + abs(Q) ** 2 + abs(R) ** 2 + abs(S) ** 2)
                        + 4 * (F2 * (np.conj(P) * np.conj(S) + np.conj(Q) * np.conj(R))).real))
    k_ph = np.sum(wo * (4 * F1 * (P * np.conj(Q) + R * np.conj(S))
                        + 4 * (np.conj(F2) * P * R + F2 * np.conj(Q) * np.conj(S))))
    # zeroth order: 2∫∫[F1F1′ + Re F2F2′*](|A1|²+|A2|²) + 2∫F1·A1(ω,ω)
    var0 = 0.0
    step = 2048
    for i in range(0, xo.size, step):
        K = _band_abs_sq(xo[i:i + step], xo, band, frame)
        blk = (F1[i:i + step, None] * F1[None, :] + (F2[i:i + step, None] * np.conj(F2)[None, :]).real)
        var0 += 2 * float(wo[i:i + step] @ (blk * K) @ wo)
    var0 += 2 * band_diagonal(band, frame) * float(np.sum(wo * F1))
    return float(e_in), complex(k_ph), var0


def variance_practical(
    config: DisplacementConfig, mode: WavepacketMode, scenario: Scenario,
    frame: AccelerationFrame = AccelerationFrame(), band: DetectorBand | None = None,
    spec: QuadratureSpec = DEFAULT_QUADRATURE, ir_cutoff: float | None = None,
    check_convergence: bool = False,
) -> PracticalResult:
    """Band-limited homodyne variance split into V′₁,₂, V̄′₂ with θ, and V′₁,₀.

    ``check_convergence`` repeats the evaluation on grids with half the panel
    width and raises NonConvergenceError if the two disagree beyond 1e-6.
    """
    _require_right_only(config)
    if band is None:
        raise DomainError("a detector band is required")
    if isinstance(scenario, Identity):
        raise UnsupportedScenarioError("identity scenario: the variance is trivially shot noise")
    if isinstance(scenario, Mirror) and scenario.theta != 0 and ir_cutoff is None:
        raise UnsupportedScenarioError(
            "the mirror occupation diverges at low frequency; pass ir_cutoff"
        )
    n_in, n_phase = _reference_counts(mode, band, frame)
    e_in, k_ph, var0 = _variance_pieces(mode, scenario, frame, band, spec, ir_cutoff, 1)
    if check_convergence:
        n_in2, _ = _reference_counts(mode, band, frame, 2)
        e2, k2, v2 = _variance_pieces(mode, scenario, frame, band, spec, ir_cutoff, 2)
        scale = max(abs(e_in), abs(k_ph), 1e-300)
        errs = [abs(n_in2 - n_in) / abs(n_in), abs(e2 - e_in) / scale, abs(k2 - k_ph) / scale,
                abs(v2 - var0) / max(abs(var0), 1e-300)]
        if max(errs) > 1e-6:
            raise NonConvergenceError(f"grid refinement changed the result by {max(errs):.3g}")

    alpha = config.alpha
    a2 = abs(alpha) ** 2
    n0 = a2 * n_in + 2 * (np.conj(alpha) ** 2 * n_phase).real
    excess = 2 * band_diagonal(band, frame) * _kernel_integral(scenario, frame, spec, ir_cutoff)
    v2 = abs(k_ph) / n_in
    theta = math.pi - math.atan2(k_ph.imag, k_ph.real) if v2 > 0 else 0.0
    return PracticalResult(
        n_pr=float(n0 + excess), n_pr0=float(n0),
        x_pr=float(excess / math.sqrt(n0)),
        v12=e_in / n_in, v2_bar=v2, theta=float(math.remainder(theta, 2 * math.pi)),
        v10=var0 / n0,
        alpha_mag=config.alpha_mag, n_in=n_in, n_phase=n_phase,
        e_in=e_in, k_phase=k_ph, var0=var0,
    )


# ---------------------------------------------------------------------------
# guards
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Guard:
    name: str
    satisfied: bool
    value: float
    threshold: float
    margin: float  # value/threshold (or offset for centering)
    note: str = ""


@dataclass(frozen=True)
class GuardReport:
    guards: tuple[Guard, ...] = field(default_factory=tuple)

    @property
    def all_satisfied(self) -> bool:
        return all(g.satisfied for g in self.guards)

    def __getitem__(self, name: str) -> Guard:
        for g in self.guards:
            if g.name == name:
                return g
        raise KeyError(name)


def coverage_threshold(delta: float, frame: AccelerationFrame = AccelerationFrame()) -> float:
    """Smallest k_wid covering two standard deviations of the packet: a·e^{√2·a/δ}."""
    return frame.a * math.exp(math.sqrt(2) * frame.a / delta)


def centering_position(band: DetectorBand, frame: AccelerationFrame = AccelerationFrame()) -> float:
    """v_c = γ/a + ln(k_med/a) with γ rounded to 0.577."""
    return 0.577 / frame.a + math.log(band.k_med / frame.a)


def guard_conditions(mode: WavepacketMode, frame: AccelerationFrame, band: DetectorBand,
                     scenario: Scenario, config: DisplacementConfig,
                     centering_tol: float = 1e-3) -> GuardReport:
    delay = abs(scenario.delay) if isinstance(scenario, TimeDelay) else 0.0
    amp = config.alpha_mag
    out = []

    thr = coverage_threshold(mode.delta, frame)
    out.append(Guard("coverage", band.k_wid > thr, band.k_wid, thr, band.k_wid / thr))

    vc = centering_position(band, frame)
    out.append(Guard("centering", abs(mode.v_c - vc) <= centering_tol, mode.v_c, vc, mode.v_c - vc))

    for label, k in (("k_med", band.k_med), ("k_wid", band.k_wid)):
        b = delay * math.log10(k) / 16
        need = GUARD_FACTOR * abs(b)
        out.append(Guard(f"amplitude[{label}]", amp > need, amp, abs(b),
                         amp / abs(b) if b else math.inf,
                         note="satisfied means |α| > 10× the bound"))

    b0 = delay * math.sqrt(math.log(band.k_wid) / 6)
    out.append(Guard("zeroth_order", amp > GUARD_FACTOR * b0, amp, b0,
                     amp / b0 if b0 else math.inf, note="satisfied means |α| > 10× the bound"))
    return GuardReport(tuple(out))
