"""Special functions and quadrature primitives.

Everything here is pure: no module-level state, safe to call from many threads.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import integrate
from scipy.special import loggamma

from .errors import DomainError, NonConvergenceError


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances for the adaptive integrators."""

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be > 0, got {self.rel_tol}")
        if not self.abs_tol >= 0:
            raise ValueError(f"abs_tol must be >= 0, got {self.abs_tol}")
        if int(self.max_subdivisions) < 1:
            raise ValueError(f"max_subdivisions must be >= 1, got {self.max_subdivisions}")


DEFAULT_QUADRATURE = QuadratureSpec()


class QuadResult(NamedTuple):
    value: complex | float
    error: float


# ---------------------------------------------------------------------------
# special functions
# ---------------------------------------------------------------------------

def log_gamma_one_minus_ix(x):
    """Principal-branch log Γ(1 − i·x); finite for every real x."""
    return loggamma(1.0 - 1j * np.asarray(x, dtype=float))


def complex_gamma_one_minus_ix(x):
    """Γ(1 − i·x) for real x (scalar or array).

    Evaluated through the complex log-gamma so the exponentially small modulus
    at large |x| (≈ √(2π|x|)·e^{−π|x|/2}) does not lose relative accuracy.
    """
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("complex_gamma_one_minus_ix requires finite x")
    out = np.exp(log_gamma_one_minus_ix(x))
    return out[()] if out.ndim == 0 else out


def csch_sq(x):
    """1/sinh(x)², overflow-safe for large |x|."""
    x = np.abs(np.asarray(x, dtype=float))
    if np.any(x == 0):
        raise DomainError("csch_sq is singular at x = 0")
    e = np.exp(-2.0 * x)
    out = 4.0 * e / (-np.expm1(-2.0 * x)) ** 2
    return out[()] if out.ndim == 0 else out


_SMALL_X = 1e-6 * math.pi  # ω < 1e-6·a


def x_over_sinh(x):
    """x/sinh(x) for x ≥ 0, equal to 1 at the origin."""
    x = np.abs(np.asarray(x, dtype=float))
    small = x < _SMALL_X
    xs = np.where(small, 1.0, x)
    with np.errstate(over="ignore"):
        out = np.where(small, 1.0 - x * x / 6.0, 2.0 * xs * np.exp(-xs) / -np.expm1(-2.0 * xs))
    return out[()] if out.ndim == 0 else out


def x_over_expm1(x):
    """x/(e^x − 1) for x ≥ 0, equal to 1 at the origin."""
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < _SMALL_X
    xs = np.where(small, 1.0, x)
    with np.errstate(over="ignore"):
        out = np.where(small, 1.0 - 0.5 * x, xs / np.expm1(xs))
    return out[()] if out.ndim == 0 else out


def delay_weight(omega, delay, a=1.0):
    """csch²(πω/a)·(1 − cos ωΔ), regular at ω = 0.

    Rewritten as 2·(a/2π)²·(x/sinh x)²·Δ²·sinc²(ωΔ/2π) with x = πω/a, which
    is algebraically identical for ω > 0 and takes the series value
    a²Δ²/(2π²) at ω = 0.  Below ω = 1e-6·a the x/sinh x factor switches to its
    Taylor series.
    """
    omega = np.asarray(omega, dtype=float)
    q = a / (2 * np.pi) * x_over_sinh(np.pi * omega / a)
    out = 2.0 * q * q * delay**2 * np.sinc(omega * delay / (2 * np.pi)) ** 2
    return out[()] if np.ndim(out) == 0 else out


def tail_cutoff(a: float, abs_tol: float = DEFAULT_QUADRATURE.abs_tol) -> float:
    """Frequency beyond which csch²(πω/a) < abs_tol·1e-2."""
    target = max(abs_tol, 1e-300) * 1e-2
    # csch²(x) < 4 e^{-2x} / (1 - e^{-2x})² ; solve the leading term and pad slightly
    x = 0.5 * math.log(4.0 / target) + 0.1
    return a * x / math.pi


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def _quad_real(f, lo, hi, spec: QuadratureSpec, **kw) -> QuadResult:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        res = integrate.quad(
            f, lo, hi,
            epsabs=spec.abs_tol, epsrel=spec.rel_tol,
            limit=int(spec.max_subdivisions), full_output=1, **kw,
        )
    value, err = res[0], res[1]
    if len(res) > 3:
        ier_msg = " ".join(str(res[3]).split()).split(".")[0]
        target = max(spec.rel_tol * abs(value), spec.abs_tol)
        if not np.isfinite(value) or err > target:
            raise NonConvergenceError(
                f"quadrature on [{lo}, {hi}] stopped at error {err:.3g} "
                f"(target {target:.3g}): {ier_msg}"
            )
    return QuadResult(float(value), float(err))


def integrate_1d(
    f: Callable[[float], complex],
    lo: float,
    hi: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    *,
    weight: str | None = None,
    wvar: float | None = None,
    points: Sequence[float] | None = None,
) -> QuadResult:
    """Adaptive integral of a real or complex scalar function.

    ``weight='cos'`` / ``'sin'`` with ``wvar=ν`` integrates f(ω)·cos(νω) or
    f(ω)·sin(νω) with the QUADPACK Clenshaw–Curtis oscillatory rule, which is
    uniform in ν.  Raises NonConvergenceError when the subdivision budget runs
    out before the tolerance is met.
    """
    if hi < lo:
        r = integrate_1d(f, hi, lo, spec, weight=weight, wvar=wvar, points=points)
        return QuadResult(-r.value, r.error)
    if hi == lo:
        return QuadResult(0.0, 0.0)
    kw = {}
    if weight is not None:
        if weight not in ("cos", "sin"):
            raise ValueError(f"unsupported weight {weight!r}")
        if wvar is None:
            raise ValueError("an oscillatory weight needs wvar")
        if wvar == 0:
            if weight == "sin":
                return QuadResult(0.0, 0.0)
        else:
            kw = {"weight": weight, "wvar": float(wvar)}
    if points is not None and not kw:
        inner = [p for p in points if lo < p < hi]
        if inner:
            kw["points"] = inner

    probe = f(0.5 * (lo + hi) if np.isfinite(hi) else lo + 1.0)
    if np.iscomplexobj(probe):
        re = _quad_real(lambda w: float(np.real(f(w))), lo, hi, spec, **kw)
        im = _quad_real(lambda w: float(np.imag(f(w))), lo, hi, spec, **kw)
        return QuadResult(complex(re.value, im.value), math.hypot(re.error, im.error))
    return _quad_real(lambda w: float(f(w)), lo, hi, spec, **kw)


def integrate_harmonics(
    terms: Sequence[tuple[float, Callable[[float], complex]]],
    lo: float,
    hi: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> QuadResult:
    """Re Σ_ν ∫ p_ν(ω)·e^{iνω} dω for smooth envelopes p_ν.

    Each oscillating term goes through the cos/sin-weighted rule, so large ν
    costs no more than small ν.
    """
    total, err2 = 0.0, 0.0
    for nu, p in terms:
        if nu == 0:
            r = integrate_1d(lambda w, p=p: float(np.real(p(w))), lo, hi, spec)
            total += r.value
            err2 += r.error**2
            continue
        # an oscillating piece can integrate to ~0; judge its error against the envelope
        env = integrate_1d(lambda w, p=p: float(abs(p(w))), lo, hi, spec).value
        sub = replace(spec, abs_tol=max(spec.abs_tol, spec.rel_tol * env))
        rc = integrate_1d(lambda w, p=p: float(np.real(p(w))), lo, hi, sub, weight="cos", wvar=nu)
        rs = integrate_1d(lambda w, p=p: float(np.imag(p(w))), lo, hi, sub, weight="sin", wvar=nu)
        total += rc.value - rs.value
        err2 += rc.error**2 + rs.error**2
    return QuadResult(total, math.sqrt(err2))


def gauss_legendre_panels(breaks, order: int = 10):
    """Composite Gauss–Legendre nodes and weights over consecutive panels."""
    breaks = np.asarray(breaks, dtype=float)
    x, w = leggauss(order)
    lo, hi = breaks[:-1, None], breaks[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (lo + hi) + half * x).ravel()
    weights = (half * w).ravel()
    return nodes, weights


def uniform_panels(lo: float, hi: float, max_width: float, order: int = 10):
    n = max(1, int(math.ceil((hi - lo) / max_width)))
    return gauss_legendre_panels(np.linspace(lo, hi, n + 1), order)


def integrate_2d(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    domain: tuple[tuple[float, float], tuple[float, float]],
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    *,
    order: int = 8,
) -> QuadResult:
    """Integral of a vectorised f(x, y) over a rectangle.

    Tensor-product composite Gauss–Legendre with panel doubling until two
    successive estimates agree to max(rel_tol·|I|, abs_tol).
    """
    (x0, x1), (y0, y1) = domain
    prev = None
    panels = 1
    while panels <= spec.max_subdivisions:
        xs, wx = gauss_legendre_panels(np.linspace(x0, x1, panels + 1), order)
        ys, wy = gauss_legendre_panels(np.linspace(y0, y1, panels + 1), order)
        vals = f(xs[:, None], ys[None, :])
        est = wx @ np.asarray(vals) @ wy
        if prev is not None:
            err = abs(est - prev)
            if err <= max(spec.rel_tol * abs(est), spec.abs_tol):
                return QuadResult(est, float(err))
        prev = est
        panels *= 2
    raise NonConvergenceError(
        f"integrate_2d did not converge within {spec.max_subdivisions} panels per axis"
    )
