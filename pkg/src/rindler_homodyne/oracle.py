"""Brute-force Gaussian-state cross-check.

The Unruh pairs on a discrete frequency grid are carried as a real covariance
matrix in (x₁…x_n, p₁…p_n) order with x = b + b†, p = −i(b − b†), so the
vacuum has covariance identity.  Scenarios are applied as explicit symplectic
maps built from the Unruh-to-Rindler two-mode squeeze; nothing here reuses
the closed-form kernels.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import DomainError
from .modes import AccelerationFrame
from .scenarios import Identity, Mirror, Scenario, TimeDelay


@dataclass(frozen=True)
class FrequencyGrid:
    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.points, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        if p.ndim != 1 or p.shape != w.shape or p.size == 0:
            raise DomainError("grid points and weights must be equal-length 1-D arrays")
        if np.any(np.diff(p) <= 0):
            raise DomainError("grid points must be strictly increasing")
        if np.any(w <= 0) or np.any(p <= 0):
            raise DomainError("grid points and weights must be positive")
        object.__setattr__(self, "points", p)
        object.__setattr__(self, "weights", w)

    @property
    def size(self) -> int:
        return self.points.size

    @classmethod
    def gauss_legendre(cls, lo: float, hi: float, n: int = 200) -> "FrequencyGrid":
        x, w = leggauss(n)
        return cls(0.5 * (hi + lo) + 0.5 * (hi - lo) * x, 0.5 * (hi - lo) * w)

    @classmethod
    def for_packet(cls, omega0: float, delta: float, n: int = 200, width: float = 6.0) -> "FrequencyGrid":
        return cls.gauss_legendre(max(0.0, omega0 - width * delta), omega0 + width * delta, n)

    @classmethod
    def single(cls, omega: float) -> "FrequencyGrid":
        return cls(np.array([omega]), np.array([1.0]))


def symplectic_form(n_modes: int) -> np.ndarray:
    I = np.eye(n_modes)
    Z = np.zeros((n_modes, n_modes))
    return np.block([[Z, I], [-I, Z]])


@dataclass(frozen=True)
class GaussianState:
    mean: np.ndarray
    cov: np.ndarray

    @property
    def n_modes(self) -> int:
        return self.mean.size // 2

    @classmethod
    def vacuum(cls, n_modes: int) -> "GaussianState":
        return cls(np.zeros(2 * n_modes), np.eye(2 * n_modes))

    def transform(self, S: np.ndarray) -> "GaussianState":
        if S.shape != (self.mean.size, self.mean.size):
            raise DomainError(f"map of shape {S.shape} does not act on {self.n_modes} modes")
        return GaussianState(S @ self.mean, S @ self.cov @ S.T)

    def keep(self, modes: np.ndarray) -> "GaussianState":
        """Partial trace: keep the listed mode indices."""
        idx = np.concatenate([modes, modes + self.n_modes])
        return GaussianState(self.mean[idx], self.cov[np.ix_(idx, idx)])

    def uncertainty_min_eig(self) -> float:
        M = self.cov + 1j * symplectic_form(self.n_modes)
        return float(np.linalg.eigvalsh(M).min())

    def symplectic_eigenvalues(self) -> np.ndarray:
        ev = np.linalg.eigvals(1j * symplectic_form(self.n_modes) @ self.cov)
        return np.sort(np.abs(ev.real))[::2]


def complex_map_to_symplectic(U: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Real matrix of b′ = U b + W b* acting on (x, p)."""
    return np.block([
        [(U + W).real, -(U - W).imag],
        [(U + W).imag, (U - W).real],
    ])


def _cosh_sinh(omega, a):
    r = np.arctanh(np.exp(-np.pi * omega / a))
    return np.cosh(r), np.sinh(r)


def _unruh_to_rindler(C, S, inverse=False):
    """Pairs (c_i, d_i) → (a_i, b_i) with a = Cc + Sd†, b = Cd + Sc†; n pairs."""
    n = C.size
    U = np.zeros((2 * n, 2 * n), dtype=complex)
    W = np.zeros_like(U)
    i = np.arange(n)
    sgn = -1.0 if inverse else 1.0
    U[i, i] = C
    U[n + i, n + i] = C
    W[i, n + i] = sgn * S
    W[n + i, i] = sgn * S
    return complex_map_to_symplectic(U, W)


def scenario_symplectic(scenario: Scenario, grid: FrequencyGrid, frame: AccelerationFrame = AccelerationFrame()):
    """Symplectic map of the scenario on the Unruh modes.

    Time delay: acts on (c₁..c_n, d₁..d_n).  Mirror: acts on the enlarged set
    (c, d, c₂, d₂) where (c₂, d₂) are the Unruh pair of the right-moving mode.
    """
    w = grid.points
    n = w.size
    C, S = _cosh_sinh(w, frame.a)
    if isinstance(scenario, Identity):
        return np.eye(4 * n)
    if isinstance(scenario, TimeDelay):
        ph = np.ones(2 * n, dtype=complex)
        ph[:n] = np.exp(-1j * w * scenario.delay)
        P = complex_map_to_symplectic(np.diag(ph), np.zeros((2 * n, 2 * n)))
        return _unruh_to_rindler(C, S, inverse=True) @ P @ _unruh_to_rindler(C, S)
    if isinstance(scenario, Mirror):
        # modes: [c (n), d (n), c2 (n), d2 (n)] → Rindler [a1, b1, a2, b2]
        T = _unruh_to_rindler(np.tile(C, 2), np.tile(S, 2))
        Ti = _unruh_to_rindler(np.tile(C, 2), np.tile(S, 2), inverse=True)
        # reorder so the pair helper sees (c, c2 | d, d2) → (a1, a2 | b1, b2)
        perm = np.concatenate([np.arange(n), 2 * n + np.arange(n), n + np.arange(n), 3 * n + np.arange(n)])
        Pm = np.zeros((4 * n, 4 * n))
        Pm[np.arange(4 * n), perm] = 1.0
        Pr = np.block([[Pm, np.zeros_like(Pm)], [np.zeros_like(Pm), Pm]])
        # beam splitter a1′ = a1 cos θ + a2 sin θ, a2′ = a2 cos θ − a1 sin θ
        ct, st = math.cos(scenario.theta), math.sin(scenario.theta)
        U = np.eye(4 * n, dtype=complex)
        i = np.arange(n)
        U[i, i] = ct
        U[i, n + i] = st
        U[n + i, n + i] = ct
        U[n + i, i] = -st
        B = complex_map_to_symplectic(U, np.zeros_like(U))
        return Pr.T @ Ti @ B @ T @ Pr
    raise TypeError(f"not a scenario: {scenario!r}")


def apply_scenario(state: GaussianState, scenario: Scenario, grid: FrequencyGrid,
                   frame: AccelerationFrame = AccelerationFrame()) -> GaussianState:
    n = grid.size
    if state.n_modes != 2 * n:
        raise DomainError(f"state has {state.n_modes} modes, grid needs {2 * n}")
    if isinstance(scenario, Mirror):
        # append the right-mover Unruh pair in vacuum, evolve, trace it out
        big = GaussianState(
            np.concatenate([state.mean[:2 * n], np.zeros(2 * n), state.mean[2 * n:], np.zeros(2 * n)]),
            _embed_cov(state.cov, n),
        )
        out = big.transform(scenario_symplectic(scenario, grid, frame))
        return out.keep(np.arange(2 * n))
    S = scenario_symplectic(scenario, grid, frame)
    return state.transform(S) if not isinstance(scenario, Identity) else state


def _embed_cov(cov: np.ndarray, n: int) -> np.ndarray:
    m = 2 * n
    big = np.eye(8 * n)
    idx = np.concatenate([np.arange(m), 4 * n + np.arange(m)])
    big[np.ix_(idx, idx)] = cov
    return big


def measurement_vector(grid: FrequencyGrid, g_c, g_d, phi: float = 0.0) -> tuple[np.ndarray, float]:
    z = np.concatenate([np.asarray(g_c) * np.exp(1j * phi), np.asarray(g_d) * np.exp(-1j * phi)])
    z = z * np.sqrt(np.tile(grid.weights, 2))
    norm = float(np.sum(np.abs(z) ** 2))
    if norm <= 0:
        raise DomainError("measurement vector has zero norm")
    return np.concatenate([z.real, z.imag]), norm


def measure_mode_variance(state: GaussianState, grid: FrequencyGrid, g_c, g_d,
                          phi: float = 0.0) -> tuple[float, float]:
    """Mean and variance of L = Σ (z*b + z b†), z = √w·g, in shot-noise units."""
    v, norm = measurement_vector(grid, g_c, g_d, phi)
    return float(v @ state.mean / math.sqrt(norm)), float(v @ state.cov @ v / norm)


def second_moments(state: GaussianState) -> tuple[np.ndarray, np.ndarray]:
    """(N, M) with N_ij = ⟨b_i†b_j⟩ and M_ij = ⟨b_i b_j⟩ (zero-mean part)."""
    n = state.n_modes
    V = state.cov
    Vxx, Vxp, Vpx, Vpp = V[:n, :n], V[:n, n:], V[n:, :n], V[n:, n:]
    # b = (x + ip)/2
    bb = (Vxx - Vpp + 1j * (Vxp + Vpx)) / 4
    bdb = (Vxx + Vpp + 1j * (Vxp - Vpx)) / 4 - 0.5 * np.eye(n)
    return bdb, bb


def displacement_amplitudes(state: GaussianState) -> np.ndarray:
    n = state.n_modes
    return 0.5 * (state.mean[:n] + 1j * state.mean[n:])


# ---------------------------------------------------------------------------
# photon-number statistics of a band-limited counter
# ---------------------------------------------------------------------------

def counter_matrix(grid: FrequencyGrid, A1: np.ndarray, A2: np.ndarray) -> np.ndarray:
    """H with N = Σ b_p† H_pq b_q on b = (c₁..c_n, d₁..d_n).

    A1, A2 are the band overlaps sampled on grid × grid; quadrature weights
    are folded in so the discrete modes have unit commutators.
    """
    sw = np.sqrt(grid.weights)
    M1 = sw[:, None] * A1 * sw[None, :]
    M2 = sw[:, None] * A2 * sw[None, :]
    return np.block([[M1, M2], [np.conj(M2), M1.T]])


def displace(state: GaussianState, mu: np.ndarray) -> GaussianState:
    """Add coherent amplitudes ⟨b⟩ = μ."""
    mu = np.asarray(mu, dtype=complex)
    return GaussianState(state.mean + np.concatenate([2 * mu.real, 2 * mu.imag]), state.cov)


def number_mean(state: GaussianState, H: np.ndarray) -> float:
    Nm, _ = second_moments(state)
    mu = displacement_amplitudes(state)
    return float((np.sum(H * Nm.T) + np.conj(mu) @ H @ mu).real)


def number_variance(state: GaussianState, H: np.ndarray) -> float:
    """Var(b†Hb) from the covariance matrix.

    With N = RᵀMR + const and [R_i, R_j] = 2iΩ_ij:
    Var = 2Tr(MΣMΣ) + 2Tr(MΩMΩ) + 4 mᵀMΣMm.
    """
    n = state.n_modes
    Hr, Hi = H.real, H.imag
    M = 0.25 * np.block([[Hr, -Hi], [Hi, Hr]])
    MS = M @ state.cov
    MO = M @ symplectic_form(n)
    m = state.mean
    return float(2 * np.trace(MS @ MS) + 2 * np.trace(MO @ MO) + 4 * m @ M @ state.cov @ M @ m)


def number_variance_4d(state: GaussianState, H: np.ndarray) -> float:
    """Var(b†Hb) as the explicit four-index sum Σ H_pq H_rs G_pqrs.

    G is the connected four-point function of the displaced Gaussian state,
    written out by Wick's theorem; this is the brute-force counterpart of
    :func:`number_variance` and scales as (2n)⁴.
    """
    Nm, Mm = second_moments(state)
    mu = displacement_amplitudes(state)
    I = np.eye(state.n_modes)
    Nq = Nm.T + I  # ⟨δb_q δb_r†⟩ indexed [r, q] → use (n_rq + δ_qr)
    mc = np.conj(mu)
    Mc = np.conj(Mm)
    ein = np.einsum
    var = ein("pq,rs,pr,qs->", H, H, Mc, Mm)
    var += ein("pq,rs,ps,rq->", H, H, Nm, Nq)
    var += ein("pq,rs,p,r,qs->", H, H, mc, mc, Mm)
    var += ein("pq,rs,p,s,rq->", H, H, mc, mu, Nq)
    var += ein("pq,rs,q,r,ps->", H, H, mu, mc, Nm)
    var += ein("pq,rs,q,s,pr->", H, H, mu, mu, Mc)
    return float(var.real)
