"""Parameter sets and sweeps behind each reproduced figure.

Every figure is a table: one swept column followed by computed columns.  The
physical parameters of each sweep are fixed; only the acceleration may be rescaled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError
from .homodyne import DisplacementConfig, variance_ideal, variance_vacuum
from .modes import AccelerationFrame, DetectorBand, normalize_wavepacket
from .practical import ideal_count, particle_count_practical, variance_practical
from .scenarios import Identity, TimeDelay

V_C = 0.577  # centering position used with k_med = 1


@dataclass(frozen=True)
class Table:
    name: str
    columns: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]
    params: dict = field(default_factory=dict)

    def column(self, name: str) -> np.ndarray:
        return np.array([r[self.columns.index(name)] for r in self.rows])


def _frame(a: float) -> AccelerationFrame:
    return AccelerationFrame(a)


def _ideal_V(omega0, delta, delay, a, v_c=0.0):
    mode = normalize_wavepacket(omega0, delta, v_c)
    res = variance_ideal(DisplacementConfig(), mode, TimeDelay(delay), _frame(a))
    return res


def coverage_ratio(omega0: float, delta: float, k_wid: float, k_med: float = 1.0,
                   v_c: float = V_C, a: float = 1.0) -> float:
    """Fraction of the unbounded-band signal count seen inside the band."""
    frame = _frame(a)
    mode = normalize_wavepacket(omega0, delta, v_c)
    cfg = DisplacementConfig()
    _, n0 = particle_count_practical(cfg, mode, Identity(), frame, DetectorBand.from_center(k_med, k_wid))
    return n0 / ideal_count(cfg, mode, frame)


# --- individual figures -----------------------------------------------------

def _fig3(a):
    omega0, delta = 0.1, 0.005
    deltas = np.concatenate([np.linspace(0.0, 400.0, 161), np.geomspace(500.0, 1e8, 30)])
    rows = [(float(D), _ideal_V(omega0, delta, D, a).V1) for D in deltas]
    return ("Delta", "V1_ideal"), rows, {"a": a, "omega0": omega0, "delta": delta}


FIG4_OMEGA0 = (0.1, 0.3, 0.5, 0.7, 0.9)


def _fig4(a):
    deltas = np.geomspace(1e-2, 1e4, 61)
    cols = ("Delta",) + tuple(f"V1_omega0_{w}" for w in FIG4_OMEGA0)
    rows = []
    for D in deltas:
        rows.append((float(D),) + tuple(_ideal_V(w, 0.2 * w, D, a).V1 for w in FIG4_OMEGA0))
    return cols, rows, {"a": a, "delta_over_omega0": 0.2, "omega0": list(FIG4_OMEGA0)}


def _fig5(a):
    delay = 1e8
    rows = []
    for w in np.geomspace(0.01, 2.0, 41):
        mode = normalize_wavepacket(w, 0.05 * w)
        v = variance_ideal(DisplacementConfig(), mode, TimeDelay(delay), _frame(a)).V
        vv = variance_vacuum(DisplacementConfig(), mode, _frame(a)).V
        rows.append((float(w), v, vv))
    return ("omega0", "V_timedelay", "V_vacuum"), rows, {"a": a, "Delta": delay, "delta_over_omega0": 0.05}


def _fig6(a):
    omega0, delta = 0.6, 0.24
    rows = [(float(k), coverage_ratio(omega0, delta, k, a=a)) for k in np.geomspace(10.0, 1e10, 37)]
    return ("k_wid", "ratio"), rows, {"a": a, "omega0": omega0, "delta": delta, "k_med": 1.0, "v_c": V_C}


FIG7_OMEGA0 = (0.3, 0.5, 0.7)


def _fig7(a):
    k_wid = 1e8
    deltas = np.linspace(0.01, 0.12, 45)
    cols = ("delta",) + tuple(f"ratio_omega0_{w}" for w in FIG7_OMEGA0)
    rows = []
    for d in deltas:
        vals = tuple(coverage_ratio(w, d, k_wid, a=a) if d <= 0.4 * w else math.nan for w in FIG7_OMEGA0)
        rows.append((float(d),) + vals)
    return cols, rows, {"a": a, "k_wid": k_wid, "k_med": 1.0, "v_c": V_C, "omega0": list(FIG7_OMEGA0)}


FIG8_KWID = (1e4, 1e6, 1e8)


def _fig8(a):
    cols = ("omega0",) + tuple(f"ratio_k_wid_{k:g}" for k in FIG8_KWID)
    rows = []
    for w in np.linspace(0.1, 1.5, 29):
        rows.append((float(w),) + tuple(coverage_ratio(w, 0.4 * w, k, a=a) for k in FIG8_KWID))
    return cols, rows, {"a": a, "delta_over_omega0": 0.4, "k_med": 1.0, "v_c": V_C, "k_wid": list(FIG8_KWID)}


def _fig9(a):
    frame = _frame(a)
    band = DetectorBand.from_center(1.0, 1e8)
    mode = normalize_wavepacket(0.6, 0.24, V_C)
    rows = []
    for D in np.geomspace(1e-2, 1e3, 31):
        n, n0 = particle_count_practical(DisplacementConfig(), mode, TimeDelay(float(D)), frame, band)
        rows.append((float(D), n - n0))
    return ("Delta", "N0_X"), rows, {"a": a, "k_wid": 1e8, "k_med": 1.0}


FIG10_OMEGA0 = (0.3, 0.6, 0.9)


def _practical(omega0, delay, k_wid, a):
    frame = _frame(a)
    mode = normalize_wavepacket(omega0, 0.4 * omega0, V_C)
    band = DetectorBand.from_center(1.0, k_wid)
    return variance_practical(DisplacementConfig(), mode, TimeDelay(delay), frame, band)


def _fig10(a):
    cols = ("Delta",)
    for w in FIG10_OMEGA0:
        cols += (f"V_pr_omega0_{w}", f"V_ideal_omega0_{w}")
    rows = []
    for D in np.geomspace(0.1, 100.0, 16):
        vals = []
        for w in FIG10_OMEGA0:
            vals.append(_practical(w, float(D), 1e6, a).variance_leading(0.0))
            vals.append(float(_ideal_V(w, 0.4 * w, float(D), a, V_C).V_of_phi(0.0)))
        rows.append((float(D),) + tuple(vals))
    return cols, rows, {"a": a, "k_wid": 1e6, "k_med": 1.0, "delta_over_omega0": 0.4, "v_c": V_C, "phi": 0.0}


def _fig11(a):
    delay = 10.0
    rows = []
    for w in np.linspace(0.1, 1.5, 29):
        r = _practical(float(w), delay, 1e6, a)
        vi = _ideal_V(float(w), 0.4 * w, delay, a, V_C)
        rows.append((float(w), r.v12, r.v2_bar, vi.V1))
    return ("omega0", "v12", "v2_bar", "V1_ideal"), rows, {
        "a": a, "Delta": delay, "k_wid": 1e6, "k_med": 1.0, "delta_over_omega0": 0.4, "v_c": V_C}


def _fig12(a):
    delay = 10.0
    rows = [(float(k), _practical(0.6, delay, float(k), a).var0) for k in np.geomspace(10.0, 1e10, 19)]
    return ("k_wid", "N0_v10"), rows, {"a": a, "Delta": delay, "k_med": 1.0, "omega0": 0.6,
                                       "delta": 0.24, "v_c": V_C}


def _fig13(a):
    rows = [(float(D), _practical(0.6, float(D), 1e6, a).var0) for D in np.geomspace(0.1, 1e3, 13)]
    return ("Delta", "N0_v10"), rows, {"a": a, "k_wid": 1e6, "k_med": 1.0, "omega0": 0.6,
                                       "delta": 0.24, "v_c": V_C}


FIGURES: dict[str, Callable] = {
    "fig3": _fig3, "fig4": _fig4, "fig5": _fig5, "fig6": _fig6, "fig7": _fig7,
    "fig8": _fig8, "fig9": _fig9, "fig10": _fig10, "fig11": _fig11, "fig12": _fig12,
    "fig13": _fig13,
}


def run_figure(name: str, a: float = 1.0) -> Table:
    try:
        fn = FIGURES[name]
    except KeyError:
        raise DomainError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}") from None
    cols, rows, params = fn(float(a))
    return Table(name, tuple(cols), tuple(tuple(float(v) for v in r) for r in rows), params)
