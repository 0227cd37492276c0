import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rindler_homodyne.errors import DomainError, UnsupportedScenarioError
from rindler_homodyne.figures import coverage_ratio
from rindler_homodyne.homodyne import DisplacementConfig, variance_ideal
from rindler_homodyne.modes import AccelerationFrame, DetectorBand, WavepacketMode, band_overlap, normalize_wavepacket
from rindler_homodyne.practical import (
    band_diagonal,
    count_excess_quadrature,
    coverage_threshold,
    guard_conditions,
    ideal_count,
    particle_count_practical,
    quadrature_amplitude_practical,
    time_delay_occupation_integral,
    variance_practical,
)
from rindler_homodyne.scenarios import Identity, Mirror, TimeDelay

FIG10_MODE = dict(omega0=0.6, delta=0.24, v_c=0.577)


@pytest.fixture(scope="module")
def fig10_mode():
    return normalize_wavepacket(**FIG10_MODE)


def test_band_diagonal():
    b = DetectorBand.from_center(1.0, 1e6)
    assert band_diagonal(b) == pytest.approx(complex(band_overlap(b, 0.7, 0.7)).real, rel=1e-14)
    assert band_diagonal(DetectorBand(1e-3, 1e3)) == pytest.approx(2.198806796638283, rel=1e-14)


@pytest.mark.parametrize("D", [1e-5, 0.3, 3.0, 40.0])
def test_occupation_integral_closed_form(D):
    ref = mp.quad(lambda w: mp.sin(w * D / 2) ** 2 / mp.sinh(mp.pi * w) ** 2, [0, 1, 5, mp.inf])
    assert time_delay_occupation_integral(D) == pytest.approx(float(ref), rel=1e-10)


def test_count_excess_closed_form_vs_quadrature():
    b = DetectorBand.from_center(1.0, 1e8)
    for D in (0.5, 10.0, 200.0):
        closed = 2 * band_diagonal(b) * time_delay_occupation_integral(D)
        assert count_excess_quadrature(TimeDelay(D), AccelerationFrame(), b) == pytest.approx(closed, rel=1e-8)


def test_counts_identity_and_delay(fig10_mode):
    b = DetectorBand.from_center(1.0, 1e6)
    cfg = DisplacementConfig(10.0)
    n, n0 = particle_count_practical(cfg, fig10_mode, Identity(), band=b)
    assert n == n0
    n, n0b = particle_count_practical(cfg, fig10_mode, TimeDelay(5.0), band=b)
    assert n0b == n0
    assert n - n0 == pytest.approx(2 * band_diagonal(b) * time_delay_occupation_integral(5.0), rel=1e-12)
    with pytest.raises(DomainError):
        particle_count_practical(cfg, fig10_mode, Identity())
    with pytest.raises(DomainError):
        particle_count_practical(DisplacementConfig(1.0, 0.0, 1.0), fig10_mode, Identity(), band=b)
    with pytest.raises(UnsupportedScenarioError):
        particle_count_practical(cfg, fig10_mode, Mirror(1.0), band=b)
    n, n0 = particle_count_practical(cfg, fig10_mode, Mirror(1.0), band=b, ir_cutoff=1e-2)
    assert n > n0


def test_coverage_values_and_trend():
    assert coverage_ratio(0.6, 0.24, 10.0) == pytest.approx(0.716454, abs=1e-5)
    ratios = [coverage_ratio(0.6, 0.24, k) for k in (10.0, 1e2, 1e4, 1e6, 1e8)]
    assert all(b > a for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] == pytest.approx(1.0, abs=1e-4)


@settings(max_examples=10)
@given(st.floats(0.2, 1.2), st.floats(1e2, 1e9))
def test_coverage_never_exceeds_unbounded_count(w0, kw):
    assert 0 < coverage_ratio(w0, 0.4 * w0, kw) <= 1 + 1e-9


def test_quadrature_amplitude_falls_as_inverse_alpha(fig10_mode):
    b = DetectorBand.from_center(1.0, 1e6)
    x1 = quadrature_amplitude_practical(DisplacementConfig(10.0), fig10_mode, TimeDelay(10.0), band=b)
    x2 = quadrature_amplitude_practical(DisplacementConfig(100.0), fig10_mode, TimeDelay(10.0), band=b)
    assert x1 / x2 == pytest.approx(10.0, rel=1e-12)


@pytest.mark.parametrize("D, rel", [(1.0, 1e-4), (10.0, 2e-3)])
def test_practical_tracks_ideal_for_moderate_delay(fig10_mode, D, rel):
    b = DetectorBand.from_center(1.0, 1e6)
    r = variance_practical(DisplacementConfig(100.0), fig10_mode, TimeDelay(D), band=b)
    vi = variance_ideal(DisplacementConfig(100.0), fig10_mode, TimeDelay(D)).V
    assert r.variance_leading(0.0) == pytest.approx(vi, rel=rel)


def test_practical_frozen_pieces(fig10_mode):
    b = DetectorBand.from_center(1.0, 1e6)
    r = variance_practical(DisplacementConfig(100.0), fig10_mode, TimeDelay(10.0), band=b)
    assert r.v12 == pytest.approx(0.5725662196724292, rel=1e-6)
    assert r.v2_bar == pytest.approx(0.007318511789613425, rel=1e-4)
    assert r.var0 == pytest.approx(28.88450549046356, rel=1e-6)
    assert r.n_pr0 == pytest.approx(10746.443476800396, rel=1e-8)
    assert -math.pi < r.theta <= math.pi


def test_exact_variance_converges_as_inverse_alpha_squared(fig10_mode):
    b = DetectorBand.from_center(1.0, 1e6)
    v = [variance_practical(DisplacementConfig(amp), fig10_mode, TimeDelay(10.0), band=b).variance(0.3)
         for amp in (10.0, 100.0, 1000.0)]
    assert (v[0] - v[1]) / (v[1] - v[2]) == pytest.approx(100.0, rel=1e-3)


def test_grid_refinement_is_stable(fig10_mode):
    b = DetectorBand.from_center(1.0, 1e4)
    variance_practical(DisplacementConfig(10.0), fig10_mode, TimeDelay(3.0), band=b, check_convergence=True)


def test_variance_practical_rejections(fig10_mode):
    b = DetectorBand.from_center(1.0, 1e4)
    with pytest.raises(UnsupportedScenarioError):
        variance_practical(DisplacementConfig(), fig10_mode, Identity(), band=b)
    with pytest.raises(UnsupportedScenarioError):
        variance_practical(DisplacementConfig(), fig10_mode, Mirror(1.0), band=b)
    with pytest.raises(DomainError):
        variance_practical(DisplacementConfig(), fig10_mode, TimeDelay(1.0))


def test_mirror_with_cutoff():
    m = normalize_wavepacket(0.6, 0.1, 0.577)
    b = DetectorBand.from_center(1.0, 1e8)
    r = variance_practical(DisplacementConfig(100.0), m, Mirror(math.pi / 2), band=b, ir_cutoff=0.05)
    vi = variance_ideal(DisplacementConfig(100.0), m, Mirror(math.pi / 2), ir_cutoff=0.05).V
    assert r.variance_leading(0.0) == pytest.approx(vi, rel=1e-3)


def test_guards():
    assert coverage_threshold(0.077) == pytest.approx(9.4717553589e7, rel=1e-9)
    mode = WavepacketMode(0.6, 0.24, 0.577)
    b = DetectorBand.from_center(1.0, 1e6)
    rep = guard_conditions(mode, AccelerationFrame(), b, TimeDelay(100.0), DisplacementConfig(100.0))
    assert rep["coverage"].satisfied
    assert rep["centering"].satisfied
    assert rep["zeroth_order"].threshold == pytest.approx(100 * math.sqrt(math.log(1e6) / 6), rel=1e-14)
    assert rep["zeroth_order"].threshold == pytest.approx(151.74, abs=0.01)
    assert not rep["zeroth_order"].satisfied
    assert rep["amplitude[k_wid]"].threshold == pytest.approx(37.5)
    assert not rep.all_satisfied
    big = guard_conditions(mode, AccelerationFrame(), b, TimeDelay(100.0), DisplacementConfig(1e4))
    assert big.all_satisfied
    off = guard_conditions(WavepacketMode(0.6, 0.24, 0.0), AccelerationFrame(), b, TimeDelay(1.0),
                           DisplacementConfig(1e4))
    assert not off["centering"].satisfied
    with pytest.raises(KeyError):
        rep["nope"]


def test_ideal_count(fig10_mode):
    assert ideal_count(DisplacementConfig(3.0), fig10_mode) > 9.0
