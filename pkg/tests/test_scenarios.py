import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rindler_homodyne.errors import DomainError, UnsupportedScenarioError
from rindler_homodyne.modes import AccelerationFrame, cosh_sinh_r, sinh_sq_r
from rindler_homodyne.scenarios import (
    Identity,
    Mirror,
    TimeDelay,
    correlation_kernel,
    plateau_kernel,
    squeeze_decomposition,
    wrap_angle,
)


def direct_delay_moments(w, D, a=1.0):
    """⟨c′†c′⟩ and ⟨c′d′⟩ from the explicit Bogoliubov coefficients.

    c′ = (C²e^{−iωΔ} − S²)c + CS(e^{−iωΔ} − 1)d†,
    d′ = (C² − S²e^{iωΔ})d + CS(1 − e^{iωΔ})c†.
    """
    C, S = cosh_sinh_r(w, AccelerationFrame(a))
    e = np.exp(-1j * w * D)
    alpha = C * C * e - S * S
    beta = C * S * (e - 1)
    gamma = C * S * (1 - np.conj(e))
    return np.abs(beta) ** 2, alpha * gamma


def test_validation():
    with pytest.raises(DomainError):
        TimeDelay(float("inf"))
    with pytest.raises(DomainError):
        Mirror(2 * math.pi)
    with pytest.raises(TypeError):
        correlation_kernel("delay")


@pytest.mark.parametrize("D", [0.3, 4.0, 60.0])
def test_delay_kernel_matches_direct_bogoliubov(D):
    w = np.linspace(0.05, 3.0, 40)
    k = correlation_kernel(TimeDelay(D))
    F1, F2 = direct_delay_moments(w, D)
    assert np.allclose(k.F1(w), F1, rtol=1e-11, atol=1e-14)
    assert np.allclose(k.F2(w), F2, rtol=1e-11, atol=1e-14)


def test_delay_kernel_at_origin():
    D = 3.0
    k = correlation_kernel(TimeDelay(D))
    assert k.F1(0.0) == pytest.approx(D * D / (4 * math.pi**2), rel=1e-15)
    assert k.F2(0.0) == pytest.approx(-1j * D / (2 * math.pi) * (1 - 1j * D / (2 * math.pi)), rel=1e-15)
    # continuity through the series branch
    assert k.F1(1e-7) == pytest.approx(k.F1(0.0), rel=1e-6)


@given(st.floats(0.02, 5.0), st.floats(0.0, 200.0))
def test_purity_relation(w, D):
    k = correlation_kernel(TimeDelay(D))
    f1, f2 = float(k.F1(w)), complex(k.F2(w))
    # relative to the size of the terms: absolute agreement is limited by ulp(|F2|²)
    assert abs(abs(f2) ** 2 - f1 * (1 + f1)) <= 1e-12 * max(1.0, f1 * (1 + f1))


@given(st.floats(0.02, 5.0), st.floats(0.01, 200.0))
def test_squeeze_magnitude_equals_occupation(w, D):
    f1 = float(correlation_kernel(TimeDelay(D)).F1(w))
    r = float(squeeze_decomposition(TimeDelay(D)).r_sq(w))
    assert math.sinh(r) ** 2 == pytest.approx(f1, rel=1e-8, abs=1e-12)


def test_squeeze_at_half_period():
    # ωΔ = π: e^{−iωΔ} = −1, so sinh²r = 4C²S² = csch²(πω)
    r = squeeze_decomposition(TimeDelay(10 * math.pi)).r_sq(0.1)
    assert r == pytest.approx(1.859180032443621, rel=1e-13)
    assert math.sinh(r) ** 2 == pytest.approx(1 / math.sinh(0.1 * math.pi) ** 2, rel=1e-12)
    assert r == pytest.approx(2 * math.atanh(math.exp(-0.1 * math.pi)), rel=1e-13)


def test_squeeze_angles_reconstruct_coefficient():
    D, w = 2.5, np.linspace(0.1, 2, 9)
    dec = squeeze_decomposition(TimeDelay(D))
    C, S = cosh_sinh_r(w)
    z = C * C * np.exp(-1j * w * D) - S * S
    assert np.allclose(np.cosh(dec.r_sq(w)) * np.exp(1j * dec.theta1(w)), z, atol=1e-12)
    assert np.all(np.abs(dec.total_angle(w)) <= math.pi)
    assert dec.theta2(2 * math.pi / D) == 0.0
    with pytest.raises(UnsupportedScenarioError):
        squeeze_decomposition(Mirror(1.0))


@given(st.floats(0.02, 5.0), st.floats(0.0, 2 * math.pi - 1e-9))
def test_mirror_kernel(w, theta):
    k = correlation_kernel(Mirror(theta))
    C, S = cosh_sinh_r(w)
    assert k.F1(w) == pytest.approx(2 * (C * S) ** 2 * (1 - math.cos(theta)), rel=1e-12, abs=1e-300)
    assert complex(k.F2(w)).real == pytest.approx(-C * S * (C * C + S * S) * (1 - math.cos(theta)),
                                                  rel=1e-12, abs=1e-300)
    # mixed, not pure: |F2|² < F1(1 + F1)
    assert abs(k.F2(w)) ** 2 <= float(k.F1(w)) * (1 + float(k.F1(w))) * (1 + 1e-12)


def test_mirror_rejects_zero_frequency():
    with pytest.raises(DomainError):
        correlation_kernel(Mirror(1.0)).F1(0.0)


def test_plateau_is_delay_average_and_mirror_half_pi():
    w = np.linspace(0.1, 2.0, 7)
    pk = plateau_kernel()
    mk = correlation_kernel(Mirror(math.pi / 2))
    assert np.array_equal(pk.F1(w), mk.F1(w))
    assert np.array_equal(pk.F2(w), mk.F2(w))
    # average of the delay kernel over one period of ωΔ
    D = np.linspace(0, 2 * math.pi / 0.7, 4001)[:-1]
    avg = np.mean([float(correlation_kernel(TimeDelay(d)).F1(0.7)) for d in D])
    assert avg == pytest.approx(float(pk.F1(0.7)), rel=1e-10)


def test_harmonics_reassemble_kernel():
    D = 17.0
    k = correlation_kernel(TimeDelay(D))
    h1, h2 = k.harmonics()
    w = np.linspace(0.2, 3.0, 11)
    f1 = sum(p(w) * np.exp(1j * nu * w) for nu, p in h1)
    f2 = sum(q(w) * np.exp(1j * nu * w) for nu, q in h2)
    assert np.allclose(f1, k.F1(w), rtol=1e-10, atol=1e-14)
    assert np.allclose(f2, k.F2(w), rtol=1e-10, atol=1e-14)


def test_identity_and_cross_moment():
    k = correlation_kernel(Identity())
    assert k.F1(0.5) == 0.0 and k.F2(0.5) == 0.0
    assert correlation_kernel(TimeDelay(1.0)).cross_cd_dag(np.ones(3)).tolist() == [0, 0, 0]


@given(st.floats(-50.0, 50.0))
def test_wrap_angle(x):
    y = float(wrap_angle(x))
    assert -math.pi < y <= math.pi
    assert math.isclose(math.cos(y), math.cos(x), abs_tol=1e-9)


def test_frame_scaling():
    # F1 depends on ω/a and aΔ only
    a = 2.5
    k1 = correlation_kernel(TimeDelay(4.0), AccelerationFrame(1.0))
    ka = correlation_kernel(TimeDelay(4.0 / a), AccelerationFrame(a))
    assert ka.F1(0.3 * a) == pytest.approx(float(k1.F1(0.3)), rel=1e-12)
    assert float(sinh_sq_r(0.3 * a, AccelerationFrame(a))) == pytest.approx(float(sinh_sq_r(0.3)), rel=1e-14)
