import mpmath as mp
import numpy as np
import pytest

from rqilab import detector as D

mp.mp.dps = 30


def convolution_oracle(omega, a, T, eps, inertial=False):
    """Gaussian-switched rate as a real-axis convolution of the stationary spectrum.

    The switching factor exp(-s^2/(4T^2)) has Fourier kernel (T/sqrt(pi)) exp(-T^2 x^2),
    and the regulator shifts the stationary spectrum by exp(2 eps w) (exp(eps w) inertial).
    """
    def spectrum(w):
        if inertial:
            return -w / (2 * mp.pi) * mp.exp(eps * w) if w < 0 else mp.mpf(0)
        x = 2 * mp.pi * w / a
        return w / (2 * mp.pi * mp.expm1(x)) * mp.exp(2 * eps * w) if w != 0 else a / (4 * mp.pi**2)

    kern = lambda w: spectrum(w) * T / mp.sqrt(mp.pi) * mp.exp(-(T**2) * (omega - w) ** 2)
    lo, hi = omega - 12 / T, omega + 12 / T
    pts = [lo, omega, hi] if not inertial else [lo, min(0, hi), hi]
    if inertial and hi < 0:
        pts = [lo, hi]
    return float(mp.quad(kern, pts))


def test_trajectory_validation():
    with pytest.raises(D.DetectorError):
        D.inertial(1.0)
    with pytest.raises(D.DetectorError):
        D.accelerated(0.0)
    with pytest.raises(D.DetectorError):
        D.Trajectory("circular")
    with pytest.raises(D.DetectorError):
        D.ResponseConfig(epsilon=0.0)


def test_pullback_properties():
    s = np.linspace(-3, 3, 61)
    for traj in (D.inertial(), D.accelerated(1.3)):
        w = D.wightman_pullback(traj, s, 1e-2)
        assert np.allclose(w.real, w.real[::-1]) and np.allclose(w.imag, -w.imag[::-1])
        assert np.isfinite(D.wightman_pullback(traj, 0.0, 1e-3))
    # a -> 0 recovers the inertial form with regulator 2 eps
    acc = D.wightman_pullback(D.accelerated(1e-5), s, 1e-2)
    ine = D.wightman_pullback(D.inertial(), s, 2e-2)
    assert np.allclose(acc, ine, rtol=1e-8)


def test_planck_response_limits():
    a = 1.0
    assert D.planck_response(40.0, a) < 1e-100
    big = 1e6
    assert D.planck_response(1.0, big) == pytest.approx(big / (4 * np.pi**2), rel=1e-5)
    for w in (0.2, 1.0, 2.5):
        assert D.planck_response(w, a) / D.planck_response(-w, a) == pytest.approx(np.exp(-2 * np.pi * w / a))
    assert D.planck_response(0.0, 2.0) == pytest.approx(2.0 / (4 * np.pi**2))


@pytest.mark.parametrize("omega,a", [(0.5, 1.0), (1.0, 1.0), (3.0, 1.0), (1.0, 2.5)])
def test_response_matches_convolution_oracle(omega, a):
    T, eps = 40.0, 1e-3
    cfg = D.ResponseConfig(epsilon=eps, T=T, check=False)
    got = D.response_numeric(omega, D.accelerated(a), cfg)
    assert got == pytest.approx(convolution_oracle(omega, a, T, eps), rel=1e-8)


def test_inertial_response_matches_oracle():
    T, eps = 2.0, 1e-3
    cfg = D.ResponseConfig(epsilon=eps, T=T, check=False)
    with pytest.warns(UserWarning):
        got = D.response_numeric(1.0, D.inertial(), cfg)
    assert got == pytest.approx(convolution_oracle(1.0, None, T, eps, inertial=True), rel=1e-6)


def test_response_ratio_to_planck_is_flat():
    ratios = [D.response_numeric(w, D.accelerated(1.0)) / D.planck_response(w, 1.0) for w in np.linspace(0.5, 3, 11)]
    assert max(ratios) / min(ratios) - 1 < 0.05
    assert all(abs(r - 1) < 0.01 for r in ratios)


def test_inertial_response_negligible():
    acc = D.response_numeric(1.0, D.accelerated(1.0))
    ine = D.response_numeric(1.0, D.inertial())
    assert abs(ine) < 1e-6 * acc


def test_response_stable_under_window_doubling():
    eps = 1e-3
    f1 = D.response_numeric(1.0, D.accelerated(1.0), D.ResponseConfig(epsilon=eps, T=60.0, check=False))
    f2 = D.response_numeric(1.0, D.accelerated(1.0), D.ResponseConfig(epsilon=eps, T=120.0, check=False, panels=800))
    assert abs(f2 / f1 - 1) < 0.01


def test_convergence_error_on_short_window():
    # T far too short for the spectral line: doubling moves the result a lot
    with pytest.warns(UserWarning), pytest.raises(D.ConvergenceError):
        D.response_numeric(2.0, D.accelerated(1.0), D.ResponseConfig(T=0.5))


def test_doppler():
    a, w = 0.7, 1.3
    assert D.doppler_frequency(0.0, w, a) == w
    assert D.doppler_frequency(np.log(2) / a, w, a) == pytest.approx(2 * w)
    for tau in (-1.0, 0.0, 0.4, 2.0):
        assert D.doppler_from_contraction(tau, w, a) == pytest.approx(float(D.doppler_frequency(tau, w, a)))


def test_homodyne_variance():
    assert D.homodyne_variance(1.0, 50.0) < 1e-100
    assert D.homodyne_variance(0.3, 2.0) == pytest.approx(1 / np.expm1(2 * np.pi * 0.6))
    # with u = e^(a tau)/a the variance is a Bose factor in omega_R(tau)/a
    a, w = 0.8, 0.5
    for tau in (0.0, 0.5, 1.5):
        u = np.exp(a * tau) / a
        wr = D.doppler_frequency(tau, w, a)
        assert D.homodyne_variance(w, u) == pytest.approx(1 / np.expm1(2 * np.pi * wr / a))
    with pytest.raises(D.DetectorError):
        D.homodyne_variance(1.0, -1.0)
