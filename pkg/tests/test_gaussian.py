import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rqilab import fock as F
from rqilab import gaussian as G
from rqilab import rindler as R

Z = np.diag([1.0, -1.0])


def _tmsv_cutoff(r, tol=1e-16):
    c = 1
    while R.tmsv_norm_deficit(r, c) > tol:
        c += 1
    return c


def test_symplectic_from_bogoliubov_examples():
    assert np.allclose(G.symplectic_from_bogoliubov(np.eye(3), np.zeros((3, 3))), np.eye(6))
    r = 0.4
    S = G.symplectic_from_bogoliubov([[np.cosh(r)]], [[np.sinh(r)]])
    assert np.allclose(S, np.diag([np.exp(-r), np.exp(r)]))
    for sign in (1, -1):
        S = G.symplectic_from_bogoliubov(np.cosh(r) * np.eye(2), sign * np.sinh(r) * np.array([[0, 1], [1, 0]]))
        assert G.symplectic_violation(S) < 1e-12
    with pytest.raises(G.GaussianError):
        G.symplectic_from_bogoliubov(np.eye(2), 0.5 * np.eye(2))


def _random_bogoliubov(rng, n):
    # unitary-times-squeezer decomposition gives an exact Bogoliubov pair
    def unitary():
        q, r = np.linalg.qr(rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)))
        return q * (np.diag(r) / np.abs(np.diag(r)))

    U, V = unitary(), unitary()
    rs = rng.uniform(0, 1, n)
    alpha = U @ np.diag(np.cosh(rs)) @ V
    beta = U @ np.diag(np.sinh(rs)) @ V.conj()
    return alpha, beta


@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_random_bogoliubov_pairs_are_symplectic(n, seed):
    alpha, beta = _random_bogoliubov(np.random.default_rng(seed), n)
    assert G.bogoliubov_identity_error(alpha, beta) < 1e-10
    assert G.symplectic_violation(G.symplectic_from_bogoliubov(alpha, beta)) < 1e-9


@given(st.floats(0.0, 2.0))
@settings(max_examples=30, deadline=None)
def test_two_mode_squeezed_covariance(r):
    sigma = G.two_mode_squeezed_covariance(r)
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    expected = np.block([[c * np.eye(2), s * Z], [s * Z, c * np.eye(2)]])
    assert np.allclose(sigma, expected, atol=1e-12 * c)
    G.check_covariance(sigma)
    assert np.allclose(G.reduce_modes(sigma, [0]), c * np.eye(2))
    nu = G.symplectic_spectrum(G.partial_transpose_mode(sigma, 1))
    assert np.allclose(nu, [np.exp(-2 * r), np.exp(2 * r)], rtol=1e-10)
    assert G.two_mode_negativity(sigma) == pytest.approx(max(0.0, (np.exp(2 * r) - 1) / 2), rel=1e-9, abs=1e-14)


def test_apply_and_reduce_properties(rng):
    alpha, beta = _random_bogoliubov(rng, 2)
    S1 = G.symplectic_from_bogoliubov(alpha, beta)
    S2 = G.two_mode_squeezer(0.3)
    sigma = G.thermal([0.2, 1.0])
    assert np.allclose(G.apply_symplectic(sigma, np.eye(4)), sigma)
    assert np.allclose(G.apply_symplectic(G.apply_symplectic(sigma, S1), S2), G.apply_symplectic(sigma, S2 @ S1))
    assert np.allclose(G.reduce_modes(G.vacuum(3), [0, 2]), G.vacuum(2))
    assert np.allclose(G.reduce_modes(sigma, [0, 1]), sigma)
    with pytest.raises(G.GaussianError):
        G.reduce_modes(sigma, [5])


def test_partial_transpose_and_spectrum():
    assert np.allclose(G.partial_transpose_mode(G.vacuum(2), 0), G.vacuum(2))
    sigma = G.two_mode_squeezed_covariance(0.7)
    assert np.allclose(G.partial_transpose_mode(G.partial_transpose_mode(sigma, 1), 1), sigma)
    pt = G.partial_transpose_mode(sigma, 1)
    s = np.sinh(1.4)
    # only the entries involving p of mode 1 flip sign
    assert pt[0, 2] == pytest.approx(s) and pt[1, 3] == pytest.approx(s)
    assert np.allclose(G.symplectic_spectrum(G.vacuum(3)), 1.0)
    assert np.allclose(G.symplectic_spectrum(np.cosh(0.8) * np.eye(2)), [np.cosh(0.8)])
    assert G.two_mode_negativity(G.vacuum(2)) == pytest.approx(0.0, abs=1e-14)
    assert G.two_mode_negativity(G.two_mode_squeezed_covariance(0.0)) == pytest.approx(0.0, abs=1e-14)
    assert G.two_mode_negativity(G.two_mode_squeezed_covariance(0.5)) == pytest.approx((np.e - 1) / 2, rel=1e-12)


def test_check_covariance_rejects_unphysical():
    with pytest.raises(G.GaussianError):
        G.check_covariance(0.5 * np.eye(2))
    with pytest.raises(G.GaussianError):
        G.check_covariance(np.array([[1.0, 0.3], [0.0, 1.0]]))


@pytest.mark.parametrize("r", [0.1, 0.3, 0.6, 1.0])
def test_gaussian_matches_fock_negativity(r):
    sigma = G.two_mode_squeezed_covariance(r)
    en_gauss = np.log2(2 * G.two_mode_negativity(sigma) + 1)
    _, en_fock = F.negativity_measures(R.two_mode_squeezed_vacuum(r, _tmsv_cutoff(r)), [0])
    assert abs(en_gauss - en_fock) < 1e-4
    assert en_gauss == pytest.approx(2 * r / np.log(2), rel=1e-12)


def test_symplectic_inverse_and_phase_rotation(rng):
    alpha, beta = _random_bogoliubov(rng, 3)
    S = G.symplectic_from_bogoliubov(alpha, beta)
    assert np.allclose(G.symplectic_inverse(S) @ S, np.eye(6), atol=1e-10)
    P = G.phase_rotation([0.3, -1.2])
    assert G.symplectic_violation(P) < 1e-14
    assert np.allclose(P @ P.T, np.eye(4))


def test_symplectic_repair(rng):
    alpha, beta = _random_bogoliubov(rng, 3)
    S = G.symplectic_from_bogoliubov(alpha, beta)
    noisy = S + 1e-5 * rng.normal(size=S.shape)
    fixed, corr = G.symplectic_repair(noisy, threshold=1e-10)
    assert G.symplectic_violation(fixed) < 1e-10
    assert 0 < corr < 1e-3
    same, corr0 = G.symplectic_repair(S, threshold=1e-6)
    assert corr0 == 0.0 and same is S
