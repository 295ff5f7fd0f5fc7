"""Gaussian-state engine: covariance matrices, symplectic maps and negativity.

Quadratures are interleaved (x1, p1, x2, p2, ...) with x = (a + a†)/√2 and
p = (a - a†)/(i√2). Covariances are sigma_ij = <{dX_i, dX_j}>, so the vacuum
is the identity and the commutators read [X_i, X_j] = i Omega_ij.
"""

from __future__ import annotations

import numpy as np

SYMMETRY_TOL = 1e-10
PHYSICAL_TOL = 1e-8
SYMPLECTIC_TOL = 1e-9


class GaussianError(ValueError):
    """Raised for malformed or unphysical Gaussian data."""


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form with blocks [[0, 1], [-1, 0]]."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _n_modes(m: np.ndarray) -> int:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise GaussianError(f"expected a 2n x 2n matrix, got shape {m.shape}")
    return m.shape[0] // 2


def vacuum(n_modes: int) -> np.ndarray:
    return np.eye(2 * n_modes)


def thermal(nbar) -> np.ndarray:
    """Product of thermal states with mean occupations ``nbar``."""
    nbar = np.atleast_1d(np.asarray(nbar, dtype=float))
    return np.diag(np.repeat(2.0 * nbar + 1.0, 2))


def check_covariance(sigma: np.ndarray) -> None:
    """Raise unless sigma is symmetric and sigma + i Omega is PSD."""
    n = _n_modes(sigma)
    asym = np.max(np.abs(sigma - sigma.T))
    if asym > SYMMETRY_TOL * max(1.0, np.max(np.abs(sigma))):
        raise GaussianError(f"covariance not symmetric (deviation {asym:.3e})")
    ev = np.linalg.eigvalsh(sigma + 1j * symplectic_form(n))
    if ev.min() < -PHYSICAL_TOL * max(1.0, ev.max()):
        raise GaussianError(f"unphysical covariance (min eigenvalue {ev.min():.3e})")


def symplectic_violation(S: np.ndarray) -> float:
    """Max-abs entry of S Omega S^T - Omega."""
    omega = symplectic_form(_n_modes(S))
    return float(np.max(np.abs(S @ omega @ S.T - omega)))


def is_symplectic(S: np.ndarray, tol: float = SYMPLECTIC_TOL) -> bool:
    return symplectic_violation(S) <= tol


def bogoliubov_identity_error(alpha: np.ndarray, beta: np.ndarray) -> float:
    """Max-abs deviation of the Bogoliubov relations from the identity.

    Checks alpha alpha† - beta beta† = I and alpha beta^T - beta alpha^T = 0.
    """
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    eye = np.eye(alpha.shape[0])
    e1 = np.max(np.abs(alpha @ alpha.conj().T - beta @ beta.conj().T - eye))
    e2 = np.max(np.abs(alpha @ beta.T - beta @ alpha.T))
    return float(max(e1, e2))


def symplectic_from_bogoliubov(alpha, beta, tol: float = 1e-9, check: bool = True) -> np.ndarray:
    """Real symplectic matrix of a Bogoliubov pair.

    The (m, n) 2x2 block is [[Re(a-b), Im(a+b)], [-Im(a-b), Re(a+b)]] with
    a = alpha_mn, b = beta_mn.

    Args:
        alpha: square complex matrix of particle-preserving coefficients.
        beta: square complex matrix of particle-mixing coefficients.
        tol: allowed violation of the Bogoliubov identities.
        check: set False for truncated transforms that are repaired later.

    Returns:
        2n x 2n real matrix S acting as sigma -> S sigma S^T.
    """
    alpha = np.atleast_2d(np.asarray(alpha, dtype=complex))
    beta = np.atleast_2d(np.asarray(beta, dtype=complex))
    if alpha.shape != beta.shape or alpha.shape[0] != alpha.shape[1]:
        raise GaussianError("alpha and beta must be square matrices of equal shape")
    if check:
        err = bogoliubov_identity_error(alpha, beta)
        if err > tol:
            raise GaussianError(f"Bogoliubov identity violated by {err:.3e}")
    n = alpha.shape[0]
    S = np.empty((2 * n, 2 * n))
    S[0::2, 0::2] = (alpha - beta).real
    S[0::2, 1::2] = (alpha + beta).imag
    S[1::2, 0::2] = -(alpha - beta).imag
    S[1::2, 1::2] = (alpha + beta).real
    return S


def single_mode_squeezer(r: float) -> np.ndarray:
    """Symplectic matrix diag(e^-r, e^r)."""
    return symplectic_from_bogoliubov([[np.cosh(r)]], [[np.sinh(r)]])


def two_mode_squeezer(r: float) -> np.ndarray:
    """Two-mode squeezer whose vacuum image matches sum_n tanh^n r |n, n>.

    In the block convention above this needs beta = -sinh r off the diagonal;
    the vacuum image has cross block +sinh(2r) diag(1, -1).
    """
    c, s = np.cosh(r), np.sinh(r)
    return symplectic_from_bogoliubov(c * np.eye(2), -s * np.array([[0.0, 1.0], [1.0, 0.0]]))


def phase_rotation(phases) -> np.ndarray:
    """Free evolution a_n -> e^{-i phi_n} a_n as a symplectic matrix."""
    phases = np.atleast_1d(np.asarray(phases, dtype=float))
    return symplectic_from_bogoliubov(np.diag(np.exp(-1j * phases)), np.zeros((phases.size,) * 2))


def symplectic_inverse(S: np.ndarray) -> np.ndarray:
    """Exact inverse of a symplectic matrix, -Omega S^T Omega."""
    omega = symplectic_form(_n_modes(S))
    return -omega @ S.T @ omega


def apply_symplectic(sigma: np.ndarray, S: np.ndarray) -> np.ndarray:
    """Transformed covariance S sigma S^T."""
    sigma = np.asarray(sigma, dtype=float)
    S = np.asarray(S, dtype=float)
    if sigma.shape != S.shape:
        raise GaussianError(f"shape mismatch {sigma.shape} vs {S.shape}")
    out = S @ sigma @ S.T
    return 0.5 * (out + out.T)


def _quadrature_indices(keep, n_modes: int) -> list[int]:
    if isinstance(keep, (int, np.integer)):
        keep = [keep]
    keep = sorted(set(int(k) for k in keep))
    if not keep or keep[0] < 0 or keep[-1] >= n_modes:
        raise GaussianError(f"invalid mode selection {keep} for {n_modes} modes")
    return [i for k in keep for i in (2 * k, 2 * k + 1)]


def reduce_modes(sigma: np.ndarray, keep) -> np.ndarray:
    """Covariance of the kept modes (submatrix on their quadratures)."""
    idx = _quadrature_indices(keep, _n_modes(sigma))
    return np.asarray(sigma)[np.ix_(idx, idx)]


def partial_transpose_mode(sigma: np.ndarray, mode: int) -> np.ndarray:
    """Flip the momentum quadrature of ``mode`` in a two-mode covariance."""
    if _n_modes(sigma) != 2:
        raise GaussianError("partial transpose is defined here for two modes")
    if mode not in (0, 1):
        raise GaussianError(f"mode must be 0 or 1, got {mode}")
    t = np.ones(4)
    t[2 * mode + 1] = -1.0
    return t[:, None] * np.asarray(sigma) * t[None, :]


def symplectic_spectrum(sigma: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues in ascending order.

    The eigenvalues of i Omega sigma come in pairs ±nu; the n moduli are
    returned once each.
    """
    n = _n_modes(sigma)
    ev = np.linalg.eigvals(1j * symplectic_form(n) @ np.asarray(sigma))
    if not np.all(np.isfinite(ev)):
        raise GaussianError("eigen-solver returned non-finite values")
    mags = np.sort(np.abs(ev))
    # pairs are adjacent after sorting; average each pair
    return 0.5 * (mags[0::2] + mags[1::2])


def two_mode_negativity(sigma: np.ndarray) -> float:
    """Negativity max(0, (1 - nu)/(2 nu)) from the smallest PT symplectic eigenvalue."""
    nu = symplectic_spectrum(partial_transpose_mode(sigma, 1))[0]
    return float(max(0.0, (1.0 - nu) / (2.0 * nu)))


def two_mode_log_negativity(sigma: np.ndarray) -> float:
    """Logarithmic negativity log2(2N + 1) = max(0, -log2 nu)."""
    return float(np.log2(2.0 * two_mode_negativity(sigma) + 1.0))


def is_entangled(sigma: np.ndarray) -> bool:
    return bool(symplectic_spectrum(partial_transpose_mode(sigma, 1))[0] < 1.0)


def two_mode_squeezed_covariance(r: float) -> np.ndarray:
    return apply_symplectic(vacuum(2), two_mode_squeezer(r))


def symplectic_repair(S: np.ndarray, threshold: float = 1e-6):
    """Project a nearly symplectic matrix onto the symplectic group.

    Uses S' = S M^{-1/2} with M = -Omega S^T Omega S, which is exactly
    symplectic whenever M has a principal square root. Applied only when the
    violation exceeds ``threshold``.

    Returns:
        (S', correction_norm) with correction_norm the max-abs change.
    """
    if symplectic_violation(S) <= threshold:
        return S, 0.0
    n = _n_modes(S)
    omega = symplectic_form(n)
    m = -omega @ S.T @ omega @ S
    w, v = np.linalg.eig(m)
    inv_sqrt = (v * (1.0 / np.sqrt(w.astype(complex)))) @ np.linalg.inv(v)
    fixed = (S @ inv_sqrt).real
    return fixed, float(np.max(np.abs(fixed - S)))
