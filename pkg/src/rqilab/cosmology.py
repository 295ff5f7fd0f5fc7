"""Particle creation in a smoothly expanding 1+1 Robertson-Walker universe.

Conformal factor c(eta) = 1 + eps (1 + tanh(sigma eta)). In and out regions
are flat, and the in-vacuum is a two-mode squeezed state of out-modes
k and -k with squeezing tanh^2 r = gamma.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fock import StateVector
from .rindler import two_mode_squeezed_vacuum


class CosmologyError(ValueError):
    """Raised for invalid expansion parameters."""


class InversionError(CosmologyError, RuntimeError):
    """Raised when the entropy inversion finds no parameters within tolerance."""


# Lanczos coefficients for g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)


def _log_sin_pi(z: complex) -> complex:
    """log(sin(pi z)) without overflow for large |Im z| (branch irrelevant)."""
    w = np.pi * z
    if w.imag > 0:
        return -1j * w + np.log((np.exp(2j * w) - 1.0) / 2j)
    return 1j * w + np.log((1.0 - np.exp(-2j * w)) / 2j)


def log_gamma(z: complex) -> complex:
    """log Gamma(z) via the Lanczos approximation with reflection.

    The imaginary part is determined only modulo 2 pi.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == np.floor(z.real):
        raise CosmologyError(f"Gamma has a pole at z = {z.real:g}")
    if z.real < 0.5:
        return np.log(np.pi) - _log_sin_pi(z) - log_gamma(1.0 - z)
    z = z - 1.0
    x = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        x += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(x)


def complex_gamma(z: complex) -> complex:
    """Gamma(z) for complex z away from the poles."""
    return complex(np.exp(log_gamma(z)))


@dataclass(frozen=True)
class ExpansionParams:
    epsilon: float
    sigma: float
    m: float

    def __post_init__(self):
        if not (self.epsilon > 0 and self.sigma > 0 and self.m >= 0):
            raise CosmologyError(f"need epsilon > 0, sigma > 0, m >= 0; got {self}")


@dataclass(frozen=True)
class ModeFrequencies:
    k: float
    omega_in: float
    omega_out: float
    omega_plus: float
    omega_minus: float


def mode_frequencies(k: float, params: ExpansionParams) -> ModeFrequencies:
    w_in = np.sqrt(k * k + params.m**2)
    w_out = np.sqrt(k * k + params.m**2 * (1.0 + 2.0 * params.epsilon))
    return ModeFrequencies(float(k), float(w_in), float(w_out), 0.5 * (w_out + w_in), 0.5 * (w_out - w_in))


def bogoliubov_rw(k: float, params: ExpansionParams) -> tuple[complex, complex]:
    """In/out Bogoliubov coefficients (alpha_k, beta_k) from Gamma functions."""
    f = mode_frequencies(k, params)
    s = params.sigma
    if f.omega_in == 0.0:
        raise CosmologyError("k = 0 with m = 0 has no positive-frequency mode")
    pref = 0.5 * np.log(f.omega_out / f.omega_in)
    common = log_gamma(1 - 1j * f.omega_in / s)
    log_alpha = pref + common + log_gamma(-1j * f.omega_out / s) - log_gamma(-1j * f.omega_plus / s) - log_gamma(1 - 1j * f.omega_plus / s)
    alpha = complex(np.exp(log_alpha))
    if f.omega_minus == 0.0:
        # Gamma(0) in the denominator: no particle creation
        return alpha, 0j
    log_beta = pref + common + log_gamma(1j * f.omega_out / s) - log_gamma(1j * f.omega_minus / s) - log_gamma(1 + 1j * f.omega_minus / s)
    return alpha, complex(np.exp(log_beta))


def _log_sinh(x):
    x = np.asarray(x, dtype=float)
    big = x > 1.0
    safe = np.where(big, 1.0, x)
    return np.where(big, x + np.log1p(-np.exp(-2.0 * np.where(big, x, 1.0))) - np.log(2.0), np.log(np.sinh(safe)))


def gamma_parameter(k: float, params: ExpansionParams) -> float:
    """gamma = sinh^2(pi w_-/sigma) / sinh^2(pi w_+/sigma), in log space."""
    f = mode_frequencies(k, params)
    if f.omega_minus == 0.0:
        return 0.0
    lg = 2.0 * (_log_sinh(np.pi * f.omega_minus / params.sigma) - _log_sinh(np.pi * f.omega_plus / params.sigma))
    return float(np.exp(lg))


def out_state(gamma: float, cutoff: int) -> StateVector:
    """sqrt(1 - gamma) sum_n gamma^(n/2) |n>_k |n>_-k truncated at ``cutoff``."""
    if not 0.0 <= gamma < 1.0:
        raise CosmologyError("gamma must lie in [0, 1)")
    return two_mode_squeezed_vacuum(float(np.arctanh(np.sqrt(gamma))), cutoff)


def entanglement_entropy(gamma) -> float:
    """Entropy log2[gamma^(gamma/(gamma-1)) / (1-gamma)] of either out-mode."""
    gamma = float(gamma)
    if not 0.0 <= gamma < 1.0:
        raise CosmologyError("gamma must lie in [0, 1)")
    if gamma == 0.0:
        return 0.0
    return float((-np.log1p(-gamma) - gamma * np.log(gamma) / (1.0 - gamma)) / np.log(2.0))


def entropy_of_mode(k: float, params: ExpansionParams) -> float:
    return entanglement_entropy(gamma_parameter(k, params))


@dataclass
class InversionResult:
    epsilon: float
    sigma: float
    residual: float
    condition: float
    iterations: int
    non_unique: bool = False
    basins: list = field(default_factory=list)

    def params(self, m: float) -> ExpansionParams:
        return ExpansionParams(self.epsilon, self.sigma, m)


def _entropies(logp, ks, m):
    p = ExpansionParams(float(np.exp(logp[0])), float(np.exp(logp[1])), m)
    return np.array([entropy_of_mode(k, p) for k in ks])


def _jacobian(logp, ks, m, h=1e-6):
    J = np.empty((len(ks), 2))
    for j in range(2):
        d = np.zeros(2)
        d[j] = h
        J[:, j] = (_entropies(logp + d, ks, m) - _entropies(logp - d, ks, m)) / (2 * h)
    return J


def invert_expansion_params(S, k, m: float, tol: float = 1e-8, max_iter: int = 100,
                            grid=(np.linspace(-5.0, 4.0, 46), np.linspace(-4.0, 4.0, 41))) -> InversionResult:
    """Recover (epsilon, sigma) from mode entropies at known momenta.

    Two momenta give a determined system; more are solved in least squares.
    The start point comes from a coarse grid search over (ln eps, ln sigma),
    then damped Gauss-Newton refines it.

    Args:
        S: measured entropies.
        k: momenta, same length as S, pairwise distinct.
        m: field mass, must be positive.
        tol: required max |Delta S| at convergence.

    Returns:
        InversionResult with the fitted parameters, max residual, condition
        number of the log-parameter Jacobian and a non-uniqueness flag.
    """
    S = np.atleast_1d(np.asarray(S, dtype=float))
    ks = np.atleast_1d(np.asarray(k, dtype=float))
    if m <= 0:
        raise CosmologyError("m = 0 is conformal: entropy vanishes and cannot be inverted")
    if S.shape != ks.shape or S.size < 2:
        raise CosmologyError("need at least two (S, k) pairs of equal length")
    if len(set(np.abs(ks).tolist())) != ks.size:
        raise CosmologyError("momenta must be distinct")
    if np.any(S <= 0):
        raise CosmologyError("entropies must be positive")

    le, ls = grid
    cost = np.empty((le.size, ls.size))
    for i, a in enumerate(le):
        for j, b in enumerate(ls):
            cost[i, j] = np.sum((_entropies(np.array([a, b]), ks, m) - S) ** 2)
    # local minima of the grid cost define candidate basins
    basins = []
    for i in range(le.size):
        for j in range(ls.size):
            nb = cost[max(i - 1, 0): i + 2, max(j - 1, 0): j + 2]
            if cost[i, j] <= nb.min():
                basins.append((float(cost[i, j]), float(le[i]), float(ls[j])))
    basins.sort()

    def refine(start):
        x = np.array(start, dtype=float)
        it = 0
        r = _entropies(x, ks, m) - S
        for it in range(1, max_iter + 1):
            J = _jacobian(x, ks, m)
            step, *_ = np.linalg.lstsq(J, -r, rcond=None)
            lam = 1.0
            c0 = np.sum(r**2)
            while lam > 1e-6:
                # keep ln(eps), ln(sigma) in a box where the forward model is finite
                x_new = np.clip(x + lam * step, -30.0, 30.0)
                r_new = _entropies(x_new, ks, m) - S
                if np.sum(r_new**2) < c0:
                    break
                lam *= 0.5
            x, r = x_new, r_new
            if np.max(np.abs(r)) <= tol * 1e-3 or np.max(np.abs(lam * step)) < 1e-14:
                break
        return x, r, it

    solutions = []
    for c, a, b in basins[:4]:
        x, r, it = refine((a, b))
        res = float(np.max(np.abs(r)))
        if res <= tol:
            if not any(np.max(np.abs(x - s[0])) < 1e-4 for s in solutions):
                solutions.append((x, res, it))
    if not solutions:
        x, r, it = refine(basins[0][1:])
        raise InversionError(f"no solution found; residual floor {np.max(np.abs(r)):.3e}")
    x, res, it = min(solutions, key=lambda s: s[1])
    J = _jacobian(x, ks, m)
    cond = float(np.linalg.cond(J))
    return InversionResult(
        epsilon=float(np.exp(x[0])),
        sigma=float(np.exp(x[1])),
        residual=res,
        condition=cond,
        iterations=it,
        non_unique=len(solutions) > 1,
        basins=[(float(np.exp(s[0][0])), float(np.exp(s[0][1]))) for s in solutions],
    )
