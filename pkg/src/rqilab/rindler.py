"""Unruh/Rindler physics on truncated Fock spaces.

Covers squeezing parameters, two-mode squeezed vacua, single-particle Unruh
states, Alice-Rob entanglement degradation, the black-hole analogue, Killing
observer Doppler factors and Unruh-mode wavepacket coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fock
from .fock import DensityMatrix, StateVector


class RindlerError(ValueError):
    """Raised for parameters outside the physical domain."""


class TruncationError(RindlerError, RuntimeError):
    """Raised when a series or cutoff cannot reach the requested tolerance."""


@dataclass(frozen=True)
class AccelerationContext:
    omega: float
    a: float
    Omega: float
    r: float


@dataclass(frozen=True)
class UnruhWeights:
    q_R: complex
    q_L: complex

    def __post_init__(self):
        total = abs(self.q_R) ** 2 + abs(self.q_L) ** 2
        if abs(total - 1.0) > 1e-12:
            raise RindlerError(f"|q_R|^2 + |q_L|^2 = {total!r}, expected 1")


@dataclass(frozen=True)
class WavepacketSpec:
    """Gaussian shape function in ln(omega l).

    ``Omega_center`` adds the tuning phase (omega l)^(-i eps Omega_center),
    which moves the right-moving Unruh content to Omega = Omega_center and
    suppresses the left-moving content. With Omega_center = 0 the two are equal.
    """

    center: float
    width: float
    l: float = 1.0
    epsilon_sign: int = 1
    Omega_center: float = 0.0

    def __post_init__(self):
        if self.width <= 0 or self.l <= 0:
            raise RindlerError("wavepacket width and l must be positive")
        if self.epsilon_sign not in (1, -1):
            raise RindlerError("epsilon_sign must be +1 or -1")


def squeezing_from_ratio(Omega: float) -> float:
    """r with tanh r = exp(-pi Omega)."""
    if Omega <= 0:
        raise RindlerError("Omega must be positive")
    return float(np.arctanh(np.exp(-np.pi * Omega)))


def acceleration_context(omega: float, a: float) -> AccelerationContext:
    if omega <= 0 or a <= 0:
        raise RindlerError("omega and a must be positive")
    Omega = omega / a
    return AccelerationContext(omega, a, Omega, squeezing_from_ratio(Omega))


def unruh_temperature(a: float) -> float:
    """T = a/(2 pi) in natural units (k_B = 1)."""
    if a <= 0:
        raise RindlerError("acceleration must be positive")
    return a / (2.0 * np.pi)


def _check(r: float, cutoff: int) -> None:
    if r < 0:
        raise RindlerError("r must be nonnegative")
    if cutoff < 0:
        raise RindlerError("cutoff must be nonnegative")


def two_mode_squeezed_vacuum(r: float, cutoff: int) -> StateVector:
    """sum_{n <= cutoff} tanh^n r / cosh r |n, n>, dims (cutoff+1, cutoff+1)."""
    _check(r, cutoff)
    d = cutoff + 1
    n = np.arange(d)
    amps = np.zeros((d, d), dtype=complex)
    amps[n, n] = np.tanh(r) ** n / np.cosh(r)
    return StateVector((d, d), amps.reshape(-1))


def tmsv_norm_deficit(r: float, cutoff: int) -> float:
    return float(np.tanh(r) ** (2 * (cutoff + 1)))


def rindler_thermal_state(r: float, cutoff: int) -> DensityMatrix:
    """Region-I marginal of the squeezed vacuum: weights (1 - t^2) t^(2n)."""
    _check(r, cutoff)
    t2 = np.tanh(r) ** 2
    n = np.arange(cutoff + 1)
    return DensityMatrix((cutoff + 1,), np.diag((1.0 - t2) * t2**n))


def single_particle_unruh_state(r: float, cutoff: int) -> StateVector:
    """sum_{n <= cutoff} tanh^n r sqrt(n+1) / cosh^2 r |n+1>_I |n>_II.

    Register dims are (cutoff+2, cutoff+1) so every listed term fits.
    """
    _check(r, cutoff)
    n = np.arange(cutoff + 1)
    amps = np.zeros((cutoff + 2, cutoff + 1), dtype=complex)
    amps[n + 1, n] = np.tanh(r) ** n * np.sqrt(n + 1.0) / np.cosh(r) ** 2
    return StateVector((cutoff + 2, cutoff + 1), amps.reshape(-1))


def single_particle_norm_deficit(r: float, cutoff: int) -> float:
    """Exact tail sum_{n > cutoff} (n+1) x^n (1-x)^2 with x = tanh^2 r."""
    x = np.tanh(r) ** 2
    return float(x ** (cutoff + 1) * ((cutoff + 2) * (1.0 - x) + x))


def alice_rob_trace_deficit(r: float, cutoff: int) -> float:
    return 0.5 * (tmsv_norm_deficit(r, cutoff) + single_particle_norm_deficit(r, cutoff))


def cutoff_for_deficit(r: float, tol: float = 1e-10, max_cutoff: int = 5000) -> int:
    """Smallest cutoff whose Alice-Rob trace deficit is at most ``tol``."""
    if r == 0:
        return 1
    c = 1
    while alice_rob_trace_deficit(r, c) > tol:
        c += 1
        if c > max_cutoff:
            raise TruncationError(f"no cutoff below {max_cutoff} reaches deficit {tol}")
    return c


def alice_rob_state(r: float, cutoff: int) -> DensityMatrix:
    """Alice's qubit ⊗ Rob's region-I mode after tracing region II.

    Built from (|0>_A |0>_U + |1>_A |1>_U)/sqrt(2) with the Unruh states
    expanded in Rindler modes. Register dims are (2, cutoff+2). Truncation
    loss is kept in the trace, see :func:`alice_rob_trace_deficit`.
    """
    vac = two_mode_squeezed_vacuum(r, cutoff).amplitudes.reshape(cutoff + 1, cutoff + 1)
    one = single_particle_unruh_state(r, cutoff).amplitudes.reshape(cutoff + 2, cutoff + 1)
    vac_padded = np.zeros_like(one)
    vac_padded[: cutoff + 1] = vac
    psi = np.stack([vac_padded, one]) / np.sqrt(2.0)
    state = StateVector((2, cutoff + 2, cutoff + 1), psi.reshape(-1))
    return fock.partial_trace(state, [0, 1])


def alice_rob_log_negativity_fock(r: float, cutoff: int | None = None, tol: float = 1e-10) -> float:
    """Log-negativity of the Alice-Rob state from the Fock engine.

    Args:
        r: squeezing parameter.
        cutoff: fixed cutoff, or None to pick one with trace deficit below ``tol``.
    """
    if cutoff is None:
        cutoff = cutoff_for_deficit(r, tol)
    return fock.negativity_measures(alice_rob_state(r, cutoff), [0])[1]


def alice_rob_log_negativity_closed(r: float, terms: int | None = None, tol: float = 1e-12) -> float:
    """Closed-form log-negativity of the Alice-Rob state.

    The n/sinh^2 r pieces are evaluated as n tanh^(2(n-1)) r / cosh^2 r so the
    r -> 0 limit is regular.

    Args:
        r: squeezing parameter.
        terms: number of series terms; chosen automatically when None.
        tol: required bound on the neglected tail of the series.
    """
    if r < 0:
        raise RindlerError("r must be nonnegative")
    t2 = np.tanh(r) ** 2
    c2 = np.cosh(r) ** 2

    def tail(N):
        # bound on sum_{n >= N} of the summand using sqrt(u^2 + v^2) <= u + v,
        # divided by ln 2 for the error in log2 (the total is at least 1)
        if t2 == 0:
            return 0.0
        b = t2 ** (N - 1) * (N + t2 * c2) + t2**N * (t2 + 2.0 / np.sqrt(c2)) * c2
        return b / (2.0 * c2 * np.log(2.0))

    if terms is None:
        terms = 2
        while tail(terms) > tol:
            terms += 1
    if tail(terms) > tol:
        raise TruncationError(f"{terms} terms leave tail bound {tail(terms):.3e} > {tol:.1e}")
    n = np.arange(terms, dtype=float)
    t2n = t2**n
    t2nm1 = np.where(n > 0, t2 ** np.maximum(n - 1, 0), 0.0)
    u = n * t2nm1 / c2 + t2n * t2
    total = 1.0 / (2.0 * c2) + np.sum(np.sqrt(u**2 + 4.0 * t2n**2 / c2) / (2.0 * c2))
    return float(np.log2(total))


def _lower(d: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, d, dtype=float)), 1)


def unruh_annihilation_residual(r: float, weights: UnruhWeights, cutoff: int) -> float:
    """Norm of (q_R a_R + q_L a_L) applied to the truncated squeezed vacuum.

    The truncated vacuum (occupations up to ``cutoff``) is embedded in a
    register one level larger so that creation operators act without
    clipping; the residual then measures the truncation error only. The
    exact value is tanh^(cutoff+1) r sqrt(cutoff+1).
    """
    _check(r, cutoff)
    d = cutoff + 2
    vac = np.zeros((d, d), dtype=complex)
    vac[: cutoff + 1, : cutoff + 1] = two_mode_squeezed_vacuum(r, cutoff).amplitudes.reshape(cutoff + 1, cutoff + 1)
    a = _lower(d)
    ch, sh = np.cosh(r), np.sinh(r)
    # a_R = cosh a_I - sinh a_II^dag ; a_L = cosh a_II - sinh a_I^dag
    a_r = ch * (a @ vac) - sh * (vac @ a)
    a_l = ch * (vac @ a.T) - sh * (a.T @ vac)
    out = weights.q_R * a_r + weights.q_L * a_l
    return float(np.linalg.norm(out))


def unruh_residual_closed(r: float, cutoff: int) -> float:
    return float(np.tanh(r) ** (cutoff + 1) * np.sqrt(cutoff + 1.0))


def black_hole_squeezing(m: float, omega: float, r0: float | None = None) -> float:
    """Squeezing q with tanh q = exp(-pi omega / A).

    A = 1/(4m) near the horizon; for a stationary observer at r0 it becomes
    1/(4m sqrt(1 - 2m/r0)).
    """
    if m <= 0 or omega <= 0:
        raise RindlerError("m and omega must be positive")
    if r0 is None:
        A = 1.0 / (4.0 * m)
    else:
        if r0 <= 2.0 * m:
            raise RindlerError("r0 must lie outside the horizon r0 > 2m")
        A = 1.0 / (4.0 * m * np.sqrt(1.0 - 2.0 * m / r0))
    return float(np.arctanh(np.exp(-np.pi * omega / A)))


def killing_doppler_frequency(g00: float, g11: float, K, omega0: float, sign: int = 1) -> float:
    """Frequency measured by a Killing observer with two-velocity direction K.

    omega_K = omega0 sqrt(g00) sqrt((1 ± alpha)/(1 ∓ alpha)) with
    alpha = sqrt(-g00/g11) K1/K0.
    """
    if g00 <= 0 or g11 >= 0:
        raise RindlerError("need g00 > 0 and g11 < 0")
    if sign not in (1, -1):
        raise RindlerError("sign must be +1 or -1")
    K0, K1 = K
    if K0 == 0:
        raise RindlerError("K must be timelike")
    alpha = np.sqrt(-g00 / g11) * K1 / K0
    if abs(alpha) >= 1:
        raise RindlerError(f"K is null or spacelike (|alpha| = {abs(alpha):.6g})")
    return float(omega0 * np.sqrt(g00) * np.sqrt((1 + sign * alpha) / (1 - sign * alpha)))


def wavepacket_shape(spec: WavepacketSpec, omega) -> np.ndarray:
    """Unnormalized f(omega) = exp(-(ln(omega l) - c)^2/(2 w^2)) (omega l)^(-i eps Omega_c)."""
    u = np.log(np.asarray(omega, dtype=float) * spec.l)
    return np.exp(-((u - spec.center) ** 2) / (2 * spec.width**2) - 1j * spec.epsilon_sign * spec.Omega_center * u)


def unruh_wavepacket_coefficients(spec: WavepacketSpec, omega_grid, Omega_grid, points_per_panel: int = 16):
    """Unruh-mode content g_R(Omega), g_L(Omega) of a Minkowski wavepacket.

    Args:
        spec: wavepacket parameters.
        omega_grid: increasing positive panel edges in omega; each panel is
            integrated with Gauss-Legendre in ln omega.
        Omega_grid: nonnegative Rindler frequencies at which to evaluate g.
        points_per_panel: Gauss-Legendre order per panel.

    Returns:
        (g_R, g_L, sma_ratio) with sma_ratio the L/R power ratio over Omega_grid.
    """
    edges = np.asarray(omega_grid, dtype=float)
    Om = np.asarray(Omega_grid, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(edges <= 0) or np.any(np.diff(edges) <= 0):
        raise RindlerError("omega_grid must be increasing and positive")
    if np.any(Om < 0):
        raise RindlerError("Omega_grid must be nonnegative")
    ue = np.log(edges * spec.l)
    du = np.diff(ue)
    cycles = (np.max(np.abs(Om)) + abs(spec.Omega_center)) * du.max() / (2 * np.pi)
    if cycles > 0.5:
        raise RindlerError(f"omega grid too coarse: {cycles:.3g} oscillations per panel (max 0.5)")
    x, w = np.polynomial.legendre.leggauss(points_per_panel)
    u = (0.5 * (ue[:-1] + ue[1:])[:, None] + 0.5 * du[:, None] * x[None, :]).ravel()
    wu = (0.5 * du[:, None] * w[None, :]).ravel()
    omega = np.exp(u) / spec.l
    wom = wu * omega  # d omega = omega du
    f = wavepacket_shape(spec, omega)
    f = f / np.sqrt(np.sum(wom * np.abs(f) ** 2))
    base = wom * f / np.sqrt(2 * np.pi * omega)
    phase = np.exp(1j * spec.epsilon_sign * np.outer(Om, u))
    g_R = phase @ base
    g_L = phase.conj() @ base
    pR = np.trapezoid(np.abs(g_R) ** 2, Om) if Om.size > 1 else abs(g_R[0]) ** 2
    pL = np.trapezoid(np.abs(g_L) ** 2, Om) if Om.size > 1 else abs(g_L[0]) ** 2
    return g_R, g_L, float(pL / pR)


def wavepacket_g_magnitude(spec: WavepacketSpec, Omega, right: bool = True) -> np.ndarray:
    """Closed-form |g_R| (or |g_L|) of the normalized Gaussian packet."""
    c, w, l = spec.center, spec.width, spec.l
    norm = np.sqrt(l * np.exp(-c - w**2 / 4) / (np.sqrt(np.pi) * w))
    k = np.asarray(Omega, dtype=float) - spec.Omega_center if right else -np.asarray(Omega, dtype=float) - spec.Omega_center
    return norm * w / np.sqrt(l) * np.exp(c / 2 + w**2 / 8 - k**2 * w**2 / 2)


def default_wavepacket_grid(spec: WavepacketSpec, Omega_max: float, sigmas: float = 10.0):
    """Panel edges covering center ± sigmas*width fine enough for Omega_max."""
    lo = spec.center - sigmas * spec.width - 0.5 * spec.width**2
    hi = spec.center + sigmas * spec.width + 0.5 * spec.width**2
    span = hi - lo
    freq = Omega_max + abs(spec.Omega_center)
    n = max(8, int(np.ceil(span * freq / (2 * np.pi) / 0.25)))
    return np.exp(np.linspace(lo, hi, n + 1)) / spec.l
