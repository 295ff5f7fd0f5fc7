"""Rigid cavities in uniform acceleration: mode structure and Bogoliubov transforms.

A cavity of proper length L whose centre has proper acceleration a sits
between Rindler positions x_l = 1/a - L/2 and x_r = 1/a + L/2, so h = aL.
Inertial modes are sin(omega_n (x - x_l)) with omega_n = n pi / L and
co-moving Rindler modes are sin(Omega_m ln(x / x_l)) with
Omega_m = m pi / ln(x_r / x_l). Rindler phases advance at a Omega_m per unit
proper time at the centre.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import gaussian as G


class CavityError(ValueError):
    """Raised for invalid geometries, segments or under-resolved quadrature."""


@dataclass(frozen=True)
class CavityGeometry:
    x_l: float
    x_r: float

    def __post_init__(self):
        if not 0 < self.x_l < self.x_r:
            raise CavityError("need 0 < x_l < x_r")

    @classmethod
    def from_length(cls, L: float, h: float) -> "CavityGeometry":
        """Geometry with proper length L and dimensionless acceleration h = aL > 0."""
        if L <= 0 or not 0 < h < 2:
            raise CavityError("need L > 0 and 0 < h < 2")
        a = h / L
        return cls(1.0 / a - L / 2.0, 1.0 / a + L / 2.0)

    @property
    def L(self) -> float:
        return self.x_r - self.x_l

    @property
    def a(self) -> float:
        return 2.0 / (self.x_l + self.x_r)

    @property
    def h(self) -> float:
        return self.a * self.L

    @property
    def log_ratio(self) -> float:
        return float(np.log1p(self.L / self.x_l))


@dataclass(frozen=True)
class ModePair:
    k: int
    k_prime: int

    def __post_init__(self):
        if self.k < 1 or self.k_prime < 1 or self.k == self.k_prime:
            raise CavityError("mode pair needs distinct positive labels")

    @property
    def indices(self) -> tuple[int, int]:
        return self.k - 1, self.k_prime - 1


@dataclass(frozen=True)
class TrajectorySegment:
    """Inertial (geometry None) or uniformly accelerated segment.

    ``duration`` is proper time at the cavity centre.
    """

    duration: float
    geometry: CavityGeometry | None = None
    L: float = 1.0

    def __post_init__(self):
        if self.duration < 0:
            raise CavityError("segment durations must be nonnegative")

    @property
    def accelerated(self) -> bool:
        return self.geometry is not None

    @property
    def length(self) -> float:
        return self.geometry.L if self.geometry is not None else self.L


def inertial_segment(tau: float, L: float = 1.0) -> TrajectorySegment:
    return TrajectorySegment(tau, None, L)


def accelerated_segment(geom: CavityGeometry, eta: float) -> TrajectorySegment:
    return TrajectorySegment(eta, geom, geom.L)


def mode_frequencies(geom: CavityGeometry, n: int) -> tuple[float, float]:
    """(omega_n, Omega_n) = (n pi / L, n pi / ln(x_r/x_l))."""
    if n < 1:
        raise CavityError("mode index must be >= 1")
    return n * np.pi / geom.L, n * np.pi / geom.log_ratio


def comoving_frequency(geom: CavityGeometry, n: int) -> float:
    """Rindler frequency a Omega_n per unit centre proper time."""
    return geom.a * mode_frequencies(geom, n)[1]


def _default_points(geom: CavityGeometry, n_modes: int) -> int:
    return max(64, 24 * n_modes)


def _fastest_cycles(geom: CavityGeometry, n_modes: int) -> float:
    # sin*sin contains the sum frequency; Omega ln(x/x_l) has slope up to Omega/x_l
    w = n_modes * np.pi / geom.L
    W = n_modes * np.pi / geom.log_ratio / geom.x_l
    return (w + W) * geom.L / (2 * np.pi)


@lru_cache(maxsize=64)
def _building_block_cached(x_l: float, x_r: float, n_modes: int, points: int):
    geom = CavityGeometry(x_l, x_r)
    L = geom.L
    lr = geom.log_ratio
    t, w = np.polynomial.legendre.leggauss(points)
    y = 0.5 * L * (t + 1.0)  # y = x - x_l
    w = 0.5 * L * w
    x = x_l + y
    n = np.arange(1, n_modes + 1)
    sin_in = np.sin(np.outer(n * np.pi / L, y))
    sin_r = np.sin(np.outer(n * np.pi / lr, np.log1p(y / x_l)))
    F = (sin_r * w) @ sin_in.T
    Gm = (sin_r * (w / x)) @ sin_in.T
    m_idx, n_idx = np.meshgrid(n, n, indexing="ij")
    A = np.sqrt(n_idx / m_idx) * F / L
    B = np.sqrt(m_idx / n_idx) * Gm / lr
    return A + B, A - B


def building_block_bogoliubov(geom: CavityGeometry, n_modes: int, quadrature_points: int | None = None):
    """Bogoliubov pair from inertial modes (column n) to co-moving modes (row m).

    Args:
        geom: accelerated cavity geometry.
        n_modes: number of modes kept, at least 2.
        quadrature_points: Gauss-Legendre nodes over [x_l, x_r]; must give at
            least 8 nodes per period of the fastest integrand.

    Returns:
        (alpha, beta) real n_modes x n_modes arrays.
    """
    if n_modes < 2:
        raise CavityError("n_modes must be at least 2")
    pts = _default_points(geom, n_modes) if quadrature_points is None else int(quadrature_points)
    need = 8 * _fastest_cycles(geom, n_modes)
    if pts < need:
        raise CavityError(f"{pts} quadrature points under-resolve the integrands (need >= {int(np.ceil(need))})")
    alpha, beta = _building_block_cached(geom.x_l, geom.x_r, n_modes, pts)
    return alpha.copy(), beta.copy()


def parity_flip(n_modes: int) -> np.ndarray:
    """diag((-1)^(n+1)) on modes, as a symplectic matrix."""
    return np.kron(np.diag((-1.0) ** np.arange(n_modes)), np.eye(2))


def building_block_symplectic(geom: CavityGeometry, n_modes: int, quadrature_points: int | None = None,
                              repair_threshold: float = 1e-10):
    """Symplectic image of the building-block transform, repaired if needed.

    Returns:
        (S, correction_norm) where correction_norm is 0 when no repair was applied.
    """
    alpha, beta = building_block_bogoliubov(geom, n_modes, quadrature_points)
    S = G.symplectic_from_bogoliubov(alpha, beta, check=False)
    return G.symplectic_repair(S, repair_threshold)


def free_evolution(segment: TrajectorySegment, n_modes: int) -> np.ndarray:
    """Per-mode phase rotation for the segment's dwell time."""
    n = np.arange(1, n_modes + 1)
    if segment.accelerated:
        freq = np.array([comoving_frequency(segment.geometry, k) for k in n])
    else:
        freq = n * np.pi / segment.length
    return G.phase_rotation(freq * segment.duration)


@dataclass
class ComposedTransform:
    S: np.ndarray
    correction_norm: float
    violation: float


def compose_trajectory(segments, n_modes: int, quadrature_points: int | None = None,
                       repair_threshold: float = 1e-10) -> ComposedTransform:
    """Total symplectic map of a piecewise inertial / accelerated trajectory.

    The cavity starts and ends inertial: entering an accelerated segment
    applies the building block, leaving it applies the inverse block, and
    dwell times contribute phase rotations. The first segment acts first.
    """
    segments = list(segments)
    if not segments:
        raise CavityError("segment list is empty")
    S = np.eye(2 * n_modes)
    total_corr = 0.0
    current = None  # geometry of the frame we are in, None when inertial
    blocks = {}

    def block(geom):
        nonlocal total_corr
        if geom not in blocks:
            Sb, corr = building_block_symplectic(geom, n_modes, quadrature_points, repair_threshold)
            total_corr = max(total_corr, corr)
            blocks[geom] = (Sb, G.symplectic_inverse(Sb))
        return blocks[geom]

    for seg in segments:
        if seg.geometry != current:
            if current is not None:
                S = block(current)[1] @ S
            if seg.geometry is not None:
                S = block(seg.geometry)[0] @ S
            current = seg.geometry
        S = free_evolution(seg, n_modes) @ S
    if current is not None:
        S = block(current)[1] @ S
    S, corr = G.symplectic_repair(S, repair_threshold)
    total_corr = max(total_corr, corr)
    return ComposedTransform(S, total_corr, G.symplectic_violation(S))


def pair_negativity(S: np.ndarray, pair: ModePair) -> float:
    """Gaussian negativity of the pair after S acts on the vacuum."""
    sigma = G.apply_symplectic(G.vacuum(S.shape[0] // 2), S)
    return G.two_mode_negativity(G.reduce_modes(sigma, list(pair.indices)))


def block_pair_negativity(L: float, h: float, pair: ModePair, n_modes: int = 6,
                          quadrature_points: int | None = None) -> float:
    """Negativity of the pair in the co-moving basis right after the block."""
    if h == 0:
        return 0.0
    n_modes = max(n_modes, pair.k, pair.k_prime)
    S, _ = building_block_symplectic(CavityGeometry.from_length(L, abs(h)), n_modes, quadrature_points)
    return pair_negativity(S, pair)


def first_order_mode_negativity(L: float, pair: ModePair, h_probe: float = 1e-3, h: float | None = None,
                                n_modes: int | None = None) -> float:
    """Leading coefficient |beta^(1)_{k k'}| of |beta_{k k'}(h)| = |beta^(1)| h + O(h^2).

    Richardson extrapolation of |beta(h)|/h from h_probe/2 and h_probe.

    Args:
        L: proper length.
        pair: the two modes.
        h_probe: probe acceleration, at most 1e-2.
        h: if given, return the first-order negativity |beta^(1)| h instead.

    Raises:
        CavityError: if the quadratic term is not small at h_probe.
    """
    if not 0 < h_probe <= 1e-2:
        raise CavityError("h_probe must lie in (0, 1e-2]")
    if h == 0:
        return 0.0
    nm = n_modes or max(pair.k, pair.k_prime, 2)
    i, j = pair.indices

    def slope(hh):
        _, beta = building_block_bogoliubov(CavityGeometry.from_length(L, hh), nm)
        return abs(beta[i, j]) / hh

    s1, s2 = slope(h_probe), slope(h_probe / 2)
    coeff = 2.0 * s2 - s1
    if abs(s1 - s2) > 0.1 * abs(coeff):
        raise CavityError("quadratic term dominates at h_probe; lower h_probe")
    return coeff if h is None else coeff * abs(h)


def acceleration_period(geom: CavityGeometry, n: int = 1) -> float:
    """Dwell-time period 2 pi / (a Omega_n) of the co-moving phases."""
    return 2 * np.pi / comoving_frequency(geom, n)


def resonant_period(geom: CavityGeometry, pair: ModePair, eta: float | None = None, detune: float = 0.0):
    """One period [accelerated(eta), inertial(tau)] tuned to the pair's sum frequency.

    tau is chosen so the total phase (omega_k + omega_k') tau +
    a (Omega_k + Omega_k') eta is a multiple of 2 pi (plus ``detune``).
    By default eta makes the accelerated phase equal pi, which maximizes the
    per-period kick.
    """
    wa = comoving_frequency(geom, pair.k) + comoving_frequency(geom, pair.k_prime)
    wi = (pair.k + pair.k_prime) * np.pi / geom.L
    if eta is None:
        eta = np.pi / wa
    phase = (wa * eta + detune) % (2 * np.pi)
    tau = ((2 * np.pi - phase) % (2 * np.pi)) / wi
    return [accelerated_segment(geom, eta), inertial_segment(tau, geom.L)]


@dataclass
class ResonanceResult:
    N: np.ndarray
    negativity: np.ndarray
    r_squared: float
    slope: float
    correction_norm: float


def resonance_scan(period, N_max: int, pair: ModePair, n_modes: int = 6,
                   quadrature_points: int | None = None) -> ResonanceResult:
    """Pair negativity after N = 0..N_max repetitions of a period.

    R^2 and slope come from a least-squares line through N = 1..N_max.
    """
    if N_max < 3:
        raise CavityError("N_max must be at least 3")
    n_modes = max(n_modes, pair.k, pair.k_prime)
    comp = compose_trajectory(period, n_modes, quadrature_points)
    S = np.eye(2 * n_modes)
    neg = [0.0]
    for _ in range(N_max):
        S = comp.S @ S
        neg.append(pair_negativity(S, pair))
    neg = np.array(neg)
    N = np.arange(N_max + 1)
    coef = np.polyfit(N[1:], neg[1:], 1)
    fit = np.polyval(coef, N[1:])
    ss_res = np.sum((neg[1:] - fit) ** 2)
    ss_tot = np.sum((neg[1:] - neg[1:].mean()) ** 2)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    return ResonanceResult(N, neg, float(r2), float(coef[0]), comp.correction_norm)
