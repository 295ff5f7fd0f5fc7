"""Lorentz kinematics, Wigner rotations and relativistic spin-1/2 wavepackets.

Four-vectors are numpy arrays (p0, p1, p2, p3) with metric diag(1, -1, -1, -1).
Spin states use the standard-boost basis |p, sigma> = U(L(p)) |0, sigma>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fock

ETA = np.diag([1.0, -1.0, -1.0, -1.0])
SIGMA = np.array([[[0, 1], [1, 0]], [[0, -1j], [1j, 0]], [[1, 0], [0, -1]]], dtype=complex)
LORENTZ_TOL = 1e-10


class WignerError(ValueError):
    """Raised for off-shell momenta, non-Lorentz matrices and similar input errors."""


def _unit(v, name="direction") -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if abs(n - 1.0) > 1e-10:
        raise WignerError(f"{name} must be a unit vector (norm {n:.12g})")
    return v


def on_shell(p3, m: float) -> np.ndarray:
    """Four-momentum (sqrt(m^2 + |p|^2), p) for a spatial momentum (or stack of them)."""
    p3 = np.asarray(p3, dtype=float)
    e = np.sqrt(m * m + np.sum(p3 * p3, axis=-1))
    return np.concatenate([e[..., None], p3], axis=-1)


def check_on_shell(p, m: float, tol: float = 1e-10) -> None:
    p = np.asarray(p, dtype=float)
    if p[0] <= 0:
        raise WignerError("energy must be positive")
    mass2 = p[0] ** 2 - p[1:] @ p[1:]
    if abs(mass2 - m * m) > tol * max(1.0, p[0] ** 2):
        raise WignerError(f"momentum off shell: p.p = {mass2:.12g}, m^2 = {m * m:.12g}")


def is_lorentz(L, tol: float = LORENTZ_TOL) -> bool:
    """Proper orthochronous Lorentz check."""
    L = np.asarray(L, dtype=float)
    ok = np.max(np.abs(L.T @ ETA @ L - ETA)) <= tol * max(1.0, np.max(np.abs(L)) ** 2)
    return bool(ok and abs(np.linalg.det(L) - 1.0) <= tol * max(1.0, np.max(np.abs(L)) ** 4) and L[0, 0] >= 1.0 - tol)


def lorentz_from_rapidity(direction, xi: float) -> np.ndarray:
    """Pure boost with rapidity xi along a unit direction."""
    n = _unit(direction)
    L = np.eye(4)
    L[0, 0] = np.cosh(xi)
    L[0, 1:] = L[1:, 0] = np.sinh(xi) * n
    L[1:, 1:] += (np.cosh(xi) - 1.0) * np.outer(n, n)
    return L


def rotation_matrix(axis, angle: float) -> np.ndarray:
    """3x3 rotation by ``angle`` about a unit axis (right-handed)."""
    n = _unit(axis, "axis")
    K = np.array([[0, -n[2], n[1]], [n[2], 0, -n[0]], [-n[1], n[0], 0]])
    return np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * K @ K


def lorentz_from_rotation(axis, angle: float) -> np.ndarray:
    L = np.eye(4)
    L[1:, 1:] = rotation_matrix(axis, angle)
    return L


def standard_boost(p, m: float) -> np.ndarray:
    """L(p): boost taking (m, 0, 0, 0) to p, symmetric with L00 = p0/m."""
    if m <= 0:
        raise WignerError("standard boost needs m > 0")
    p = np.asarray(p, dtype=float)
    check_on_shell(p, m)
    L = np.eye(4)
    L[0, 0] = p[0] / m
    L[0, 1:] = L[1:, 0] = p[1:] / m
    L[1:, 1:] += np.outer(p[1:], p[1:]) / (m * (p[0] + m))
    return L


def inverse_standard_boost(p, m: float) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    q = p.copy()
    q[1:] = -q[1:]
    return standard_boost(q, m)


def lorentz_inverse(L) -> np.ndarray:
    """Lambda^-1 = eta Lambda^T eta."""
    return ETA @ np.asarray(L).T @ ETA


def wigner_rotation(Lam, p, m: float) -> np.ndarray:
    """W(Lambda, p) = L^-1(Lambda p) Lambda L(p)."""
    Lam = np.asarray(Lam, dtype=float)
    p = np.asarray(p, dtype=float)
    check_on_shell(p, m)
    lp = Lam @ p
    lp[0] = np.sqrt(m * m + lp[1:] @ lp[1:])
    return inverse_standard_boost(lp, m) @ Lam @ standard_boost(p, m)


def _wigner_batch(Lam, p3, m: float):
    """Wigner rotations (3x3 spatial parts) for many momenta at once."""
    p = on_shell(p3, m)
    q = p @ Lam.T
    q[:, 0] = np.sqrt(m * m + np.sum(q[:, 1:] ** 2, axis=1))

    def boosts(v, sign):
        n = v.shape[0]
        B = np.tile(np.eye(4), (n, 1, 1))
        B[:, 0, 0] = v[:, 0] / m
        B[:, 0, 1:] = sign * v[:, 1:] / m
        B[:, 1:, 0] = sign * v[:, 1:] / m
        B[:, 1:, 1:] += np.einsum("ni,nj->nij", v[:, 1:], v[:, 1:]) / (m * (v[:, 0] + m))[:, None, None]
        return B

    W = boosts(q, -1.0) @ Lam[None] @ boosts(p, 1.0)
    return W, q


def _quaternion(R):
    """Unit quaternion (w, x, y, z) with w >= 0 for a rotation matrix (Shepperd)."""
    t = np.trace(R)
    cands = [t, R[0, 0], R[1, 1], R[2, 2]]
    k = int(np.argmax(cands))
    if k == 0:
        w = 0.5 * np.sqrt(1 + t)
        q = np.array([w, (R[2, 1] - R[1, 2]) / (4 * w), (R[0, 2] - R[2, 0]) / (4 * w), (R[1, 0] - R[0, 1]) / (4 * w)])
    elif k == 1:
        x = 0.5 * np.sqrt(1 + R[0, 0] - R[1, 1] - R[2, 2])
        q = np.array([(R[2, 1] - R[1, 2]) / (4 * x), x, (R[0, 1] + R[1, 0]) / (4 * x), (R[0, 2] + R[2, 0]) / (4 * x)])
    elif k == 2:
        y = 0.5 * np.sqrt(1 - R[0, 0] + R[1, 1] - R[2, 2])
        q = np.array([(R[0, 2] - R[2, 0]) / (4 * y), (R[0, 1] + R[1, 0]) / (4 * y), y, (R[1, 2] + R[2, 1]) / (4 * y)])
    else:
        z = 0.5 * np.sqrt(1 - R[0, 0] - R[1, 1] + R[2, 2])
        q = np.array([(R[1, 0] - R[0, 1]) / (4 * z), (R[0, 2] + R[2, 0]) / (4 * z), (R[1, 2] + R[2, 1]) / (4 * z), z])
    if q[0] < 0:
        q = -q
    return q / np.linalg.norm(q)


def _su2(q) -> np.ndarray:
    w, x, y, z = q
    return np.array([[w - 1j * z, -1j * x - y], [-1j * x + y, w + 1j * z]])


def su2_from_rotation(W, reference=None, tol: float = 1e-9) -> np.ndarray:
    """Spin-1/2 image D = cos(theta/2) I - i sin(theta/2) n.sigma of a rotation.

    Args:
        W: 3x3 rotation or 4x4 Lorentz matrix that is a pure spatial rotation.
        reference: optional nearby SU(2) matrix; the sign is chosen to stay
            continuous with it. Without it theta lies in [0, pi], so W = I maps to +I.
    """
    W = np.asarray(W, dtype=float)
    if W.shape == (4, 4):
        if np.max(np.abs(W[0, 1:])) > tol or np.max(np.abs(W[1:, 0])) > tol or abs(W[0, 0] - 1) > tol:
            raise WignerError("Lorentz matrix is not a pure rotation")
        W = W[1:, 1:]
    if W.shape != (3, 3):
        raise WignerError("expected a 3x3 rotation")
    if np.max(np.abs(W.T @ W - np.eye(3))) > tol or abs(np.linalg.det(W) - 1) > tol:
        raise WignerError("matrix is not a proper rotation")
    D = _su2(_quaternion(W))
    if reference is not None and np.real(np.trace(D @ np.asarray(reference).conj().T)) < 0:
        D = -D
    return D


def _su2_batch(R):
    """SU(2) images of a stack of 3x3 rotations (theta in [0, pi]), vectorized _quaternion."""
    R = np.asarray(R, dtype=float)
    t = np.trace(R, axis1=1, axis2=2)
    d = np.diagonal(R, axis1=1, axis2=2)
    k = np.argmax(np.column_stack([t, d]), axis=1)
    # candidate (un-normalized) quaternions for each Shepperd branch
    sxy, syz, szx = R[:, 0, 1] + R[:, 1, 0], R[:, 1, 2] + R[:, 2, 1], R[:, 0, 2] + R[:, 2, 0]
    axz, axx, axy = R[:, 1, 0] - R[:, 0, 1], R[:, 2, 1] - R[:, 1, 2], R[:, 0, 2] - R[:, 2, 0]
    c0 = np.stack([1 + t, axx, axy, axz], axis=1)
    c1 = np.stack([axx, 1 + 2 * d[:, 0] - t, sxy, szx], axis=1)
    c2 = np.stack([axy, sxy, 1 + 2 * d[:, 1] - t, syz], axis=1)
    c3 = np.stack([axz, szx, syz, 1 + 2 * d[:, 2] - t], axis=1)
    q = np.stack([c0, c1, c2, c3])[k, np.arange(len(R))]
    q = q / np.linalg.norm(q, axis=1)[:, None]
    q = np.where(q[:, :1] < 0, -q, q)
    w, x, y, z = q.T
    return np.stack([np.stack([w - 1j * z, -1j * x - y], axis=1), np.stack([-1j * x + y, w + 1j * z], axis=1)], axis=1)


def rotation_from_su2(D) -> np.ndarray:
    """Inverse map: R_ij = tr(sigma_i D sigma_j D^dagger)/2."""
    D = np.asarray(D)
    return np.real(np.einsum("iab,bc,jcd,da->ij", SIGMA, D, SIGMA, D.conj().T)) / 2


def helicity_frame(p3) -> np.ndarray:
    """R(p_hat) = R_z(phi) R_y(theta), taking z-hat to the direction of p."""
    p3 = np.asarray(p3, dtype=float)
    r = np.linalg.norm(p3)
    if r == 0:
        return np.eye(4)
    theta = np.arccos(np.clip(p3[2] / r, -1, 1))
    phi = np.arctan2(p3[1], p3[0])
    return lorentz_from_rotation([0, 0, 1], phi) @ lorentz_from_rotation([0, 1, 0], theta)


def helicity_basis_change(p, m: float) -> np.ndarray:
    """SU(2) matrix relating standard-boost and helicity spin labels at p.

    H(p) = R(p_hat) B_3(|p|) and L(p) = R B_3 R^-1, so H = L(p) R(p_hat);
    helicity states are standard-boost states rotated by D(R(p_hat)).
    """
    return su2_from_rotation(helicity_frame(np.asarray(p)[1:]))


def massless_wigner_phase(Lam, p) -> float:
    """Little-group rotation angle for a null momentum.

    H(p) = R(p_hat) B_3(ln|p|) maps k = (1, 0, 0, 1) to p; the angle is read
    from the x-y block of H^-1(Lambda p) Lambda H(p).
    """
    Lam = np.asarray(Lam, dtype=float)
    p = np.asarray(p, dtype=float)
    if p[0] <= 0 or abs(p[0] ** 2 - p[1:] @ p[1:]) > 1e-10 * p[0] ** 2:
        raise WignerError("massless phase needs a future-directed null momentum")

    def H(q):
        e = np.linalg.norm(q[1:])
        return helicity_frame(q[1:]) @ lorentz_from_rapidity([0, 0, 1], np.log(e))

    lp = Lam @ p
    W = lorentz_inverse(H(lp)) @ Lam @ H(p)
    return float(np.arctan2(W[2, 1], W[1, 1]))


# --- wavepackets -----------------------------------------------------------


@dataclass(frozen=True)
class GaussianPacket:
    """Closed-form amplitude chi_sigma sqrt((2pi)^3 2p0) (2pi w^2)^(-3/4) exp(-|p - pbar|^2/(4 w^2)).

    Normalized with respect to dmu(p) = d^3p / ((2pi)^3 2 p0).
    """

    m: float
    p_mean: tuple = (0.0, 0.0, 0.0)
    width: float = 1.0
    spin: tuple = (1.0, 0.0)

    def profile(self, p3) -> np.ndarray:
        p3 = np.atleast_2d(np.asarray(p3, dtype=float))
        e = np.sqrt(self.m**2 + np.sum(p3**2, axis=1))
        d2 = np.sum((p3 - np.asarray(self.p_mean)) ** 2, axis=1)
        return np.sqrt((2 * np.pi) ** 3 * 2 * e) * (2 * np.pi * self.width**2) ** -0.75 * np.exp(-d2 / (4 * self.width**2))

    def __call__(self, p3) -> np.ndarray:
        chi = np.asarray(self.spin, dtype=complex)
        chi = chi / np.linalg.norm(chi)
        return self.profile(p3)[:, None] * chi[None, :]


@dataclass(frozen=True)
class BoostedFamily:
    """psi'(p) = D(W(Lambda, Lambda^-1 p)) psi(Lambda^-1 p), evaluated in closed form."""

    base: object
    Lam: np.ndarray
    m: float

    def __call__(self, p3) -> np.ndarray:
        p3 = np.atleast_2d(np.asarray(p3, dtype=float))
        inv = lorentz_inverse(self.Lam)
        back = on_shell(p3, self.m) @ inv.T
        W, _ = _wigner_batch(self.Lam, back[:, 1:], self.m)
        D = _su2_batch(W[:, 1:, 1:])
        return np.einsum("nab,nb->na", D, self.base(back[:, 1:]))


@dataclass
class SpinHalfAmplitude:
    """Momentum-resolved spin-1/2 amplitude on a quadrature grid.

    ``weights`` already include the invariant measure, so sum(w |psi|^2) is the norm.
    """

    m: float
    momenta: np.ndarray
    weights: np.ndarray
    psi: np.ndarray
    family: object = None

    @property
    def norm(self) -> float:
        return float(np.sum(self.weights[:, None] * np.abs(self.psi) ** 2))

    def full_state(self) -> fock.StateVector:
        """Pure state on (grid point, spin) with sqrt-weight amplitudes."""
        amps = np.sqrt(self.weights)[:, None] * self.psi
        return fock.StateVector((len(self.weights), 2), amps.reshape(-1))


def momentum_grid(center, half_width: float, points: int, m: float):
    """Tensor Gauss-Legendre grid and invariant-measure weights on a cube."""
    x, w = np.polynomial.legendre.leggauss(points)
    c = np.asarray(center, dtype=float)
    axes = [c[i] + half_width * x for i in range(3)]
    P = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
    W = (half_width**3) * np.einsum("i,j,k->ijk", w, w, w).reshape(-1)
    e = np.sqrt(m * m + np.sum(P**2, axis=1))
    return P, W / ((2 * np.pi) ** 3 * 2 * e)


def gaussian_packet(m: float, p_mean=(0.0, 0.0, 0.0), width: float = 1.0, spin=(1.0, 0.0),
                    points: int = 24, extent: float = 5.0) -> SpinHalfAmplitude:
    """Sampled Gaussian packet on a cube of ``extent`` amplitude standard deviations.

    The amplitude Gaussian has standard deviation sqrt(2) * width. Samples are
    rescaled so the grid norm is exactly 1.
    """
    fam = GaussianPacket(m, tuple(p_mean), width, tuple(spin))
    P, W = momentum_grid(p_mean, extent * np.sqrt(2) * width, points, m)
    psi = fam(P)
    # discrete normalization; the closed-form family stays analytically normalized
    psi = psi / np.sqrt(np.sum(W[:, None] * np.abs(psi) ** 2))
    return SpinHalfAmplitude(m, P, W, psi, fam)


def sharp_packet(m: float, p3=(0.0, 0.0, 0.0), spin=(1.0, 0.0)) -> SpinHalfAmplitude:
    """Sharp-momentum limit: one node carrying the whole normalized spinor."""
    chi = np.asarray(spin, dtype=complex)
    chi = chi / np.linalg.norm(chi)
    return SpinHalfAmplitude(m, np.atleast_2d(np.asarray(p3, dtype=float)), np.ones(1), chi[None, :], None)


def boost_single_particle(psi: SpinHalfAmplitude, Lam) -> SpinHalfAmplitude:
    """Apply U(Lambda): nodes move to Lambda p, spinors rotate by D(W(Lambda, p)).

    The invariant measure makes the node transport exact, so weights are kept.
    The closed-form family (if any) is wrapped for off-grid evaluation.
    """
    Lam = np.asarray(Lam, dtype=float)
    if not is_lorentz(Lam):
        raise WignerError("Lambda is not a proper orthochronous Lorentz matrix")
    W, q = _wigner_batch(Lam, psi.momenta, psi.m)
    D = _su2_batch(W[:, 1:, 1:])
    new_psi = np.einsum("nab,nb->na", D, psi.psi)
    fam = BoostedFamily(psi.family, Lam, psi.m) if psi.family is not None else None
    return SpinHalfAmplitude(psi.m, q[:, 1:], psi.weights.copy(), new_psi, fam)


def reduced_spin_density(psi: SpinHalfAmplitude, tol: float = 1e-6) -> fock.DensityMatrix:
    """rho_{s s'} = sum_p w(p) psi_s(p) psi_s'(p)^*."""
    if abs(psi.norm - 1.0) > tol:
        raise WignerError(f"amplitude not normalized (norm {psi.norm:.9g})")
    rho = np.einsum("n,na,nb->ab", psi.weights, psi.psi, psi.psi.conj())
    return fock.DensityMatrix((2,), rho)


def reduced_spin_entropy(psi: SpinHalfAmplitude) -> float:
    return fock.von_neumann_entropy(reduced_spin_density(psi))


@dataclass
class TwoParticleAmplitude:
    """g_{s t}(p, q) = C_{s t} f_A(p) f_B(q) with scalar momentum profiles.

    ``a`` and ``b`` are spin-up SpinHalfAmplitudes whose first component holds
    the normalized profile; ``spin`` is the 2x2 spin coefficient matrix.
    """

    spin: np.ndarray
    a: SpinHalfAmplitude
    b: SpinHalfAmplitude

    def __post_init__(self):
        self.spin = np.asarray(self.spin, dtype=complex)
        self.spin = self.spin / np.linalg.norm(self.spin)

    @property
    def norm(self) -> float:
        return float(np.sum(np.abs(self.spin) ** 2) * self.a.norm * self.b.norm)


def bell_pair(m: float, width: float | None = 1.0, p_mean=(0.0, 0.0, 0.0), spin=None,
              points: int = 24, extent: float = 5.0) -> TwoParticleAmplitude:
    """Spin Bell state (default (|up up> + |dn dn>)/sqrt 2) with Gaussian or sharp momenta."""
    spin = np.eye(2) / np.sqrt(2) if spin is None else spin
    if width is None:
        a = sharp_packet(m, p_mean)
        b = sharp_packet(m, -np.asarray(p_mean, dtype=float))
    else:
        a = gaussian_packet(m, p_mean, width, points=points, extent=extent)
        b = gaussian_packet(m, -np.asarray(p_mean, dtype=float), width, points=points, extent=extent)
    return TwoParticleAmplitude(spin, a, b)


def _spin_kernel(packet: SpinHalfAmplitude, Lam, m: float) -> np.ndarray:
    """K[s, a, s', a'] = sum_p w |f|^2 D[s, a] D*[s', a'] for one particle."""
    W, _ = _wigner_batch(Lam, packet.momenta, m)
    D = _su2_batch(W[:, 1:, 1:])
    prob = packet.weights * np.abs(packet.psi[:, 0]) ** 2
    return np.einsum("n,nsa,ntb->satb", prob, D, D.conj())


def two_particle_spin_density(g: TwoParticleAmplitude, Lam, m: float) -> fock.DensityMatrix:
    """Two-qubit spin state after U(Lambda) ⊗ U(Lambda), momenta traced out."""
    Lam = np.asarray(Lam, dtype=float)
    if abs(g.norm - 1.0) > 1e-6:
        raise WignerError(f"two-particle amplitude not normalized (norm {g.norm:.9g})")
    KA = _spin_kernel(g.a, Lam, m)
    KB = _spin_kernel(g.b, Lam, m)
    C = g.spin
    rho = np.einsum("satb,uqvr,aq,br->sutv", KA, KB, C, C.conj()).reshape(4, 4)
    return fock.DensityMatrix((2, 2), rho)


def two_particle_spin_density_bruteforce(g: TwoParticleAmplitude, Lam, m: float) -> fock.DensityMatrix:
    """Same quantity from the explicit product grid (for small grids)."""
    Lam = np.asarray(Lam, dtype=float)
    WA, _ = _wigner_batch(Lam, g.a.momenta, m)
    WB, _ = _wigner_batch(Lam, g.b.momenta, m)
    DA = _su2_batch(WA[:, 1:, 1:])
    DB = _su2_batch(WB[:, 1:, 1:])
    fa = np.sqrt(g.a.weights) * g.a.psi[:, 0]
    fb = np.sqrt(g.b.weights) * g.b.psi[:, 0]
    G = np.einsum("psa,qtb,ab,p,q->pqst", DA, DB, g.spin, fa, fb).reshape(-1, 4)
    return fock.DensityMatrix((2, 2), G.T @ G.conj())


def two_particle_concurrence(g: TwoParticleAmplitude, Lam, m: float) -> float:
    return fock.concurrence(two_particle_spin_density(g, Lam, m))


# --- spin observables ------------------------------------------------------

OBSERVABLES = ("center_of_mass", "newton_wigner", "czachor", "friis_local")


def pauli_lubanski(p3, m: float):
    """(W0, W_vec) as 2x2 matrices in the standard-boost spin basis at momentum p."""
    p3 = np.asarray(p3, dtype=float)
    p0 = np.sqrt(m * m + p3 @ p3)
    ps = np.einsum("i,iab->ab", p3, SIGMA)
    W0 = ps / 2
    Wv = m * SIGMA / 2 + np.einsum("i,ab->iab", p3, ps) / (2 * (p0 + m))
    return W0, Wv


def local_direction(p3, m: float, n4) -> np.ndarray:
    """Spatial part of L^-1(p) n, normalized; n is the detector orientation 4-vector."""
    p = on_shell(np.asarray(p3, dtype=float), m)
    v = (inverse_standard_boost(p, m) @ np.asarray(n4, dtype=float))[1:]
    return v / np.linalg.norm(v)


def spin_observable_matrix(p3, m: float, n_hat, which: str, n4=None) -> np.ndarray:
    """2x2 matrix of the chosen spin observable along n_hat at momentum p."""
    n_hat = _unit(n_hat)
    p3 = np.asarray(p3, dtype=float)
    p0 = np.sqrt(m * m + p3 @ p3)
    W0, Wv = pauli_lubanski(p3, m)
    nW = np.einsum("i,iab->ab", n_hat, Wv)
    if which == "center_of_mass":
        return nW / p0
    if which == "newton_wigner":
        return (nW - W0 * (n_hat @ p3) / (p0 + m)) / m
    if which == "czachor":
        return nW / np.sqrt(m * m + (n_hat @ p3) ** 2)
    if which == "friis_local":
        n4 = np.concatenate([[0.0], n_hat]) if n4 is None else np.asarray(n4, dtype=float)
        return np.einsum("i,iab->ab", local_direction(p3, m, n4), SIGMA) / 2
    raise WignerError(f"unknown observable {which!r}; choose from {OBSERVABLES}")


def _observable_batch(P, m: float, n_hat, which: str, n4=None) -> np.ndarray:
    """spin_observable_matrix evaluated on every row of P at once, shape (N, 2, 2)."""
    n_hat = _unit(n_hat)
    P = np.asarray(P, dtype=float)
    p0 = np.sqrt(m * m + np.sum(P**2, axis=1))
    ps = np.einsum("ni,iab->nab", P, SIGMA)
    nS = np.einsum("i,iab->ab", n_hat, SIGMA)
    nP = P @ n_hat
    # n.W = m (n.sigma)/2 + (n.p)(p.sigma)/(2(p0 + m))
    nW = m * nS[None] / 2 + (nP / (2 * (p0 + m)))[:, None, None] * ps
    if which == "center_of_mass":
        return nW / p0[:, None, None]
    if which == "newton_wigner":
        return (nW - (ps / 2) * (nP / (p0 + m))[:, None, None]) / m
    if which == "czachor":
        return nW / np.sqrt(m * m + nP**2)[:, None, None]
    if which == "friis_local":
        n4 = np.concatenate([[0.0], n_hat]) if n4 is None else np.asarray(n4, dtype=float)
        # spatial part of L^-1(p) n with L(p) the standard boost
        pn = P @ n4[1:]
        v = n4[1:][None] - P * (n4[0] / m) + P * (pn / (m * (p0 + m)))[:, None]
        v = v / np.linalg.norm(v, axis=1)[:, None]
        return np.einsum("ni,iab->nab", v, SIGMA) / 2
    raise WignerError(f"unknown observable {which!r}; choose from {OBSERVABLES}")


def spin_observable_expectation(psi: SpinHalfAmplitude, n_hat, which: str, n4=None) -> float:
    """Momentum-resolved expectation sum_p w psi^dag O(p) psi."""
    O = _observable_batch(psi.momenta, psi.m, n_hat, which, n4)
    vals = np.einsum("na,nab,nb->n", psi.psi.conj(), O, psi.psi).real
    return float(np.sum(psi.weights * vals))
