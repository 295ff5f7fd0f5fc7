"""Truncated multimode Fock-space states and discrete-variable entanglement measures.

States live on a register of modes with heterogeneous cutoffs. Basis states are
indexed row-major over occupation numbers, so for dims (d0, d1) the occupation
(n0, n1) sits at index n0 * d1 + n1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-10
PSD_TOL = 1e-8
NORM_TOL = 1e-8


class FockError(ValueError):
    """Raised for invalid registers, mode selections or unphysical inputs."""


def _check_dims(dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if len(dims) == 0 or any(d < 1 for d in dims):
        raise FockError(f"invalid register dims {dims}")
    total = 1
    for d in dims:
        total *= d
        if total > np.iinfo(np.int64).max // 2:
            raise FockError("register dimension overflows the index range")
    return dims


@dataclass(frozen=True)
class StateVector:
    """Pure state on a truncated register.

    The squared norm may be below 1; the deficit records truncation loss.
    """

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != int(np.prod(dims)):
            raise FockError(f"{amps.size} amplitudes do not fit register {dims}")
        if not np.all(np.isfinite(amps)):
            raise FockError("non-finite amplitudes")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def norm_squared(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    @property
    def norm_deficit(self) -> float:
        return 1.0 - self.norm_squared

    def amplitude(self, occupation) -> complex:
        return complex(self.amplitudes[np.ravel_multi_index(tuple(occupation), self.dims)])

    def normalized(self) -> "StateVector":
        n = np.sqrt(self.norm_squared)
        if n == 0.0:
            raise FockError("zero-norm state cannot be normalized")
        return StateVector(self.dims, self.amplitudes / n)

    def density_matrix(self) -> "DensityMatrix":
        return DensityMatrix(self.dims, np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True)
class DensityMatrix:
    """Density operator on a truncated register (row-major basis)."""

    dims: tuple[int, ...]
    matrix: np.ndarray

    def __post_init__(self):
        dims = _check_dims(self.dims)
        mat = np.asarray(self.matrix, dtype=complex)
        n = int(np.prod(dims))
        if mat.shape != (n, n):
            raise FockError(f"matrix shape {mat.shape} does not fit register {dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", mat)

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def normalized(self) -> "DensityMatrix":
        return DensityMatrix(self.dims, self.matrix / self.trace)


def basis_state(dims, occupation) -> StateVector:
    """Fock basis state |n0, n1, ...> on a register."""
    dims = _check_dims(dims)
    amps = np.zeros(int(np.prod(dims)), dtype=complex)
    amps[np.ravel_multi_index(tuple(occupation), dims)] = 1.0
    return StateVector(dims, amps)


def tensor_product(a: StateVector, b: StateVector) -> StateVector:
    """Tensor product a ⊗ b; modes of b are appended after those of a."""
    dims = _check_dims(a.dims + b.dims)
    return StateVector(dims, np.kron(a.amplitudes, b.amplitudes))


def tensor_product_dm(a: DensityMatrix, b: DensityMatrix) -> DensityMatrix:
    dims = _check_dims(a.dims + b.dims)
    return DensityMatrix(dims, np.kron(a.matrix, b.matrix))


def _as_dm(rho) -> DensityMatrix:
    if isinstance(rho, StateVector):
        return rho.density_matrix()
    return rho


def _mode_set(modes, n_modes: int) -> list[int]:
    if isinstance(modes, (int, np.integer)):
        modes = [modes]
    modes = sorted(set(int(k) for k in modes))
    if not modes:
        raise FockError("mode selection is empty")
    if modes[0] < 0 or modes[-1] >= n_modes:
        raise FockError(f"mode selection {modes} out of range for {n_modes} modes")
    return modes


def partial_trace(rho, keep) -> DensityMatrix:
    """Trace out every mode not listed in ``keep``.

    Args:
        rho: DensityMatrix (or StateVector, converted to its projector).
        keep: mode indices to keep; order in the result follows the register.

    Returns:
        Reduced DensityMatrix on the kept modes.
    """
    nm = len(rho.dims)
    keep = _mode_set(keep, nm)
    drop = [k for k in range(nm) if k not in keep]
    if isinstance(rho, StateVector):
        # pure input: contract amplitudes directly, never form the full projector
        dk = int(np.prod([rho.dims[k] for k in keep]))
        m = rho.amplitudes.reshape(rho.dims).transpose(keep + drop).reshape(dk, -1)
        return DensityMatrix(tuple(rho.dims[k] for k in keep), m @ m.conj().T)
    t = rho.matrix.reshape(rho.dims + rho.dims)
    # move kept ket/bra axes to the front, traced ones to the back
    perm = keep + [nm + k for k in keep] + drop + [nm + k for k in drop]
    t = t.transpose(perm)
    dk = int(np.prod([rho.dims[k] for k in keep]))
    dd = int(np.prod([rho.dims[k] for k in drop])) if drop else 1
    t = t.reshape(dk, dk, dd, dd)
    reduced = np.trace(t, axis1=2, axis2=3)
    return DensityMatrix(tuple(rho.dims[k] for k in keep), reduced)


def partial_transpose(rho, subsystem) -> DensityMatrix:
    """Transpose the ket and bra indices of the modes in ``subsystem``."""
    rho = _as_dm(rho)
    nm = len(rho.dims)
    sub = _mode_set(subsystem, nm)
    if len(sub) == nm and nm > 1:
        raise FockError("partial transpose subsystem must be a proper subset")
    t = rho.matrix.reshape(rho.dims + rho.dims)
    perm = list(range(2 * nm))
    for k in sub:
        perm[k], perm[nm + k] = nm + k, k
    n = rho.matrix.shape[0]
    return DensityMatrix(rho.dims, t.transpose(perm).reshape(n, n))


def _hermitian_eigvals(rho: DensityMatrix) -> np.ndarray:
    err = rho.hermiticity_error()
    if err > HERMITIAN_TOL * max(1.0, np.max(np.abs(rho.matrix))):
        raise FockError(f"matrix is not Hermitian (max deviation {err:.3e})")
    m = 0.5 * (rho.matrix + rho.matrix.conj().T)
    return np.linalg.eigvalsh(m)


def negativity_measures(rho, subsystem) -> tuple[float, float]:
    """Negativity and logarithmic negativity with respect to ``subsystem``.

    A StateVector input uses its Schmidt coefficients instead of
    diagonalizing the partial transpose.

    Returns:
        (N, E_N) with N = (||rho^PT||_1 - 1)/2 and E_N = log2 ||rho^PT||_1.
    """
    if isinstance(rho, StateVector):
        # pure input: ||(|psi><psi|)^PT||_1 = (sum of Schmidt coefficients)^2
        nm = len(rho.dims)
        sub = _mode_set(subsystem, nm)
        if len(sub) == nm:
            raise FockError("partial transpose subsystem must be a proper subset")
        rest = [k for k in range(nm) if k not in sub]
        dl = int(np.prod([rho.dims[k] for k in sub]))
        m = rho.amplitudes.reshape(rho.dims).transpose(sub + rest).reshape(dl, -1)
        trace_norm = float(np.sum(np.linalg.svd(m, compute_uv=False)) ** 2)
    else:
        ev = _hermitian_eigvals(partial_transpose(rho, subsystem))
        trace_norm = float(np.sum(np.abs(ev)))
    neg = (trace_norm - 1.0) / 2.0
    logneg = float(np.log2(trace_norm))
    return max(neg, 0.0), max(logneg, 0.0)


def von_neumann_entropy(rho) -> float:
    """Entropy -sum(l log2 l) over eigenvalues; 0 log 0 = 0."""
    rho = _as_dm(rho)
    ev = _hermitian_eigvals(rho)
    if ev.min() < -PSD_TOL:
        raise FockError(f"negative eigenvalue {ev.min():.3e} below tolerance")
    ev = np.clip(ev, 0.0, None)
    ev = ev[ev > 0.0]
    return float(max(-np.sum(ev * np.log2(ev)), 0.0))


def schmidt_decomposition(psi: StateVector, left):
    """Schmidt decomposition of a pure state across the bipartition (left, rest).

    Args:
        psi: normalized state vector.
        left: modes of the first factor; all other modes form the second factor.

    Returns:
        (coefficients, left_basis, right_basis): descending coefficients and
        matching orthonormal vectors as columns, so that
        psi = sum_i c_i left[:, i] ⊗ right[:, i]. Coefficients at rounding
        level relative to the largest are dropped.
    """
    nm = len(psi.dims)
    left = _mode_set(left, nm)
    right = [k for k in range(nm) if k not in left]
    norm2 = psi.norm_squared
    if norm2 == 0.0:
        raise FockError("zero-norm state has no Schmidt decomposition")
    if abs(norm2 - 1.0) > NORM_TOL:
        raise FockError(f"state is not normalized (|psi|^2 = {norm2:.12g})")
    t = psi.amplitudes.reshape(psi.dims).transpose(left + right)
    dl = int(np.prod([psi.dims[k] for k in left]))
    t = t.reshape(dl, -1)
    u, s, vh = np.linalg.svd(t, full_matrices=False)
    # numerical rank cut, as in numpy.linalg.matrix_rank
    keep = s > s[0] * max(t.shape) * np.finfo(float).eps
    return s[keep], u[:, keep], vh[keep].T


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit density matrix."""
    rho = _as_dm(rho)
    if rho.dims != (2, 2):
        raise FockError(f"concurrence needs a (2, 2) register, got {rho.dims}")
    sy = np.array([[0, -1j], [1j, 0]])
    yy = np.kron(sy, sy)
    m = rho.matrix @ yy @ rho.matrix.conj() @ yy
    lam = np.sort(np.abs(np.linalg.eigvals(m)))[::-1]
    s = np.sqrt(lam)
    return float(np.clip(s[0] - s[1] - s[2] - s[3], 0.0, 1.0))
