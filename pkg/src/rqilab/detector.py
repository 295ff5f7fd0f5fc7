"""Unruh-DeWitt detector response and the Doppler/homodyne formulas.

The massless scalar Wightman function is pulled back to inertial and uniformly
accelerated worldlines. The finite-time response uses a Gaussian switching
function and is evaluated on a contour shifted into the lower half plane,
where the integrand is smooth and exponentially damped.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np


class DetectorError(ValueError):
    """Raised for invalid trajectories or configurations."""


class ConvergenceError(RuntimeError):
    """Raised when the response does not settle under window doubling."""


@dataclass(frozen=True)
class Trajectory:
    kind: str  # "inertial" or "accelerated"
    v: float = 0.0
    a: float = 0.0

    def __post_init__(self):
        if self.kind == "inertial":
            if abs(self.v) >= 1:
                raise DetectorError("inertial speed must satisfy |v| < 1")
        elif self.kind == "accelerated":
            if self.a <= 0:
                raise DetectorError("acceleration must be positive")
        else:
            raise DetectorError(f"unknown trajectory kind {self.kind!r}")


def inertial(v: float = 0.0) -> Trajectory:
    return Trajectory("inertial", v=v)


def accelerated(a: float) -> Trajectory:
    return Trajectory("accelerated", a=a)


@dataclass(frozen=True)
class ResponseConfig:
    """Settings for the finite-time response.

    Args:
        epsilon: i-epsilon regulator.
        T: switching time scale; the Gaussian switching is exp(-tau^2/(2 T^2)).
            None picks a default from omega and the acceleration.
        panels: Gauss-Legendre panels over the integration line.
        order: nodes per panel.
        check: compare against a run with 2T and raise on > 5% change.
    """

    epsilon: float = 1e-3
    T: float | None = None
    panels: int = 400
    order: int = 16
    check: bool = True

    def __post_init__(self):
        if self.epsilon <= 0:
            raise DetectorError("epsilon must be positive")
        if self.T is not None and self.T <= 0:
            raise DetectorError("T must be positive")


def wightman_pullback(traj: Trajectory, dtau, epsilon: float):
    """Vacuum Wightman function along the worldline as a function of Delta tau."""
    if epsilon <= 0:
        raise DetectorError("epsilon must be positive")
    s = np.asarray(dtau, dtype=complex)
    if traj.kind == "inertial":
        return -1.0 / (2 * np.pi * (s - 1j * epsilon)) ** 2
    a = traj.a
    return -1.0 / ((4 * np.pi / a) * np.sinh(a * s / 2 - 1j * epsilon * a)) ** 2


def planck_response(omega, a: float):
    """omega / (2 pi (exp(2 pi omega / a) - 1)); also valid for omega < 0."""
    omega = np.asarray(omega, dtype=float)
    if a <= 0:
        raise DetectorError("acceleration must be positive")
    x = 2 * np.pi * omega / a
    with np.errstate(over="ignore"):
        small = np.abs(x) < 1e-8
        val = np.where(small, a / (2 * np.pi) ** 2, omega / (2 * np.pi * np.expm1(np.where(small, 1.0, x))))
    return val if val.ndim else float(val)


def _default_T(omega: float, traj: Trajectory) -> float:
    T = 20.0 / omega
    if traj.kind == "accelerated":
        T = max(T, 60.0 / traj.a)
    return T


def _windowed_response(omega: float, traj: Trajectory, eps: float, T: float, panels: int, order: int) -> float:
    if traj.kind == "accelerated":
        a = traj.a
        # poles of the pullback sit at Im s = 2 eps + 2 pi k / a; run midway below
        c = np.pi / a - 2 * eps
        half = min(12.0 * T, 40.0 / a)
    else:
        # only singularity is at s = i eps; shift to balance e^{-omega c} against the window
        c = 2.0 * omega * T * T
        half = 12.0 * T
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(-half, half, panels + 1)
    mid = 0.5 * (edges[:-1] + edges[1:])
    h = 0.5 * (edges[1] - edges[0])
    xs = (mid[:, None] + h * x[None, :]).ravel()
    ws = np.tile(h * w, panels)
    s = xs - 1j * c
    integrand = np.exp(-1j * omega * s - s * s / (4 * T * T)) * wightman_pullback(traj, s, eps)
    return float(np.sum(ws * integrand).real)


def response_numeric(omega: float, traj: Trajectory, cfg: ResponseConfig = ResponseConfig()) -> float:
    """Detector transition rate per unit proper time at gap ``omega``.

    With switching chi(tau) = exp(-tau^2/(2T^2)) the rate is
    int ds exp(-i omega s) W(s) exp(-s^2/(4T^2)). As T grows this tends to
    the stationary response; for the accelerated worldline that is the
    Planck form times exp(2 omega epsilon).

    Raises:
        ConvergenceError: if doubling T changes the result by more than 5%.
    """
    if omega <= 0:
        raise DetectorError("omega must be positive")
    T = cfg.T if cfg.T is not None else _default_T(omega, traj)
    if omega * T < 20:
        warnings.warn(f"omega*T = {omega * T:.3g} < 20; spectral resolution is coarse", stacklevel=2)
    val = _windowed_response(omega, traj, cfg.epsilon, T, cfg.panels, cfg.order)
    if cfg.check:
        val2 = _windowed_response(omega, traj, cfg.epsilon, 2 * T, 2 * cfg.panels, cfg.order)
        scale = max(abs(val), abs(val2))
        floor = 1e-14 * (planck_response(omega, traj.a) if traj.kind == "accelerated" else omega)
        if abs(val2 - val) > 0.05 * scale + floor:
            raise ConvergenceError(f"response changed from {val:.6e} to {val2:.6e} when T doubled")
    return val


def doppler_frequency(tau, omega_source: float, a: float):
    """Frequency seen along the accelerated worldline: omega_source e^(a tau)."""
    if omega_source <= 0 or a <= 0:
        raise DetectorError("omega_source and a must be positive")
    return omega_source * np.exp(a * np.asarray(tau, dtype=float))


def doppler_from_contraction(tau: float, omega_source: float, a: float) -> float:
    """k.u for a left-moving wave k = omega_source (1, -1) and u = (cosh a tau, sinh a tau)."""
    k = omega_source * np.array([1.0, -1.0])
    u = np.array([np.cosh(a * tau), np.sinh(a * tau)])
    eta = np.diag([1.0, -1.0])
    return float(k @ eta @ u)


def homodyne_variance(omega_source: float, u):
    """Normalized variance 1/(exp(2 pi omega_source u) - 1), u = x + t."""
    arg = 2 * np.pi * omega_source * np.asarray(u, dtype=float)
    if np.any(arg <= 0):
        raise DetectorError("omega_source * u must be positive")
    return 1.0 / np.expm1(arg)
