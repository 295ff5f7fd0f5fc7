"""Command-line sweeps over the physics modules with deterministic CSV/JSON output.

Every run writes one table plus a manifest echo (``<out>.manifest.json``)
holding all inputs, the library version, tolerances and a short summary.

Exit codes: 0 success, 2 invalid input (nothing written), 3 numerical
failure such as non-convergence or NaN (nothing written).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import cavity as C
from . import cosmology as CO
from . import detector as D
from . import fock as F
from . import gaussian as G
from . import rindler as R
from . import wigner as W

SIG_DIGITS = 12


class UsageError(Exception):
    """Invalid flags; maps to exit code 2."""


class NumericalError(Exception):
    """Non-convergence or non-finite output; maps to exit code 3."""


# --- output ---------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), f".{SIG_DIGITS}g")
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(format(float(x), f".{SIG_DIGITS}g"))
    return x


def _check_finite(obj, where: str) -> None:
    if isinstance(obj, dict):
        for k, v in obj.items():
            _check_finite(v, f"{where}.{k}")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _check_finite(v, f"{where}[{i}]")
    elif isinstance(obj, (float, np.floating)) and not math.isfinite(obj):
        raise NumericalError(f"non-finite value at {where}")


def render_table(rows, columns, fmt: str, params=None) -> str:
    """Serialize rows (dicts keyed by ``columns``) to CSV or JSON text.

    Args:
        rows: list of dicts; every dict must have exactly ``columns`` as keys.
        columns: column order.
        fmt: "csv" or "json".
        params: parameter map embedded in the JSON output.

    Returns:
        The serialized text, LF line endings.
    """
    for i, row in enumerate(rows):
        if list(row) != list(columns):
            raise ValueError(f"row {i} keys {list(row)} do not match schema {list(columns)}")
    _check_finite(rows, "rows")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_fmt(row[c]) for c in columns])
        return buf.getvalue()
    if fmt == "json":
        doc = {"params": _jsonable(params or {}), "rows": [_jsonable(r) for r in rows]}
        return json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def emit_table(rows, columns, fmt: str, path, params=None) -> Path:
    """Write a table; I/O errors are re-raised with the path in the message."""
    text = render_table(rows, columns, fmt, params)
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


# --- validation helpers ----------------------------------------------------


def _range(lo: float, hi: float, steps: int, name: str) -> np.ndarray:
    if steps < 1:
        raise UsageError(f"{name}: steps must be positive (got {steps})")
    if not (math.isfinite(lo) and math.isfinite(hi)) or hi < lo:
        raise UsageError(f"{name}: empty range [{lo}, {hi}]")
    if steps == 1:
        if hi != lo:
            raise UsageError(f"{name}: one step needs min == max")
        return np.array([lo])
    return np.linspace(lo, hi, steps)


def _floats(text: str, name: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"{name}: cannot parse {text!r} as comma-separated numbers") from None
    if not vals or not all(math.isfinite(v) for v in vals):
        raise UsageError(f"{name}: need at least one finite value")
    return vals


def _pair(text: str) -> C.ModePair:
    try:
        k, kp = (int(t) for t in text.split(","))
        return C.ModePair(k, kp)
    except (ValueError, C.CavityError):
        raise UsageError(f"--pair: need two distinct positive integers like 1,2 (got {text!r})") from None


def _positive(x: float, name: str) -> float:
    if not (math.isfinite(x) and x > 0):
        raise UsageError(f"{name} must be positive (got {x})")
    return x


# --- subcommands -----------------------------------------------------------
# Each returns (columns, rows, summary). Validation happens before any work.


def run_unruh(a):
    rs = _range(a.r_min, a.r_max, a.steps, "r")
    if rs[0] < 0:
        raise UsageError("r must be non-negative")
    if a.cutoff != "auto":
        try:
            cutoff = int(a.cutoff)
        except ValueError:
            raise UsageError("--cutoff must be an integer or 'auto'") from None
        if cutoff < 1:
            raise UsageError("--cutoff must be at least 1")
    else:
        cutoff = None
    rows, cuts = [], []
    for r in rs:
        c = cutoff if cutoff is not None else R.cutoff_for_deficit(float(r), a.tol)
        cuts.append(c)
        closed = R.alice_rob_log_negativity_closed(float(r))
        fock = R.alice_rob_log_negativity_fock(float(r), c)
        rows.append({"r": float(r), "logneg_closed": closed, "logneg_fock": fock, "abs_diff": abs(closed - fock)})
    f = np.array([row["logneg_fock"] for row in rows])
    summary = {
        "max_abs_diff": max(row["abs_diff"] for row in rows),
        "monotone_decreasing": bool(np.all(np.diff(f) < 0)),
        "max_cutoff": max(cuts),
    }
    return ["r", "logneg_closed", "logneg_fock", "abs_diff"], rows, summary


def _tmsv_cutoff(r: float, tol: float) -> int:
    c = 1
    while R.tmsv_norm_deficit(r, c) > tol:
        c += 1
    return c


def run_gaussian_demo(a):
    rs = _floats(a.r, "--r")
    if any(r < 0 for r in rs):
        raise UsageError("--r values must be non-negative")
    rows = []
    for r in rs:
        S = G.two_mode_squeezer(r)
        sigma = G.apply_symplectic(G.vacuum(2), S)
        n_gauss = G.two_mode_negativity(sigma)
        en_gauss = float(np.log2(2 * n_gauss + 1))
        nu = float(G.symplectic_spectrum(G.partial_transpose_mode(sigma, 1))[0])
        c = _tmsv_cutoff(r, a.tol)
        _, en_fock = F.negativity_measures(R.two_mode_squeezed_vacuum(r, c), [0])
        rows.append({
            "r": r, "logneg_gauss": en_gauss, "logneg_fock": en_fock, "abs_diff": abs(en_gauss - en_fock),
            "nu_pt": nu, "exp_m2r": math.exp(-2 * r), "nu_err": abs(nu - math.exp(-2 * r)),
            "symplectic_violation": G.symplectic_violation(S), "cutoff": c,
        })
    summary = {
        "max_abs_diff": max(row["abs_diff"] for row in rows),
        "max_nu_err": max(row["nu_err"] for row in rows),
    }
    return list(rows[0]), rows, summary


def run_cosmo_entropy(a):
    ks = _floats(a.k, "--k")
    eps = _floats(a.epsilon, "--epsilon")
    sig = _floats(a.sigma, "--sigma")
    if a.m < 0 or any(k <= 0 for k in ks) or any(e <= 0 for e in eps) or any(s <= 0 for s in sig):
        raise UsageError("need k, epsilon, sigma > 0 and m >= 0")
    if not 0 < a.fock_gamma < 1:
        raise UsageError("--fock-gamma must lie in (0, 1)")
    rows = []
    for k in ks:
        for e in eps:
            for s in sig:
                p = CO.ExpansionParams(e, s, a.m)
                al, be = CO.bogoliubov_rw(k, p)
                g = CO.gamma_parameter(k, p)
                ratio = abs(be / al) ** 2
                rows.append({
                    "k": k, "epsilon": e, "sigma": s, "gamma": g, "ratio_sq": ratio,
                    "abs_diff": abs(ratio - g),
                    "norm_err": abs(abs(al) ** 2 - abs(be) ** 2 - 1.0),
                    "entropy": CO.entanglement_entropy(g),
                })
    # closed-form entropy against the Fock marginal of the out state
    g0 = a.fock_gamma
    cut = 1
    while g0 ** (cut + 1) > 1e-14:
        cut += 1
    s_fock = F.von_neumann_entropy(F.partial_trace(CO.out_state(g0, cut), [0]))
    s_closed = CO.entanglement_entropy(g0)
    summary = {
        "points": len(rows),
        "max_abs_diff": max(r["abs_diff"] for r in rows),
        "max_norm_err": max(r["norm_err"] for r in rows),
        "fock_gamma": g0, "fock_cutoff": cut,
        "entropy_fock": s_fock, "entropy_closed": s_closed, "entropy_abs_diff": abs(s_fock - s_closed),
    }
    return list(rows[0]), rows, summary


def run_cosmo_invert(a):
    if a.m <= 0:
        raise UsageError("--m must be positive")
    if a.k1 <= 0 or a.k2 <= 0 or a.k1 == a.k2:
        raise UsageError("--k1 and --k2 must be positive and distinct")
    s1, s2 = a.s1, a.s2
    if (s1 is None) != (s2 is None):
        raise UsageError("give both --s1 and --s2, or neither")
    if s1 is None:
        _positive(a.true_epsilon, "--true-epsilon")
        _positive(a.true_sigma, "--true-sigma")
        p = CO.ExpansionParams(a.true_epsilon, a.true_sigma, a.m)
        s1, s2 = CO.entropy_of_mode(a.k1, p), CO.entropy_of_mode(a.k2, p)
    elif s1 <= 0 or s2 <= 0:
        raise UsageError("entropies must be positive")
    res = CO.invert_expansion_params([s1, s2], [a.k1, a.k2], a.m, tol=a.tol)
    rows = [{"epsilon": res.epsilon, "sigma": res.sigma, "residual": res.residual}]
    summary = {"s1": s1, "s2": s2, "condition": res.condition, "iterations": res.iterations,
               "non_unique": res.non_unique}
    if a.s1 is None:
        summary["epsilon_rel_err"] = abs(res.epsilon / a.true_epsilon - 1)
        summary["sigma_rel_err"] = abs(res.sigma / a.true_sigma - 1)
    return ["epsilon", "sigma", "residual"], rows, summary


def run_cavity_block(a):
    _positive(a.L, "--L")
    _positive(a.h, "--h")
    _positive(a.h_rowsum, "--h-rowsum")
    ns = list(range(a.modes, a.max_modes + 1))
    if a.modes < 2 or not ns:
        raise UsageError("need 2 <= --modes <= --max-modes")
    geom = C.CavityGeometry.from_length(a.L, a.h)
    geom_rs = C.CavityGeometry.from_length(a.L, a.h_rowsum)
    rows = []
    for n in ns:
        al, be = C.building_block_bogoliubov(geom, n)
        S, corr = C.building_block_symplectic(geom, n)
        al2, be2 = C.building_block_bogoliubov(geom_rs, n)
        sums = np.sum(al2**2 - be2**2, axis=1)
        rows.append({
            "n_modes": n,
            "alpha_dev": float(np.max(np.abs(al - np.eye(n)))),
            "beta_max": float(np.max(np.abs(be))),
            "symplectic_violation": G.symplectic_violation(S),
            "correction_norm": corr,
            "row_sum_1": float(sums[0]),
            "row_sum_2": float(sums[1]),
        })
    rs1 = [r["row_sum_1"] for r in rows]
    rs2 = [r["row_sum_2"] for r in rows]
    summary = {
        "alpha_dev_at_modes": rows[0]["alpha_dev"],
        "beta_max_at_modes": rows[0]["beta_max"],
        "max_symplectic_violation": max(r["symplectic_violation"] for r in rows),
        "row_sums_monotone": bool(np.all(np.diff(rs1) > 0) and np.all(np.diff(rs2) > 0)
                                  and rs1[-1] <= 1 + 1e-12 and rs2[-1] <= 1 + 1e-12),
    }
    return list(rows[0]), rows, summary


def run_cavity_trajectory(a):
    _positive(a.L, "--L")
    pair = _pair(a.pair)
    hs = _floats(a.h, "--h")
    if any(not 0 < h <= 1e-2 for h in hs):
        raise UsageError("--h values must lie in (0, 1e-2]")
    if a.modes < max(2, pair.k, pair.k_prime):
        raise UsageError("--modes must cover the pair")
    coeff = C.first_order_mode_negativity(a.L, pair, n_modes=a.modes)
    rows = []
    for h in hs:
        geom = C.CavityGeometry.from_length(a.L, h)
        n1 = C.block_pair_negativity(a.L, h, pair, a.modes)
        n_half = C.block_pair_negativity(a.L, h / 2, pair, a.modes)
        eta = a.eta_fraction * C.acceleration_period(geom, 1)
        period = C.acceleration_period(geom, 1)
        t1 = C.compose_trajectory([C.accelerated_segment(geom, eta)], a.modes)
        t2 = C.compose_trajectory([C.accelerated_segment(geom, eta + period)], a.modes)
        na, nb = C.pair_negativity(t1.S, pair), C.pair_negativity(t2.S, pair)
        rows.append({
            "h": h, "negativity_block": n1, "first_order": coeff * h, "doubling_ratio": n1 / n_half,
            "negativity_eta": na, "negativity_eta_plus_period": nb, "periodicity_diff": abs(na - nb),
            "symplectic_violation": max(t1.violation, t2.violation),
            "correction_norm": max(t1.correction_norm, t2.correction_norm),
        })
    summary = {"first_order_coefficient": coeff,
               "max_doubling_dev": max(abs(r["doubling_ratio"] - 2) / 2 for r in rows)}
    return list(rows[0]), rows, summary


def run_cavity_resonance(a):
    _positive(a.L, "--L")
    _positive(a.h, "--h")
    pair = _pair(a.pair)
    if a.n_max < 3:
        raise UsageError("--n-max must be at least 3")
    if a.modes < max(2, pair.k, pair.k_prime):
        raise UsageError("--modes must cover the pair")
    geom = C.CavityGeometry.from_length(a.L, a.h)
    res = C.resonance_scan(C.resonant_period(geom, pair, detune=a.detune), a.n_max, pair, a.modes)
    rows = [{"N": int(n), "negativity": float(v)} for n, v in zip(res.N, res.negativity)]
    summary = {"r_squared": res.r_squared, "slope": res.slope, "correction_norm": res.correction_norm}
    return ["N", "negativity"], rows, summary


def run_wigner_angle(a):
    _positive(a.m, "--m")
    xs = _range(a.xi_min, a.xi_max, a.steps, "xi")
    p3 = np.array([0.0, 0.0, a.p])
    p = W.on_shell(p3, a.m)
    rest = np.array([a.m, 0.0, 0.0, 0.0])
    null = np.array([1.0, 0.0, 0.6, 0.8])
    rows = []
    for xi in xs:
        Lam = W.lorentz_from_rapidity([1, 0, 0], float(xi))
        Wr = W.wigner_rotation(Lam, p, a.m)
        cosang = np.clip((np.trace(Wr[1:, 1:]) - 1) / 2, -1.0, 1.0)
        Lc = W.lorentz_from_rapidity([0, 0, 1], float(xi))
        ph1 = W.massless_wigner_phase(Lam, null)
        ph10 = W.massless_wigner_phase(Lam, 10 * null)
        rows.append({
            "xi": float(xi),
            "angle": float(np.arccos(cosang)),
            "rest_fix_err": float(np.max(np.abs(Wr @ rest - rest))),
            "collinear_dev": float(np.max(np.abs(W.wigner_rotation(Lc, p, a.m) - np.eye(4)))),
            "massless_phase_1": ph1,
            "massless_phase_10": ph10,
            "phase_diff": abs(ph1 - ph10),
        })
    summary = {k: max(r[k] for r in rows) for k in ("rest_fix_err", "collinear_dev", "phase_diff")}
    return list(rows[0]), rows, summary


def run_wigner_concurrence(a):
    _positive(a.m, "--m")
    _positive(a.width, "--width")
    xs = _range(a.xi_min, a.xi_max, a.steps, "xi")
    if a.points < 4:
        raise UsageError("--points must be at least 4")
    sharp = W.bell_pair(a.m, None, p_mean=(0.0, 0.0, a.p))
    wide = W.bell_pair(a.m, a.width, points=a.points)
    rows = []
    for xi in xs:
        Lam = W.lorentz_from_rapidity([1, 0, 0], float(xi))
        rows.append({
            "xi": float(xi),
            "concurrence_sharp": W.two_particle_concurrence(sharp, Lam, a.m),
            "concurrence_gauss": W.two_particle_concurrence(wide, Lam, a.m),
        })
    summary = {"min_sharp": min(r["concurrence_sharp"] for r in rows),
               "min_gauss": min(r["concurrence_gauss"] for r in rows)}
    return list(rows[0]), rows, summary


def run_wigner_spin(a):
    _positive(a.m, "--m")
    _positive(a.width, "--width")
    xs = _range(a.xi_min, a.xi_max, a.steps, "xi")
    if a.points < 4 or a.full_points < 2:
        raise UsageError("--points must be >= 4 and --full-points >= 2")
    packet = W.gaussian_packet(a.m, width=a.width, points=a.points)
    z = [0.0, 0.0, 1.0]
    rows = []
    for xi in xs:
        Lam = W.lorentz_from_rapidity([1, 0, 0], float(xi))
        b = W.boost_single_particle(packet, Lam)
        row = {"xi": float(xi), "reduced_entropy": W.reduced_spin_entropy(b)}
        for name in W.OBSERVABLES:
            row[name] = W.spin_observable_expectation(b, z, name)
        rows.append(row)
    # the full momentum-spin state stays pure under the boost
    small = W.gaussian_packet(a.m, width=a.width, points=a.full_points)
    Lam = W.lorentz_from_rapidity([1, 0, 0], float(xs[-1]))
    full = W.boost_single_particle(small, Lam).full_state()
    summary = {"full_state_entropy": F.von_neumann_entropy(full.density_matrix()),
               "full_state_xi": float(xs[-1])}
    return list(rows[0]), rows, summary


def run_detector_response(a):
    _positive(a.a, "--a")
    _positive(a.epsilon, "--epsilon")
    ws = _range(a.w_min, a.w_max, a.steps, "omega/a")
    if ws[0] <= 0:
        raise UsageError("omega/a must be positive")
    cfg = D.ResponseConfig(epsilon=a.epsilon)
    acc = D.accelerated(a.a)
    rows = []
    for x in ws:
        om = float(x) * a.a
        F_acc = D.response_numeric(om, acc, cfg)
        planck = D.planck_response(om, a.a)
        F_in = D.response_numeric(om, D.inertial(), cfg)
        rows.append({"omega_over_a": float(x), "response": F_acc, "planck": planck,
                     "ratio": F_acc / planck, "inertial": F_in, "inertial_over_accelerated": abs(F_in) / F_acc})
    ratios = [r["ratio"] for r in rows]
    summary = {"ratio_spread": max(ratios) / min(ratios) - 1,
               "max_inertial_over_accelerated": max(r["inertial_over_accelerated"] for r in rows)}
    return list(rows[0]), rows, summary


def run_detector_variance(a):
    _positive(a.a, "--a")
    _positive(a.omega_source, "--omega-source")
    ts = _range(a.tau_min, a.tau_max, a.steps, "tau")
    rows = []
    for t in ts:
        t = float(t)
        w = float(D.doppler_frequency(t, a.omega_source, a.a))
        wc = D.doppler_from_contraction(t, a.omega_source, a.a)
        u = math.exp(a.a * t) / a.a
        rows.append({"tau": t, "omega_doppler": w, "omega_contraction": wc, "abs_diff": abs(w - wc),
                     "u": u, "variance": float(D.homodyne_variance(a.omega_source, u))})
    return list(rows[0]), rows, {"max_abs_diff": max(r["abs_diff"] for r in rows)}


TOLERANCES = {
    "fock_hermitian": F.HERMITIAN_TOL,
    "fock_psd": F.PSD_TOL,
    "fock_norm": F.NORM_TOL,
    "symplectic": G.SYMPLECTIC_TOL,
    "cavity_repair_threshold": 1e-10,
}


# --- argument parsing ------------------------------------------------------


def _add_io(p: argparse.ArgumentParser, default_fmt: str = "csv") -> None:
    p.add_argument("--format", choices=("csv", "json"), default=default_fmt, help="output format")
    p.add_argument("--out", default=None, help="output path (default: <command>.<format> in the current directory)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rqilab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"rqilab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("unruh", help="Alice-Rob log-negativity, closed form vs Fock engine")
    p.add_argument("--r-min", type=float, default=0.0)
    p.add_argument("--r-max", type=float, default=1.5)
    p.add_argument("--steps", type=int, default=16)
    p.add_argument("--cutoff", default="auto", help="Fock cutoff or 'auto' (trace deficit below --tol)")
    p.add_argument("--tol", type=float, default=1e-10)
    _add_io(p)
    p.set_defaults(func=run_unruh, name="unruh")

    g = sub.add_parser("gaussian", help="Gaussian engine checks").add_subparsers(dest="action", required=True)
    p = g.add_parser("demo", help="two-mode squeezed state: Gaussian vs Fock negativity")
    p.add_argument("--r", default="0.1,0.3,0.6,1.0", help="comma-separated squeezing values")
    p.add_argument("--tol", type=float, default=1e-16, help="Fock truncation deficit")
    _add_io(p)
    p.set_defaults(func=run_gaussian_demo, name="gaussian demo")

    c = sub.add_parser("cosmo", help="expanding-universe particle creation").add_subparsers(dest="action", required=True)
    p = c.add_parser("entropy", help="Bogoliubov ratio vs gamma on a (k, epsilon, sigma) grid")
    p.add_argument("--k", default="0.25,0.5,1,2,4")
    p.add_argument("--epsilon", default="0.1,0.5,1,2,5")
    p.add_argument("--sigma", default="0.5,1,2,4,8")
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--fock-gamma", type=float, default=0.3)
    _add_io(p)
    p.set_defaults(func=run_cosmo_entropy, name="cosmo entropy")
    p = c.add_parser("invert", help="recover (epsilon, sigma) from two mode entropies")
    p.add_argument("--s1", type=float, default=None)
    p.add_argument("--k1", type=float, default=0.5)
    p.add_argument("--s2", type=float, default=None)
    p.add_argument("--k2", type=float, default=1.0)
    p.add_argument("--m", type=float, default=0.1)
    p.add_argument("--true-epsilon", type=float, default=0.5, help="used to synthesize S when --s1/--s2 are absent")
    p.add_argument("--true-sigma", type=float, default=2.0)
    p.add_argument("--tol", type=float, default=1e-8)
    _add_io(p, "json")
    p.set_defaults(func=run_cosmo_invert, name="cosmo invert")

    c = sub.add_parser("cavity", help="moving-cavity Bogoliubov transforms").add_subparsers(dest="action", required=True)
    p = c.add_parser("block", help="building block near identity, row sums vs truncation")
    p.add_argument("--L", type=float, default=1.0)
    p.add_argument("--h", type=float, default=1e-4)
    p.add_argument("--h-rowsum", type=float, default=0.5)
    p.add_argument("--modes", type=int, default=6)
    p.add_argument("--max-modes", type=int, default=14)
    _add_io(p)
    p.set_defaults(func=run_cavity_block, name="cavity block")
    p = c.add_parser("trajectory", help="first-order negativity and dwell-time periodicity")
    p.add_argument("--L", type=float, default=1.0)
    p.add_argument("--h", default="0.000125,0.00025,0.0005,0.001")
    p.add_argument("--pair", default="1,2")
    p.add_argument("--modes", type=int, default=6)
    p.add_argument("--eta-fraction", type=float, default=0.3, help="dwell time as a fraction of 2 pi/(a Omega_1)")
    _add_io(p)
    p.set_defaults(func=run_cavity_trajectory, name="cavity trajectory")
    p = c.add_parser("resonance", help="negativity vs number of repeated periods")
    p.add_argument("--L", type=float, default=1.0)
    p.add_argument("--h", type=float, default=1e-3)
    p.add_argument("--pair", default="1,2")
    p.add_argument("--modes", type=int, default=6)
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--detune", type=float, default=0.0, help="phase offset from resonance per period")
    _add_io(p)
    p.set_defaults(func=run_cavity_resonance, name="cavity resonance")

    c = sub.add_parser("wigner", help="Wigner rotations and spin entanglement").add_subparsers(dest="action", required=True)
    p = c.add_parser("angle", help="Wigner rotation checks vs rapidity")
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--p", type=float, default=1.0, help="momentum along z")
    p.add_argument("--xi-min", type=float, default=0.0)
    p.add_argument("--xi-max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=9)
    _add_io(p)
    p.set_defaults(func=run_wigner_angle, name="wigner angle")
    p = c.add_parser("concurrence", help="Bell-pair spin concurrence under a perpendicular boost")
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--p", type=float, default=1.0, help="sharp-momentum magnitude along z")
    p.add_argument("--width", type=float, default=1.0)
    p.add_argument("--points", type=int, default=24)
    p.add_argument("--xi-min", type=float, default=0.0)
    p.add_argument("--xi-max", type=float, default=1.5)
    p.add_argument("--steps", type=int, default=7)
    _add_io(p)
    p.set_defaults(func=run_wigner_concurrence, name="wigner concurrence")
    p = c.add_parser("spin", help="reduced spin entropy and spin observables of a boosted packet")
    p.add_argument("--m", type=float, default=1.0)
    p.add_argument("--width", type=float, default=1.0)
    p.add_argument("--points", type=int, default=24)
    p.add_argument("--full-points", type=int, default=8, help="grid for the full-state purity check")
    p.add_argument("--xi-min", type=float, default=0.0)
    p.add_argument("--xi-max", type=float, default=1.5)
    p.add_argument("--steps", type=int, default=7)
    _add_io(p)
    p.set_defaults(func=run_wigner_spin, name="wigner spin")

    c = sub.add_parser("detector", help="Unruh-DeWitt detector").add_subparsers(dest="action", required=True)
    p = c.add_parser("response", help="accelerated response vs Planck form")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--w-min", type=float, default=0.5, help="smallest omega/a")
    p.add_argument("--w-max", type=float, default=3.0)
    p.add_argument("--steps", type=int, default=11)
    p.add_argument("--epsilon", type=float, default=1e-3)
    _add_io(p)
    p.set_defaults(func=run_detector_response, name="detector response")
    p = c.add_parser("variance", help="Doppler frequency and homodyne variance along the worldline")
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--omega-source", type=float, default=1.0)
    p.add_argument("--tau-min", type=float, default=0.0)
    p.add_argument("--tau-max", type=float, default=2.0)
    p.add_argument("--steps", type=int, default=11)
    _add_io(p)
    p.set_defaults(func=run_detector_variance, name="detector variance")
    return ap


def _manifest(args, fmt: str, out: Path, summary) -> dict:
    skip = {"func", "name", "command", "action", "format", "out"}
    params = {k: v for k, v in sorted(vars(args).items()) if k not in skip}
    return {
        "subcommand": args.name,
        "params": params,
        "format": fmt,
        "output": out.name,
        "deterministic": True,
        "version": __version__,
        "tolerances": TOLERANCES,
        "summary": summary,
    }


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Path(args.out) if args.out else Path(f"{args.name.replace(' ', '-')}.{args.format}")
    try:
        columns, rows, summary = args.func(args)
        params = _manifest(args, args.format, out, summary)["params"]
        table = render_table(rows, columns, args.format, params)
        _check_finite(summary, "summary")
        manifest = json.dumps(_jsonable(_manifest(args, args.format, out, summary)), indent=2,
                              allow_nan=False) + "\n"
    except UsageError as exc:
        print(f"rqilab: error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, RuntimeError, FloatingPointError) as exc:
        print(f"rqilab: numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        # domain validation raised by the library
        print(f"rqilab: error: {exc}", file=sys.stderr)
        return 2
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(table)
        mpath = out.with_name(out.name + ".manifest.json")
        with open(mpath, "w", encoding="utf-8", newline="") as fh:
            fh.write(manifest)
    except OSError as exc:
        print(f"rqilab: cannot write {exc.filename or out}: {exc.strerror or exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
