import itertools

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rqilab import cosmology as CO
from rqilab import fock as F
from rqilab import rindler as R

mp.mp.dps = 40

STRIP = [complex(x, y) for x in (0.01, 0.3, 0.5, 1.0, 2.2, 3.7, 5.0) for y in (-50, -17.5, -3, -0.4, 0, 0.9, 6, 25, 50)]


def gamma_mp(k, eps, sigma, m):
    k, eps, sigma, m = (mp.mpf(v) for v in (k, eps, sigma, m))
    w_in = mp.sqrt(k**2 + m**2)
    w_out = mp.sqrt(k**2 + m**2 * (1 + 2 * eps))
    wm, wp = (w_out - w_in) / 2, (w_out + w_in) / 2
    return mp.sinh(mp.pi * wm / sigma) ** 2 / mp.sinh(mp.pi * wp / sigma) ** 2


@pytest.mark.parametrize("z", STRIP)
def test_gamma_against_mpmath(z):
    assert abs(CO.complex_gamma(z) / complex(mp.gamma(z)) - 1) < 1e-12


def test_gamma_classical_values_and_poles():
    assert CO.complex_gamma(1) == pytest.approx(1.0, rel=1e-14)
    assert CO.complex_gamma(0.5) == pytest.approx(np.sqrt(np.pi), rel=1e-14)
    assert CO.complex_gamma(-0.5) == pytest.approx(-2 * np.sqrt(np.pi), rel=1e-13)
    for z in (0, -1, -7):
        with pytest.raises(CO.CosmologyError):
            CO.complex_gamma(z)


def test_gamma_identities():
    x = 0.7
    assert abs(CO.complex_gamma(1j * x)) ** 2 == pytest.approx(np.pi / (x * np.sinh(np.pi * x)), rel=1e-10)
    z = 0.3 + 2j
    assert abs(CO.complex_gamma(1 + z) - z * CO.complex_gamma(z)) < 1e-11 * abs(CO.complex_gamma(1 + z))


@pytest.mark.parametrize("x", [0.05, 0.7, 3.0, 12.0, 30.0, 50.0])
def test_gamma_imaginary_axis_modulus(x):
    # compare in log form so the e^(-pi x) decay does not matter
    lhs = 2 * CO.log_gamma(1j * x).real
    rhs = np.log(np.pi / x) - float(mp.log(mp.sinh(mp.pi * x)))
    assert abs(lhs - rhs) < 1e-10


@pytest.mark.parametrize("z", STRIP)
def test_gamma_recurrence_on_strip(z):
    lhs, rhs = CO.complex_gamma(1 + z), z * CO.complex_gamma(z)
    assert abs(lhs - rhs) <= 1e-10 * abs(lhs)


def test_mode_frequencies():
    f = CO.mode_frequencies(2.0, CO.ExpansionParams(1.0, 1.0, 0.0))
    assert f.omega_in == f.omega_out == 2.0 and f.omega_minus == 0.0
    f = CO.mode_frequencies(1.0, CO.ExpansionParams(1.0, 1.0, 1.0))
    assert f.omega_in == pytest.approx(np.sqrt(2)) and f.omega_out == pytest.approx(2.0)
    assert f.omega_plus == pytest.approx((2 + np.sqrt(2)) / 2)
    with pytest.raises(CO.CosmologyError):
        CO.ExpansionParams(0.0, 1.0, 1.0)


def test_massless_field_has_no_creation():
    p = CO.ExpansionParams(0.7, 1.3, 0.0)
    al, be = CO.bogoliubov_rw(1.5, p)
    assert abs(al) == pytest.approx(1.0, abs=1e-12) and be == 0
    assert CO.gamma_parameter(1.5, p) == 0.0
    assert CO.entanglement_entropy(0.0) == 0.0


def test_reference_point():
    p = CO.ExpansionParams(1.0, 1.0, 1.0)
    al, be = CO.bogoliubov_rw(1.0, p)
    g = CO.gamma_parameter(1.0, p)
    assert g == pytest.approx(float(gamma_mp(1, 1, 1, 1)), rel=1e-12)
    assert abs(abs(be / al) ** 2 - g) < 1e-9 * g
    assert abs(abs(al) ** 2 - abs(be) ** 2 - 1) < 1e-12


def test_ratio_equals_gamma_on_grid():
    ks = [0.25, 0.5, 1.0, 2.0, 4.0]
    eps = [0.1, 0.5, 1.0, 2.0, 5.0]
    sig = [0.5, 1.0, 2.0, 4.0, 8.0]
    for k, e, s in itertools.product(ks, eps, sig):
        p = CO.ExpansionParams(e, s, 1.0)
        al, be = CO.bogoliubov_rw(k, p)
        g = CO.gamma_parameter(k, p)
        assert abs(abs(be / al) ** 2 - g) <= 1e-9 * g
        assert g == pytest.approx(float(gamma_mp(k, e, s, 1.0)), rel=1e-10)
        assert abs(abs(al) ** 2 - abs(be) ** 2 - 1) < 1e-9


@given(st.floats(0.05, 5), st.floats(0.05, 5), st.floats(0.1, 10), st.floats(0.05, 3))
@settings(max_examples=20, deadline=None)
def test_bogoliubov_normalization_random(k, e, s, m):
    al, be = CO.bogoliubov_rw(k, CO.ExpansionParams(e, s, m))
    assert abs(abs(al) ** 2 - abs(be) ** 2 - 1) < 1e-9


def test_gamma_parameter_large_sigma_and_overflow():
    p = CO.ExpansionParams(1.0, 1e6, 1.0)
    f = CO.mode_frequencies(1.0, p)
    assert CO.gamma_parameter(1.0, p) == pytest.approx((f.omega_minus / f.omega_plus) ** 2, rel=1e-6)
    # pi w_+/sigma ~ 300: log-space evaluation stays finite
    tiny = CO.gamma_parameter(100.0, CO.ExpansionParams(1.0, 1.0, 1.0))
    assert tiny == pytest.approx(float(gamma_mp(100, 1, 1, 1)), rel=1e-9)


def test_out_state():
    psi = CO.out_state(0.0, 5)
    assert psi.amplitude((0, 0)) == 1 and psi.norm_squared == 1
    g, c = 0.3, 20
    psi = CO.out_state(g, c)
    d = np.array([psi.amplitude((n, n)) for n in range(c + 1)]).real
    assert np.allclose(d[1:] / d[:-1], np.sqrt(g))
    assert np.allclose(d**2, (1 - g) * g ** np.arange(c + 1))
    assert psi.norm_deficit == pytest.approx(g ** (c + 1), rel=1e-6)
    ref = R.two_mode_squeezed_vacuum(np.arctanh(np.sqrt(g)), c)
    assert np.max(np.abs(psi.amplitudes - ref.amplitudes)) < 1e-12


def test_entropy_values():
    assert CO.entanglement_entropy(0.5) == pytest.approx(2.0, abs=1e-14)
    s_fock = F.von_neumann_entropy(F.partial_trace(CO.out_state(0.3, 60), [0]))
    assert abs(s_fock - CO.entanglement_entropy(0.3)) < 1e-6
    with pytest.raises(CO.CosmologyError):
        CO.entanglement_entropy(1.0)


def test_entropy_decreases_with_k():
    p = CO.ExpansionParams(0.8, 1.5, 0.7)
    s = [CO.entropy_of_mode(k, p) for k in np.linspace(0.1, 5, 25)]
    assert np.all(np.diff(s) < 0)


def _synth(eps, sigma, m, ks):
    p = CO.ExpansionParams(eps, sigma, m)
    return [CO.entropy_of_mode(k, p) for k in ks]


def test_inversion_round_trip():
    ks = [0.5, 1.0]
    res = CO.invert_expansion_params(_synth(0.5, 2.0, 0.1, ks), ks, 0.1)
    assert res.epsilon == pytest.approx(0.5, rel=1e-6)
    assert res.sigma == pytest.approx(2.0, rel=1e-6)
    assert res.residual < 1e-8 and np.isfinite(res.condition)


def test_inversion_least_squares_three_momenta():
    ks = [0.3, 0.6, 1.2]
    res = CO.invert_expansion_params(_synth(1.5, 0.8, 0.3, ks), ks, 0.3)
    assert res.epsilon == pytest.approx(1.5, rel=1e-6) and res.sigma == pytest.approx(0.8, rel=1e-6)


def test_inversion_perturbation_bounded_by_conditioning():
    ks, m = [0.5, 1.0], 0.1
    S = np.array(_synth(0.5, 2.0, m, ks))
    base = CO.invert_expansion_params(S, ks, m)
    rng = np.random.default_rng(5)
    dS = 1e-6 * S * rng.choice([-1, 1], size=2)
    pert = CO.invert_expansion_params(S + dS, ks, m, tol=1e-9)
    J = CO._jacobian(np.log([base.epsilon, base.sigma]), ks, m)
    bound = np.linalg.norm(dS) / np.linalg.svd(J, compute_uv=False).min()
    shift = np.linalg.norm(np.log([pert.epsilon / base.epsilon, pert.sigma / base.sigma]))
    assert shift <= 1.1 * bound


def test_inversion_errors():
    with pytest.raises(CO.CosmologyError):
        CO.invert_expansion_params([0.1, 0.2], [0.5, 1.0], 0.0)
    with pytest.raises(CO.CosmologyError):
        CO.invert_expansion_params([0.1], [0.5], 0.1)
    with pytest.raises(CO.CosmologyError):
        CO.invert_expansion_params([0.1, 0.2], [0.5, 0.5], 0.1)
    # entropies no expansion can produce: far above any attainable value
    with pytest.raises(CO.InversionError):
        CO.invert_expansion_params([40.0, 0.001], [0.5, 1.0], 0.1)
