import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from bmokit.errors import DomainError, NumericalAbort
from bmokit.kernels import poisson_theta
from bmokit.quadrature import (DEFAULT_SCHEME, DiskQuadScheme, bump, circle_grid_size,
                               disk_green_rule, effective_sizes, gauss_log_rule,
                               integrate_circle, integrate_disk_green, patch_radii,
                               poisson_weights, radial_rule)

from conftest import disk_points


def _circle_side(fun, z):
    """Independent oracle: adaptive quadrature of fun * P_z over the circle."""
    val, _ = integrate.quad(lambda t: fun(np.exp(1j * t)) * poisson_theta(z, t),
                            0, 2 * np.pi, limit=400, epsabs=1e-13, epsrel=1e-13)
    return val


# --------------------------------------------------------------------------
# circle

def test_circle_constant():
    assert integrate_circle(lambda t: np.ones_like(t), 64) == pytest.approx(2 * np.pi)


def test_circle_poisson_normalized():
    val = integrate_circle(lambda t: poisson_theta(0.5, t), 4096)
    assert abs(val - 1) < 1e-12


def test_circle_mean_abs_sq():
    assert integrate_circle(lambda t: np.abs(np.exp(1j * t)) ** 2 / (2 * np.pi), 32) == \
        pytest.approx(1)


def test_circle_rejects_nonfinite():
    with pytest.raises(NumericalAbort), np.errstate(divide="ignore"):
        integrate_circle(lambda t: 1 / np.sin(t), 64)


def test_circle_grid_size_grows_with_z():
    assert circle_grid_size(8, 0.99) > circle_grid_size(8, 0.5) >= circle_grid_size(8, 0)


@given(disk_points(0.95))
def test_poisson_weights_sum_to_one(z):
    M = circle_grid_size(0, z)
    _, w = poisson_weights(z, M)
    assert abs(np.sum(w) - 1) < 1e-13


# --------------------------------------------------------------------------
# log-weighted Gauss rule

@pytest.mark.parametrize("n", [4, 16, 48])
def test_gauss_log_rule_exact_on_monomials(n):
    x, w = gauss_log_rule(n)
    assert np.all((x > 0) & (x < 1)) and np.all(w > 0)
    for k in (0, 1, 5, 2 * n - 1):
        assert np.dot(w, x ** k) == pytest.approx(1 / (k + 1) ** 2, rel=1e-12)


def test_gauss_log_rule_against_mpmath():
    # a non-polynomial test function, checked against mpmath tanh-sinh
    x, w = gauss_log_rule(40)
    ref = float(mpmath.quad(lambda t: -mpmath.log(t) * mpmath.exp(t) / (1 + t), [0, 1]))
    assert np.dot(w, np.exp(x) / (1 + x)) == pytest.approx(ref, rel=1e-13)


def _mp_log_rule(n):
    # oracle: raw moments 1/(k+1)^2 through the (ill-conditioned) Chebyshev
    # algorithm in high precision, then mpmath's symmetric eigensolver
    with mpmath.workdps(2 * n + 40):
        mu = [mpmath.mpf(1) / (k + 1) ** 2 for k in range(2 * n)]
        alpha, beta = [mu[1] / mu[0]], [mu[0]]
        prev, sig = [mpmath.mpf(0)] * (2 * n), list(mu)
        for k in range(1, n):
            new = [mpmath.mpf(0)] * (2 * n)
            for l in range(k, 2 * n - k):
                new[l] = sig[l + 1] - alpha[k - 1] * sig[l] - beta[k - 1] * prev[l]
            alpha.append(new[k + 1] / new[k] - sig[k] / sig[k - 1])
            beta.append(new[k] / sig[k - 1])
            prev, sig = sig, new
        J = mpmath.zeros(n)
        for i in range(n):
            J[i, i] = alpha[i]
            if i:
                J[i, i - 1] = J[i - 1, i] = mpmath.sqrt(beta[i])
        E, Q = mpmath.eigsy(J)
        x = np.array([float(E[i]) for i in range(n)])
        w = np.array([float(beta[0] * Q[0, i] ** 2) for i in range(n)])
    order = np.argsort(x)
    return x[order], w[order]


@pytest.mark.parametrize("n", [3, 12, 30])
def test_gauss_log_rule_against_extended_precision(n):
    x, w = gauss_log_rule(n)
    xr, wr = _mp_log_rule(n)
    assert np.allclose(x, xr, rtol=1e-12, atol=0)
    assert np.allclose(w, wr, rtol=1e-11, atol=0)


def test_gauss_log_rule_large_n_stays_exact():
    x, w = gauss_log_rule(2048)
    assert np.all(w > 0) and np.all(np.diff(x) > 0) and 0 < x[0] and x[-1] < 1
    for k in (0, 1, 7, 40):
        assert np.dot(w, x ** k) == pytest.approx(1 / (k + 1) ** 2, rel=1e-12)


@pytest.mark.parametrize("mode", ["mobius-recenter", "graded-mesh"])
def test_radial_rule_total_mass(mode):
    rho, lam = radial_rule(64, 1 - 1e-6, mode)
    # int_0^{c} log(1/rho) drho = c - c log c
    c = 1 - 1e-6
    assert np.sum(lam) == pytest.approx(c - c * math.log(c), rel=1e-12)


# --------------------------------------------------------------------------
# disk

def test_disk_constant_four():
    assert integrate_disk_green(lambda w: 4.0, 0) == pytest.approx(1, rel=1e-10)


def test_disk_derivative_of_z():
    # 4 |F'|^2 for F(z) = z, evaluated through the series derivative
    from bmokit.circle_fn import AnalyticSeries
    dF = AnalyticSeries.monomial(1).derivative()
    assert integrate_disk_green(lambda w: 4 * np.abs(dF(w)) ** 2, 0, degree=0) == \
        pytest.approx(1, rel=1e-10)


def test_disk_zero():
    assert integrate_disk_green(lambda w: np.zeros(w.shape), 0.3) == 0


@given(disk_points(0.9))
def test_disk_mass_is_green_potential(z):
    # iint 4 g_z dA = int |zeta|^2 P_z ds - |z|^2 = 1 - |z|^2
    val = integrate_disk_green(lambda w: 4.0, z)
    assert val == pytest.approx(1 - abs(z) ** 2, rel=1e-9)


def test_disk_against_dblquad_at_center():
    h = lambda w: np.cos(np.real(w)) * np.exp(np.imag(w))
    ref, _ = integrate.dblquad(
        lambda t, p: h(p * np.exp(1j * t)) * math.log(1 / p) / (2 * np.pi) * p,
        0, 1, 0, 2 * np.pi, epsabs=1e-12, epsrel=1e-12)
    assert integrate_disk_green(h, 0) == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("z", [0.3 + 0.2j, -0.5j, 0.6 * np.exp(1j), 0.8 * np.exp(2j)])
def test_disk_green_identity_polynomial(z):
    # f = |zeta^3 + zeta|^2, Laplacian 4 |3 zeta^2 + 1|^2
    f = lambda w: np.abs(w ** 3 + w) ** 2
    lap = lambda w: 4 * np.abs(3 * w ** 2 + 1) ** 2
    rhs = integrate_disk_green(lap, z, degree=4)
    lhs = _circle_side(f, z) - f(z)
    assert rhs == pytest.approx(lhs, rel=1e-9)


@pytest.mark.parametrize("r", [0.5, 0.9])
def test_disk_radius_r(r):
    # iint_{rD} 4 g^{(r)}_z = r^2 - |z|^2 (mean of |zeta|^2 over r T minus |z|^2)
    z = 0.2 - 0.1j
    assert integrate_disk_green(lambda w: 4.0, z, r=r) == pytest.approx(r * r - abs(z) ** 2,
                                                                       rel=1e-9)


def test_disk_nodes_inside():
    zeta, W = disk_green_rule(0.7j)
    assert np.all(np.abs(zeta) < 1) and np.all(W > 0)


def test_disk_rejects_z_outside():
    with pytest.raises(DomainError):
        integrate_disk_green(lambda w: 1.0, 1.0)


def test_scheme_validation():
    with pytest.raises(DomainError):
        DiskQuadScheme(M_ang=8)
    with pytest.raises(DomainError):
        DiskQuadScheme(mode="nope")


def test_auto_scale_grows_with_degree_and_z():
    a = effective_sizes(DEFAULT_SCHEME, 0, degree=8)
    b = effective_sizes(DEFAULT_SCHEME, 0.9, degree=8)
    c = effective_sizes(DEFAULT_SCHEME, 0.9, degree=64)
    assert a <= b <= c and b[0] > a[0] and c[0] > b[0]


# --------------------------------------------------------------------------
# singular patches

@pytest.mark.parametrize("z, c", [(0, 0.5), (0.3j, -0.4 + 0.2j), (0.5, 0.1)])
def test_patch_handles_abs_singularity(z, c):
    # f = |zeta - c| has Laplacian 1/|zeta - c| (integrable point singularity)
    f = lambda w: np.abs(w - c)
    lap = lambda w: 1 / np.abs(w - c)
    lhs = _circle_side(f, z) - abs(z - c)
    rhs = integrate_disk_green(lap, z, singular_points=[c])
    assert rhs == pytest.approx(lhs, rel=1e-6)


def test_patch_radii_disjoint():
    pts = [0.1, 0.15, 0.5j]
    patches = patch_radii(pts, 0.2)
    for i, (c, rho) in enumerate(patches):
        for d, s in patches[i + 1:]:
            assert abs(c - d) >= rho + s - 1e-15


@given(st.floats(0, 2))
def test_bump_range(t):
    b = float(bump(t))
    assert 0 <= b <= 1
    if t <= 0.5:
        assert b == 1
    if t >= 1:
        assert b == 0
