import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate

from bmokit.circle_fn import (AnalyticSeries, DiskPoint, FourierSeries, TruncationWarning,
                              abs_sq, analytic_completion, as_fourier, boundary_product,
                              d_holomorphic, dilate, evaluate, grad_sq_harmonic,
                              harmonic_conjugate, load_samples_csv, load_series_json,
                              poisson_extend, save_series_json, series_from_json_dict)
from bmokit.corpus import gen_log_singularity
from bmokit.errors import DomainError

from conftest import analytic_series, complex_series, cos_theta, disk_points, real_series


# --------------------------------------------------------------------------
# construction and validation

def test_even_length_rejected():
    with pytest.raises(DomainError):
        FourierSeries(np.zeros(4))


def test_non_finite_rejected():
    with pytest.raises(DomainError):
        FourierSeries(np.array([0, np.nan, 0]))


def test_real_flag_requires_hermitian_symmetry():
    with pytest.raises(DomainError):
        FourierSeries(np.array([1, 0, 2], dtype=complex), is_real=True)


def test_disk_point_outside_rejected():
    with pytest.raises(DomainError):
        DiskPoint(1.0)


# --------------------------------------------------------------------------
# evaluate

def test_evaluate_single_mode():
    assert evaluate(FourierSeries.from_dict({1: 1}), 0.0) == pytest.approx(1)


def test_evaluate_constant():
    assert evaluate(FourierSeries.constant(5), 1.234) == pytest.approx(5)


def test_evaluate_cos():
    assert evaluate(cos_theta(), np.pi / 3) == pytest.approx(0.5, abs=1e-15)


@given(complex_series(), st.floats(0, 2 * np.pi))
def test_evaluate_matches_direct_sum(f, t):
    n = f.indices
    direct = np.sum(f.coeffs * np.exp(1j * n * t))
    assert abs(evaluate(f, t) - direct) <= 1e-12 * (1 + np.sum(np.abs(f.coeffs)))


# --------------------------------------------------------------------------
# poisson_extend

def test_poisson_extend_trivial():
    assert poisson_extend(FourierSeries.from_dict({1: 1}), 0) == 0
    assert poisson_extend(FourierSeries.constant(1), 0.3 - 0.4j) == pytest.approx(1)


def test_poisson_extend_cos_at_half():
    assert poisson_extend(cos_theta(), 0.5) == pytest.approx(0.5, abs=1e-15)


@pytest.mark.parametrize("z", [0.5, 0.3 + 0.6j, -0.8j])
def test_poisson_extend_against_quad(z):
    # independent oracle: adaptive quadrature of the Poisson integral
    f = FourierSeries.from_dict({-2: 0.3j, 0: 1, 1: 2 - 1j, 3: 0.5})

    def kern(t, part):
        zeta = np.exp(1j * t)
        v = evaluate(f, t) * (1 - abs(z) ** 2) / abs(zeta - z) ** 2 / (2 * np.pi)
        return v.real if part == 0 else v.imag

    ref = complex(integrate.quad(kern, 0, 2 * np.pi, args=(0,), limit=200, epsabs=1e-13)[0],
                  integrate.quad(kern, 0, 2 * np.pi, args=(1,), limit=200, epsabs=1e-13)[0])
    assert abs(poisson_extend(f, z) - ref) < 1e-10


@given(real_series(), disk_points())
def test_real_extension_is_real(u, z):
    assert complex(poisson_extend(u, z)).imag == 0


# --------------------------------------------------------------------------
# conjugate / completion

def test_conjugate_of_cos_is_sin():
    v = harmonic_conjugate(cos_theta())
    assert np.allclose(v.coeffs, [0.5j, 0, -0.5j])


def test_conjugate_of_constant_is_zero():
    assert np.all(harmonic_conjugate(FourierSeries.constant(3.0)).coeffs == 0)


@given(real_series())
def test_double_conjugate(u):
    vv = harmonic_conjugate(harmonic_conjugate(u))
    expect = -u.coeffs.copy()
    expect[u.degree] = 0
    assert np.allclose(vv.coeffs, expect, atol=1e-15)


def test_completion_of_cos_is_z():
    F = analytic_completion(cos_theta())
    assert np.allclose(F.coeffs, [0, 1])


def test_completion_of_zero():
    assert analytic_completion(FourierSeries.constant(0.0)).is_constant()


def test_completion_of_log_matches_quadrature():
    # coefficients of log|1 - zeta| by brute-force midpoint quadrature (log singularity
    # at theta = 0 sits between nodes)
    N = 32
    u, F = gen_log_singularity(N)
    M = 1 << 16
    t = 2 * np.pi * (np.arange(M) + 0.5) / M
    vals = np.log(np.abs(1 - np.exp(1j * t)))
    for n in (1, 2, 5, N):
        cn = np.mean(vals * np.exp(-1j * n * t))
        assert abs(cn - u.coeff(n)) < 1e-4
    assert np.allclose(F.coeffs[1:], -1 / np.arange(1, N + 1))


@given(real_series(), disk_points())
def test_completion_real_part(u, z):
    F = analytic_completion(u)
    assert abs(complex(F(z)).real - complex(poisson_extend(u, z)).real) < 1e-11


# --------------------------------------------------------------------------
# derivatives

def test_d_holomorphic_examples():
    assert d_holomorphic(AnalyticSeries.monomial(1), 0.4 + 0.1j) == pytest.approx(1)
    assert d_holomorphic(AnalyticSeries.monomial(2), 0.3) == pytest.approx(0.6)
    _, F = gen_log_singularity(64)
    # -log(1 - z) = sum z^n / n has derivative 1 at the origin
    assert d_holomorphic(AnalyticSeries(-F.coeffs), 0) == pytest.approx(1)


def test_grad_sq_constant():
    assert grad_sq_harmonic(FourierSeries.constant(2.0), 0.3j) == 0


@pytest.mark.parametrize("z", [0, 0.5, 0.2 - 0.7j])
def test_grad_sq_cos(z):
    # u = Re z has |grad u| = 1 everywhere
    assert grad_sq_harmonic(cos_theta(), z) == pytest.approx(1)


def test_grad_sq_re_z2():
    u = FourierSeries.from_dict({-2: 0.5, 2: 0.5}, is_real=True)
    assert grad_sq_harmonic(u, 0.5) == pytest.approx(1)


@given(real_series(nonconstant=True), disk_points(0.8))
def test_grad_sq_matches_finite_differences(u, z):
    h = 1e-5

    def U(w):
        return complex(poisson_extend(u, w)).real

    gx = (U(z + h) - U(z - h)) / (2 * h)
    gy = (U(z + 1j * h) - U(z - 1j * h)) / (2 * h)
    scale = 1 + np.sum(np.abs(u.coeffs) * np.abs(u.indices)) ** 2
    assert abs(grad_sq_harmonic(u, z) - (gx * gx + gy * gy)) < 1e-6 * scale


# --------------------------------------------------------------------------
# products and dilation

def test_product_unit():
    z = FourierSeries.from_dict({1: 1})
    p = boundary_product(z, z.conj())
    assert np.allclose(p.coeffs, [0, 0, 1, 0, 0])


def test_product_identity():
    g = FourierSeries.from_dict({-1: 2j, 2: 3})
    p = boundary_product(FourierSeries.constant(1), g)
    assert np.allclose(p.coeffs, g.coeffs)


def test_product_cos_squared():
    p = boundary_product(cos_theta(), cos_theta())
    assert np.allclose(p.coeffs, [0.25, 0, 0.5, 0, 0.25])
    assert p.is_real


@given(complex_series(4), complex_series(4), st.floats(0, 2 * np.pi))
def test_product_pointwise(f, g, t):
    lhs = evaluate(boundary_product(f, g), t)
    assert abs(lhs - evaluate(f, t) * evaluate(g, t)) < 1e-10 * (
        1 + np.sum(np.abs(f.coeffs)) * np.sum(np.abs(g.coeffs)))


def test_product_truncation_warns():
    z3 = FourierSeries.from_dict({3: 1})
    with pytest.warns(TruncationWarning):
        p = boundary_product(z3, z3, n_max=4)
    assert p.degree == 4


@given(analytic_series(), st.floats(0, 2 * np.pi))
def test_abs_sq_pointwise(F, t):
    assert abs(evaluate(abs_sq(F), t) - abs(evaluate(F, t)) ** 2) < 1e-10 * (
        1 + np.sum(np.abs(F.coeffs)) ** 2)


def test_dilate_examples():
    assert dilate(FourierSeries.constant(3.0), 0.4).coeffs[0] == 3
    assert np.allclose(dilate(AnalyticSeries.monomial(1), 0.5).coeffs, [0, 0.5])
    with pytest.raises(DomainError):
        dilate(cos_theta(), 1.0)


@given(complex_series(), st.floats(0.05, 0.95), disk_points(0.9))
def test_dilate_is_evaluation_at_r_zeta(f, r, z):
    assert abs(poisson_extend(dilate(f, r), z) - poisson_extend(f, r * z)) < 1e-11 * (
        1 + np.sum(np.abs(f.coeffs)))


# --------------------------------------------------------------------------
# I/O

@given(st.one_of(analytic_series(), real_series(), complex_series()))
def test_json_roundtrip(f):
    g = series_from_json_dict(json.loads(json.dumps(f.to_json_dict())))
    assert type(g) is type(f)
    assert np.array_equal(g.coeffs, f.coeffs)
    assert g.is_real == f.is_real


def test_save_load(tmp_path):
    f = FourierSeries.from_dict({-1: 1j, 2: 0.25})
    save_series_json(f, tmp_path / "f.json")
    assert np.array_equal(load_series_json(tmp_path / "f.json").coeffs, f.coeffs)


def test_malformed_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(DomainError):
        load_series_json(p)
    with pytest.raises(DomainError):
        series_from_json_dict({"coeffs": [[5, 1, 0]], "degree": 2})


def _write_csv(path, f, M):
    t = 2 * np.pi * np.arange(M) / M
    v = evaluate(f, t)
    path.write_text("theta,re,im\n" + "".join(
        f"{float(a)!r},{float(b.real)!r},{float(b.imag)!r}\n" for a, b in zip(t, v)))


def test_csv_roundtrip(tmp_path):
    f = FourierSeries.from_dict({-3: 0.5, 0: 1, 2: -1j})
    _write_csv(tmp_path / "s.csv", f, 64)
    g = load_samples_csv(tmp_path / "s.csv", degree=3)
    assert np.allclose(g.coeffs, f.coeffs, atol=1e-14)


@pytest.mark.parametrize("body, row", [
    ("theta,re,im\n0,1,0\n1.5,abc,0\n", ":3:"),
    ("0,1,0\n1,1\n", ":2:"),
    ("0,1,0\n3,1,0\n2,1,0\n5,1,0\n", ":3:"),
    ("0,1,0\n7,1,0\n", ":2:"),
])
def test_csv_diagnostics_name_the_row(tmp_path, body, row):
    p = tmp_path / "bad.csv"
    p.write_text(body)
    with pytest.raises(DomainError, match=row):
        load_samples_csv(p)


def test_csv_nonuniform_spacing(tmp_path):
    t = 2 * np.pi * np.arange(8) / 8
    t[5] += 0.01
    (tmp_path / "n.csv").write_text("".join(f"{float(x)!r},1,0\n" for x in t))
    with pytest.raises(DomainError, match="row 6"):
        load_samples_csv(tmp_path / "n.csv")


def test_as_fourier_of_analytic():
    F = AnalyticSeries(np.array([1, 2, 3], dtype=complex))
    f = as_fourier(F)
    assert f.degree == 2 and np.allclose(f.coeffs, [0, 0, 1, 2, 3])


def test_recentered_vanishes_at_point():
    F = AnalyticSeries(np.array([1, 2 - 1j, 0.5, 3j]))
    z = 0.3 - 0.4j
    assert abs(F.recentered(z)(z)) < 1e-15
    assert math.isclose(abs(F.recentered(z)(0) - (F(0) - F(z))), 0, abs_tol=1e-14)
