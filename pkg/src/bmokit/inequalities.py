"""Numerical checks of the BMO inequalities with their explicit constants.

Every check returns an :class:`InequalityResult` holding both sides, the
constant (symbolic form plus value) and the margin ``rhs - lhs``.  Norms
entering a right-hand side are computed by the sup searches in
:mod:`bmokit.norms`; a search that misses the true sup under-estimates the
norm and therefore only makes the check harder to pass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .circle_fn import (AnalyticSeries, DiskPoint, FourierSeries, Series,
                        analytic_completion, as_complex, as_fourier, dilate,
                        poisson_extend)
from .errors import DomainError
from .identities import (CheckReport, DEFAULT_SCHEME, DiskQuadScheme, TOL,
                         circle_poisson_integral, disk_green_integral, h1_identity_residual,
                         interior_zeros, trimmed)
from .norms import (DEFAULT_GRID, GarsiaFunction, MeanDeviation, NormReport, SearchGrid,
                    _normalized, _rescaled, abs_integral_complex, bmo1, bmo1_at, bmo2,
                    bmo_pair, centered, garsia_at, sign_split_integral)
from .quadrature import circle_grid_size

E = math.e


@dataclass(frozen=True)
class Constant:
    symbol: str
    value: float

    def to_dict(self) -> dict:
        return {"symbol": self.symbol, "value": self.value, "decimal": f"{self.value:.10g}"}


ONE = Constant("1", 1.0)
UCHIYAMA = Constant("1", 1.0)
MAIN_ANALYTIC = Constant("e/4", E / 4)
MAIN_REAL = Constant("e/2", E / 2)
DUALITY_ANALYTIC = Constant("2*sqrt(e)", 2 * math.sqrt(E))
DUALITY_REAL = Constant("sqrt(2*e)", math.sqrt(2 * E))
THEOREM1 = DUALITY_ANALYTIC
THEOREM2 = Constant("21", 21.0)
THEOREM2_SHARP = Constant("e^(2/3)*5^(1/3)*3^(5/3)", E ** (2 / 3) * 5 ** (1 / 3) * 3 ** (5 / 3))
JN_SERIES_MAJORANT = Constant("pi/2 + 2/sqrt(e)", math.pi / 2 + 2 / math.sqrt(E))
JN = Constant("3", 3.0)

# relative tolerances: quadrature-based sides vs coefficient-exact sides
INEQ_TOL = {
    "quadrature": 1e-4,
    "norm": 1e-4,
    "moments": 1e-9,
    "h1": 1e-5,
}

K_MAX_LIMIT = 6
EXP_GRID_MIN = 2048


@dataclass
class InequalityResult:
    """``lhs <= rhs`` (or ``<`` when ``strict``) with margin ``rhs - lhs``.

    Passing means ``margin >= -tol * tol_scale`` where ``tol_scale``
    defaults to ``max(|lhs|, |rhs|)``; strict checks need ``margin > 0``.
    """

    name: str
    lhs: float
    rhs: float
    constant: Constant
    tol: float = INEQ_TOL["quadrature"]
    strict: bool = False
    witness: dict = field(default_factory=dict)
    resolution: dict = field(default_factory=dict)
    tol_scale: Optional[float] = None
    notes: dict = field(default_factory=dict)

    @property
    def margin(self) -> float:
        return float(self.rhs - self.lhs)

    @property
    def scale(self) -> float:
        if self.tol_scale is not None:
            return self.tol_scale
        return max(abs(self.lhs), abs(self.rhs))

    @property
    def relative_margin(self) -> float:
        s = max(abs(self.lhs), abs(self.rhs))
        return self.margin / s if s > 0 else 0.0

    @property
    def passed(self) -> bool:
        if self.strict:
            return self.margin > 0
        return self.margin >= -self.tol * self.scale

    def to_json_dict(self) -> dict:
        out = {"name": self.name, "kind": "inequality", "lhs": float(self.lhs),
               "rhs": float(self.rhs), "margin": self.margin,
               "relative_margin": self.relative_margin, "tol": self.tol,
               "strict": self.strict, "pass": self.passed,
               "constant": self.constant.to_dict(), "witness": self.witness,
               "resolution": self.resolution}
        if self.notes:
            out["notes"] = self.notes
        return out


def _zin(z) -> list:
    z = as_complex(z)
    return [z.real, z.imag]


def _norm_value(f: Series, grid: SearchGrid, which: str = "bmo2",
                norm: Optional[NormReport] = None) -> NormReport:
    if norm is not None:
        return norm
    return bmo2(f, grid) if which == "bmo2" else bmo1(f, grid)


def _require_nonconstant(f: Series, what: str):
    if f.is_constant():
        raise DomainError(f"{what}: constant input, the norm vanishes")


def _completion_derivative(G: Series) -> AnalyticSeries:
    """``F'`` where ``F`` is ``G`` itself (analytic) or the completion of real ``G``."""
    if isinstance(G, AnalyticSeries):
        return G.derivative()
    if not G.is_real:
        raise DomainError("expected an analytic or a real series")
    return analytic_completion(G).derivative()


def _real_part(f: Series):
    return lambda w: np.real(poisson_extend(f, w))


def _hp_norm(h: Series, z, degree: int, r: float = 1.0) -> float:
    """``||h P_z^{(r)}||_{L^1}`` on ``rT``."""
    val, _ = circle_poisson_integral(lambda w: np.abs(h(w)), z, degree, r, M_min=4096)
    return float(val)


# --------------------------------------------------------------------------
# Uchiyama's lemma and the main lemma

def check_uchiyama(G: Optional[Series], F: AnalyticSeries, z, r: float = 1.0,
                   scheme: DiskQuadScheme = DEFAULT_SCHEME, grid: SearchGrid = DEFAULT_GRID,
                   norm: Optional[NormReport] = None,
                   tol: float = INEQ_TOL["quadrature"]) -> InequalityResult:
    """``int_{rT} |F| e^phi P^{(r)}_z ds >= iint_{rD} Lap(phi) e^phi |F| g^{(r)}_z dA``.

    ``phi = -(Poisson variance of G at zeta) / ||G||^2_{BMO_2}``, which is
    subharmonic with values in ``[-1, 0]``; ``G=None`` gives ``phi = 0``.
    For real ``G`` the Laplacian is ``2 |grad G|^2 / ||G||^2``.
    """
    z = as_complex(z)
    DiskPoint(z, r_max=r)
    if not 0 < r <= 1:
        raise DomainError("need 0 < r <= 1")
    Ft = trimmed(F, r)
    if G is None:
        g_norm = None

        def phi(w):
            return np.zeros(np.shape(w))

        def lap_phi(w):
            return np.zeros(np.shape(w))

        deg = Ft.degree
    else:
        _require_nonconstant(G, "check_uchiyama")
        rep = _norm_value(G, grid, "bmo2", norm)
        g_norm = rep.value
        Gt = trimmed(G, r)
        var = GarsiaFunction(G)
        dG = _completion_derivative(Gt)
        factor = 4.0 if isinstance(G, AnalyticSeries) else 2.0

        def phi(w):
            return -var(w) / g_norm ** 2

        def lap_phi(w):
            return factor * np.abs(dG(w)) ** 2 / g_norm ** 2

        deg = Ft.degree + 2 * Gt.degree + 8

    lhs_val, M = circle_poisson_integral(lambda w: np.abs(Ft(w)) * np.exp(phi(w)), z,
                                         deg, r, M_min=4096)
    # |F| has conical points at its zeros; only then is refinement needed
    zeros = interior_zeros(Ft, r)
    rhs_val, sizes = disk_green_integral(
        lambda w: lap_phi(w) * np.exp(phi(w)) * np.abs(Ft(w)), z, scheme, r, degree=deg,
        singular_points=zeros, refine_rtol=tol / 10 if zeros else None)
    # the lemma reads circle >= area, so lhs/rhs are swapped into lhs <= rhs
    return InequalityResult(
        "uchiyama", float(rhs_val), float(lhs_val), UCHIYAMA, tol,
        witness={"z": _zin(z), "r": r, "phi": "zero" if G is None else "garsia"},
        resolution={"circle_M": M, "disk": list(sizes), **scheme.to_dict()},
        notes={} if g_norm is None else {"bmo2_G": g_norm})


def check_main_lemma(G: Series, f: AnalyticSeries, z,
                     scheme: DiskQuadScheme = DEFAULT_SCHEME, grid: SearchGrid = DEFAULT_GRID,
                     norm: Optional[NormReport] = None,
                     tol: float = INEQ_TOL["quadrature"]) -> InequalityResult:
    """``iint |G'|^2 |f| g_z dA <= (e/4) ||f P_z||_1 ||G||^2_{BMO_2}`` (analytic ``G``)
    or ``iint |grad G|^2 |f| g_z dA <= (e/2) ||f P_z||_1 ||G||^2_{BMO_2}`` (real ``G``)."""
    z = as_complex(z)
    DiskPoint(z)
    _require_nonconstant(G, "check_main_lemma")
    analytic = isinstance(G, AnalyticSeries)
    const = MAIN_ANALYTIC if analytic else MAIN_REAL
    rep = _norm_value(G, grid, "bmo2", norm)
    dG = _completion_derivative(G)
    deg = 2 * G.degree + f.degree + 8
    if f.is_constant() and f.coeffs[0] == 0:
        lhs, sizes, fp = 0.0, (0, 0), 0.0
    else:
        zeros = interior_zeros(f)
        lhs, sizes = disk_green_integral(
            lambda w: np.abs(dG(w)) ** 2 * np.abs(f(w)), z, scheme, degree=deg,
            singular_points=zeros, refine_rtol=tol / 10 if zeros else None)
        fp = _hp_norm(f, z, deg)
    rhs = const.value * fp * rep.value ** 2
    return InequalityResult(
        "main_lemma" + ("" if analytic else "_real"), float(lhs), float(rhs), const, tol,
        witness={"z": _zin(z)}, resolution={"disk": list(sizes), **scheme.to_dict(),
                                            "grid": grid.to_dict()},
        notes={"bmo2": rep.value, "fP_L1": fp})


def check_duality_bound(G: Series, h: AnalyticSeries, z, grid: SearchGrid = DEFAULT_GRID,
                        norm: Optional[NormReport] = None,
                        tol: float = INEQ_TOL["quadrature"]) -> InequalityResult:
    """``|int (F - F(z)) conj(h) P_z ds| <= 2 sqrt(e) ||F||_{BMO_2} ||h P_z||_1``,
    or for real ``u``: ``|int (u - u(z)) Re(h) P_z ds| <= sqrt(2e) ||u||_{BMO_2} ||h P_z||_1``."""
    z = as_complex(z)
    DiskPoint(z)
    _require_nonconstant(G, "check_duality_bound")
    if h.is_constant() and h.coeffs[0] == 0:
        raise DomainError("check_duality_bound: h must not vanish identically")
    analytic = isinstance(G, AnalyticSeries)
    rep = _norm_value(G, grid, "bmo2", norm)
    deg = G.degree + h.degree
    if analytic:
        G0 = G.recentered(z)
        pairing, M = circle_poisson_integral(lambda w: G0(w) * np.conj(h(w)), z, deg,
                                             M_min=4096)
        const = DUALITY_ANALYTIC
    else:
        if not G.is_real:
            raise DomainError("expected an analytic or a real series")
        uz = float(np.real(poisson_extend(G, z)))
        pairing, M = circle_poisson_integral(
            lambda w: (np.real(poisson_extend(G, w)) - uz) * np.real(h(w)), z, deg,
            M_min=4096)
        const = DUALITY_REAL
    hp = _hp_norm(h, z, deg)
    return InequalityResult(
        "duality" + ("" if analytic else "_real"), abs(pairing), const.value * rep.value * hp,
        const, tol, witness={"z": _zin(z)},
        resolution={"circle_M": M, "grid": grid.to_dict()},
        notes={"bmo2": rep.value, "hP_L1": hp})


# --------------------------------------------------------------------------
# norm comparisons

def _ratio_notes(n1: NormReport, n2: NormReport) -> dict:
    return {"bmo1": n1.value, "bmo2": n2.value,
            "ratio": n2.value / n1.value if n1.value > 0 else None,
            "bmo1_witness": n1.witness.to_dict(), "bmo2_witness": n2.witness.to_dict()}


def _comparison(f: Series, consts, name: str, grid: SearchGrid,
                tol: float) -> list[InequalityResult]:
    _require_nonconstant(f, name)
    n1, n2 = bmo_pair(f, grid)
    notes = _ratio_notes(n1, n2)
    res = {"grid": grid.to_dict()}
    out = [InequalityResult(f"{name}_lower", n1.value, n2.value, ONE, tol,
                            witness={"z": _zin(n2.witness.z)}, resolution=res,
                            tol_scale=n2.value, notes=notes)]
    for tag, c in consts:
        out.append(InequalityResult(f"{name}_{tag}", n2.value, c.value * n1.value, c, tol,
                                    witness={"z": _zin(n2.witness.z)}, resolution=res,
                                    tol_scale=n2.value, notes=notes))
    return out


def check_theorem1(F: AnalyticSeries, grid: SearchGrid = DEFAULT_GRID,
                   tol: float = INEQ_TOL["norm"]) -> list[InequalityResult]:
    """``bmo1 <= bmo2 <= 2 sqrt(e) bmo1`` for analytic ``F``."""
    if not isinstance(F, AnalyticSeries):
        raise DomainError("check_theorem1 needs an analytic series")
    return _comparison(F, [("upper", THEOREM1)], "theorem1", grid, tol)


def check_theorem2(u: FourierSeries, grid: SearchGrid = DEFAULT_GRID,
                   tol: float = INEQ_TOL["norm"]) -> list[InequalityResult]:
    """``bmo1 <= bmo2 <= 21 bmo1`` and the sharper ``e^(2/3) 5^(1/3) 3^(5/3)``."""
    if not (isinstance(u, FourierSeries) and u.is_real):
        raise DomainError("check_theorem2 needs a real series")
    return _comparison(u, [("upper", THEOREM2), ("sharp", THEOREM2_SHARP)], "theorem2",
                       grid, tol)


# --------------------------------------------------------------------------
# moments and John-Nirenberg

def moment_bound_constant(m: int) -> Constant:
    """Constant ``C_m`` in ``int |F - F(z)|^m P_z ds <= C_m ||F||^m_{BMO_2}``."""
    if m < 0:
        raise DomainError("moment order must be non-negative")
    k, odd = divmod(m, 2)
    if odd:
        val = (E / 4) ** k * (math.factorial(2 * k + 1) / (2 ** k * math.factorial(k))) ** 2
        return Constant(f"(e/4)^{k} * ((2*{k}+1)!/(2^{k}*{k}!))^2", val)
    return Constant(f"e^{k} * ({k}!)^2", E ** k * math.factorial(k) ** 2)


def circle_moment(F: AnalyticSeries, z, m: float, M_min: int = 4096) -> tuple[float, int]:
    """``int |F - F(z)|^m P_z ds``; odd powers are kinked at zeros on the circle."""
    z = as_complex(z)
    F0 = F.recentered(z)
    if m % 2 == 0:
        val, M = circle_poisson_integral(lambda w: np.abs(F0(w)) ** m, z,
                                         max(1, math.ceil(m)) * F.degree, M_min=M_min)
        return float(val), M
    fs = as_fourier(centered(F))
    M = circle_grid_size(max(1, math.ceil(m)) * F.degree, z, M_min, tol=1e-15)
    theta = 2 * np.pi * np.arange(M) / M
    P = (1 - abs(z) ** 2) / np.abs(1 - np.conj(z) * np.exp(1j * theta)) ** 2 / (2 * np.pi)
    fz = complex(poisson_extend(fs, z))
    val = abs_integral_complex(fs, fz, z, fs.samples(M) - fz, P, lambda a: a ** m)
    return float(val), M


def check_moment_bounds(F: AnalyticSeries, z, k_max: int = 3,
                        grid: SearchGrid = DEFAULT_GRID, norm: Optional[NormReport] = None,
                        tol: float = INEQ_TOL["moments"]) -> list[InequalityResult]:
    """Moment bounds for ``m = 2 .. 2 k_max + 1`` plus the one-step recursion
    ``int |F-F(z)|^m P_z <= e (m/2)^2 int |F-F(z)|^(m-2) P_z ||F||^2``."""
    if int(k_max) != k_max or not 1 <= k_max <= K_MAX_LIMIT:
        raise DomainError(f"k_max must be an integer in [1, {K_MAX_LIMIT}]")
    if not isinstance(F, AnalyticSeries):
        raise DomainError("check_moment_bounds needs an analytic series")
    _require_nonconstant(F, "check_moment_bounds")
    z = as_complex(z)
    DiskPoint(z)
    rep = _norm_value(F, grid, "bmo2", norm)
    b = rep.value
    top = 2 * k_max + 1
    moments = {0: 1.0}
    Ms = {}
    for m in range(1, top + 1):
        moments[m], Ms[m] = circle_moment(F, z, m)
    out = []
    for m in range(2, top + 1):
        c = moment_bound_constant(m)
        out.append(InequalityResult(f"moment_m{m}", moments[m], c.value * b ** m, c, tol,
                                    witness={"z": _zin(z), "m": m},
                                    resolution={"circle_M": Ms[m]}, notes={"bmo2": b}))
        step = Constant(f"e*({m}/2)^2", E * (m / 2) ** 2)
        out.append(InequalityResult(f"moment_step_m{m}", moments[m],
                                    step.value * moments[m - 2] * b ** 2, step, tol,
                                    witness={"z": _zin(z), "m": m},
                                    resolution={"circle_M": Ms[m]}, notes={"bmo2": b}))
    return out


def jn_bound(x: float) -> float:
    """``3 / (1 - x)^(3/2)``."""
    return 3.0 / (1.0 - x) ** 1.5


def jn_threshold(bmo2_value: float) -> float:
    """Largest admissible ``eps``: ``2 / (sqrt(e) ||F||_{BMO_2})``."""
    return 2.0 / (math.sqrt(E) * bmo2_value)


def _check_eps(eps: float, threshold: float, text: str):
    if not eps > 0:
        raise DomainError("eps must be positive")
    if not eps < threshold:
        raise DomainError(f"eps = {eps:.6g} violates the admissibility condition "
                          f"eps < {text} = {threshold:.6g}")


def exponential_integral(F: Series, z, eps: float, M_min: int = EXP_GRID_MIN) -> tuple[float, int]:
    """``int e^{eps |f - f(z)|} P_z ds``.

    Trapezoid rule on at least ``max(4N, M_min)`` nodes; the kinks of
    ``|f - f(z)|`` are split off at its zeros on the circle.
    """
    z = as_complex(z)
    N = F.degree
    M = circle_grid_size(N, z, max(4 * N, M_min), tol=1e-15)
    theta = 2 * np.pi * np.arange(M) / M
    P = (1 - abs(z) ** 2) / np.abs(1 - np.conj(z) * np.exp(1j * theta)) ** 2 / M
    fs = as_fourier(centered(F))
    if not fs.is_real:
        fz = complex(poisson_extend(fs, z))
        val = abs_integral_complex(fs, fz, z, fs.samples(M) - fz, P * M / (2 * np.pi),
                                   lambda a: np.exp(eps * a))
        return val, M
    fz = float(np.real(poisson_extend(fs, z)))
    v = fs.samples(M).real - fz
    n, c = fs.indices, fs.coeffs
    Pw = P * M / (2 * np.pi)

    def v_exact(t):
        return np.real(np.exp(1j * np.outer(t, n)) @ c) - fz

    def dv_exact(t):
        return np.real(np.exp(1j * np.outer(t, n)) @ (1j * n * c))

    val = sign_split_integral(v, np.exp(eps * v) * Pw, np.exp(-eps * v) * Pw, v_exact, dv_exact)
    return val, M


def check_strong_jn(F: Series, z, eps: float, grid: SearchGrid = DEFAULT_GRID,
                    norm: Optional[NormReport] = None) -> InequalityResult:
    """``int e^{eps|F-F(z)|} P_z ds < 3 / (1 - eps sqrt(e)/2 ||F||_{BMO_2})^{3/2}``.

    A real series takes the corollary form
    ``< 3 / (1 - eps sqrt(2e) ||u||_{BMO_2})^{3/2}``.
    """
    z = as_complex(z)
    DiskPoint(z)
    _require_nonconstant(F, "check_strong_jn")
    real = isinstance(F, FourierSeries) and F.is_real
    if not (real or isinstance(F, AnalyticSeries)):
        raise DomainError("expected an analytic or a real series")
    rep = _norm_value(F, grid, "bmo2", norm)
    b = rep.value
    if real:
        threshold = 1.0 / (math.sqrt(2 * E) * b)
        _check_eps(eps, threshold, "1/(sqrt(2e)*||u||_BMO2)")
        x = eps * math.sqrt(2 * E) * b
        name = "strong_jn_real"
    else:
        threshold = jn_threshold(b)
        _check_eps(eps, threshold, "2/(sqrt(e)*||F||_BMO2)")
        x = eps * math.sqrt(E) / 2 * b
        name = "strong_jn"
    lhs, M = exponential_integral(F, z, eps)
    return InequalityResult(name, lhs, jn_bound(x), JN, strict=True,
                            witness={"z": _zin(z), "eps": eps,
                                     "eps_frac": eps / threshold},
                            resolution={"circle_M": M, "grid": grid.to_dict()},
                            notes={"bmo2": b, "x": x, "threshold": threshold})


def check_jn_bmo1_corollary(F: AnalyticSeries, z, eps: float, grid: SearchGrid = DEFAULT_GRID,
                            norm: Optional[NormReport] = None) -> InequalityResult:
    """``int e^{eps|F-F(z)|} P_z ds < 3 / (1 - eps e ||F||_{BMO_1})^{3/2}``."""
    z = as_complex(z)
    DiskPoint(z)
    if not isinstance(F, AnalyticSeries):
        raise DomainError("check_jn_bmo1_corollary needs an analytic series")
    _require_nonconstant(F, "check_jn_bmo1_corollary")
    rep = _norm_value(F, grid, "bmo1", norm)
    b = rep.value
    threshold = 1.0 / (E * b)
    _check_eps(eps, threshold, "1/(e*||F||_BMO1)")
    x = eps * E * b
    lhs, M = exponential_integral(F, z, eps)
    return InequalityResult("jn_bmo1", lhs, jn_bound(x), JN, strict=True,
                            witness={"z": _zin(z), "eps": eps, "eps_frac": eps / threshold},
                            resolution={"circle_M": M, "grid": grid.to_dict()},
                            notes={"bmo1": b, "x": x, "threshold": threshold})


# --------------------------------------------------------------------------
# the series behind the John-Nirenberg bound

JN_X_MAX = 1 - 1e-6


def jn_series_closed_form(x):
    """``1/(1-x^2) + (x arcsin x + (2/sqrt e) x) / (1-x^2)^{3/2}``."""
    x = np.asarray(x, dtype=float)
    q = 1 - x * x
    return 1 / q + (x * np.arcsin(x) + 2 / math.sqrt(E) * x) / q ** 1.5


def jn_series_partial(x, rtol: float = 1e-14, max_terms: int = 10 ** 7):
    """``sum (k!)^2/(2k)! (2x)^{2k} + (2/sqrt e) x sum (2k+1)!/(4^k (k!)^2) x^{2k}``.

    Terms come from their ratio recurrences and the sum stops once every
    new term is below ``rtol`` of the running total.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    sa, sb = np.ones_like(x), np.ones_like(x)
    idx = np.arange(x.size)     # entries still summing
    x2 = x * x
    a = np.ones_like(x)         # (k!)^2/(2k)! (2x)^{2k}
    b = np.ones_like(x)         # (2k+1)!/(4^k (k!)^2) x^{2k}
    pa, pb = sa.copy(), sb.copy()
    for k in range(max_terms):
        a = a * 2 * x2 * (k + 1) / (2 * k + 1)
        b = b * x2 * (2 * k + 3) / (2 * (k + 1))
        pa += a
        pb += b
        done = (a <= rtol * pa) & (b <= rtol * pb)
        if np.all(done) or k % 64 == 63:
            # retire converged entries so small x stop paying for large x
            sa[idx[done]], sb[idx[done]] = pa[done], pb[done]
            keep = ~done
            idx, x2, a, b, pa, pb = idx[keep], x2[keep], a[keep], b[keep], pa[keep], pb[keep]
            if idx.size == 0:
                break
    sa[idx], sb[idx] = pa, pb
    return sa + 2 / math.sqrt(E) * x * sb


def jn_series_check(x, tol: float = 1e-10) -> tuple[CheckReport, InequalityResult]:
    """(a) partial sums against the closed form; (b) closed form ``<= 3/(1-x)^{3/2}``."""
    x = float(x)
    if not 0 <= x <= JN_X_MAX:
        raise DomainError(f"x must lie in [0, {JN_X_MAX}]")
    series = float(jn_series_partial(x)[0])
    closed = float(jn_series_closed_form(x))
    ident = CheckReport("jn_series", series, closed, tol, {"x": x},
                        {"method": "adaptive partial sums", "rtol": 1e-14})
    bound = InequalityResult("jn_series_bound", closed, jn_bound(x), JN, tol=0.0,
                             witness={"x": x},
                             notes={"majorant": JN_SERIES_MAJORANT.value / (1 - x) ** 1.5})
    return ident, bound


def jn_majorant_constant() -> InequalityResult:
    """``pi/2 + 2/sqrt(e) < 3``."""
    return InequalityResult("jn_majorant_constant", JN_SERIES_MAJORANT.value, 3.0,
                            JN_SERIES_MAJORANT, tol=0.0, strict=True)


# --------------------------------------------------------------------------
# the h1 lemma

def check_h1_lemma(u: FourierSeries, z, scheme: DiskQuadScheme = DEFAULT_SCHEME,
                   tol: float = INEQ_TOL["h1"]) -> tuple[CheckReport, InequalityResult]:
    """``iint |grad u|^2 / ((u-u(z))^2+1)^{3/2} g_z dA <= int |u - u(z)| P_z ds``.

    Returns the underlying Green identity and the inequality.  The
    elementary step ``sqrt(1+x^2) <= 1+|x|`` is checked on the circle grid
    and reported in the notes.
    """
    if not (isinstance(u, FourierSeries) and u.is_real):
        raise DomainError("check_h1_lemma needs a real series")
    z = as_complex(z)
    DiskPoint(z)
    if u.is_constant():
        ident = CheckReport("h1_identity", 0.0, 0.0, TOL["h1_identity"], {"z": _zin(z)})
        return ident, InequalityResult("h1_lemma", 0.0, 0.0, ONE, tol, witness={"z": _zin(z)})
    ident = h1_identity_residual(u, z, scheme=scheme)
    dev = bmo1_at(u, z, M_min=4096)
    M = circle_grid_size(u.degree, z, 4096)
    x = u.samples(M).real - float(np.real(poisson_extend(u, z)))
    step_ok = bool(np.all(np.sqrt(1 + x * x) <= 1 + np.abs(x)))
    res = InequalityResult("h1_lemma", float(np.real(ident.lhs)), dev, ONE, tol,
                           witness={"z": _zin(z)}, resolution=ident.resolution,
                           notes={"elementary_step_holds": step_ok,
                                  "circle_side": float(np.real(ident.rhs))})
    return ident, res


# --------------------------------------------------------------------------
# dilations

DILATION_RADII = (0.5, 0.7, 0.9, 0.99)
DILATION_SLACK = 1e-6


def dilation_norms(f: Series, radii=DILATION_RADII, grid: SearchGrid = DEFAULT_GRID
                   ) -> list[tuple[float, NormReport, NormReport]]:
    """``(r, bmo1(f_r), bmo2(f_r))`` for increasing ``r``.

    Each search also starts from the witnesses found at smaller radii.
    """
    f, s = _normalized(f)
    out = []
    seeds: list[complex] = []
    for r in sorted(radii):
        fr = dilate(f, r) if r < 1 else f
        # one deviation object per radius: its coarse table is memoized
        D = MeanDeviation(fr, grid.circle_M)
        n1 = bmo1(fr, grid, extra_starts=seeds, deviation=D)
        n2 = bmo2(fr, grid, extra_starts=seeds + [n1.witness.z])
        if n2.witness.z != n1.witness.z:
            n1b = bmo1(fr, grid, extra_starts=seeds + [n2.witness.z], deviation=D)
            n1 = n1b if n1b.value > n1.value else n1
        seeds += [n1.witness.z, n2.witness.z]
        out.append((r, _rescaled(n1, s), _rescaled(n2, s)))
    return out


def check_dilation_monotone(f: Series, radii=DILATION_RADII, grid: SearchGrid = DEFAULT_GRID,
                            slack: float = DILATION_SLACK) -> list[InequalityResult]:
    """``||f_{r1}||_{BMO_j} <= ||f_{r2}||_{BMO_j}`` for consecutive radii, ``j = 1, 2``."""
    table = dilation_norms(f, radii, grid)
    out = []
    for (r1, a1, a2), (r2, b1, b2) in zip(table, table[1:]):
        for j, lo, hi in ((1, a1, b1), (2, a2, b2)):
            out.append(InequalityResult(
                f"dilation_bmo{j}", lo.value, hi.value, ONE, tol=slack,
                witness={"r_lo": r1, "r_hi": r2}, resolution={"grid": grid.to_dict()},
                tol_scale=1.0))
    return out


def run_suite(*args, **kwargs) -> dict:
    """Every check over a corpus; see :func:`bmokit.suite.run_suite`."""
    from .suite import run_suite as _run_suite
    return _run_suite(*args, **kwargs)
