"""Residuals of the exact Green/Hardy-Stein identities.

Each check evaluates a circle side (trapezoid rule, spectrally accurate)
and an area side (Green-weighted disk quadrature) and reports both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from .circle_fn import (AnalyticSeries, FourierSeries, Series, analytic_completion,
                        as_complex, as_fourier, dilate, poisson_extend)
from .errors import DomainError, NumericalAbort
from .quadrature import (DEFAULT_SCHEME, DiskQuadScheme, circle_grid_size,
                         disk_green_nodes, effective_sizes, poisson_weights)

FLOOR_DELTA = 1e-12
EPS = float(np.finfo(float).eps)
ROUNDOFF_ULPS = 64
TOL = {
    "greens": 1e-6,
    "hardy_stein": 1e-5,
    "hardy_stein_harmonic": 1e-4,
    "regularized": 1e-3,
    "polarized": 1e-6,
    "remark_uf": 1e-8,
    "h1_identity": 1e-5,
}


def _num(x):
    x = complex(x)
    return x.real if x.imag == 0 else [x.real, x.imag]


@dataclass
class CheckReport:
    name: str
    lhs: complex
    rhs: complex
    tol: float
    inputs: dict = field(default_factory=dict)
    resolution: dict = field(default_factory=dict)
    constant: Optional[str] = None
    regularized: bool = False
    floored_nodes: int = 0
    notes: dict = field(default_factory=dict)
    # natural size of the two sides when they may cancel to zero
    ref_scale: float = 0.0
    # rounding error of a side computed as a difference of larger terms
    roundoff: float = 0.0

    @property
    def residual(self) -> float:
        return abs(complex(self.lhs) - complex(self.rhs))

    @property
    def scale(self) -> float:
        return max(abs(complex(self.lhs)), abs(complex(self.rhs)), self.ref_scale)

    @property
    def relative(self) -> float:
        s = self.scale
        return self.residual / s if s > 0 else 0.0

    @property
    def passed(self) -> bool:
        return self.residual <= self.tol * max(self.scale, 1e-12) + self.roundoff

    def to_json_dict(self) -> dict:
        out = {"name": self.name, "kind": "identity", "lhs": _num(self.lhs),
               "rhs": _num(self.rhs), "residual": self.residual,
               "relative": self.relative, "tol": self.tol, "pass": self.passed,
               "inputs": self.inputs, "resolution": self.resolution}
        if self.constant is not None:
            out["constant"] = self.constant
        if self.regularized:
            out["regularized"] = True
            out["floored_nodes"] = self.floored_nodes
        if self.roundoff:
            out["roundoff"] = self.roundoff
        if self.notes:
            out["notes"] = self.notes
        return out


def cancellation_roundoff(*terms) -> float:
    """Rounding allowance for a difference of the given (possibly large) terms."""
    return ROUNDOFF_ULPS * EPS * sum(abs(complex(t)) for t in terms)


# --------------------------------------------------------------------------
# helpers shared with the inequality checks

def trimmed(f: Series, rho: float, rtol: float = 1e-17) -> Series:
    """Drop modes with ``|c_n| rho^|n|`` below ``rtol`` times the largest term."""
    if rho >= 1:
        return f
    if isinstance(f, AnalyticSeries):
        mags = np.abs(f.coeffs) * rho ** np.arange(f.degree + 1)
        top = mags.max()
        if top == 0:
            return f
        return f.truncate(int(np.nonzero(mags > rtol * top)[0].max()))
    mags = np.abs(f.coeffs) * rho ** np.abs(f.indices)
    top = mags.max()
    if top == 0:
        return f
    N = f.degree
    keep = int(np.max(np.abs(np.nonzero(mags > rtol * top)[0] - N)))
    return f.truncate(keep)


def circle_poisson_integral(fun, z, degree: int, r: float = 1.0, M_min: int = 1024):
    """``int_{rT} fun(zeta) P_z^{(r)}(zeta) ds(zeta)`` by the trapezoid rule.

    ``fun`` maps points on ``r T`` to values; ``degree`` sizes the grid.
    """
    z = as_complex(z)
    M = circle_grid_size(degree, z / r, M_min)
    zeta, w = poisson_weights(z, M, r)
    vals = np.asarray(fun(zeta))
    out = np.sum(w * vals)
    return complex(out) if np.iscomplexobj(out) else float(out), M


MAX_REFINE_NODES = 1 << 22


def _disk_sum(fun, z, scheme, r, degree, singular_points):
    zeta, W = disk_green_nodes(z, scheme, r, degree, singular_points)
    vals = np.asarray(fun(zeta))
    if not np.all(np.isfinite(vals)):
        j = int(np.argmax(~np.isfinite(vals)))
        raise NumericalAbort(f"non-finite area integrand at zeta = {zeta[j]!r}")
    out = np.sum(W * vals)
    return complex(out) if np.iscomplexobj(out) else float(out)


def disk_green_integral(fun, z, scheme: DiskQuadScheme, r: float = 1.0,
                        degree: int | None = None, singular_points=(),
                        refine_rtol: float | None = None):
    """Area integral against ``g_z^{(r)}``; returns ``(value, (M_ang, M_rad))``.

    With ``refine_rtol`` the rule is doubled until two successive values
    agree to that relative tolerance (or the node budget runs out).
    """
    sizes = effective_sizes(scheme, z, r, degree)
    value = _disk_sum(fun, z, scheme, r, degree, singular_points)
    if refine_rtol is None:
        return value, sizes
    while 4 * sizes[0] * sizes[1] <= MAX_REFINE_NODES:
        sizes = (2 * sizes[0], 2 * sizes[1])
        finer = replace(scheme, M_ang=sizes[0], M_rad=sizes[1], auto_scale=False)
        new = _disk_sum(fun, z, finer, r, None, singular_points)
        done = abs(new - value) <= refine_rtol * max(abs(new), 1e-300)
        value = new
        if done:
            break
    return value, sizes


def _res(scheme, sizes, M):
    d = scheme.to_dict()
    d["M_ang_eff"], d["M_rad_eff"] = sizes
    d["circle_M"] = M
    return d


def _zin(z):
    z = as_complex(z)
    return [z.real, z.imag]


ROOT_DEGREE_LIMIT = 128


ZERO_MERGE_DIST = 1e-2


def interior_zeros(F: AnalyticSeries, r: float = 1.0) -> list[complex]:
    """Zeros of ``F`` in ``|zeta| < r`` (empty above ``ROOT_DEGREE_LIMIT``).

    Zeros closer than ``ZERO_MERGE_DIST`` are merged into their centroid so a
    (near-)multiple zero gets one singular patch instead of two vanishing ones.
    """
    a = np.asarray(F.coeffs)
    # negligible leading modes make the companion matrix overflow
    big = np.abs(a) > 1e-14 * np.max(np.abs(a), initial=0.0)
    if not np.any(big[1:]):
        return []
    a = a[:int(np.nonzero(big)[0][-1]) + 1]
    if a.size - 1 > ROOT_DEGREE_LIMIT:
        return []
    roots = [complex(c) for c in np.roots(a[::-1]) if abs(c) < r]
    clusters: list[list[complex]] = []
    for c in sorted(roots, key=lambda w: (w.real, w.imag)):
        for cl in clusters:
            if abs(c - np.mean(cl)) < ZERO_MERGE_DIST:
                cl.append(c)
                break
        else:
            clusters.append([c])
    return [complex(np.mean(cl)) for cl in clusters]


# --------------------------------------------------------------------------
# Green's theorem

@dataclass(frozen=True)
class QuadraticField:
    """``f = sum_j |F_j|^2 + h``: analytic ``F_j``, real harmonic ``h``.

    ``Laplacian f = 4 sum_j |F_j'|^2`` is available from coefficients.
    """

    squares: Sequence[AnalyticSeries] = ()
    harmonic: Optional[FourierSeries] = None

    def __call__(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        out = np.zeros(zeta.shape)
        for F in self.squares:
            out = out + np.abs(F(zeta)) ** 2
        if self.harmonic is not None:
            out = out + np.real(poisson_extend(self.harmonic, zeta))
        return out

    def laplacian(self, zeta):
        zeta = np.asarray(zeta, dtype=complex)
        out = np.zeros(zeta.shape)
        for F in self.squares:
            out = out + 4 * np.abs(F.derivative()(zeta)) ** 2
        return out

    @property
    def degree(self) -> int:
        d = [2 * F.degree for F in self.squares]
        if self.harmonic is not None:
            d.append(self.harmonic.degree)
        return max(d, default=0)


def greens_identity_residual(f: QuadraticField, z, r: float = 1.0,
                             scheme: DiskQuadScheme = DEFAULT_SCHEME,
                             tol: float = TOL["greens"]) -> CheckReport:
    """``int_{rT} f P_z^{(r)} ds - f(z)`` against ``iint_{rD} Lap f g_z^{(r)} dA``."""
    z = as_complex(z)
    circ, M = circle_poisson_integral(f, z, f.degree, r)
    fz = float(f(np.array([z]))[0])
    lhs = circ - fz
    rhs, sizes = disk_green_integral(f.laplacian, z, scheme, r, degree=f.degree)
    return CheckReport("greens_identity", lhs, rhs, tol,
                       {"z": _zin(z), "r": r, "degree": f.degree},
                       _res(scheme, sizes, M), roundoff=cancellation_roundoff(circ, fz))


# --------------------------------------------------------------------------
# Hardy-Stein

def hardy_stein_residual(F: AnalyticSeries, p: float, z,
                         scheme: DiskQuadScheme = DEFAULT_SCHEME,
                         delta: float = FLOOR_DELTA, tol: float | None = None,
                         name: str = "hardy_stein") -> CheckReport:
    """``int |F|^p P_z ds - |F(z)|^p = p^2 iint |F'|^2 |F|^(p-2) g_z dA``."""
    if not p > 0:
        raise DomainError("Hardy-Stein needs p > 0")
    if F.is_constant() and abs(F.coeffs[0]) == 0:
        raise DomainError("Hardy-Stein residual undefined for F = 0")
    z = as_complex(z)
    regularized = p < 2
    if tol is None:
        tol = TOL["regularized"] if regularized else TOL["hardy_stein"]
    deg = max(2, math.ceil(p)) * F.degree
    circ, M = circle_poisson_integral(lambda w: np.abs(F(w)) ** p, z, deg, M_min=4096)
    point = abs(complex(F(z))) ** p
    lhs = circ - point
    dF = F.derivative()
    floored = [0]

    def area(zeta):
        a = np.abs(F(zeta))
        if regularized:
            low = a < delta
            floored[0] = int(np.count_nonzero(low))
            a = np.where(low, delta, a)
        return p * p * np.abs(dF(zeta)) ** 2 * a ** (p - 2)

    # |F|^(p-2) is only smooth for even p; otherwise patch zeros and refine
    smooth = p >= 2 and p % 2 == 0
    zeros = () if smooth else interior_zeros(F)
    rhs, sizes = disk_green_integral(area, z, scheme, degree=deg, singular_points=zeros,
                                     refine_rtol=None if smooth else tol / 10)
    return CheckReport(name, lhs, rhs, tol,
                       {"z": _zin(z), "p": p, "degree": F.degree,
                        **({"delta": delta} if regularized else {})},
                       _res(scheme, sizes, M), regularized=regularized,
                       floored_nodes=floored[0], roundoff=cancellation_roundoff(circ, point))


def hs_k_residual(F: AnalyticSeries, k: int, z,
                  scheme: DiskQuadScheme = DEFAULT_SCHEME,
                  delta: float = FLOOR_DELTA, tol: float | None = None) -> CheckReport:
    """Hardy-Stein for the recentred ``F - F(z)`` with integer exponent ``k``."""
    if int(k) != k or k < 1:
        raise DomainError("k must be a positive integer")
    if F.is_constant():
        raise DomainError("hs_k residual undefined for constant F")
    return hardy_stein_residual(F.recentered(z), k, z, scheme, delta, tol, name="hs_k")


def hardy_stein_harmonic_residual(u: FourierSeries, p: float, z,
                                  scheme: DiskQuadScheme = DEFAULT_SCHEME,
                                  delta: float = FLOOR_DELTA,
                                  tol: float | None = None) -> CheckReport:
    """``int |u|^p P_z ds - |u(z)|^p = p(p-1) iint |u|^(p-2) |grad u|^2 g_z dA``."""
    if not p > 1:
        raise DomainError("harmonic Hardy-Stein needs p > 1")
    if not u.is_real:
        raise DomainError("harmonic Hardy-Stein needs a real series")
    z = as_complex(z)
    regularized = p < 2
    if tol is None:
        tol = TOL["regularized"] if regularized else TOL["hardy_stein_harmonic"]
    deg = max(2, math.ceil(p)) * u.degree
    circ, M = circle_poisson_integral(
        lambda w: np.abs(np.real(poisson_extend(u, w))) ** p, z, deg, M_min=4096)
    point = abs(complex(poisson_extend(u, z)).real) ** p
    lhs = circ - point
    dF = analytic_completion(u).derivative()
    floored = [0]

    def area(zeta):
        a = np.abs(np.real(poisson_extend(u, zeta)))
        if p != 2:
            low = a < delta
            floored[0] = int(np.count_nonzero(low))
            a = np.where(low, delta, a)
        return p * (p - 1) * a ** (p - 2) * np.abs(dF(zeta)) ** 2

    # |u|^(p-2) kinks along the nodal curves of u unless p is even
    smooth = p % 2 == 0
    rhs, sizes = disk_green_integral(area, z, scheme, degree=deg,
                                     refine_rtol=None if smooth else tol / 10)
    return CheckReport("hardy_stein_harmonic", lhs, rhs, tol,
                       {"z": _zin(z), "p": p, "degree": u.degree},
                       _res(scheme, sizes, M), regularized=regularized,
                       floored_nodes=floored[0], roundoff=cancellation_roundoff(circ, point))


def polarized_residual(F: AnalyticSeries, h: AnalyticSeries, z,
                       scheme: DiskQuadScheme = DEFAULT_SCHEME,
                       tol: float = TOL["polarized"]) -> CheckReport:
    """``int F conj(h) P_z ds = 4 iint F' conj(h') g_z dA`` after ``F -> F - F(z)``.

    The pairing can vanish for nonzero inputs, so the pass test is relative to
    the Cauchy-Schwarz size ``sqrt(G_z(F) G_z(h))``.
    """
    from .norms import garsia_at
    z = as_complex(z)
    F0 = F.recentered(z)
    deg = F.degree + h.degree
    lhs, M = circle_poisson_integral(lambda w: F0(w) * np.conj(h(w)), z, deg)
    dF, dh = F.derivative(), h.derivative()
    rhs, sizes = disk_green_integral(lambda w: 4 * dF(w) * np.conj(dh(w)), z, scheme,
                                     degree=deg)
    return CheckReport("polarized", lhs, rhs, tol,
                       {"z": _zin(z), "deg_F": F.degree, "deg_h": h.degree},
                       _res(scheme, sizes, M),
                       ref_scale=math.sqrt(garsia_at(F, z) * garsia_at(h, z)))


def remark_uf_residual(u: FourierSeries, z, tol: float = TOL["remark_uf"]) -> CheckReport:
    """Poisson variance of ``F = u + i u~`` equals twice that of ``u``."""
    from .norms import garsia_at
    if not u.is_real:
        raise DomainError("remark_uf needs a real series")
    F = analytic_completion(u)
    lhs = garsia_at(F, z)
    rhs = 2 * garsia_at(u, z)
    return CheckReport("remark_uf", lhs, rhs, tol, {"z": _zin(z), "degree": u.degree},
                       {"method": "coefficients"})


def h1_identity_residual(u: FourierSeries, z, r: float = 1.0,
                         scheme: DiskQuadScheme = DEFAULT_SCHEME,
                         tol: float = TOL["h1_identity"]) -> CheckReport:
    """``iint_{rD} |grad u|^2 / ((u-u(z))^2+1)^{3/2} g_z^{(r)} dA
    = int_{rT} ((u-u(z))^2+1)^{1/2} P_z^{(r)} ds - 1``."""
    if not u.is_real:
        raise DomainError("h1 identity needs a real series")
    z = as_complex(z)
    if abs(z) >= r:
        raise DomainError("need |z| < r")
    uz = float(np.real(poisson_extend(u, z)))
    ut = trimmed(u, r)
    dF = analytic_completion(ut).derivative()

    def lift(w):
        return np.real(poisson_extend(ut, w)) - uz

    # the circle integrand is not a polynomial; pad the grid generously
    deg = 4 * ut.degree + 32
    circ, M = circle_poisson_integral(lambda w: np.sqrt(lift(w) ** 2 + 1), z, deg, r,
                                      M_min=4096)
    rhs_circle = circ - 1
    # |F'|^2 has degree 2N - 2; the smooth denominator is left to refinement
    area, sizes = disk_green_integral(
        lambda w: np.abs(dF(w)) ** 2 / (lift(w) ** 2 + 1) ** 1.5, z, scheme, r,
        degree=2 * ut.degree + 8, refine_rtol=tol / 10)
    return CheckReport("h1_identity", area, rhs_circle, tol,
                       {"z": _zin(z), "r": r, "degree": u.degree},
                       _res(scheme, sizes, M), roundoff=cancellation_roundoff(circ, 1.0))
