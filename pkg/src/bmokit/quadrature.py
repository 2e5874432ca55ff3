"""Circle and disk quadrature.

Circle integrals use the uniform trapezoid rule.  Disk integrals against
the Green's function ``g_z^{(r)}`` are computed after the Moebius
substitution ``zeta = r phi_a(w)``, ``a = z / r``, with
``phi_a(w) = (a - w) / (1 - conj(a) w)``.  Then

    g_z^{(r)}(zeta) = (1 / 2 pi) log(1 / |w|),     dA(zeta) = r^2 |phi_a'(w)|^2 dA(w),

so the moving logarithmic pole becomes the fixed endpoint ``|w| = 0`` of
the radial variable, where a Gauss rule for the weight ``log(1/rho)`` on
``[0, 1]`` is exact for polynomial integrands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import gammaln, roots_legendre

from .circle_fn import as_complex
from .errors import DomainError, NumericalAbort

TWO_PI = 2 * np.pi
MODES = ("mobius-recenter", "graded-mesh")
# auto-scaled rules never exceed this many nodes (about 100 MB per node array)
MAX_AUTO_NODES = 1 << 22


@dataclass(frozen=True)
class DiskQuadScheme:
    M_ang: int = 256
    M_rad: int = 128
    mode: str = "mobius-recenter"
    r_cap: float = 1 - 1e-6
    # grow M_ang / M_rad with the integrand degree and |z| when a degree hint is given
    auto_scale: bool = True

    def __post_init__(self):
        if self.M_ang < 64 or self.M_rad < 32:
            raise DomainError(f"scheme too small: M_ang={self.M_ang} (>= 64), "
                              f"M_rad={self.M_rad} (>= 32)")
        if self.mode not in MODES:
            raise DomainError(f"unknown quadrature mode {self.mode!r}")
        if not 0 < self.r_cap <= 1:
            raise DomainError("r_cap must lie in (0, 1]")

    def doubled(self) -> "DiskQuadScheme":
        return replace(self, M_ang=2 * self.M_ang, M_rad=2 * self.M_rad)

    def to_dict(self) -> dict:
        return {"M_ang": self.M_ang, "M_rad": self.M_rad, "mode": self.mode,
                "r_cap": self.r_cap}


DEFAULT_SCHEME = DiskQuadScheme()


# --------------------------------------------------------------------------
# circle

def integrate_circle(integrand: Callable, M: int):
    """Trapezoid sum ``(2 pi / M) sum integrand(theta_j)``."""
    if M < 16:
        raise DomainError("integrate_circle needs M >= 16")
    theta = TWO_PI * np.arange(M) / M
    vals = np.asarray(integrand(theta))
    vals = np.broadcast_to(vals, theta.shape)
    _check_finite(vals, theta, "theta")
    out = TWO_PI / M * np.sum(vals)
    return complex(out) if np.iscomplexobj(out) else float(out)


def _check_finite(vals, where, label):
    bad = ~np.isfinite(vals)
    if np.any(bad):
        j = int(np.argmax(bad))
        raise NumericalAbort(f"non-finite integrand at {label} = {where.flat[j]!r}")


def circle_grid_size(degree: int, z=0.0, M_min: int = 256, tol: float = 1e-15) -> int:
    """Power-of-two node count resolving a degree-``degree`` function times ``P_z``.

    The trapezoid error for ``g P_z`` with ``g`` of degree ``N`` decays like
    ``|z|^(M - N)``.
    """
    rho = abs(as_complex(z))
    need = 2 * degree + 16
    if rho > 0:
        need = max(need, degree + math.log(tol) / math.log(rho))
    M = max(M_min, 16)
    return 1 << max(4, math.ceil(math.log2(max(M, need))))


def poisson_weights(z, M: int, r: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Nodes ``zeta_j = r e^{i theta_j}`` and weights ``(2 pi r / M) P_z^{(r)}(zeta_j)``."""
    z = as_complex(z)
    theta = TWO_PI * np.arange(M) / M
    e = np.exp(1j * theta)
    a = z / r
    w = (1 - abs(a) ** 2) / np.abs(1 - np.conj(a) * e) ** 2 / M
    return r * e, w


# --------------------------------------------------------------------------
# Gauss rule for log(1/rho) on [0, 1]

@lru_cache(maxsize=None)
def gauss_log_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights with ``sum w_i p(x_i) = int_0^1 log(1/x) p(x) dx``.

    Exact for polynomials of degree ``< 2n``.  Recurrence coefficients come
    from the modified Chebyshev algorithm on shifted-Legendre moments, which
    is well conditioned in double precision; nodes and weights from the
    Jacobi matrix (Golub-Welsch).
    """
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    alpha, beta = _log_recurrence(n)
    nodes, vecs = eigh_tridiagonal(alpha, np.sqrt(beta[1:]))
    weights = beta[0] * vecs[0, :] ** 2
    return nodes, weights


def _log_recurrence(n: int) -> tuple[np.ndarray, np.ndarray]:
    # Monic shifted Legendre pi_l on [0, 1]: pi_{l+1} = (x - 1/2) pi_l - b_l pi_{l-1}.
    # int_0^1 log(1/x) P_l(2x - 1) dx = (-1)^l / (l (l + 1)) for l >= 1.
    # All mixed moments sigma_{k,l} are carried scaled by 4^(k+l) to stay O(1).
    L = 2 * n
    l = np.arange(L, dtype=float)
    b = np.zeros(L)
    b[1:] = l[1:] ** 2 / (4 * (4 * l[1:] ** 2 - 1))
    mom = np.ones(L)
    ll = l[1:]
    mom[1:] = (-1.0) ** ll / (ll * (ll + 1)) * np.exp(
        ll * math.log(4) + 2 * gammaln(ll + 1) - gammaln(2 * ll + 1))
    alpha = np.empty(n)
    beta = np.empty(n)
    alpha[0] = 0.5 + mom[1] / (4 * mom[0])
    beta[0] = mom[0]
    sig_prev = np.zeros(L + 1)
    sig = np.append(mom, 0.0)
    for k in range(1, n):
        j = np.arange(k, L - k)
        new = np.zeros(L + 1)
        new[j] = (sig[j + 1] - 4 * (alpha[k - 1] - 0.5) * sig[j]
                  - 16 * beta[k - 1] * sig_prev[j] + 16 * b[j] * sig[j - 1])
        alpha[k] = 0.5 + new[k + 1] / (4 * new[k]) - sig[k] / (4 * sig[k - 1])
        beta[k] = new[k] / (16 * sig[k - 1])
        sig_prev, sig = sig, new
    return alpha, beta


@lru_cache(maxsize=None)
def _legendre01(n: int):
    x, w = roots_legendre(n)
    return 0.5 * (x + 1), 0.5 * w


@lru_cache(maxsize=None)
def radial_rule(n: int, r_cap: float, mode: str) -> tuple[np.ndarray, np.ndarray]:
    """Nodes ``rho_i`` and weights with ``sum w_i q(rho_i) ~ int_0^{r_cap} log(1/rho) q(rho) drho``."""
    if mode == "mobius-recenter":
        x, w = gauss_log_rule(n)
        nodes, weights = [r_cap * x], [r_cap * w]
        L = -math.log(r_cap)
        if L > 0:
            # log(1/rho) = log(1/s) + log(1/r_cap) under rho = r_cap s
            y, v = _legendre01(max(16, n // 4))
            nodes.append(r_cap * y)
            weights.append(r_cap * L * v)
        return np.concatenate(nodes), np.concatenate(weights)
    # graded mesh: geometric panels toward rho = 0, log-weighted rule on the first
    n_inner = 6
    sigma = 0.2
    per = max(16, n // 4)
    edges = r_cap * np.concatenate((sigma ** np.arange(n_inner, 0, -1.0),
                                    np.linspace(sigma, 1.0, 5)))
    x0, w0 = gauss_log_rule(per)
    y, v = _legendre01(per)
    e0 = edges[0]
    nodes = [e0 * x0, e0 * y]
    weights = [e0 * w0, e0 * -math.log(e0) * v]
    for lo, hi in zip(edges[:-1], edges[1:]):
        t = lo + (hi - lo) * y
        nodes.append(t)
        weights.append((hi - lo) * v * -np.log(t))
    return np.concatenate(nodes), np.concatenate(weights)


# --------------------------------------------------------------------------
# disk

def effective_sizes(scheme: DiskQuadScheme, z, r: float = 1.0,
                    degree: int | None = None) -> tuple[int, int]:
    """Node counts after degree/pole-position scaling.

    The pulled-back integrand ``h(phi_a(w))`` compresses a degree ``N``
    function by the factor ``(1 + |a|) / (1 - |a|)`` near ``w = a/|a|``.
    """
    if degree is None or not scheme.auto_scale:
        return scheme.M_ang, scheme.M_rad
    a = abs(as_complex(z)) / r
    stretch = (1 + a) / (1 - a)
    ang = int(math.ceil(1.5 * (degree + 8) * stretch + 16))
    rad = int(math.ceil(0.75 * (degree + 8) * math.sqrt(stretch) + 8))
    if ang * rad > MAX_AUTO_NODES:
        # keep the aspect ratio, stay inside the memory budget
        shrink = math.sqrt(MAX_AUTO_NODES / (ang * rad))
        ang, rad = int(ang * shrink), int(rad * shrink)
    ang = 8 * math.ceil(max(scheme.M_ang, ang) / 8)
    rad = max(scheme.M_rad, rad)
    return ang, rad


def disk_green_rule(z, scheme: DiskQuadScheme = DEFAULT_SCHEME, r: float = 1.0,
                    degree: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Nodes ``zeta_k`` in ``r D`` and weights ``W_k`` with
    ``sum W_k h(zeta_k) ~ iint_{rD} h g_z^{(r)} dA``."""
    z = as_complex(z)
    if not 0 < r <= 1 or abs(z) >= r:
        raise DomainError(f"need |z| < r <= 1 (|z| = {abs(z):.6g}, r = {r})")
    M_ang, M_rad = effective_sizes(scheme, z, r, degree)
    if M_ang * M_rad > CACHE_NODE_LIMIT:
        return _disk_rule(z, r, M_ang, M_rad, scheme.mode, scheme.r_cap)
    return _disk_rule_cached(z, r, M_ang, M_rad, scheme.mode, scheme.r_cap)


CACHE_NODE_LIMIT = 1 << 20


def _disk_rule_cached(*args):
    return _disk_rule_lru(*args)


def _disk_rule(z: complex, r: float, M_ang: int, M_rad: int, mode: str,
                      r_cap: float):
    rho, lam = radial_rule(M_rad, r_cap, mode)
    theta = TWO_PI * (np.arange(M_ang) + 0.5) / M_ang
    w = rho[:, None] * np.exp(1j * theta)[None, :]
    a = z / r
    denom = 1 - np.conj(a) * w
    zeta = r * (a - w) / denom
    jac = (1 - abs(a) ** 2) ** 2 / np.abs(denom) ** 4
    # (1/2pi) * (2pi/M_ang) * rho * lambda * r^2 |phi'|^2
    W = (lam * rho)[:, None] * jac * (r * r / M_ang)
    zeta = zeta.ravel()
    W = W.ravel()
    return zeta, W


@lru_cache(maxsize=32)
def _disk_rule_lru(*args):
    zeta, W = _disk_rule(*args)
    zeta.setflags(write=False)
    W.setflags(write=False)
    return zeta, W


def _smooth_step(x):
    x = np.clip(x, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        a = np.where(x > 0, np.exp(-1 / np.where(x > 0, x, 1)), 0.0)
        b = np.where(x < 1, np.exp(-1 / np.where(x < 1, 1 - x, 1)), 0.0)
    return a / (a + b)


def bump(t):
    """C-infinity cutoff: 1 for ``t <= 1/2``, 0 for ``t >= 1``."""
    return _smooth_step(2 * (1 - np.asarray(t)))


def _mobius(a: complex, x):
    return (a - x) / (1 - np.conj(a) * x)


def patch_radii(points, z, r: float = 1.0, cap: float = 0.25) -> list[tuple[complex, float]]:
    """Disjoint patches around integrable singular points inside ``r D``.

    Patches live in the recentred plane ``w = phi_a(zeta / r)``, ``a = z/r``,
    where the global rule is polar about ``w = 0``.  Returns ``(w_c, rho)``
    pairs.  Points too close to the pole (handled by the radial rule) or to
    the boundary are skipped.
    """
    z = as_complex(z)
    a = z / r
    pts = [complex(_mobius(a, complex(p) / r)) for p in points if abs(p) < r]
    out = []
    for i, c in enumerate(pts):
        others = [abs(c - q) for j, q in enumerate(pts) if j != i]
        rad = min([cap, 0.5 * abs(c), 0.5 * (1 - abs(c))] + [0.5 * d for d in others])
        if rad > 1e-6:
            out.append((c, rad))
    return out


@lru_cache(maxsize=None)
def _patch_reference(n_s: int, n_a: int):
    s, ws = _legendre01(n_s)
    alpha = TWO_PI * np.arange(n_a) / n_a
    return s, ws, alpha


def _patch_rule(center: complex, rad: float, z: complex, r: float,
                n_s: int = 32, n_a: int = 64):
    """Polar rule on ``|w - center| < rad`` (recentred plane) for
    ``h * bump * g_z^{(r)}``.

    The polar Jacobian cancels a ``1/|w - center|`` singularity.
    """
    s, ws, alpha = _patch_reference(n_s, n_a)
    sr = rad * s
    w = center + sr[:, None] * np.exp(1j * alpha)[None, :]
    a = z / r
    denom = 1 - np.conj(a) * w
    zeta = r * (a - w) / denom
    jac = (1 - abs(a) ** 2) ** 2 / np.abs(denom) ** 4
    g = -np.log(np.abs(w)) / TWO_PI
    W = (rad * ws * sr * bump(s))[:, None] * g * jac * (r * r * TWO_PI / n_a)
    return zeta.ravel(), W.ravel()


def integrate_disk_green(integrand: Callable, z, scheme: DiskQuadScheme = DEFAULT_SCHEME,
                         r: float = 1.0, degree: int | None = None,
                         singular_points=()):
    """``iint_{rD} integrand(zeta) g_z^{(r)}(zeta) dA(zeta)``.

    ``integrand`` maps an array of disk points to values.  ``degree`` is an
    optional resolution hint (polynomial degree of the integrand).
    ``singular_points`` lists interior points where the integrand has an
    integrable ``|zeta - c|^-1``-type singularity; each gets a local polar
    patch blended in by a smooth partition of unity.
    """
    zeta, W = disk_green_nodes(z, scheme, r, degree, singular_points)
    vals = np.asarray(integrand(zeta))
    vals = np.broadcast_to(vals, zeta.shape)
    _check_finite(vals, zeta, "zeta")
    out = np.sum(W * vals)
    return complex(out) if np.iscomplexobj(out) else float(out)


def disk_green_nodes(z, scheme: DiskQuadScheme = DEFAULT_SCHEME, r: float = 1.0,
                     degree: int | None = None, singular_points=()):
    """Global rule, with patches spliced in around ``singular_points``."""
    z = as_complex(z)
    zeta, W = disk_green_rule(z, scheme, r, degree)
    patches = patch_radii(singular_points, z, r)
    if not patches:
        return zeta, W
    w = _mobius(z / r, zeta / r)
    keep = np.ones(zeta.shape)
    nodes, weights = [], []
    for c, rad in patches:
        keep = keep - bump(np.abs(w - c) / rad)
        pz, pw = _patch_rule(c, rad, z, r)
        nodes.append(pz)
        weights.append(pw)
    mask = keep > 0
    nodes.insert(0, zeta[mask])
    weights.insert(0, (W * keep)[mask])
    return np.concatenate(nodes), np.concatenate(weights)
