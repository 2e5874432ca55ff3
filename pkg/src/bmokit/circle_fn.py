"""Truncated Fourier and power series on the unit circle.

Every function in the package is carried by one of two immutable types:

* :class:`FourierSeries` -- a two-sided trigonometric polynomial
  ``sum_{|n|<=N} c_n e^{in theta}`` (real or complex valued);
* :class:`AnalyticSeries` -- a polynomial ``sum_{n=0}^N a_n z^n``.

Harmonic extension, conjugation, differentiation and products are exact
operations on the coefficient arrays.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np
from .errors import DomainError

HERMITIAN_TOL = 1e-12
N_MAX_DEFAULT = 512
HORNER_CHUNK = 4096


def polyval(z, coeffs) -> np.ndarray:
    """``sum_k coeffs[k] z^k`` by Horner's rule.

    Large arrays are processed in cache-sized chunks with in-place updates;
    a full-array pass per coefficient is memory bound for high degrees.
    """
    z = np.asarray(z, dtype=complex)
    c = np.asarray(coeffs, dtype=complex)
    if c.size == 0:
        return np.zeros_like(z)
    flat = z.reshape(-1)
    out = np.empty_like(flat)
    rev = c[::-1]
    for lo in range(0, max(flat.size, 1), HORNER_CHUNK):
        x = flat[lo:lo + HORNER_CHUNK]
        acc = np.full(x.shape, rev[0], dtype=complex)
        for ck in rev[1:]:
            acc *= x
            acc += ck
        out[lo:lo + HORNER_CHUNK] = acc
    return out.reshape(z.shape) if z.ndim else out[0]


class TruncationWarning(UserWarning):
    """Emitted when a product is truncated to a working degree cap."""


def _frozen(arr) -> np.ndarray:
    out = np.array(arr, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class DiskPoint:
    """A point of the open unit disk, optionally restricted to ``|z| < r_max``."""

    z: complex
    r_max: float = 1.0

    def __post_init__(self):
        z = complex(self.z)
        if not np.isfinite(z.real) or not np.isfinite(z.imag):
            raise DomainError(f"non-finite disk point {z!r}")
        if abs(z) >= self.r_max:
            raise DomainError(f"|z| = {abs(z):.6g} must be < {self.r_max}")
        object.__setattr__(self, "z", z)

    def __complex__(self):
        return self.z

    def to_dict(self) -> dict:
        return {"re": self.z.real, "im": self.z.imag, "abs": abs(self.z)}


def as_complex(z) -> complex:
    return complex(z.z) if isinstance(z, DiskPoint) else complex(z)


@dataclass(frozen=True, eq=False)
class FourierSeries:
    """Coefficients ``c_{-N} .. c_N`` stored at positions ``0 .. 2N``."""

    coeffs: np.ndarray
    is_real: bool = False

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if c.ndim != 1 or c.size % 2 == 0:
            raise DomainError("FourierSeries needs an odd-length coefficient array")
        if not np.all(np.isfinite(c)):
            raise DomainError("FourierSeries coefficients must be finite")
        if self.is_real:
            scale = max(1.0, float(np.max(np.abs(c))))
            defect = np.max(np.abs(c - np.conj(c[::-1])))
            if defect > HERMITIAN_TOL * scale:
                raise DomainError(
                    f"real series violates c_-n = conj(c_n) (defect {defect:.3g})"
                )
            # exact Hermitian symmetry from here on
            c = 0.5 * (c + np.conj(c[::-1]))
        object.__setattr__(self, "coeffs", _frozen(c))

    # construction -------------------------------------------------------
    @classmethod
    def from_dict(cls, mapping: dict, is_real: bool = False) -> "FourierSeries":
        N = max((abs(int(n)) for n in mapping), default=0)
        c = np.zeros(2 * N + 1, dtype=complex)
        for n, v in mapping.items():
            c[int(n) + N] += v
        return cls(c, is_real=is_real)

    @classmethod
    def constant(cls, value: complex, is_real: bool | None = None) -> "FourierSeries":
        if is_real is None:
            is_real = complex(value).imag == 0
        return cls(np.array([value], dtype=complex), is_real=is_real)

    @classmethod
    def from_samples(cls, values, degree: int | None = None, theta0: float = 0.0,
                     is_real: bool | None = None) -> "FourierSeries":
        """Discrete Fourier analysis of samples at ``theta0 + 2 pi j / M``."""
        v = np.asarray(values, dtype=complex)
        M = v.size
        if M < 3:
            raise DomainError("need at least 3 samples")
        max_deg = (M - 1) // 2
        N = max_deg if degree is None else int(degree)
        if N > max_deg:
            raise DomainError(f"degree {N} not resolvable from {M} samples")
        spec = np.fft.fft(v) / M
        n = np.arange(-N, N + 1)
        c = spec[n % M] * np.exp(-1j * n * theta0)
        if is_real is None:
            is_real = bool(np.all(v.imag == 0))
        if is_real:
            c = 0.5 * (c + np.conj(c[::-1]))
        return cls(c, is_real=is_real)

    # basic accessors -----------------------------------------------------
    @property
    def degree(self) -> int:
        return (self.coeffs.size - 1) // 2

    @property
    def indices(self) -> np.ndarray:
        N = self.degree
        return np.arange(-N, N + 1)

    def coeff(self, n: int) -> complex:
        N = self.degree
        return complex(self.coeffs[n + N]) if abs(n) <= N else 0j

    @property
    def mean(self) -> complex:
        return self.coeff(0)

    def is_constant(self, tol: float = 0.0) -> bool:
        N = self.degree
        rest = np.delete(self.coeffs, N)
        return rest.size == 0 or float(np.max(np.abs(rest))) <= tol

    def max_magnitude(self) -> float:
        return float(np.sum(np.abs(self.coeffs)))

    def effective_degree(self, rtol: float = 1e-17) -> int:
        mags = np.abs(self.coeffs)
        top = mags.max(initial=0.0)
        if top == 0:
            return 0
        N = self.degree
        live = np.nonzero(mags > rtol * top)[0]
        return int(np.max(np.abs(live - N)))

    # evaluation ------------------------------------------------------------
    def __call__(self, theta):
        return evaluate(self, theta)

    def samples(self, M: int) -> np.ndarray:
        """Values at ``2 pi j / M`` for ``j = 0..M-1`` (exact, aliasing folded)."""
        buf = np.zeros(M, dtype=complex)
        np.add.at(buf, self.indices % M, self.coeffs)
        vals = np.fft.ifft(buf) * M
        return vals.real.astype(complex) if self.is_real else vals

    def on_circle(self, zeta) -> np.ndarray:
        """Values at unimodular points given as complex numbers."""
        return poisson_extend(self, zeta)

    # algebra --------------------------------------------------------------
    def padded(self, N: int) -> np.ndarray:
        if N < self.degree:
            raise DomainError("cannot pad to a smaller degree")
        out = np.zeros(2 * N + 1, dtype=complex)
        d = self.degree
        out[N - d:N + d + 1] = self.coeffs
        return out

    def __add__(self, other):
        if isinstance(other, AnalyticSeries):
            other = other.boundary()
        if isinstance(other, FourierSeries):
            N = max(self.degree, other.degree)
            return FourierSeries(self.padded(N) + other.padded(N),
                                 is_real=self.is_real and other.is_real)
        other = complex(other)
        c = np.array(self.coeffs)
        c[self.degree] += other
        return FourierSeries(c, is_real=self.is_real and other.imag == 0)

    __radd__ = __add__

    def __neg__(self):
        return FourierSeries(-self.coeffs, is_real=self.is_real)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, (FourierSeries, AnalyticSeries)):
            return boundary_product(self, scalar)
        s = complex(scalar)
        return FourierSeries(self.coeffs * s, is_real=self.is_real and s.imag == 0)

    __rmul__ = __mul__

    def conj(self) -> "FourierSeries":
        """Boundary function ``conj(f)``."""
        return FourierSeries(np.conj(self.coeffs[::-1]), is_real=self.is_real)

    def real_part(self) -> "FourierSeries":
        return FourierSeries(0.5 * (self.coeffs + np.conj(self.coeffs[::-1])),
                             is_real=True)

    def rotate(self, alpha: float) -> "FourierSeries":
        """``zeta -> f(e^{i alpha} zeta)``."""
        return FourierSeries(self.coeffs * np.exp(1j * self.indices * alpha),
                             is_real=self.is_real)

    def truncate(self, N: int) -> "FourierSeries":
        if N >= self.degree:
            return self
        d = self.degree
        return FourierSeries(self.coeffs[d - N:d + N + 1], is_real=self.is_real)

    # serialization ----------------------------------------------------------
    def to_json_dict(self) -> dict:
        rows = [[int(n), float(c.real), float(c.imag)]
                for n, c in zip(self.indices, self.coeffs) if c != 0]
        return {"kind": "fourier", "degree": self.degree,
                "is_real": self.is_real, "coeffs": rows}


@dataclass(frozen=True, eq=False)
class AnalyticSeries:
    """Polynomial ``F(z) = sum a_n z^n``; boundary trace has no negative modes."""

    coeffs: np.ndarray

    def __post_init__(self):
        a = np.atleast_1d(np.asarray(self.coeffs, dtype=complex))
        if a.ndim != 1 or a.size == 0:
            raise DomainError("AnalyticSeries needs a non-empty 1-d coefficient array")
        if not np.all(np.isfinite(a)):
            raise DomainError("AnalyticSeries coefficients must be finite")
        object.__setattr__(self, "coeffs", _frozen(a))

    @classmethod
    def monomial(cls, n: int, scale: complex = 1.0) -> "AnalyticSeries":
        a = np.zeros(n + 1, dtype=complex)
        a[n] = scale
        return cls(a)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_real(self) -> bool:
        return False

    def __call__(self, z):
        return polyval(z, self.coeffs)

    def derivative(self) -> "AnalyticSeries":
        if self.degree == 0:
            return AnalyticSeries([0.0])
        return AnalyticSeries(self.coeffs[1:] * np.arange(1, self.degree + 1))

    def boundary(self) -> FourierSeries:
        N = self.degree
        c = np.zeros(2 * N + 1, dtype=complex)
        c[N:] = self.coeffs
        return FourierSeries(c)

    def is_constant(self, tol: float = 0.0) -> bool:
        return self.degree == 0 or float(np.max(np.abs(self.coeffs[1:]))) <= tol

    def effective_degree(self, rtol: float = 1e-17) -> int:
        mags = np.abs(self.coeffs)
        top = mags.max()
        if top == 0:
            return 0
        return int(np.nonzero(mags > rtol * top)[0].max())

    def samples(self, M: int) -> np.ndarray:
        return self.boundary().samples(M)

    def on_circle(self, zeta) -> np.ndarray:
        return self(zeta)

    def __add__(self, other):
        if isinstance(other, AnalyticSeries):
            n = max(self.coeffs.size, other.coeffs.size)
            a = np.zeros(n, dtype=complex)
            a[:self.coeffs.size] += self.coeffs
            a[:other.coeffs.size] += other.coeffs
            return AnalyticSeries(a)
        if isinstance(other, FourierSeries):
            return self.boundary() + other
        a = np.array(self.coeffs)
        a[0] += complex(other)
        return AnalyticSeries(a)

    __radd__ = __add__

    def __neg__(self):
        return AnalyticSeries(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AnalyticSeries):
            return AnalyticSeries(np.convolve(self.coeffs, other.coeffs))
        if isinstance(other, FourierSeries):
            return boundary_product(self, other)
        return AnalyticSeries(self.coeffs * complex(other))

    __rmul__ = __mul__

    def recentered(self, z) -> "AnalyticSeries":
        """``F - F(z)``."""
        return self - complex(self(as_complex(z)))

    def rotate(self, alpha: float) -> "AnalyticSeries":
        return AnalyticSeries(self.coeffs * np.exp(1j * np.arange(self.degree + 1) * alpha))

    def truncate(self, N: int) -> "AnalyticSeries":
        return self if N >= self.degree else AnalyticSeries(self.coeffs[:N + 1])

    def to_json_dict(self) -> dict:
        rows = [[n, float(c.real), float(c.imag)]
                for n, c in enumerate(self.coeffs) if c != 0]
        return {"kind": "analytic", "degree": self.degree,
                "is_real": False, "coeffs": rows}


Series = Union[FourierSeries, AnalyticSeries]


def as_fourier(f: Series) -> FourierSeries:
    return f.boundary() if isinstance(f, AnalyticSeries) else f


# --------------------------------------------------------------------------
# operations

def evaluate(f: Series, theta):
    """Boundary value at angle ``theta`` (scalar or array)."""
    theta = np.asarray(theta, dtype=float)
    f = as_fourier(f)
    # Horner in e^{i theta} on both halves keeps this O(N) per point
    return poisson_extend(f, np.exp(1j * theta))


def poisson_extend(f: Series, z):
    """Harmonic extension ``sum c_n r^|n| e^{in theta}`` at ``z = r e^{i theta}``.

    Accepts scalars or arrays; on ``|z| = 1`` it returns the boundary values.
    """
    zz = np.asarray(as_complex(z) if isinstance(z, DiskPoint) else z, dtype=complex)
    if isinstance(f, AnalyticSeries):
        out = f(zz)
    else:
        N = f.degree
        c = f.coeffs
        out = polyval(zz, c[N:])
        if f.is_real:
            # exact Hermitian symmetry: the negative half is the conjugate
            out = (2 * out.real - c[N].real).astype(complex)
        elif N:
            neg = np.concatenate(([0.0], c[N - 1::-1]))
            out = out + polyval(np.conj(zz), neg)
    return out if np.ndim(out) else complex(out)


def _require_real(u: FourierSeries, what: str):
    if not isinstance(u, FourierSeries) or not u.is_real:
        raise DomainError(f"{what} needs a real FourierSeries")


def harmonic_conjugate(u: FourierSeries) -> FourierSeries:
    """Conjugate function via the multiplier ``-i sign(n)``; mean is zero."""
    _require_real(u, "harmonic_conjugate")
    return FourierSeries(-1j * np.sign(u.indices) * u.coeffs, is_real=True)


def analytic_completion(u: FourierSeries) -> AnalyticSeries:
    """``F = u + i u~`` with ``u~(0) = 0``: ``a_0 = c_0``, ``a_n = 2 c_n``."""
    _require_real(u, "analytic_completion")
    N = u.degree
    a = 2.0 * u.coeffs[N:]
    a[0] = u.coeffs[N]
    return AnalyticSeries(a)


def d_holomorphic(F: AnalyticSeries, z):
    """``dF = F'`` for holomorphic ``F``."""
    return F.derivative()(np.asarray(as_complex(z) if isinstance(z, DiskPoint) else z))


def grad_sq_harmonic(u: FourierSeries, z):
    """``|grad u|^2 = |F'|^2`` with ``F`` the analytic completion of ``u``
    (``u = Re F``, Cauchy-Riemann)."""
    _require_real(u, "grad_sq_harmonic")
    dF = d_holomorphic(analytic_completion(u), z)
    return np.abs(dF) ** 2


def boundary_product(f: Series, g: Series, n_max: int | None = None) -> FourierSeries:
    """Pointwise product on the circle as a coefficient convolution.

    The result has degree ``deg f + deg g``.  With ``n_max`` set, higher
    modes are dropped and a :class:`TruncationWarning` is emitted.
    """
    f, g = as_fourier(f), as_fourier(g)
    c = np.convolve(f.coeffs, g.coeffs)
    out = FourierSeries(c, is_real=False)
    if f.is_real and g.is_real:
        out = FourierSeries(c, is_real=True)
    if n_max is not None and out.degree > n_max:
        warnings.warn(f"product degree {out.degree} truncated to {n_max}",
                      TruncationWarning, stacklevel=2)
        out = out.truncate(n_max)
    return out


def abs_sq(f: Series) -> FourierSeries:
    """Boundary function ``|f|^2``."""
    f = as_fourier(f)
    return boundary_product(f, f.conj()).real_part()


def dilate(f: Series, r: float) -> Series:
    """``f_r(zeta) = f(r zeta)``, i.e. coefficients times ``r^|n|``."""
    if not 0 < r < 1:
        raise DomainError(f"dilation radius must lie in (0, 1), got {r}")
    if isinstance(f, AnalyticSeries):
        return AnalyticSeries(f.coeffs * r ** np.arange(f.degree + 1))
    return FourierSeries(f.coeffs * r ** np.abs(f.indices), is_real=f.is_real)


# --------------------------------------------------------------------------
# I/O

def series_from_json_dict(d: dict) -> Series:
    try:
        rows = d["coeffs"]
        is_real = bool(d.get("is_real", False))
        kind = d.get("kind", "fourier")
        degree = int(d.get("degree", max((abs(int(r[0])) for r in rows), default=0)))
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed series JSON: {exc}") from exc
    if kind == "analytic":
        a = np.zeros(degree + 1, dtype=complex)
        for n, re, im in rows:
            if not 0 <= int(n) <= degree:
                raise DomainError(f"analytic coefficient index {n} out of range")
            a[int(n)] = complex(re, im)
        return AnalyticSeries(a)
    c = np.zeros(2 * degree + 1, dtype=complex)
    for n, re, im in rows:
        if abs(int(n)) > degree:
            raise DomainError(f"coefficient index {n} exceeds degree {degree}")
        c[int(n) + degree] = complex(re, im)
    return FourierSeries(c, is_real=is_real)


def load_series_json(path) -> Series:
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"{path}: invalid JSON ({exc})") from exc
    return series_from_json_dict(d)


def save_series_json(f: Series, path) -> None:
    Path(path).write_text(json.dumps(f.to_json_dict(), indent=1) + "\n")


def degree_for_grid(M: int) -> int:
    """Largest ``N`` whose analysis grid ``2(2N+1)`` (rounded up to 2^k) is ``<= M``."""
    N = max(0, (M // 2 - 1) // 2)
    while N > 0 and _analysis_grid(N) > M:
        N -= 1
    return N


def _analysis_grid(N: int) -> int:
    return 1 << math.ceil(math.log2(2 * (2 * N + 1)))


def load_samples_csv(path, degree: int | None = None) -> FourierSeries:
    """Read ``theta,re,im`` rows on a uniform grid and return the series.

    Raises :class:`DomainError` naming the offending row on any violation.
    """
    thetas, vals = [], []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or row[0].strip().startswith("#"):
                continue
            if lineno == 1 and row[0].strip().lower() == "theta":
                continue
            if len(row) != 3:
                raise DomainError(f"{path}:{lineno}: expected 3 fields, got {len(row)}")
            try:
                t, re, im = (float(x) for x in row)
            except ValueError as exc:
                raise DomainError(f"{path}:{lineno}: {exc}") from exc
            if not (0 <= t < 2 * np.pi) or not np.isfinite(re) or not np.isfinite(im):
                raise DomainError(f"{path}:{lineno}: theta must lie in [0, 2pi), values finite")
            if thetas and t <= thetas[-1]:
                raise DomainError(f"{path}:{lineno}: theta not strictly increasing")
            thetas.append(t)
            vals.append(complex(re, im))
    M = len(thetas)
    if M < 4:
        raise DomainError(f"{path}: need at least 4 samples, got {M}")
    h = 2 * np.pi / M
    expected = thetas[0] + h * np.arange(M)
    bad = np.nonzero(np.abs(np.asarray(thetas) - expected) > 1e-9 * max(1.0, h * M))[0]
    if bad.size:
        raise DomainError(f"{path}: row {int(bad[0]) + 1} breaks uniform spacing "
                          f"(theta = {thetas[bad[0]]:.12g}, expected {expected[bad[0]]:.12g})")
    N = degree_for_grid(M) if degree is None else degree
    return FourierSeries.from_samples(vals, degree=N, theta0=thetas[0])
