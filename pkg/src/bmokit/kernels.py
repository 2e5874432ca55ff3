"""Closed-form kernels on disks and circles.

All functions are vectorized over the point argument ``zeta``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circle_fn import DiskPoint, as_complex
from .errors import DomainError, SingularityError

UNIMODULAR_TOL = 1e-12
TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class Interval:
    """Counter-clockwise arc from angle ``start`` to ``end``.

    ``end - start`` is taken modulo ``2 pi``; equal endpoints mean the whole
    circle when ``full=True`` and are rejected otherwise.
    """

    start: float
    end: float
    full: bool = False

    def __post_init__(self):
        if not (np.isfinite(self.start) and np.isfinite(self.end)):
            raise DomainError("interval endpoints must be finite")
        if self.length <= 0:
            raise DomainError("degenerate interval")

    @classmethod
    def whole(cls) -> "Interval":
        return cls(0.0, TWO_PI, full=True)

    @property
    def length(self) -> float:
        if self.full:
            return TWO_PI
        L = (self.end - self.start) % TWO_PI
        if L == 0 and self.end != self.start:
            return TWO_PI
        return L

    def contains(self, theta) -> np.ndarray:
        if self.full or self.length >= TWO_PI:
            return np.ones(np.shape(theta), dtype=bool)
        return (np.asarray(theta) - self.start) % TWO_PI < self.length

    def to_dict(self) -> dict:
        return {"start": float(self.start), "end": float(self.end),
                "length": float(self.length)}


def _unimodular(zeta, radius: float = 1.0):
    zeta = np.asarray(zeta, dtype=complex)
    if np.any(np.abs(np.abs(zeta) - radius) > UNIMODULAR_TOL * max(1.0, radius)):
        raise DomainError(f"points must lie on the circle of radius {radius}")
    return zeta


def poisson(z, zeta):
    """Normalized Poisson kernel ``(1-|z|^2) / (2 pi |1 - conj(z) zeta|^2)``."""
    z = as_complex(z)
    if abs(z) >= 1:
        raise DomainError("Poisson kernel needs |z| < 1")
    zeta = _unimodular(zeta)
    out = (1 - abs(z) ** 2) / (TWO_PI * np.abs(1 - np.conj(z) * zeta) ** 2)
    return out if out.ndim else float(out)


def poisson_theta(z, theta):
    """Poisson kernel at ``e^{i theta}``, avoiding the unimodularity check."""
    z = as_complex(z)
    return (1 - abs(z) ** 2) / (TWO_PI * np.abs(1 - np.conj(z) * np.exp(1j * np.asarray(theta))) ** 2)


def poisson_r(z, zeta, r: float):
    """Poisson kernel of the disk of radius ``r`` against arc length on ``r T``.

    ``(1 - |z/r|^2) / (2 pi r |1 - conj(z) zeta / r^2|^2)``; the ``1/r`` makes
    it integrate to 1 over the circumference ``2 pi r``.
    """
    z = as_complex(z)
    if not 0 < r <= 1 or abs(z) >= r:
        raise DomainError(f"need |z| < r <= 1 (|z| = {abs(z):.6g}, r = {r})")
    zeta = _unimodular(zeta, r)
    out = (1 - abs(z / r) ** 2) / (TWO_PI * r * np.abs(1 - np.conj(z) * zeta / r ** 2) ** 2)
    return out if out.ndim else float(out)


def green(z, zeta, r: float = 1.0):
    """Green's function of the disk ``r D`` with pole at ``z``.

    ``(1/2pi) log |(z - zeta) / (r - conj(z) zeta / r)|^{-1}``; raises
    :class:`SingularityError` at ``zeta = z``.
    """
    z = as_complex(z)
    if not 0 < r <= 1 or abs(z) >= r:
        raise DomainError(f"need |z| < r <= 1 (|z| = {abs(z):.6g}, r = {r})")
    zeta = np.asarray(zeta, dtype=complex)
    if np.any(np.abs(zeta) >= r):
        raise DomainError("green needs |zeta| < r")
    if np.any(zeta == z):
        raise SingularityError(f"green evaluated at its pole z = {z}")
    ratio = np.abs((z - zeta) / (r - np.conj(z) * zeta / r))
    out = -np.log(ratio) / TWO_PI
    return out if out.ndim else float(out)


def box_kernel(I: Interval, zeta):
    """``chi_I / |I|`` evaluated at unimodular ``zeta``."""
    zeta = _unimodular(zeta)
    theta = np.angle(zeta) % TWO_PI
    out = np.where(I.contains(theta), 1.0 / I.length, 0.0)
    return out if out.ndim else float(out)
