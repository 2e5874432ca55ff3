"""Deterministic test-function generators.

Every generator is a pure function of its arguments; random families draw
from ``numpy.random.default_rng(seed)`` so a seed fixes the output bit for
bit.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Union

import numpy as np

from .circle_fn import N_MAX_DEFAULT, AnalyticSeries, FourierSeries, Series
from .errors import DomainError

GENERATORS = ("random_trig", "random_real", "random_analytic", "log", "log_real",
              "smoothed_step", "lacunary", "monomial")


def _rng(seed: int) -> np.random.Generator:
    if int(seed) != seed or not 0 <= seed < 2 ** 64:
        raise DomainError("seed must be a 64-bit unsigned integer")
    return np.random.default_rng(int(seed))


def gen_random_trig(N: int, seed: int, real: bool = False) -> FourierSeries:
    """Complex Gaussian coefficients scaled by ``1/(1+|n|)``, ``c_0 = 0``.

    With ``real=True`` the negative modes are the conjugates of the positive
    ones, so the symmetry holds exactly.
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    rng = _rng(seed)
    n = np.arange(-N, N + 1)
    g = rng.standard_normal(2 * N + 1) + 1j * rng.standard_normal(2 * N + 1)
    c = g / (1 + np.abs(n))
    c[N] = 0
    if real:
        c[:N] = np.conj(c[N + 1:][::-1])
    return FourierSeries(c, is_real=real)


def gen_random_analytic(N: int, seed: int) -> AnalyticSeries:
    """``sum_{n=1}^N a_n z^n`` with ``a_n`` complex Gaussian over ``1+n``."""
    if N < 1:
        raise DomainError("N must be >= 1")
    rng = _rng(seed)
    g = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    return AnalyticSeries(np.r_[0, g / (2 + np.arange(N))])


def gen_log_singularity(N: int) -> tuple[FourierSeries, AnalyticSeries]:
    """Truncations of ``log|1 - zeta|`` and ``log(1 - z)``.

    ``u_N = -sum_{1<=|n|<=N} e^{in theta} / (2|n|)`` and
    ``F_N = -sum_{n<=N} z^n / n``, so ``u_N = Re F_N``.
    """
    if N < 16:
        raise DomainError("log truncation needs N >= 16")
    n = np.arange(1, N + 1)
    half = -1.0 / (2 * n)
    u = FourierSeries(np.r_[half[::-1], 0, half].astype(complex), is_real=True)
    F = AnalyticSeries(np.r_[0, -1.0 / n].astype(complex))
    return u, F


def gen_smoothed_step(N: int, width: float) -> FourierSeries:
    """Gaussian-mollified square wave ``sign(sin theta)``, truncated at ``N``.

    Jumps sit at ``0`` and ``pi``; coefficients are damped by
    ``exp(-(n width)^2 / 2)``.
    """
    if not 0 < width < np.pi / 4:
        raise DomainError("width must lie in (0, pi/4)")
    if N < 1:
        raise DomainError("N must be >= 1")
    n = np.arange(1, N + 1)
    pos = np.where(n % 2 == 1, -2j / (np.pi * n), 0) * np.exp(-0.5 * (n * width) ** 2)
    c = np.r_[np.conj(pos[::-1]), 0, pos]
    return FourierSeries(c, is_real=True)


def gen_lacunary(J: int, base: int = 2, n_max: int = N_MAX_DEFAULT) -> AnalyticSeries:
    """``sum_{j=0}^J z^{base^j}``."""
    if base < 2 or J < 0:
        raise DomainError("need base >= 2 and J >= 0")
    top = base ** J
    if top > n_max:
        raise DomainError(f"degree base^J = {top} exceeds the limit {n_max}")
    a = np.zeros(top + 1, dtype=complex)
    a[[base ** j for j in range(J + 1)]] = 1
    return AnalyticSeries(a)


@dataclass(frozen=True)
class CorpusSpec:
    """``count`` members of one family; member ``i`` uses ``seed + i``."""

    generator: str
    N: int = 8
    seed: int = 0
    count: int = 1
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.generator not in GENERATORS:
            raise DomainError(f"unknown generator {self.generator!r}; "
                              f"choose from {', '.join(GENERATORS)}")
        if self.count < 0:
            raise DomainError("count must be >= 0")

    def member(self, i: int) -> tuple[str, Series]:
        g, N = self.generator, self.N
        s = self.seed + i
        if g == "random_trig":
            return f"random_trig[N={N},seed={s}]", gen_random_trig(N, s, real=False)
        if g == "random_real":
            return f"random_real[N={N},seed={s}]", gen_random_trig(N, s, real=True)
        if g == "random_analytic":
            return f"random_analytic[N={N},seed={s}]", gen_random_analytic(N, s)
        if g == "log":
            return f"log[N={N}]", gen_log_singularity(N)[1]
        if g == "log_real":
            return f"log_real[N={N}]", gen_log_singularity(N)[0]
        if g == "smoothed_step":
            w = float(self.params.get("width", 0.1))
            return f"smoothed_step[N={N},width={w:g}]", gen_smoothed_step(N, w)
        if g == "monomial":
            n = int(self.params.get("n", 1))
            return f"monomial[n={n}]", AnalyticSeries.monomial(n)
        J = int(self.params.get("J", 3))
        base = int(self.params.get("base", 2))
        return f"lacunary[J={J},base={base}]", gen_lacunary(J, base)

    def build(self) -> list[tuple[str, Series]]:
        return [self.member(i) for i in range(self.count)]

    def to_json_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json_dict(cls, d: dict) -> "CorpusSpec":
        return cls(d["generator"], int(d.get("N", 8)), int(d.get("seed", 0)),
                   int(d.get("count", 1)), dict(d.get("params", {})))


def parse_generator_spec(text: str) -> CorpusSpec:
    """``name:key=value,...`` -> :class:`CorpusSpec`, e.g. ``random_analytic:N=8,seed=3``.

    A JSON object is accepted as well.
    """
    text = text.strip()
    if text.startswith("{"):
        return CorpusSpec.from_json_dict(json.loads(text))
    name, _, rest = text.partition(":")
    kw: dict[str, Union[int, float]] = {}
    for part in filter(None, rest.split(",")):
        key, eq, val = part.partition("=")
        if not eq:
            raise DomainError(f"malformed generator parameter {part!r}")
        kw[key.strip()] = float(val) if "." in val or "e" in val.lower() else int(val)
    core = {k: int(kw.pop(k)) for k in ("N", "seed", "count") if k in kw}
    return CorpusSpec(name.strip(), params=kw, **core)
