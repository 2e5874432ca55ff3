"""Corpus x check-grid verification runs and their JSON/CSV outputs."""

from __future__ import annotations

import csv
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import identities as ids
from . import inequalities as ineq
from .circle_fn import AnalyticSeries, FourierSeries, Series, analytic_completion
from .corpus import CorpusSpec, gen_log_singularity
from .errors import BMOError
from .kernels import Interval, poisson
from .norms import SearchGrid, bmo2, garsia_at, garsia_table, level_set_ratio
from .quadrature import DEFAULT_SCHEME, DiskQuadScheme, poisson_weights

SUITE_VERSION = "1.0"
NO_TIMESTAMP_ENV = "BMOKIT_NO_TIMESTAMP"

EPS_FRACS = (0.1, 0.25, 0.5, 0.75, 0.9)
Z_VALUES = (0j, 0.3 + 0.2j, -0.5j, 0.6 * np.exp(1j), 0.8 * np.exp(2j))
DISK_DEGREE_LIMIT = 16


@dataclass(frozen=True)
class Profile:
    """Resolution profile: circle grid, sup-search grid, degree cap, disk scheme."""

    name: str
    circle_M: int
    grid_n: int
    N_max: int
    scheme: DiskQuadScheme = DEFAULT_SCHEME
    n_analytic: int = 20
    n_real: int = 20
    z_values: tuple = Z_VALUES
    log_N: int = 512

    @property
    def grid(self) -> SearchGrid:
        return SearchGrid(n_radii=self.grid_n, n_angles=self.grid_n, circle_M=self.circle_M)

    def to_dict(self) -> dict:
        return {"name": self.name, "circle_M": self.circle_M,
                "grid": [self.grid_n, self.grid_n], "N_max": self.N_max,
                "scheme": self.scheme.to_dict(), "n_analytic": self.n_analytic,
                "n_real": self.n_real, "log_N": self.log_N,
                "z_values": [[complex(z).real, complex(z).imag] for z in self.z_values]}


PROFILES = {
    "fast": Profile("fast", 1024, 64, 64, n_analytic=4, n_real=4,
                    z_values=Z_VALUES[:2], log_N=64),
    "default": Profile("default", 4096, 128, 512, n_analytic=10, n_real=10,
                       z_values=Z_VALUES[:3], log_N=512),
    "thorough": Profile("thorough", 16384, 256, 512, scheme=DEFAULT_SCHEME.doubled(),
                        n_analytic=20, n_real=20, log_N=512),
}


def get_profile(name: str) -> Profile:
    try:
        return PROFILES[name]
    except KeyError:
        raise BMOError(f"unknown profile {name!r}; choose from {', '.join(PROFILES)}") from None


def default_corpus(profile: Profile, seed: int, degree: int = 8) -> list[CorpusSpec]:
    return [
        CorpusSpec("random_analytic", degree, seed, profile.n_analytic),
        CorpusSpec("lacunary", 0, 0, 1, {"J": 3, "base": 2}),
        CorpusSpec("log", min(profile.log_N, profile.N_max), 0, 1),
        CorpusSpec("random_real", degree, seed + 10 ** 6, profile.n_real),
        CorpusSpec("log_real", min(profile.log_N, profile.N_max), 0, 1),
        CorpusSpec("smoothed_step", 32, 0, 1, {"width": 0.2}),
    ]


# --------------------------------------------------------------------------
# task list

@dataclass
class Task:
    label: str
    run: Callable[[], list]
    function: Optional[str] = None


def _records(results, function: Optional[str]) -> list[dict]:
    out = []
    for r in results:
        d = r.to_json_dict()
        if function is not None:
            d["function"] = function
        out.append(d)
    return out


def _kernel_normalization(M: int, n: int = 100, seed: int = 0) -> ids.CheckReport:
    rng = np.random.default_rng(seed)
    z = np.sqrt(rng.uniform(0, 0.99 ** 2, n)) * np.exp(2j * np.pi * rng.uniform(size=n))
    theta = 2 * np.pi * np.arange(M) / M
    zeta = np.exp(1j * theta)
    worst = 0.0
    for zk in z:
        total = float(np.sum(poisson(zk, zeta)) * 2 * np.pi / M)
        worst = max(worst, abs(total - 1))
    return ids.CheckReport("kernel_normalization", 1.0 + worst, 1.0, 1e-12,
                           {"n_points": n, "max_abs_z": 0.99}, {"circle_M": M})


def _jn_series_grid(n: int = 1000) -> list:
    xs = np.linspace(0, 0.999, n)
    series = ineq.jn_series_partial(xs)
    closed = ineq.jn_series_closed_form(xs)
    bound = 3 / (1 - xs) ** 1.5
    k = int(np.argmax(np.abs(series - closed)))
    ident = ids.CheckReport("jn_series_grid", float(series[k]), float(closed[k]), 1e-10,
                            {"n_points": n, "x_max": 0.999, "worst_x": float(xs[k])},
                            {"method": "adaptive partial sums"})
    j = int(np.argmax(closed / bound))
    bnd = ineq.InequalityResult("jn_series_bound_grid", float(closed[j]), float(bound[j]),
                                ineq.JN, tol=0.0, witness={"x": float(xs[j])})
    return [ident, bnd, ineq.jn_majorant_constant()]


def _analytic_tasks(fid: str, F: AnalyticSeries, partner: AnalyticSeries,
                    profile: Profile) -> list[Task]:
    grid, scheme = profile.grid, profile.scheme
    tasks = [Task(f"theorem1:{fid}", lambda: ineq.check_theorem1(F, grid), fid)]

    def moments_and_jn():
        n2 = bmo2(F, grid)
        n1 = ineq.bmo1(F, grid)
        out = ineq.check_moment_bounds(F, 0, 3, grid, norm=n2)
        for frac in EPS_FRACS:
            out.append(ineq.check_strong_jn(F, 0, frac * ineq.jn_threshold(n2.value),
                                            grid, norm=n2))
            out.append(ineq.check_jn_bmo1_corollary(F, 0, frac / (math.e * n1.value),
                                                    grid, norm=n1))
        return out

    tasks.append(Task(f"moments_jn:{fid}", moments_and_jn, fid))
    if F.degree > DISK_DEGREE_LIMIT:
        return tasks

    def disk_checks():
        n2 = bmo2(F, grid)
        out = []
        for z in profile.z_values:
            out.append(ids.greens_identity_residual(ids.QuadraticField([F]), z, scheme=scheme))
            for p in (2, 3, 4):
                out.append(ids.hardy_stein_residual(F, p, z, scheme))
            out.append(ids.hardy_stein_residual(F, 1, z, scheme))
            for k in (1, 3):
                out.append(ids.hs_k_residual(F, k, z, scheme))
            out.append(ids.polarized_residual(F, partner, z, scheme))
            out.append(ineq.check_uchiyama(F, partner, z, scheme=scheme, grid=grid, norm=n2))
            out.append(ineq.check_main_lemma(F, partner, z, scheme, grid, norm=n2))
            out.append(ineq.check_duality_bound(F, partner, z, grid, norm=n2))
        return out

    tasks.append(Task(f"disk:{fid}", disk_checks, fid))
    return tasks


def _real_tasks(fid: str, u: FourierSeries, partner: AnalyticSeries,
                profile: Profile) -> list[Task]:
    grid, scheme = profile.grid, profile.scheme
    tasks = [Task(f"theorem2:{fid}", lambda: ineq.check_theorem2(u, grid), fid)]

    def circle_checks():
        n2 = bmo2(u, grid)
        out = [ids.remark_uf_residual(u, z) for z in profile.z_values]
        for frac in EPS_FRACS:
            eps = frac / (math.sqrt(2 * math.e) * n2.value)
            out.append(ineq.check_strong_jn(u, 0, eps, grid, norm=n2))
        for z in profile.z_values:
            out.append(ineq.check_duality_bound(u, partner, z, grid, norm=n2))
        return out

    tasks.append(Task(f"circle:{fid}", circle_checks, fid))
    if u.degree > DISK_DEGREE_LIMIT:
        return tasks

    def disk_checks():
        n2 = bmo2(u, grid)
        out = []
        for z in profile.z_values:
            for p in (2, 3):
                out.append(ids.hardy_stein_harmonic_residual(u, p, z, scheme))
            out.extend(ineq.check_h1_lemma(u, z, scheme))
            out.append(ineq.check_uchiyama(u, partner, z, scheme=scheme, grid=grid, norm=n2))
            out.append(ineq.check_main_lemma(u, partner, z, scheme, grid, norm=n2))
        return out

    tasks.append(Task(f"disk:{fid}", disk_checks, fid))
    return tasks


def build_tasks(members: list[tuple[str, Series]], profile: Profile) -> list[Task]:
    tasks = []
    analytic = [(fid, f) for fid, f in members if isinstance(f, AnalyticSeries)]
    real = [(fid, f) for fid, f in members if isinstance(f, FourierSeries) and f.is_real]
    small = [f for _, f in analytic if f.degree <= DISK_DEGREE_LIMIT]
    fallback = AnalyticSeries(np.array([1.0, 0.5, 0.25]))
    for i, (fid, F) in enumerate(analytic):
        partner = small[(i + 1) % len(small)] if small else fallback
        tasks += _analytic_tasks(fid, F, partner, profile)
    for i, (fid, u) in enumerate(real):
        partner = small[i % len(small)] if small else fallback
        tasks += _real_tasks(fid, u, partner, profile)
    for fid, f in (analytic[:1] + real[:1]):
        tasks.append(Task(f"dilation:{fid}",
                          lambda f=f: ineq.check_dilation_monotone(f, grid=profile.grid), fid))
    return tasks


def _run_task(task: Task) -> list[dict]:
    try:
        return _records(task.run(), task.function)
    except (BMOError, ArithmeticError, ValueError) as exc:
        rec = {"name": task.label, "kind": "error", "pass": False,
               "error": type(exc).__name__, "message": str(exc)}
        if task.function is not None:
            rec["function"] = task.function
        return [rec]


# --------------------------------------------------------------------------
# summary

def _summary(checks: list[dict]) -> dict:
    n_pass = sum(1 for c in checks if c.get("pass"))
    worst_margin, worst_name = math.inf, None
    worst_resid, worst_resid_name = 0.0, None
    ratios: dict[str, dict] = {}
    for c in checks:
        if c["kind"] == "inequality":
            if c["relative_margin"] < worst_margin:
                worst_margin, worst_name = c["relative_margin"], c["name"]
            notes = c.get("notes", {})
            if c["name"] in ("theorem1_upper", "theorem2_sharp") and notes.get("ratio"):
                key = c["name"].split("_")[0]
                cur = ratios.get(key)
                if cur is None or notes["ratio"] > cur["max_ratio"]:
                    ratios[key] = {"max_ratio": notes["ratio"],
                                   "constant": c["constant"]["value"],
                                   "function": c.get("function")}
        elif c["kind"] == "identity" and c["relative"] > worst_resid:
            worst_resid, worst_resid_name = c["relative"], c["name"]
    return {"pass": n_pass, "fail": len(checks) - n_pass,
            "errors": sum(1 for c in checks if c["kind"] == "error"),
            "worst_margin": None if worst_name is None else
            {"relative": worst_margin, "check": worst_name},
            "worst_identity_residual": None if worst_resid_name is None else
            {"relative": worst_resid, "check": worst_resid_name},
            "extremal_ratios": ratios}


def _norm_refinement(members: list[tuple[str, Series]], profile: Profile) -> list[dict]:
    """Right-hand-side norms re-run on a doubled search grid."""
    g = profile.grid
    fine = replace(g, n_radii=2 * g.n_radii, n_angles=2 * g.n_angles)
    out = []
    for fid, f in members:
        a, b = bmo2(f, g).value, bmo2(f, fine).value
        out.append({"function": fid, "bmo2": a, "bmo2_doubled": b,
                    "relative_change": (b - a) / b if b else 0.0})
    return out


def _truncation_sensitivity(profile: Profile) -> list[dict]:
    """Poisson variance at 0 and BMO_2 norm of truncated ``log(1 - z)``."""
    out = []
    N = 16
    while N <= min(profile.log_N, profile.N_max):
        _, F = gen_log_singularity(N)
        out.append({"N": N, "garsia_at_0": garsia_at(F, 0),
                    "pi2_over_6_minus": math.pi ** 2 / 6 - garsia_at(F, 0),
                    "bmo2": bmo2(F, profile.grid).value})
        N *= 2
    return out


def run_suite(specs: list[CorpusSpec], profile: Profile | str = "default", seed: int = 0,
              threads: int | None = None, include_globals: bool = True) -> dict:
    """Run every applicable check over the corpus; errors are recorded, not raised."""
    if isinstance(profile, str):
        profile = get_profile(profile)
    members = [m for spec in specs for m in spec.build()]
    for fid, f in members:
        if f.degree > profile.N_max:
            raise BMOError(f"{fid}: degree {f.degree} exceeds the profile limit {profile.N_max}")
    tasks = build_tasks(members, profile)
    if include_globals and members:
        tasks = [Task("kernel_normalization",
                      lambda: [_kernel_normalization(max(profile.circle_M, 4096))]),
                 Task("jn_series", _jn_series_grid)] + tasks
    threads = threads or os.cpu_count() or 1
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_run_task, tasks))
    else:
        chunks = [_run_task(t) for t in tasks]
    checks = [c for chunk in chunks for c in chunk]
    report = {"suite_version": SUITE_VERSION, "profile": profile.to_dict(), "seed": seed,
              "corpus": [s.to_json_dict() for s in specs],
              "checks": checks, "summary": _summary(checks)}
    if members:
        report["summary"]["norm_refinement"] = _norm_refinement(members, profile)
        report["summary"]["log_truncation"] = _truncation_sensitivity(profile)
    if not os.environ.get(NO_TIMESTAMP_ENV):
        report["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return report


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=2, allow_nan=True) + "\n"


# --------------------------------------------------------------------------
# plot data

def write_plot_data(members: list[tuple[str, Series]], profile: Profile, outdir) -> list[Path]:
    """Garsia tables, exponential integrals vs eps, level-set log-ratios."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []

    def safe(fid):
        return "".join(ch if ch.isalnum() else "_" for ch in fid).strip("_")

    for fid, f in members:
        radii, angles, vals = garsia_table(f, profile.grid)
        p = outdir / f"garsia_{safe(fid)}.csv"
        with p.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["radius", "angle", "garsia"])
            for i, r in enumerate(radii):
                for j, a in enumerate(angles):
                    w.writerow([repr(float(r)), repr(float(a)), repr(float(vals[i, j]))])
        written.append(p)

        F = f if isinstance(f, AnalyticSeries) else (
            analytic_completion(f) if f.is_real else None)
        if F is not None and not F.is_constant():
            b = bmo2(F, profile.grid).value
            thr = ineq.jn_threshold(b)
            p = outdir / f"jn_{safe(fid)}.csv"
            with p.open("w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["eps", "eps_frac", "integral", "bound"])
                for frac in np.linspace(0.02, 0.98, 49):
                    eps = frac * thr
                    val, _ = ineq.exponential_integral(F, 0, eps)
                    x = eps * math.sqrt(math.e) / 2 * b
                    w.writerow([repr(float(eps)), repr(float(frac)), repr(float(val)),
                                repr(float(ineq.jn_bound(x)))])
            written.append(p)

        p = outdir / f"levelsets_{safe(fid)}.csv"
        arcs = {"whole": Interval.whole(), "near_one": Interval(-np.pi / 8, np.pi / 8)}
        with p.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["interval", "lambda", "ratio", "log_ratio"])
            for name, I in arcs.items():
                for lam in np.linspace(0.25, 5.0, 20):
                    ratio = level_set_ratio(f, I, float(lam), profile.circle_M)
                    w.writerow([name, repr(float(lam)), repr(float(ratio)),
                                repr(float(math.log(ratio))) if ratio > 0 else "-inf"])
        written.append(p)
    return written
