"""Command-line driver: ``bmokit norms | verify | suite | gen``.

Exit codes: 0 all checks pass, 1 some check fails, 2 usage or input
validation error, 3 numerical abort.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import identities as ids
from . import inequalities as ineq
from .circle_fn import (AnalyticSeries, FourierSeries, Series, analytic_completion,
                        as_fourier, load_samples_csv, load_series_json, save_series_json)
from .corpus import GENERATORS, CorpusSpec, parse_generator_spec
from .errors import DomainError, NumericalAbort
from .norms import bmo_pair, bmo_star
from .suite import (PROFILES, _kernel_normalization, default_corpus,
                    dumps_report, get_profile, run_suite, write_plot_data)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ABORT = 0, 1, 2, 3
DEFAULT_INPUT = "monomial:n=1"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on its own; route that through our handler instead."""

    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# inputs

def parse_z(text: str) -> complex:
    """``"re,im"`` or a Python complex literal such as ``0.3+0.2j``."""
    try:
        if "," in text:
            re_, im_ = text.split(",")
            return complex(float(re_), float(im_))
        return complex(text.replace(" ", ""))
    except ValueError:
        raise DomainError(f"cannot parse z = {text!r}; expected 're,im'") from None


def load_input(text: str, seed: int | None = None,
               csv_degree: int | None = None) -> list[tuple[str, Series]]:
    """A series JSON file, a samples CSV, or a generator spec ``name:key=value,...``."""
    path = Path(text)
    if path.suffix.lower() in (".json", ".csv") or path.exists():
        if not path.exists():
            raise DomainError(f"input file {text!r} does not exist")
        if path.suffix.lower() == ".csv":
            f = load_samples_csv(path)
            # the profile's degree limit caps what the samples resolve
            if csv_degree is not None and f.degree > csv_degree:
                f = f.truncate(csv_degree)
            return [(path.name, f)]
        return [(path.name, load_series_json(path))]
    spec = parse_generator_spec(text)
    if seed is not None and "seed=" not in text and '"seed"' not in text:
        spec = CorpusSpec(spec.generator, spec.N, seed, spec.count, spec.params)
    return spec.build()


def as_analytic(f: Series) -> AnalyticSeries:
    """Analytic input unchanged; real input -> its analytic completion."""
    if isinstance(f, AnalyticSeries):
        return f
    if f.is_real:
        return analytic_completion(f)
    N = f.coeffs.size // 2
    if np.any(f.coeffs[:N] != 0):
        raise DomainError("this check needs an analytic or real-valued input")
    return AnalyticSeries(f.coeffs[N:])


def as_real(f: Series) -> FourierSeries:
    """Real input unchanged; otherwise the real part of the boundary values."""
    g = as_fourier(f)
    return g if g.is_real else g.real_part()


# --------------------------------------------------------------------------
# verify selectors

def _z_list(args) -> list[complex]:
    return [parse_z(args.z)] if args.z is not None else [0j]


def _eps_for(f: Series, frac: float, args, grid):
    n2 = ineq.bmo2(f, grid)
    if isinstance(f, FourierSeries):
        return frac / (math.sqrt(2 * math.e) * n2.value), n2
    return frac * ineq.jn_threshold(n2.value), n2


def _verify(selector: str, f: Series, partner: AnalyticSeries, args, profile) -> list:
    grid, scheme = profile.grid, profile.scheme
    zs = _z_list(args)
    out: list = []
    if selector == "greens":
        for z in zs:
            out.append(ids.greens_identity_residual(ids.QuadraticField([as_analytic(f)]), z,
                                                    scheme=scheme))
    elif selector == "hardy-stein":
        for z in zs:
            out.append(ids.hardy_stein_residual(as_analytic(f), args.p, z, scheme))
    elif selector == "hs-k":
        for z in zs:
            for k in range(1, args.k_max + 1):
                out.append(ids.hs_k_residual(as_analytic(f), k, z, scheme))
    elif selector == "harmonic-hardy-stein":
        for z in zs:
            out.append(ids.hardy_stein_harmonic_residual(as_real(f), args.p, z, scheme))
    elif selector == "polarized":
        for z in zs:
            out.append(ids.polarized_residual(as_analytic(f), partner, z, scheme))
    elif selector == "remark-uf":
        out += [ids.remark_uf_residual(as_real(f), z) for z in zs]
    elif selector == "h1-identity":
        out += [ids.h1_identity_residual(as_real(f), z, scheme=scheme) for z in zs]
    elif selector == "h1-lemma":
        for z in zs:
            out.extend(ineq.check_h1_lemma(as_real(f), z, scheme))
    elif selector == "uchiyama":
        out += [ineq.check_uchiyama(f, partner, z, scheme=scheme, grid=grid) for z in zs]
    elif selector == "main-lemma":
        out += [ineq.check_main_lemma(f, partner, z, scheme, grid) for z in zs]
    elif selector == "duality":
        out += [ineq.check_duality_bound(f, partner, z, grid) for z in zs]
    elif selector == "theorem1":
        out += ineq.check_theorem1(as_analytic(f), grid)
    elif selector == "theorem2":
        out += ineq.check_theorem2(as_real(f), grid)
    elif selector == "moments":
        for z in zs:
            out += ineq.check_moment_bounds(as_analytic(f), z, args.k_max, grid)
    elif selector == "strong-jn":
        eps, n2 = _eps_for(f, args.eps_frac, args, grid)
        out += [ineq.check_strong_jn(f, z, eps, grid, norm=n2) for z in zs]
    elif selector == "jn-bmo1":
        F = as_analytic(f)
        n1 = ineq.bmo1(F, grid)
        eps = args.eps_frac / (math.e * n1.value) if n1.value > 0 else args.eps_frac
        out += [ineq.check_jn_bmo1_corollary(F, z, eps, grid, norm=n1) for z in zs]
    elif selector == "jn-series":
        out.extend(ineq.jn_series_check(args.x))
    elif selector == "dilation":
        out += ineq.check_dilation_monotone(f, grid=grid)
    elif selector == "kernel-normalization":
        out.append(_kernel_normalization(max(profile.circle_M, 4096)))
    return out


SELECTORS = ("greens", "hardy-stein", "hs-k", "harmonic-hardy-stein", "polarized",
             "remark-uf", "h1-identity", "h1-lemma", "uchiyama", "main-lemma", "duality",
             "theorem1", "theorem2", "moments", "strong-jn", "jn-bmo1", "jn-series",
             "dilation", "kernel-normalization")
# selectors that do not read --input
_INPUTLESS = ("jn-series", "kernel-normalization")


# --------------------------------------------------------------------------
# commands

def _emit(text: str, out: str | None):
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _check_degree(members, profile):
    for fid, f in members:
        if f.degree > profile.N_max:
            raise DomainError(f"{fid}: degree {f.degree} exceeds the {profile.name} "
                              f"profile limit N <= {profile.N_max}")


def cmd_norms(args) -> int:
    profile = get_profile(args.profile)
    members = load_input(args.input, args.seed, csv_degree=profile.N_max)
    _check_degree(members, profile)
    results = []
    for fid, f in members:
        n1, n2 = bmo_pair(f, profile.grid)
        star = bmo_star(f)
        results.append({"function": fid, "star": star.to_json_dict(),
                        "bmo1": n1.to_json_dict(), "bmo2": n2.to_json_dict()})
    doc = {"command": "norms", "input": args.input, "profile": profile.to_dict(),
           "seed": args.seed, "results": results}
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.check not in SELECTORS:
        raise UsageError(f"unknown check {args.check!r}; choose from {', '.join(SELECTORS)}")
    profile = get_profile(args.profile)
    partner = load_input(args.partner)[0][1] if args.partner else AnalyticSeries.monomial(1)
    partner = as_analytic(partner)
    if args.check in _INPUTLESS:
        members = [(None, None)]
    else:
        members = load_input(args.input, args.seed, csv_degree=profile.N_max)
        _check_degree(members, profile)
    records = []
    for fid, f in members:
        for r in _verify(args.check, f, partner, args, profile):
            d = r.to_json_dict()
            if fid is not None:
                d["function"] = fid
            records.append(d)
    doc = {"command": "verify", "check": args.check, "input": args.input,
           "profile": profile.name, "seed": args.seed, "results": records}
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_OK if all(r["pass"] for r in records) else EXIT_FAIL


def cmd_suite(args) -> int:
    profile = get_profile(args.profile)
    if args.corpus:
        specs = [parse_generator_spec(s) for s in args.corpus]
    else:
        specs = default_corpus(profile, args.seed)
    report = run_suite(specs, profile, args.seed, threads=args.threads)
    text = dumps_report(report)
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "report.json").write_text(text)
        if not args.no_plots:
            # one representative per corpus family keeps the plot set small
            members = [s.member(0) for s in specs if s.count]
            write_plot_data(members, profile, outdir / "plots")
    else:
        sys.stdout.write(text)
    s = report["summary"]
    print(f"suite[{profile.name}, seed={args.seed}]: {s['pass']} pass, {s['fail']} fail, "
          f"{s['errors']} errors", file=sys.stderr)
    return EXIT_OK if s["fail"] == 0 and s["errors"] == 0 else EXIT_FAIL


def cmd_gen(args) -> int:
    params = {}
    for item in args.param:
        key, eq, val = item.partition("=")
        if not eq:
            raise DomainError(f"--param expects key=value, got {item!r}")
        params[key] = float(val) if "." in val or "e" in val.lower() else int(val)
    spec = CorpusSpec(args.generator, args.N, args.seed, 1, params)
    fid, f = spec.member(0)
    if args.out:
        save_series_json(f, args.out)
        print(f"wrote {fid} to {args.out}", file=sys.stderr)
    else:
        sys.stdout.write(json.dumps(f.to_json_dict()) + "\n")
    return EXIT_OK


# --------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--profile", choices=sorted(PROFILES), default="default",
                        help="resolution profile (default: %(default)s)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for generator inputs without an explicit seed")
    common.add_argument("--out", help="output file (norms/verify/gen) or directory (suite)")
    common.add_argument("--threads", type=int, default=None,
                        help="worker threads (default: all cores)")

    p = _Parser(prog="bmokit", description="BMO norms, identities and inequality checks "
                "for Fourier and power series on the unit circle.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    n = sub.add_parser("norms", parents=[common], help="star, BMO_1 and BMO_2 norms")
    n.add_argument("--input", default=DEFAULT_INPUT,
                   help="series JSON, samples CSV, or generator spec (default: %(default)s)")
    n.set_defaults(func=cmd_norms)

    v = sub.add_parser("verify", parents=[common], help="run one identity/inequality check")
    v.add_argument("check", help=f"one of: {', '.join(SELECTORS)}")
    v.add_argument("--input", default=DEFAULT_INPUT)
    v.add_argument("--partner", default=None,
                   help="second (analytic) function for two-function checks; default z")
    v.add_argument("--z", default=None, help="disk point 're,im' (default 0); "
                   "write --z=-0.5,0 for a negative real part")
    v.add_argument("--p", type=float, default=2.0, help="Hardy-Stein exponent")
    v.add_argument("--k-max", type=int, default=3, help="moment / hs-k order")
    v.add_argument("--eps-frac", type=float, default=0.5,
                   help="eps as a fraction of the admissibility threshold")
    v.add_argument("--x", type=float, default=0.5, help="argument of the series check")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("suite", parents=[common], help="full corpus x check grid")
    s.add_argument("--corpus", action="append", default=[],
                   help="generator spec (repeatable); default: the profile's corpus")
    s.add_argument("--no-plots", action="store_true", help="skip plot-data CSVs")
    s.set_defaults(func=cmd_suite)

    g = sub.add_parser("gen", parents=[common], help="write a generated series as JSON")
    g.add_argument("generator", choices=GENERATORS)
    g.add_argument("--N", type=int, default=8)
    g.add_argument("--param", action="append", default=[], help="key=value (repeatable)")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except (UsageError, DomainError, json.JSONDecodeError) as exc:
        print(f"bmokit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalAbort as exc:
        print(f"bmokit: numerical abort: {exc}", file=sys.stderr)
        return EXIT_ABORT


if __name__ == "__main__":
    sys.exit(main())
