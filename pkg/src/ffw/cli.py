"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or domain error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import cylinder
from .combinatorics import format_rational, parse_rational
from .cylinder import MonomialFunctional, poly_eval_exact, pretty_print, substitute_tau_iq
from .montecarlo import MODES, WienerMCConfig, default_seed
from .series import (
    SmoothFunctionalSpec,
    l_r_diagnostic,
    series_fft_full,
    series_fft_paper,
    truncated_maclaurin,
    wiener_integral_truncation,
)
from .transform import OddExponentError, general_monomial_transform, t_lambda_poly
from .verify import render_report, run_checks, table1_rows

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text: str) -> List[int]:
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not out or any(x < 0 for x in out):
        raise argparse.ArgumentTypeError(f"expected nonnegative integers, got {text!r}")
    return out


def _float_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational number, got {text!r}")


def _q_arg(text: str) -> Optional[Fraction]:
    """A rational q, or the literal 'q' for symbolic output."""
    if text.strip() == "q":
        return None
    return _rational(text)


def _emit(args, payload: dict, pretty: str):
    if args.output == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(pretty)


def _functional(args) -> MonomialFunctional:
    if (args.p is None) == (args.k is None):
        raise UsageError("give exactly one of --p (half exponents) or --k (exponents)")
    coef = args.coef
    if coef == 0:
        raise UsageError("--coef must be nonzero")
    if args.p is not None:
        return MonomialFunctional.from_p(args.p, coef)
    return MonomialFunctional(tuple(args.k), coef)


def _transform_poly(args):
    F = _functional(args)
    if not F.is_even and not args.general:
        raise UsageError(f"exponents {list(F.exponents)} include odd entries; pass --general")
    if F.is_even:
        return F, t_lambda_poly(F)
    return F, general_monomial_transform(F.exponents, F.coefficient)


def _add_functional_args(sp):
    sp.add_argument("--p", type=_int_list, help="half exponents p_j, functional prod v_j^(2 p_j)")
    sp.add_argument("--k", type=_int_list, help="raw exponents k_j (odd entries need --general)")
    sp.add_argument("--coef", type=_rational, default=Fraction(1), help="rational coefficient")
    sp.add_argument("--general", action="store_true", help="allow odd exponents")


def _add_mc_args(sp, samples_flag="--samples"):
    sp.add_argument(samples_flag, dest="samples", type=int, default=None, help="Monte Carlo sample count")
    sp.add_argument("--grid", type=int, default=None, help="time grid intervals for path-pwz")
    sp.add_argument("--seed", type=int, default=None, help="seed (default: $FFW_SEED or 0)")
    sp.add_argument("--workers", type=int, default=None)
    sp.add_argument("--mode", choices=MODES, default=None)
    sp.add_argument("--mc-config", default=None, help="JSON file with samples/grid/seed/workers/mode")


def _mc_config(args, samples: int) -> WienerMCConfig:
    base = {"samples": samples, "grid": 1024, "seed": default_seed(), "workers": 1, "mode": "direct-gaussian"}
    if args.mc_config:
        with open(args.mc_config, encoding="utf-8") as fh:
            base.update(json.load(fh))
    for key in ("samples", "grid", "seed", "workers", "mode"):
        value = getattr(args, key, None)
        if value is not None:
            base[key] = value
    return WienerMCConfig.from_dict(base)


# ---------------------------------------------------------------- commands


def run_fft(args) -> int:
    F, poly = _transform_poly(args)
    q = args.q
    payload = {"exponents": list(F.exponents), "tau_form": cylinder.to_json_obj(poly)}
    lines = [f"tau-form (tau = 1/lambda): {pretty_print(poly)}"]
    if q is None:
        lines.append(f"T_q: {pretty_print(poly, 'iq')}")
        payload["q"] = "q"
        payload["iq_form"] = pretty_print(poly, "iq")
    else:
        if q == 0:
            raise UsageError("q must be nonzero")
        sub = substitute_tau_iq(poly, q)
        lines.append(f"T_q (q = {q}): {pretty_print(sub)}")
        payload["q"] = format_rational(q)
        payload["substituted"] = cylinder.to_json_obj(sub)
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def run_wiener(args) -> int:
    F, poly = _transform_poly(args)
    payload = {"exponents": list(F.exponents), "tau_form": cylinder.to_json_obj(poly)}
    lines = [f"T_lambda (tau = 1/lambda): {pretty_print(poly)}"]
    lam = args.lam
    if lam is not None and lam <= 0:
        raise UsageError("--lambda must be positive")
    if args.eval_v is not None:
        if lam is None:
            raise UsageError("--eval-v needs --lambda")
        if len(args.eval_v) != F.dimension:
            raise UsageError(f"--eval-v needs {F.dimension} coordinates")
        v_exact = [Fraction(x) for x in args.eval_v]
        value = poly_eval_exact(poly, v_exact, 1 / lam)
        payload.update({"lambda": format_rational(lam), "v": args.eval_v, "value": float(value.re),
                        "value_exact": format_rational(value.re)})
        lines.append(f"value at v = {args.eval_v}, lambda = {lam}: {value.re}")
        if args.output != "json":
            lines = [str(value.re)] if args.quiet else lines
    elif lam is not None:
        sub = poly.substitute_tau(1 / lam)
        payload.update({"lambda": format_rational(lam), "substituted": cylinder.to_json_obj(sub)})
        lines.append(f"lambda = {lam}: {pretty_print(sub)}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def run_series(args) -> int:
    if args.n < 1 or args.r < 1:
        raise UsageError("--n and --r must be positive")
    if args.q == 0:
        raise UsageError("q must be nonzero")
    spec = SmoothFunctionalSpec(args.n, args.h0, args.const)
    h_r = truncated_maclaurin(spec, args.r)
    w = wiener_integral_truncation(spec, args.r)
    paper = series_fft_paper(spec, args.r, args.q, printed_odd_branch=args.printed_odd_branch)
    full = series_fft_full(spec, args.r, args.q)
    names = [f"u{j + 1}" for j in range(args.n)]

    def form(res):
        return pretty_print(res.poly, "iq") if res.q is None else pretty_print(res.substituted)

    def obj(res):
        return cylinder.to_json_obj(res.poly if res.q is None else res.substituted)

    lines = [
        f"h_r: {pretty_print(h_r, names=names)}",
        f"Wiener integral of H_r: {w} = {float(w):.10f}",
        f"transform, even-degree monomials only: {form(paper)}",
        f"transform, all monomials: {form(full)}",
        f"difference: {pretty_print((full.poly - paper.poly) if full.q is None else (full.substituted - paper.substituted), 'iq')}",
    ]
    payload = {
        "spec": {"n": args.n, "h0": format_rational(spec.h0), "const": format_rational(spec.derivative_constant), "r": args.r},
        "q": "q" if args.q is None else format_rational(args.q),
        "truncated_maclaurin": cylinder.to_json_obj(h_r),
        "wiener_integral": {"exact": format_rational(w), "value": float(w)},
        "fft_even_only": obj(paper),
        "fft_all_monomials": obj(full),
    }
    if args.lr:
        cfg = _mc_config(args, args.samples or 100_000)
        est = l_r_diagnostic(spec, spec.exponential_model(), args.r, args.rho, cfg)
        payload["l_r"] = est.to_dict()
        lines.append(
            f"L_r for h(u) = h0 + c(exp(sum u) - 1), rho = {args.rho}: {est.mean:.6g} +- {est.std_error:.2g} "
            f"({est.samples} samples, seed {est.seed})"
        )
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def run_verify(args) -> int:
    cfg = _mc_config(args, args.samples or 1_000_000)
    checks = run_checks(cfg, strict_f4=args.strict_table1_f4, path_samples=args.path_samples)
    ok = all(c.passed for c in checks)
    payload = {
        "passed": ok,
        "config": cfg.to_dict(),
        "checks": [
            {"name": c.name, "tolerance": c.tolerance, "passed": c.passed, "detail": c.detail,
             "errata": c.notes, "seconds": round(c.seconds, 3)}
            for c in checks
        ],
    }
    _emit(args, payload, render_report(checks))
    return EXIT_OK if ok else EXIT_FAIL


def run_table1(args) -> int:
    rows = table1_rows(args.q)
    lines = []
    for r in rows:
        lines.append(f"p={r['p']}: {r['formula']}")
        if not r["matches_printed"]:
            lines.append(f"    printed: {r['printed']}")
            lines.extend(f"    ERRATUM {d}" for d in r["differences"])
            lines.extend(f"    ERRATUM {d}" for d in r["notes"])
    _emit(args, {"q": "q" if args.q is None else format_rational(args.q), "rows": rows}, "\n".join(lines))
    return EXIT_OK


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ffw", description="Analytic Fourier-Feynman transforms of polynomial cylinder functionals.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--output", choices=("pretty", "json"), default="pretty")
        return sp

    sp = add("fft", "analytic Fourier-Feynman transform of a monomial")
    _add_functional_args(sp)
    sp.add_argument("--q", type=_q_arg, default=None, help="rational q, or 'q' for symbolic (default)")
    sp.set_defaults(func=run_fft)

    sp = add("wiener", "scaled shifted Wiener integral T_lambda")
    _add_functional_args(sp)
    sp.add_argument("--lambda", dest="lam", type=_rational, default=None)
    sp.add_argument("--eval-v", dest="eval_v", type=_float_list, default=None)
    sp.add_argument("--quiet", action="store_true", help="print only the value with --eval-v")
    sp.set_defaults(func=run_wiener)

    sp = add("series", "series approximation report")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--h0", type=_rational, default=Fraction(1))
    sp.add_argument("--const", type=_rational, default=Fraction(1), help="common derivative value at 0")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--q", type=_q_arg, default=None)
    sp.add_argument("--printed-odd-branch", action="store_true", help="odd r returns h0 only")
    sp.add_argument("--lr", action="store_true", help="Monte Carlo L_r diagnostic for the exponential model")
    sp.add_argument("--rho", type=float, default=1.0)
    _add_mc_args(sp)
    sp.set_defaults(func=run_series)

    sp = add("verify", "run the verification suite")
    _add_mc_args(sp, "--mc-samples")
    sp.add_argument("--path-samples", type=int, default=20_000)
    sp.add_argument("--strict-table1-f4", action="store_true", help="fail if the printed degree-8 row differs")
    sp.set_defaults(func=run_verify)

    sp = add("table1", "regenerate the one-dimensional table")
    sp.add_argument("--q", type=_q_arg, default=None)
    sp.set_defaults(func=run_table1)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        sys.stdout.reconfigure(encoding="utf-8", line_buffering=True)
    except AttributeError:
        pass
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, OddExponentError, ValueError, ZeroDivisionError) as exc:
        print(f"ffw {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        # downstream closed early (e.g. `| head`); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
