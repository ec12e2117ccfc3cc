"""Command-line interface: reflect, validate, sweep, synth.

Exit codes: 0 ok, 1 validation failed, 2 bad arguments, 3 solver failure.
"""

import argparse
import cmath
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .errors import DomainError, SolverError
from .methods import METHODS, reflection
from .profile import theta_value
from .synth import (SYMBOL_METHODS, format_number, reflect_trace, ricker_wavelet,
                    spectral_phase, spectral_slope, valid_band, write_trace_csv)
from .validation import run_validation

EXIT_OK, EXIT_FAILED, EXIT_ARGS, EXIT_SOLVER = 0, 1, 2, 3
COLUMNS = ("alpha", "theta", "omega", "eta", "method",
           "re_R", "im_R", "abs_R", "arg_R", "est_error")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _num(x):
    if x is None:
        return ""
    return format_number(x)


def _row(alpha, theta, omega, eta, result):
    R = complex(result.R)
    est = result.diagnostics.get("est_error", float("nan"))
    vals = [_num(alpha), _num(theta), _num(omega), _num(eta), result.method,
            _num(R.real), _num(R.imag), _num(abs(R)), _num(cmath.phase(R)), _num(est)]
    return ",".join(vals)


def _emit(lines, out):
    text = "\n".join(lines) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _resolve_theta(args):
    physical = (args.c0, args.ell, args.omega)
    if args.theta is not None:
        if any(v is not None for v in physical):
            raise UsageError("give either --theta or --c0/--ell/--omega, not both")
        return args.theta, None
    if args.method == "fresnel":
        return None, args.omega
    if any(v is None for v in physical):
        raise UsageError("need --theta, or all of --c0 --ell --omega (and --eta)")
    if args.c0 <= 0 or args.ell <= 0 or args.omega == 0:
        raise DomainError("c0 and ell must be > 0 and omega nonzero")
    return float(theta_value(args.c0, args.ell, args.omega, args.eta, args.alpha)), args.omega


def run_reflect(args):
    if not 0 <= args.eta < 1:
        raise DomainError(f"eta must lie in [0, 1), got {args.eta}")
    theta, omega = _resolve_theta(args)
    result = reflection(args.alpha, theta if theta is not None else 0.0, args.method,
                        c_ratio=args.c_ratio, eta=args.eta)
    _emit([",".join(COLUMNS), _row(args.alpha, theta, omega, args.eta, result)], args.out)
    return EXIT_OK


def run_validate(args):
    report, elapsed = run_validation(quick=args.quick,
                                     inject_contraction_failure=args.inject_contraction_failure)
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        sys.stdout.write(text + "\n")
    sys.stderr.write(f"validate: {len(report)} checks in {elapsed:.1f} s\n")
    return EXIT_OK if all(c["pass"] for c in report.values()) else EXIT_FAILED


def parse_grid(spec):
    """'lo:hi:n' -> n log-spaced values from lo to hi."""
    try:
        lo, hi, n = spec.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise UsageError(f"grid spec must be lo:hi:n, got {spec!r}") from None
    if n < 1 or lo <= 0 or hi <= 0 or (n > 1 and hi < lo):
        raise UsageError(f"bad grid {spec!r}: need 0 < lo <= hi and n >= 1")
    return np.geomspace(lo, hi, n) if n > 1 else np.array([lo])


def parse_list(spec):
    try:
        vals = [float(v) for v in spec.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"bad list {spec!r}") from None
    if not vals:
        raise UsageError("empty list")
    return vals


def run_sweep(args):
    alphas = parse_list(args.alpha_list)
    thetas = parse_grid(args.theta_grid)
    pairs = [(a, float(t)) for a in alphas for t in thetas]
    for a, _ in pairs:
        if args.method != "fresnel" and not a > 0:
            raise DomainError("alpha must be > 0")

    def one(pair):
        return reflection(pair[0], pair[1], args.method)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(one, pairs))
    else:
        results = [one(pr) for pr in pairs]
    lines = [",".join(COLUMNS)]
    lines += [_row(a, t, None, 0.0, r) for (a, t), r in zip(pairs, results)]
    _emit(lines, args.out)
    return EXIT_OK


def run_synth(args):
    if args.method not in SYMBOL_METHODS:
        raise UsageError(f"synth method must be one of {SYMBOL_METHODS}")
    if not 0 <= args.eta < 1:
        raise DomainError(f"eta must lie in [0, 1), got {args.eta}")
    if args.n < 2:
        raise UsageError("--n must be >= 2")
    inc = ricker_wavelet(args.fpeak, args.dt, args.n)
    ref = reflect_trace(inc, args.alpha, args.ell, args.c0, args.eta, args.method)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    write_trace_csv(inc, outdir / "incident.csv")
    write_trace_csv(ref, outdir / "reflected.csv")
    f_max = args.f_max if args.f_max is not None else min(3.0 * args.fpeak, 0.5 / args.dt)
    band = valid_band(args.alpha, args.ell, args.c0, args.eta, f_max)
    side = {"alpha": args.alpha, "band_hz": list(band),
            "spectral_slope": spectral_slope(inc, ref, band),
            "mean_phase": spectral_phase(inc, ref, band),
            "expected_slope": -args.alpha,
            "expected_phase": math.remainder(-math.pi * (args.alpha + 2.0) / 2.0, 2.0 * math.pi)}
    (outdir / "synth.json").write_text(json.dumps(side, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def build_parser():
    p = _Parser(prog="fracrefl", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("reflect", help="reflection coefficient for one (alpha, theta)")
    r.add_argument("--alpha", type=float, required=True)
    r.add_argument("--theta", type=float)
    r.add_argument("--c0", type=float, help="reference speed, m/s")
    r.add_argument("--ell", type=float, help="ramp length scale, m")
    r.add_argument("--omega", type=float, help="angular frequency, rad/s")
    r.add_argument("--eta", type=float, default=0.0, help="transverse slowness fraction")
    r.add_argument("--c-ratio", type=float, help="c_minus/c_plus (fresnel only)")
    r.add_argument("--method", choices=METHODS, default="volterra")
    r.add_argument("--out")
    r.set_defaults(func=run_reflect)

    v = sub.add_parser("validate", help="run the self-check suite")
    v.add_argument("--quick", action="store_true")
    v.add_argument("--out")
    v.add_argument("--inject-contraction-failure", action="store_true", help=argparse.SUPPRESS)
    v.set_defaults(func=run_validate)

    s = sub.add_parser("sweep", help="R over an (alpha, theta) grid")
    s.add_argument("--alpha-list", required=True, help="comma separated")
    s.add_argument("--theta-grid", required=True, help="lo:hi:n, log spaced")
    s.add_argument("--method", choices=[m for m in METHODS if m != "fresnel"], default="volterra")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=run_sweep)

    y = sub.add_parser("synth", help="reflected Ricker trace")
    y.add_argument("--alpha", type=float, required=True)
    y.add_argument("--ell", type=float, required=True)
    y.add_argument("--c0", type=float, required=True)
    y.add_argument("--fpeak", type=float, required=True)
    y.add_argument("--dt", type=float, required=True)
    y.add_argument("--n", type=int, required=True)
    y.add_argument("--eta", type=float, default=0.0)
    y.add_argument("--method", default="asymptotic")
    y.add_argument("--f-max", type=float, help="top of the slope-fit band, Hz")
    y.add_argument("--outdir", default=".")
    y.set_defaults(func=run_synth)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except (UsageError, DomainError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ARGS
    except SolverError as exc:
        sys.stderr.write(f"solver failure: {exc}\n")
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
