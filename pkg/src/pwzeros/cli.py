"""Command-line front end: mu sweeps, verification suites, PVI sweeps.

Exit codes: 0 success, 1 computation/verification failure, 2 usage error.
Output files are byte-stable for identical flags; wall times go to stderr
only so reports stay reproducible.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from mpmath import mp

from . import krein, painleve
from .krein import MuRepresentation
from .numerics import (ConditioningError, ConsistencyError, PrecisionCtx,
                       QuadratureToleranceError)
from .pwspace import ZeroConfig
from .report import CHECK_HEADER, check_rows, report_to_dict, sci
from .verify import SUITES, Envelope, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

REP_ALIASES = {
    "coefficients": MuRepresentation.COEFFICIENTS,
    "coeff": MuRepresentation.COEFFICIENTS,
    "bordered": MuRepresentation.BORDERED_GRAM,
    "bordered_gram": MuRepresentation.BORDERED_GRAM,
    "wronskian": MuRepresentation.WRONSKIAN_RATIO,
    "wronskian_ratio": MuRepresentation.WRONSKIAN_RATIO,
    "hankel": MuRepresentation.HANKEL_QUOTIENT,
    "hankel_quotient": MuRepresentation.HANKEL_QUOTIENT,
    "multint": MuRepresentation.MULTIPLE_INTEGRAL,
    "multiple_integral": MuRepresentation.MULTIPLE_INTEGRAL,
    "fromxy": MuRepresentation.FROM_XY,
    "from_xy": MuRepresentation.FROM_XY,
}

_COMPUTE_ERRORS = (ConditioningError, ConsistencyError,
                   QuadratureToleranceError, painleve.PoleError,
                   painleve.DegenerateMapError, ZeroDivisionError)


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class SweepSpec:
    """Validated sweep request: grid in (0,1), representations applicable."""

    nu: str
    n: int
    a_grid: tuple
    representations: tuple
    digits: int
    output: str
    format: str
    sig_digits: int = 17
    jobs: int = 1
    plot: bool = False

    @classmethod
    def from_args(cls, args, reps=()):
        a_values = parse_a_grid(args)
        return cls(nu=args.nu, n=args.n, a_grid=tuple(a_values),
                   representations=tuple(r.value for r in reps),
                   digits=args.digits, output=args.out,
                   format=args.format or "csv", sig_digits=args.sig_digits,
                   jobs=args.jobs, plot=getattr(args, "plot", False))


def _add_common(p):
    p.add_argument("--digits", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--out", default="-")
    p.add_argument("--sig-digits", type=int, default=17,
                   help="significant digits in serialized numbers")
    p.add_argument("--config", default=None,
                   help="flat key=value or JSON file of flag defaults")


def _add_grid(p):
    p.add_argument("--a", default=None,
                   help="comma-separated list of a values in (0,1)")
    p.add_argument("--a-start", type=str, default=None)
    p.add_argument("--a-stop", type=str, default=None)
    p.add_argument("--a-count", type=int, default=None)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pwzeros",
        description="high-precision checks for Paley-Wiener spaces with "
                    "prescribed imaginary zeros")
    sub = parser.add_subparsers(dest="command", required=True)

    p_mu = sub.add_parser("mu", help="sweep mu representations over an a-grid")
    p_mu.add_argument("--nu", required=True)
    p_mu.add_argument("--n", type=int, required=True)
    p_mu.add_argument("--rep", default="coefficients,bordered,wronskian")
    p_mu.add_argument("--plot", action="store_true",
                      help="also render a figure next to --out")
    _add_grid(p_mu)
    _add_common(p_mu)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("--suite", default="all",
                          choices=("all",) + SUITES)
    p_verify.add_argument("--nu", default=None,
                          help="comma-separated nu values restricting the grid")
    p_verify.add_argument("--n", default=None,
                          help="comma-separated n values restricting the grid")
    p_verify.add_argument("--trials", type=int, default=200,
                          help="randomized instances for the detid suite")
    p_verify.add_argument("--pairs", type=int, default=50,
                          help="random (z,w) pairs for kernel agreement")
    _add_grid(p_verify)
    _add_common(p_verify)

    p_pvi = sub.add_parser("pvi", help="sweep q, its b-derivatives and the "
                                       "PVI residual")
    p_pvi.add_argument("--nu", required=True)
    p_pvi.add_argument("--n", type=int, required=True)
    p_pvi.add_argument("--plot", action="store_true")
    _add_grid(p_pvi)
    _add_common(p_pvi)
    return parser


def parse_a_grid(args, required=True):
    if args.a is not None:
        parts = [s for s in args.a.split(",") if s.strip()]
        if not parts:
            raise UsageError("empty a grid")
        values = parts
    elif args.a_start is not None or args.a_stop is not None \
            or args.a_count is not None:
        if None in (args.a_start, args.a_stop, args.a_count):
            raise UsageError("--a-start/--a-stop/--a-count must be given "
                             "together")
        if args.a_count < 1:
            raise UsageError("a-count must be >= 1")
        lo, hi = mp.mpf(args.a_start), mp.mpf(args.a_stop)
        if args.a_count == 1:
            values = [args.a_start]
        else:
            step = (hi - lo) / (args.a_count - 1)
            values = [mp.nstr(lo + k * step, 20) for k in range(args.a_count)]
    elif required:
        raise UsageError("an a-grid is required (--a or --a-start/stop/count)")
    else:
        return None
    for v in values:
        try:
            fv = mp.mpf(v)
        except (ValueError, TypeError):
            raise UsageError("malformed a value %r" % v)
        if not 0 < fv < 1:
            raise UsageError("a values must lie in (0, 1); got %s" % v)
    return values


def _parse_reps(spec_str, n):
    reps = []
    for token in spec_str.split(","):
        token = token.strip().lower()
        if not token:
            continue
        if token not in REP_ALIASES:
            raise UsageError("unknown representation %r" % token)
        rep = REP_ALIASES[token]
        if rep is MuRepresentation.MULTIPLE_INTEGRAL and n > 3:
            raise UsageError("multiple_integral applies only for n <= 3")
        if rep not in reps:
            reps.append(rep)
    if not reps:
        raise UsageError("no representations selected")
    return reps


def _mu_row(payload):
    nu_s, n, a_s, rep_values, digits, sig = payload
    ctx = PrecisionCtx(digits=digits)
    with ctx.workdps(10):
        a = mp.mpf(a_s)
        cfg = ZeroConfig.from_progression(mp.mpf(nu_s), n, a=a_s, ctx=ctx)
        vals = [krein.mu(cfg, REP_ALIASES[r], ctx) for r in rep_values]
        worst = mp.mpf(0)
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                scale = max(abs(vals[i]), abs(vals[j]), mp.mpf(1))
                worst = max(worst, abs(vals[i] - vals[j]) / scale)
        row = [sci(a, sig), sci(a * a, sig)]
        row += [sci(v, sig) for v in vals]
        row.append(sci(worst, sig))
        return row


def _pvi_row(payload):
    nu_s, n, a_s, digits, sig = payload
    ctx = PrecisionCtx(digits=digits)
    with ctx.workdps(10):
        a = mp.mpf(a_s)
        params = painleve.PVIParams.from_nu_n(mp.mpf(nu_s), n)
        base = [sci(a, sig), sci(a * a, sig)]
        tail = [sci(params.alpha, sig), sci(params.beta, sig),
                sci(params.gamma, sig), sci(params.delta, sig)]
        try:
            q = painleve.q_value(mp.mpf(nu_s), n, a, ctx)
            dq, d2q = painleve.q_derivatives(mp.mpf(nu_s), n, a, ctx)
            rep = painleve.pvi_residual(mp.mpf(nu_s), n, a, ctx)
            mid = [sci(q, sig), sci(dq, sig), sci(d2q, sig),
                   sci(rep.rel_residual, sig)]
            status = "ok"
        except painleve.PoleError as exc:
            mid = ["", "", "", ""]
            status = "pole:%s" % str(exc).split()[0]
        return base + mid + tail + [status]


def _map_rows(worker, payloads, jobs):
    if jobs <= 1:
        return [worker(p) for p in payloads]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, payloads))


def _write_output(args, columns, rows, meta):
    fmt = args.format or "csv"
    if fmt == "csv":
        lines = [",".join(columns)]
        lines += [",".join(r) for r in rows]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps({"meta": meta, "columns": columns, "rows": rows},
                          indent=2) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
        return None
    path = Path(args.out)
    path.write_text(text)
    return path


def cmd_mu(args):
    if args.n < 0:
        raise UsageError("n must be >= 0")
    reps = _parse_reps(args.rep, args.n)
    spec = SweepSpec.from_args(args, reps)
    payloads = [(spec.nu, spec.n, a_s, list(spec.representations),
                 spec.digits, spec.sig_digits) for a_s in spec.a_grid]
    rows = _map_rows(_mu_row, payloads, spec.jobs)
    columns = ["a", "b"] + ["mu_%s" % r for r in spec.representations] \
        + ["max_rel_disagreement"]
    meta = {"command": "mu", "nu": spec.nu, "n": spec.n,
            "representations": list(spec.representations),
            "digits": spec.digits, "sig_digits": spec.sig_digits}
    path = _write_output(args, columns, rows, meta)
    if spec.plot:
        if path is None:
            raise UsageError("--plot needs --out FILE")
        from .plotting import render_mu_sweep
        render_mu_sweep(columns, rows, path.with_suffix(".png"))
    return EXIT_OK


def cmd_pvi(args):
    if args.n < 1:
        raise UsageError("n must be >= 1")
    spec = SweepSpec.from_args(args)
    payloads = [(spec.nu, spec.n, a_s, spec.digits, spec.sig_digits)
                for a_s in spec.a_grid]
    rows = _map_rows(_pvi_row, payloads, spec.jobs)
    columns = ["a", "b", "q", "dq_db", "d2q_db2", "pvi_residual",
               "alpha", "beta", "gamma", "delta", "status"]
    meta = {"command": "pvi", "nu": spec.nu, "n": spec.n,
            "digits": spec.digits, "sig_digits": spec.sig_digits}
    path = _write_output(args, columns, rows, meta)
    if spec.plot:
        if path is None:
            raise UsageError("--plot needs --out FILE")
        from .plotting import render_pvi_sweep
        render_pvi_sweep(columns, rows, path.with_suffix(".png"))
    return EXIT_OK


def _parse_values(spec_str):
    if spec_str is None:
        return None
    vals = tuple(s.strip() for s in spec_str.split(",") if s.strip())
    if not vals:
        raise UsageError("empty value list")
    return vals


def cmd_verify(args):
    ctx = PrecisionCtx(digits=args.digits)
    rng = random.Random(args.seed)
    a_values = parse_a_grid(args, required=False)
    nus = _parse_values(args.nu)
    ns = _parse_values(args.n)
    env = Envelope(
        nus=nus,
        ns=tuple(int(v) for v in ns) if ns else None,
        a_values=tuple(a_values) if a_values else None,
        okada_trials=args.trials,
        kernel_pairs=args.pairs)
    suites = SUITES if args.suite == "all" else (args.suite,)
    reports = []
    for name in suites:
        rep = run_suite(name, ctx, env, rng)
        reports.append(rep)
        sys.stderr.write(
            "suite %-9s passed=%d failed=%d worst_rel=%s wall=%.2fs\n"
            % (name, rep.passed, rep.failed, sci(rep.worst_rel, 3),
               rep.wall_time))
    all_ok = all(r.all_passed() for r in reports)
    meta = {"command": "verify", "suite": args.suite, "seed": args.seed,
            "digits": args.digits,
            "passed": sum(r.passed for r in reports),
            "failed": sum(r.failed for r in reports)}
    fmt = args.format or "json"
    if fmt == "json":
        checks = []
        for r in reports:
            for entry in report_to_dict(r, args.sig_digits)["checks"]:
                entry["suite"] = r.suite
                checks.append(entry)
        text = json.dumps({"meta": meta, "checks": checks}, indent=2) + "\n"
    else:
        lines = [",".join(CHECK_HEADER)]
        for r in reports:
            for row in check_rows(r, args.sig_digits):
                lines.append(",".join(row))
        text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_OK if all_ok else EXIT_FAIL


def _load_config(path):
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
    else:
        data = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise UsageError("malformed config line: %r" % line)
            key, _, value = line.partition("=")
            data[key.strip()] = value.strip()
    return {k.replace("-", "_"): v for k, v in data.items()}


_INT_KEYS = {"n", "digits", "seed", "jobs", "sig_digits", "a_count",
             "trials", "pairs"}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            # config values pre-populate the namespace; explicit flags win
            defaults = _load_config(args.config)
            ns = argparse.Namespace()
            for key, value in defaults.items():
                if not hasattr(args, key):
                    raise UsageError("unknown config key %r" % key)
                if key in _INT_KEYS and value is not None:
                    value = int(value)
                setattr(ns, key, value)
            args = parser.parse_args(argv, namespace=ns)
        handler = {"mu": cmd_mu, "verify": cmd_verify, "pvi": cmd_pvi}
        return handler[args.command](args)
    except UsageError as exc:
        sys.stderr.write("usage error: %s\n" % exc)
        return EXIT_USAGE
    except _COMPUTE_ERRORS as exc:
        sys.stderr.write("computation error: %s: %s\n"
                         % (type(exc).__name__, exc))
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
