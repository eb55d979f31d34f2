"""Command-line front end.

Commands:
  nu      — murmuration density rows (t, nu)
  trace   — itemized geometric-side rows for primes (n = -p) or a single n
  figure  — figure-grid rows comparing nu([0,t]) with the scaled ratio
  check   — built-in oracle suite (machine-readable pass/fail lines)

Configuration comes from an optional TOML file (--config) with flags
winning on conflict.  Data goes to stdout (or --output); progress and
timing go to stderr.  Exit codes: 0 success, 2 configuration error,
3 numeric failure, 4 data/parse error.
"""

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field, fields

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib

import numpy as np

from . import core_arith, dirichlet, eigen, murmuration, testfn, trace
from .errors import DomainError, NumericError, ParseError, ResourceError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_PARSE = 4


@dataclass
class RunConfig:
    R: float = 3000.0
    H: float = 100.0
    h: float = 15.0
    E: tuple = (0.0, 2.0)
    bump: str = "autocorr"
    l_eps: float = 1e-4
    quad_eps: float = 1e-9
    tol: float = 1e-6
    threads: int = 1
    cache_path: str = None
    t_grid: tuple = (0.2, 2.0, 0.1)
    output: str = None
    format: str = "csv"
    parity_a: int = 0
    eigen_table: str = None

    def spec(self):
        return testfn.TestFunctionSpec(R=self.R, H=self.H, h=self.h,
                                       bump=self.bump, quad_eps=self.quad_eps)

    def grid_values(self):
        start, stop, step = self.t_grid
        if step <= 0:
            raise DomainError("grid step must be positive")
        n = int(round((stop - start) / step))
        vals = [round(start + i * step, 12) for i in range(n + 1)]
        return [v for v in vals if v > 0 and v <= stop + 1e-12]


def _load_config(path):
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    cfg = RunConfig()
    names = {f.name for f in fields(RunConfig)}
    for key, value in doc.items():
        if key not in names:
            raise DomainError("unknown config key %r" % key)
        if key in ("E", "t_grid"):
            value = tuple(value)
        setattr(cfg, key, value)
    return cfg


def _apply_flags(cfg, args):
    for name in ("R", "H", "h", "l_eps", "quad_eps", "tol", "threads",
                 "bump", "output", "format", "parity_a", "eigen_table"):
        val = getattr(args, name, None)
        if val is not None:
            setattr(cfg, name, val)
    if getattr(args, "E", None) is not None:
        cfg.E = (args.E[0], args.E[1])
    if getattr(args, "grid", None) is not None:
        cfg.t_grid = tuple(args.grid)
    if getattr(args, "cache", None) is not None:
        cfg.cache_path = args.cache
    elif cfg.cache_path is None:
        cfg.cache_path = os.environ.get("MURMUR_CACHE") or None
    return cfg


def _emit(cfg, header, rows, out):
    """Write rows as CSV (repr floats, bit-stable) or a JSON mirror."""
    if cfg.format == "json":
        cols = header.split(",")
        doc = [dict(zip(cols, row)) for row in rows]
        out.write(json.dumps(doc, indent=1) + "\n")
        return
    out.write(header + "\n")
    for row in rows:
        out.write(",".join(repr(v) if isinstance(v, float) else str(v)
                           for v in row) + "\n")


def _open_output(cfg):
    if cfg.output:
        return open(cfg.output, "w", encoding="utf-8", newline="\n"), True
    return sys.stdout, False


def cmd_nu(cfg, args):
    rows = []
    if args.E is not None:
        E = murmuration.IntervalE(*cfg.E)
        rows.append((float(E.hi), float(murmuration.nu(E, cfg.tol))))
    else:
        for t in cfg.grid_values():
            rows.append((float(t), float(murmuration.nu((0.0, t), cfg.tol))))
    out, close = _open_output(cfg)
    try:
        _emit(cfg, "t,nu", rows, out)
    finally:
        if close:
            out.close()
    return EXIT_OK


_TRACE_HEADER = ("p,total,hyperbolic,elliptic,divisor_log,divisor_int,"
                 "parabolic,lambda,square,identity,spectral")


def _trace_row(label, b):
    return (label, b.geometric_total, b.hyperbolic, b.elliptic, b.divisor_log,
            b.divisor_integral, b.parabolic, b.lambda_sum, b.square_term,
            b.identity, b.spectral_sum)


def cmd_trace(cfg, args):
    spec = cfg.spec()
    cache = dirichlet.LValueCache(cfg.cache_path)
    targets = []
    if args.p is not None:
        targets = [("p", int(args.p))]
    elif args.p_range is not None:
        lo, hi = int(args.p_range[0]), int(args.p_range[1])
        table = core_arith.sieve_primes(hi)
        targets = [("p", int(p)) for p in table.in_range(lo, hi)]
    elif args.n is not None:
        targets = [("n", int(args.n))]
    else:
        raise DomainError("trace requires --p, --p-range, or --n")
    rows = []
    failed = 0
    for kind, v in targets:
        try:
            if kind == "p":
                b = trace.trace_minus_p(v, spec, cache, cfg.l_eps)
            else:
                b = trace.geometric_side(v, spec, cache, cfg.l_eps)
            rows.append(_trace_row(v, b))
        except NumericError as exc:
            failed += 1
            rows.append((v,) + (float("nan"),) * 10 + ("failed: %s" % exc,))
    out, close = _open_output(cfg)
    try:
        _emit(cfg, _TRACE_HEADER, rows, out)
    finally:
        if close:
            out.close()
    cache.save()
    return EXIT_NUMERIC if failed else EXIT_OK


def cmd_figure(cfg, args):
    spec = cfg.spec()
    cache = dirichlet.LValueCache(cfg.cache_path)
    grid = cfg.grid_values()
    if not grid:
        raise DomainError("figure grid is empty")
    N = murmuration.conductor(cfg.R, cfg.parity_a)
    limit = int(math.ceil(grid[-1] * N)) + 1
    table = core_arith.sieve_primes(limit)

    def progress(done, total):
        sys.stderr.write("\rprimes %d/%d" % (done, total))
        sys.stderr.flush()

    report = murmuration.figure1(spec, grid, cache, table, l_eps=cfg.l_eps,
                                 nu_tol=cfg.tol, threads=cfg.threads,
                                 parity_a=cfg.parity_a, progress=progress)
    sys.stderr.write("\n")
    rows = [(r.t, r.nu, r.lhs_scaled, r.numerator, r.denominator,
             report.N, cfg.R, cfg.H, cfg.h) for r in report.rows]
    out, close = _open_output(cfg)
    try:
        _emit(cfg, "t,nu,lhs_scaled,numerator,denominator,N,R,H,h", rows, out)
    finally:
        if close:
            out.close()
    cache.save()
    return EXIT_OK


def _run_checks(only=None):
    checks = []

    def add(name, fn):
        if only and only not in name:
            return
        checks.append((name, fn))

    def chk_kronecker():
        for n in (3, 5, 7, 11, 13):
            for a in range(1, n):
                euler = pow(a, (n - 1) // 2, n)
                euler = -1 if euler == n - 1 else euler
                assert core_arith.kronecker(a, n) == euler
        assert core_arith.kronecker(5, 2) == -1

    def chk_log_eta():
        for m in (1, 4, 6, 12, 30):
            lit = sum(math.log(math.gcd(k, m)) for k in range(1, m)) \
                + (math.log(m) if m > 1 else 0.0)
            assert abs(core_arith.log_eta(m) - lit) < 1e-10

    def chk_decompose():
        for D in list(range(-200, 0)) + list(range(1, 201)):
            if D % 4 in (2, 3) or D == 0:
                continue
            dec = core_arith.decompose_discriminant(D)
            assert dec.d * dec.ell ** 2 == D

    def chk_lvalue_oracles():
        gold = {5: 0.4304089409640041, -4: math.pi / 4,
                -3: 0.6045997880780727, 8: 0.6232252401402306}
        for d, v in gold.items():
            got = dirichlet.l_one_fundamental(d, 1e-9)
            assert abs(got - v) <= 1e-8 * abs(v)

    def chk_testfn():
        spec = testfn.TestFunctionSpec(R=100.0, H=10.0, h=2.0)
        for x in (0.0, 10.0, 15.9, 17.3):
            fa = testfn.f_eval(spec, x, "conv")
            fb = testfn.f_eval(spec, x, "fourier")
            assert abs(fa - fb) <= 1e-6

    def chk_nu():
        assert abs(murmuration.nu((0.99, 1.01), 1e-8) - 6 / math.pi ** 2) < 1e-7
        assert abs(murmuration.nu((1.0, 1.01), 1e-8) - 3 / math.pi ** 2) < 1e-7

    def chk_cache(tmpdir="/tmp"):
        path = os.path.join(tmpdir, "murmur-check-cache.csv")
        c = dirichlet.LValueCache(None)
        v1 = c.get_or_compute(5, 1e-6)
        c.save(path)
        c2 = dirichlet.LValueCache(path)
        assert c2.get_or_compute(5, 1e-6) == v1
        os.remove(path)

    add("kronecker", chk_kronecker)
    add("log_eta", chk_log_eta)
    add("decompose", chk_decompose)
    add("lvalue_oracles", chk_lvalue_oracles)
    add("testfn_dual", chk_testfn)
    add("nu_endpoints", chk_nu)
    add("cache_coherence", chk_cache)
    return checks


def cmd_check(cfg, args):
    failed = []
    for name, fn in _run_checks(args.only):
        try:
            fn()
        except Exception as exc:  # noqa: BLE001 - report and continue
            print("FAIL %s: %s" % (name, exc))
            failed.append(name)
        else:
            print("PASS %s" % name)
    if failed:
        print("failed checks: %s" % ", ".join(failed))
        return EXIT_NUMERIC
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="murmur", description=__doc__)
    ap.add_argument("--config", help="TOML config file; flags override it")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--R", type=float)
        p.add_argument("--H", type=float)
        p.add_argument("--h", type=float)
        p.add_argument("--E", type=float, nargs=2, metavar=("LO", "HI"))
        p.add_argument("--grid", type=float, nargs=3, metavar=("A", "B", "STEP"))
        p.add_argument("--tol", type=float)
        p.add_argument("--threads", type=int)
        p.add_argument("--cache")
        p.add_argument("--eigen-table", dest="eigen_table")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--parity-a", dest="parity_a", type=int, choices=(0, 1))
        p.add_argument("--bump", choices=("autocorr", "exp"))
        p.add_argument("--l-eps", dest="l_eps", type=float)
        p.add_argument("--quad-eps", dest="quad_eps", type=float)
        p.add_argument("--output", "-o")

    p_nu = sub.add_parser("nu", help="murmuration density rows")
    common(p_nu)
    p_tr = sub.add_parser("trace", help="geometric-side breakdown rows")
    common(p_tr)
    p_tr.add_argument("--p", type=int, help="single prime (n = -p)")
    p_tr.add_argument("--p-range", dest="p_range", type=int, nargs=2,
                      metavar=("LO", "HI"))
    p_tr.add_argument("--n", type=int, help="general nonzero n")
    p_fig = sub.add_parser("figure", help="figure-grid comparison rows")
    common(p_fig)
    p_chk = sub.add_parser("check", help="run the built-in oracle suite")
    common(p_chk)
    p_chk.add_argument("--only", help="substring filter on check names")
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = _load_config(args.config) if args.config else RunConfig()
        cfg = _apply_flags(cfg, args)
        if args.command in ("trace", "figure"):
            cfg.spec()  # validate window constraints up front
        handler = {"nu": cmd_nu, "trace": cmd_trace,
                   "figure": cmd_figure, "check": cmd_check}[args.command]
        return handler(cfg, args)
    except (DomainError, ResourceError) as exc:
        sys.stderr.write("configuration error: %s\n" % exc)
        return EXIT_CONFIG
    except NumericError as exc:
        sys.stderr.write("numeric failure: %s (estimates: %s)\n"
                         % (exc, exc.estimates))
        return EXIT_NUMERIC
    except ParseError as exc:
        sys.stderr.write("parse error: %s\n" % exc)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
