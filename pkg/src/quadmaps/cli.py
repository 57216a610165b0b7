"""Reproducible experiment driver.

Every subcommand echoes its configuration (including the seed and package
version) into the output, so identical invocations produce byte-identical
files.  Exit codes: 0 success, 1 failed assertion suite, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .bijection import encode_quadrangulation, verify_label_distance
from .coredec import (
    CORE_STATS_CSV_HEADER,
    core,
    core_statistics,
    core_statistics_csv_row,
    decompose,
)
from .counting import (
    asymptotic_ratio,
    count_simple,
    gw_derivative_at_one,
    gw_first_passage_simulation,
    log_count_exact,
)
from .encoder import parse_ltb, sample_treed_bridge, serialize_ltb, validate
from .errors import ConfigError, QuadmapsError
from .oracle import empirical_tv
from .planemap import PlaneMap
from .restriction import (
    RESTRICT_STATS_CSV_HEADER,
    certificate_sets,
    check_bounds,
    complement_reglue,
    is_good,
    restrict,
    restrict_stats_csv_row,
)
from .scales import perimeter_sequence


def _emit(args, header_fields, rows, schema):
    """Write rows as csv or json with a config echo; returns the text."""
    if args.format == "csv":
        lines = ["# quadmaps " + __version__ + " " + header_fields]
        lines.append(schema)
        lines.extend(rows)
        text = "\n".join(lines) + "\n"
    else:
        cols = schema.split(",")
        payload = {
            "version": __version__,
            "config": header_fields,
            "rows": [dict(zip(cols, r.split(","))) for r in rows],
        }
        text = json.dumps(payload, indent=1, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return text


def _config_echo(args, keys):
    return " ".join(f"{k}={getattr(args, k)}" for k in keys if getattr(args, k) is not None)


def cmd_count(args):
    if args.table:
        rows = []
        for m in range(args.m + 1):
            for ell in range(1, args.p // 2 + 1):
                rows.append(f"{m},{ell},{count_simple(m, 2 * ell)}")
        _emit(args, _config_echo(args, ("m", "p", "seed")), rows, "m,ell,count")
        return 0
    if args.log:
        val = log_count_exact(args.m, args.p // 2)
        sys.stdout.write(f"{val:.12g}\n")
    else:
        sys.stdout.write(f"{count_simple(args.m, args.p)}\n")
    return 0


def cmd_sample(args):
    rng = np.random.default_rng(args.seed)
    p = 3 * perimeter_sequence(args.n, args.alpha)
    blocks = [
        f"# quadmaps {__version__} sample "
        + _config_echo(args, ("n", "alpha", "replicates", "seed"))
    ]
    for _ in range(args.replicates):
        ltb = sample_treed_bridge(p, args.n, rng)
        enc = encode_quadrangulation(ltb)
        blocks.append(enc.quad.map.serialize().rstrip("\n"))
    text = "\n\n".join(blocks) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_validate(args):
    rng = np.random.default_rng(args.seed)
    failures = 0
    for _ in range(args.replicates):
        ltb = sample_treed_bridge(args.p, args.n, rng)
        if not validate(ltb):
            failures += 1
            continue
        if parse_ltb(serialize_ltb(ltb)).bridge.labels.tolist() != ltb.bridge.labels.tolist():
            failures += 1
            continue
        enc = encode_quadrangulation(ltb)
        q = enc.quad
        ok = (
            q.map.euler_characteristic() == 2
            and q.area == args.n
            and q.perimeter == args.p
            and verify_label_distance(q, ltb)
            and PlaneMap.parse(q.map.serialize()).canonical_code()
            == q.map.canonical_code()
        )
        try:
            decompose(q)
        except AssertionError:
            ok = False
        failures += not ok
    rows = [f"{args.n},{args.p},{args.replicates},{args.seed},{failures}"]
    _emit(args, _config_echo(args, ("n", "p", "replicates", "seed")), rows,
          "n,p,replicates,seed,failures")
    return 0 if failures == 0 else 1


def cmd_core_stats(args):
    rng = np.random.default_rng(args.seed)
    stats = core_statistics(args.n, args.alpha, args.replicates, rng)
    rows = [core_statistics_csv_row(stats, args.seed)]
    _emit(args, _config_echo(args, ("n", "alpha", "replicates", "seed")), rows,
          CORE_STATS_CSV_HEADER)
    return 0


def cmd_restrict_stats(args):
    rng = np.random.default_rng(args.seed)
    p_n = perimeter_sequence(args.n, args.alpha)
    rows = []
    violations = 0
    cemetery_row = (f"{args.n},{args.alpha:.10g},{args.eps:.10g},"
                    f"{args.delta:.10g},{args.seed},cemetery,,,,,,,,,,,,")
    for _ in range(args.replicates):
        ltb = sample_treed_bridge(3 * p_n, args.n, rng)
        enc = encode_quadrangulation(ltb)
        cr = core(enc.quad)
        if cr.is_cemetery or cr.perimeter < p_n / 2:
            rows.append(cemetery_row)
            continue
        out = restrict(cr.core, args.n, args.eps, p_n=p_n)
        if out.is_cemetery:
            rows.append(cemetery_row)
            continue
        good = is_good(out, args.n, args.delta, args.eps, p_n=p_n)
        certs = certificate_sets(enc, cr, out)
        bounds = check_bounds(enc, cr, out, certs)
        violations += not bounds.all_ok
        rows.append(restrict_stats_csv_row(
            args.n, args.alpha, args.eps, args.delta, args.seed, out,
            good=good, certs=certs, bounds=bounds))
    _emit(args, _config_echo(args, ("n", "alpha", "eps", "delta", "replicates", "seed")),
          rows, RESTRICT_STATS_CSV_HEADER)
    return 0 if violations == 0 else 1


def _simple_boundary_sampler(n, p, rng, max_attempts=2_000_000):
    """Uniform pointed simple-boundary map by rejection."""
    for _ in range(max_attempts):
        ltb = sample_treed_bridge(p, n, rng)
        enc = encode_quadrangulation(ltb)
        if enc.quad.simple:
            return enc
    raise QuadmapsError("rejection sampler exhausted its attempt budget")


def cmd_tv(args):
    rng = np.random.default_rng(args.seed)
    p_n = perimeter_sequence(args.n, args.alpha)
    xs, ys = [], []
    for _ in range(args.replicates):
        enc = _simple_boundary_sampler(args.n, p_n, rng)
        out = restrict(enc.quad, args.n, args.eps, p_n=p_n)
        xs.append(out.marked_code())
    for _ in range(args.replicates):
        ltb = sample_treed_bridge(3 * p_n, args.n, rng)
        enc = encode_quadrangulation(ltb)
        cr = core(enc.quad)
        if cr.is_cemetery or cr.perimeter < p_n / 2:
            ys.append(b"CEMETERY")
            continue
        out = restrict(cr.core, args.n, args.eps, p_n=p_n)
        ys.append(out.marked_code())
    point, ci = empirical_tv(xs, ys, bootstrap=200, rng=rng)
    rows = [
        f"{args.n},{args.alpha:.10g},{args.eps:.10g},{args.seed},"
        f"{args.replicates},{point:.10g},{ci[0]:.10g},{ci[1]:.10g}"
    ]
    _emit(args, _config_echo(args, ("n", "alpha", "eps", "replicates", "seed")),
          rows, "n,alpha,eps,seed,replicates,tv,ci_lo,ci_hi")
    return 0


def cmd_gw_check(args):
    rng = np.random.default_rng(args.seed)
    res = gw_first_passage_simulation(args.gap, args.replicates, rng)
    deriv = gw_derivative_at_one(args.gap)
    ok = (
        (res["se"] == 0.0 or abs(res["mean"] - 1.0) <= 3.0 * res["se"])
        and res["discard_rate"] < 1e-4
        and abs(deriv - 1.0) <= 1e-3
    )
    rows = [
        f"{args.gap},{args.replicates},{args.seed},{res['mean']:.10g},"
        f"{res['se']:.10g},{res['discarded']},{res['discard_rate']:.10g},"
        f"{deriv:.10g},{int(ok)}"
    ]
    _emit(args, _config_echo(args, ("gap", "replicates", "seed")), rows,
          "gap,replicates,seed,mean,se,discarded,discard_rate,fprime_at_one,ok")
    return 0 if ok else 1


def cmd_asymptotic_check(args):
    grid = [(10**4, 100), (10**6, 1000)]
    tolerances = [0.02, 0.005]
    rows = []
    ok = True
    for (m, ell), tol in zip(grid, tolerances):
        ratio = asymptotic_ratio(m, ell)
        good = abs(ratio - 1.0) <= tol
        ok &= good
        rows.append(f"{m},{ell},{ratio:.10g},{tol:.10g},{int(good)}")
    seq = [abs(asymptotic_ratio(m, math.isqrt(m)) - 1.0)
           for m in (10**3, 10**4, 10**5, 10**6)]
    mono = all(seq[i] > seq[i + 1] for i in range(len(seq) - 1))
    ok &= mono
    rows.append(f"0,0,{'monotone' if mono else 'not-monotone'},0,{int(mono)}")
    _emit(args, _config_echo(args, ("seed",)), rows, "m,ell,ratio,tolerance,ok")
    return 0 if ok else 1


def cmd_reglue_test(args):
    rng = np.random.default_rng(args.seed)
    p_n = perimeter_sequence(args.n, args.alpha)
    done = recon_ok = indep_ok = indep_total = 0
    attempts = 0
    while done < args.replicates and attempts < 500 * args.replicates:
        attempts += 1
        ltb = sample_treed_bridge(3 * p_n, args.n, rng)
        enc = encode_quadrangulation(ltb)
        cr = core(enc.quad)
        if cr.is_cemetery or cr.perimeter < p_n / 2:
            continue
        out = restrict(cr.core, args.n, args.eps, p_n=p_n)
        if out.is_cemetery:
            continue
        done += 1
        q2 = complement_reglue(out, out.complement)
        recon_ok += q2.map.canonical_code(marks=(q2.rho,)) == cr.core.map.canonical_code(
            marks=(cr.core.rho,)
        )
        if 0 < out.complement.area <= 60:
            filler = _simple_boundary_sampler(
                out.complement.area, out.complement.perimeter, rng
            ).quad
            out3 = restrict(complement_reglue(out, filler), args.n, args.eps, p_n=p_n)
            indep_total += 1
            indep_ok += (not out3.is_cemetery) and out3.marked_code() == out.marked_code()
    ok = done == args.replicates and recon_ok == done and indep_ok == indep_total
    rows = [f"{args.n},{args.eps:.10g},{args.seed},{done},{recon_ok},"
            f"{indep_total},{indep_ok},{int(ok)}"]
    _emit(args, _config_echo(args, ("n", "alpha", "eps", "replicates", "seed")),
          rows, "n,eps,seed,trials,reconstructed,indep_trials,indep_ok,ok")
    return 0 if ok else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="quadmaps", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add(name, fn, **extra):
        p = sub.add_parser(name)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--alpha", type=float, default=1.0)
        p.add_argument("--eps", type=float, default=None)
        p.add_argument("--delta", type=float, default=None)
        p.add_argument("--replicates", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        for flag, kw in extra.items():
            p.add_argument(flag, **kw)
        p.set_defaults(func=fn)
        return p

    add("count", cmd_count,
        **{"--m": dict(type=int, required=True),
           "--p": dict(type=int, required=True),
           "--log": dict(action="store_true"),
           "--table": dict(action="store_true")})
    add("sample", cmd_sample)
    add("validate", cmd_validate, **{"--p": dict(type=int, required=True)})
    add("core-stats", cmd_core_stats)
    add("restrict-stats", cmd_restrict_stats)
    add("tv", cmd_tv)
    add("gw-check", cmd_gw_check, **{"--gap": dict(type=int, required=True)})
    add("asymptotic-check", cmd_asymptotic_check)
    add("reglue-test", cmd_reglue_test)
    return parser


def _check_config(args):
    if args.replicates is not None and args.replicates < 1:
        raise ConfigError("replicates must be >= 1")
    if args.eps is not None and not 0 < args.eps < 1 / 3:
        raise ConfigError("eps must lie in (0, 1/3)")
    if args.delta is not None:
        if args.eps is None or not 0 < args.delta < args.eps:
            raise ConfigError("need 0 < delta < eps")
    needs_n = args.subcommand in (
        "sample", "validate", "core-stats", "restrict-stats", "tv", "reglue-test"
    )
    if needs_n and (args.n is None or args.n < 1):
        raise ConfigError("this subcommand requires --n >= 1")
    needs_eps = args.subcommand in ("restrict-stats", "tv", "reglue-test")
    if needs_eps and args.eps is None:
        raise ConfigError("this subcommand requires --eps")
    if args.subcommand == "restrict-stats" and args.delta is None:
        raise ConfigError("restrict-stats requires --delta")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _check_config(args)
    except ConfigError as exc:
        sys.stderr.write(f"configuration error: {exc}\n")
        return 2
    try:
        return args.func(args)
    except QuadmapsError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
