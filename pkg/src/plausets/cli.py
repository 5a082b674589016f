"""Command-line front-end: curves, intervals, 2-D regions, coverage,
validity diagnostics. Every command is a pure function of its flags (plus
``PLAUSETS_SEED`` as a fallback seed), emitting CSV.

Exit codes: 0 success, 2 domain/validation error, 3 convergence error.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import coverage as cv
from . import dataio
from . import models as md
from .errors import ConvergenceError, DomainError
from .imcore import PlausibilityCurve, box_random_set, default_random_set, \
    shrunken_random_set, validity_diagnostic
from .numerics import derive_stream, derive_substream, gamma_quantile
from .regions import evaluate_grid, extract_grid_region, region_area

_DEF_GRID_STEPS = 401


def _resolve_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("PLAUSETS_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise DomainError(f"PLAUSETS_SEED={env!r} is not an integer") from None
    return 0


def _parse_grid1(spec: str) -> np.ndarray:
    try:
        lo, hi, steps = spec.split(":")
        lo, hi, steps = float(lo), float(hi), int(steps)
    except ValueError:
        raise DomainError(f"grid spec {spec!r} is not lo:hi:steps") from None
    if steps < 2 or not lo < hi:
        raise DomainError(f"grid spec {spec!r} needs lo < hi and steps >= 2")
    return np.linspace(lo, hi, steps)


def _parse_xspec(spec: str, n: int | None) -> np.ndarray:
    if "," in spec:
        x = np.array([float(v) for v in spec.split(",")])
    else:
        try:
            lo, hi = spec.split(":")
            x = np.arange(float(lo), float(hi) + 1.0)
        except ValueError:
            raise DomainError(f"xspec {spec!r} is not lo:hi or a comma list") from None
    if n is not None and x.size != n:
        raise DomainError(f"xspec yields {x.size} covariates but --n is {n}")
    return x


def _out_stream(args):
    if args.out:
        return open(args.out, "w")
    return sys.stdout


def _scalar_statistic(args, seed: int):
    """Resolve (t, n, x, data) from --data / --t / synthetic flags."""
    if args.data is not None and args.t is not None:
        raise DomainError("give exactly one of --data and --t")
    base = derive_stream(seed, 0)
    data_state = derive_substream(base, 0)

    if args.model == "powerlaw":
        if args.data is not None:
            times = dataio.read_powerlaw_csv(args.data)
            data = md.PowerLawData(times)
            return md.powerlaw_statistic(data), data.n, None, data
        if args.t is not None:
            if args.n is None:
                raise DomainError("--t mode needs --n")
            return args.t, args.n, None, None
        if args.n is None or args.theta is None:
            raise DomainError("synthetic power-law data needs --n and --theta")
        times, _ = md.powerlaw_sample_times(args.n, args.theta, 1.0, data_state)
        data = md.PowerLawData(times)
        return md.powerlaw_statistic(data), data.n, None, data

    # expreg
    if args.data is not None:
        x, y = dataio.read_expreg_csv(args.data)
        data = md.ExpRegData(x, y)
        return md.expreg_mle(data), data.n, x, data
    if args.xspec is not None:
        x = _parse_xspec(args.xspec, args.n)
    elif args.n is not None:
        x = np.arange(1.0, args.n + 1)
    else:
        raise DomainError("expreg needs --data, or --n (with optional --xspec)")
    if args.t is not None:
        return args.t, x.size, x, None
    if args.theta is None:
        raise DomainError("synthetic expreg data needs --theta")
    y, _ = md.expreg_sample(args.theta, x, data_state)
    data = md.ExpRegData(x, y)
    return md.expreg_mle(data), data.n, x, data


def _scalar_interval(args, t, n, x, seed):
    if args.model == "powerlaw":
        return md.powerlaw_interval(t, n, args.alpha), None
    table = md.expreg_pivot_table(
        x, args.mc_size, derive_substream(derive_stream(seed, 0), 1)
    )
    return md.expreg_interval(t, args.alpha, table), table


def cmd_interval(args) -> int:
    seed = _resolve_seed(args)
    t, n, x, _ = _scalar_statistic(args, seed)
    interval, _ = _scalar_interval(args, t, n, x, seed)
    stream = _out_stream(args)
    try:
        stream.write(interval.csv_line() + "\n")
    finally:
        if stream is not sys.stdout:
            stream.close()
    return 0


def cmd_pl_curve(args) -> int:
    seed = _resolve_seed(args)
    t, n, x, data = _scalar_statistic(args, seed)
    meta = {"model": args.model, "t": f"{t:.12g}", "n": n,
            "alpha": args.alpha, "seed": seed}

    if args.model == "powerlaw":
        interval, table = _scalar_interval(args, t, n, x, seed)
        if args.grid:
            thetas = _parse_grid1(args.grid)
        else:
            center = gamma_quantile(0.5, n - 1, 1.0) / t
            wide = md.powerlaw_interval(t, n, args.alpha / 10.0)
            thetas = np.linspace(
                max(wide.lo, 1e-12 * center), wide.hi, _DEF_GRID_STEPS
            )
        pls = md.powerlaw_pl_arr(t, thetas, n)
    else:
        interval, table = _scalar_interval(args, t, n, x, seed)
        meta["mc_size"] = args.mc_size
        if args.grid:
            thetas = _parse_grid1(args.grid)
        else:
            wide = md.expreg_interval(t, args.alpha / 10.0, table)
            pad = 0.25 * wide.width
            thetas = np.linspace(wide.lo - pad, wide.hi + pad, _DEF_GRID_STEPS)
        pls = np.array([md.expreg_pl(t, th, table) for th in thetas])

    curve = PlausibilityCurve(thetas, pls, meta)
    curve.write_csv(args.out)
    print(f"alpha_crossings,{interval.lo:.6f},{interval.hi:.6f},{args.alpha:g}")
    if args.model == "expreg" and data is not None:
        wald = md.expreg_wald_interval(data, args.alpha)
        print(f"wald_endpoints,{wald.lo:.6f},{wald.hi:.6f},{args.alpha:g}")
    return 0


def _parse_grid2(spec: str) -> tuple[np.ndarray, np.ndarray]:
    try:
        first, second = spec.split(",")
    except ValueError:
        raise DomainError(
            f"2-D grid spec {spec!r} must be lo:hi:steps,lo:hi:steps"
        ) from None
    return _parse_grid1(first), _parse_grid1(second)


def cmd_region2d(args) -> int:
    seed = _resolve_seed(args)
    data_state = derive_substream(derive_stream(seed, 0), 0)
    if args.data is not None:
        y = dataio.read_y_csv(args.data)
    else:
        if args.n is None:
            raise DomainError("synthetic data needs --n")
        y, _ = md.lognormal_sample(args.n, args.mu, args.sigma2, data_state)

    if args.model == "lognormal":
        stats = md.lognormal_stats(y)

        def pl2d(mu_g, s_g):
            return md.lognormal_pl_arr(stats, mu_g, s_g)

        center_s = stats.t2 / stats.n
        se_mu = np.sqrt(center_s / stats.n)
        bounds0 = (stats.t1 - 8 * se_mu, stats.t1 + 8 * se_mu,
                   center_s / 6.0, center_s * 6.0)
    else:  # locscale
        def pl2d(mu_g, s_g):
            return md.locscale_pl_arr(y, mu_g, s_g, base=args.base_cdf)

        loc = float(np.mean(y))
        scale = float(np.std(y, ddof=1))
        bounds0 = (loc - 2.0 * scale, loc + 2.0 * scale,
                   scale / 4.0, scale * 4.0)

    # the locscale box region is unbounded in the scale direction (pl -> 1
    # as sigma grows), so its grid is an explicit window, never a
    # containment check
    windowed = args.model == "locscale"
    if args.grid:
        g1, g2 = _parse_grid2(args.grid)
        bounds = (g1[0], g1[-1], g2[0], g2[-1])
        resolution = (g1.size, g2.size)
        if windowed:
            region = evaluate_grid(pl2d, args.alpha, bounds, resolution)
        else:
            region = extract_grid_region(pl2d, args.alpha, bounds, resolution)
    elif windowed:
        region = evaluate_grid(pl2d, args.alpha, bounds0, (96, 96))
    else:
        bounds = bounds0
        region = None
        for _ in range(8):
            try:
                region = extract_grid_region(pl2d, args.alpha, bounds, (96, 96))
                break
            except DomainError:
                mid_mu = 0.5 * (bounds[0] + bounds[1])
                half_mu = 0.8 * (bounds[1] - bounds[0])
                bounds = (mid_mu - half_mu, mid_mu + half_mu,
                          bounds[2] / 1.8, bounds[3] * 1.8)
        if region is None:
            raise DomainError("could not find bounds containing the level set")
    region.write_csv(args.out)
    print(f"region_area,{region_area(region):.6g}")
    return 0


def cmd_coverage(args) -> int:
    seed = _resolve_seed(args)
    if args.n is None:
        raise DomainError("coverage needs --n")
    methods = args.method.split(",")
    x = _parse_xspec(args.xspec, args.n) if args.xspec else None
    reports = []
    for method in methods:
        spec = cv.CoverageSpec(
            model=args.model,
            method=method.strip(),
            alpha=args.alpha,
            reps=args.reps,
            master_seed=seed,
            n=args.n,
            theta=args.theta if args.theta is not None else 1.0,
            mu=args.mu,
            sigma2=args.sigma2,
            x=x,
            mc_size=args.mc_size,
        )
        reports.append(cv.run_coverage(spec, workers=args.workers))

    stream = _out_stream(args)
    try:
        stream.write(cv.CoverageReport.CSV_HEADER + "\n")
        for rep in reports:
            stream.write(rep.csv_line() + "\n")
    finally:
        if stream is not sys.stdout:
            stream.close()
    if args.out:
        print(f"{'method':<14}{'coverage':>10}{'stderr':>10}{'reps':>8}")
        for rep in reports:
            print(f"{rep.spec.method:<14}{rep.estimate:>10.4f}"
                  f"{rep.stderr:>10.4f}{rep.reps:>8}")
    return 0


_SETS = {
    "default": default_random_set,
    "box": box_random_set,
    "shrunken": shrunken_random_set,
}


def cmd_validity(args) -> int:
    seed = _resolve_seed(args)
    prs = _SETS[args.set]()
    report = validity_diagnostic(prs, args.reps, derive_stream(seed, 0))
    stream = _out_stream(args)
    try:
        stream.write(
            f"set,{args.set}\n"
            f"n,{report.n}\n"
            f"ks_plus,{report.ks_plus:.6g}\n"
            f"ks_two_sided,{report.ks_two_sided:.6g}\n"
            f"threshold,{report.threshold:.6g}\n"
            f"pass,{int(report.passed)}\n"
            f"pass_two_sided,{int(report.passed_two_sided)}\n"
        )
    finally:
        if stream is not sys.stdout:
            stream.close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plausets",
        description="Exact confidence regions by thresholding plausibility "
                    "functions of predictive random sets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, models, with_mc=True):
        p.add_argument("--model", required=True, choices=models)
        p.add_argument("--data", help="dataset CSV path")
        p.add_argument("--alpha", type=float, default=0.05)
        p.add_argument("--seed", type=int, default=None,
                       help="master seed (fallback: PLAUSETS_SEED, then 0)")
        p.add_argument("--n", type=int, default=None)
        if with_mc:
            p.add_argument("--mc-size", dest="mc_size", type=int, default=10_000)

    p = sub.add_parser("interval", help="one-line CSV lo,hi,alpha")
    common(p, ["powerlaw", "expreg"])
    p.add_argument("--t", type=float, default=None, help="observed statistic")
    p.add_argument("--theta", type=float, default=None, help="synthetic truth")
    p.add_argument("--xspec", default=None, help="covariates, lo:hi or comma list")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_interval)

    p = sub.add_parser("pl-curve", help="theta,pl CSV over a grid")
    common(p, ["powerlaw", "expreg"])
    p.add_argument("--t", type=float, default=None)
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--xspec", default=None)
    p.add_argument("--grid", default=None, help="lo:hi:steps")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_pl_curve)

    p = sub.add_parser("region2d", help="mu,sigma2,pl,inside grid CSV")
    common(p, ["lognormal", "locscale"], with_mc=False)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--grid", default=None, help="lo:hi:steps,lo:hi:steps")
    p.add_argument("--base-cdf", dest="base_cdf", default="normal",
                   choices=["normal", "logistic"])
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_region2d)

    p = sub.add_parser("coverage", help="method,alpha,reps,estimate,stderr,seed CSV")
    common(p, ["powerlaw", "expreg", "lognormal"])
    p.add_argument("--method", default="plausibility",
                   help="comma-separated method ids")
    p.add_argument("--theta", type=float, default=None)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--xspec", default=None)
    p.add_argument("--reps", type=int, default=5000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_coverage)

    p = sub.add_parser("validity", help="Kolmogorov validity diagnostic")
    p.add_argument("--set", required=True, choices=sorted(_SETS))
    p.add_argument("--reps", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_validity)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
