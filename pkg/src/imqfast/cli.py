"""Command-line experiments: matvec benchmark, error trends, invariant checks, solve demo.

Output is CSV (to ``--out`` or stdout) preceded by a comment line recording
the effective configuration.
"""
import argparse
import csv
import math
import statistics
import sys
import time
import warnings

import numpy as np

from .expansion import green_exact, green_truncated, truncation_error_bound
from .fastmv import auto_level, build_operator
from .geometry import to_cartesian
from .partition import Square, build_tree, coverage_counts, verify_separation
from .reference import DENSE_CAP, assemble_dense, dense_matvec, dense_solve, halton2d, random_vector, read_points, rel_err_inf
from .solver import Interpolant, iterative_solve

BENCH_HEADER = ["N", "M", "L", "time_fast_s", "time_dense_s", "rel_err_inf"]
ERRTREND_HEADER = ["rho_x", "M", "case", "E", "bound"]
SOLVE_HEADER = ["N", "t", "M", "L", "iterations", "rel_residual", "converged", "dev_dense", "data_err"]

ERRTREND_CASES = {
    "a": (np.pi / 3, np.pi / 3, np.pi / 3, np.pi / 3),
    "b": (np.pi, np.pi / 4, np.pi / 3, np.pi / 2),
}
DEFAULT_N = {"verify": "2000", "bench": "20000", "solve": "500", "errtrend": "0"}


def _levels(text):
    if text == "auto":
        return "auto"
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or comma-separated integers, got {text!r}")
    if any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError(f"levels must be >= 1, got {text!r}")
    return vals


def _sizes(text):
    try:
        vals = [int(float(v)) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated sizes, got {text!r}")
    if any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError(f"sizes must be >= 0, got {text!r}")
    return vals


def _positive(text):
    v = float(text)
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be positive, got {text!r}")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text!r}")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="imqfast", description=__doc__.splitlines()[0])
    p.add_argument("--mode", choices=["verify", "bench", "errtrend", "solve"], default="verify")
    p.add_argument("--n", type=_sizes, default=None, help="point count(s), comma-separated for bench")
    p.add_argument("--t", type=_positive, default=1.0, help="IMQ shape parameter")
    p.add_argument("--m", type=_nonneg_int, default=10, help="truncation index")
    p.add_argument("--levels", type=_levels, default="auto", help="'auto' or comma-separated level counts")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--points", default=None, help="point file (two columns; '#' comments)")
    p.add_argument("--out", default="-", help="CSV destination, '-' for stdout")
    p.add_argument("--threads", type=int, default=None, help="numba thread count")
    p.add_argument("--repeat", type=int, default=3, help="timing repetitions (median is reported)")
    p.add_argument("--samples", type=int, default=200, help="rho_x samples for errtrend")
    p.add_argument("--tol", type=_positive, default=1e-8, help="solver relative residual tolerance")
    p.add_argument("--max-iter", type=_nonneg_int, default=500)
    p.add_argument("--rhs", choices=["franke", "ones"], default="franke", help="solve-mode right-hand side")
    return p


def _config_line(args):
    keys = ["mode", "n", "t", "m", "levels", "seed", "points", "threads", "repeat"]
    extra = {"errtrend": ["samples"], "solve": ["tol", "max_iter", "rhs"]}.get(args.mode, [])
    return "# imqfast " + " ".join(f"{k}={getattr(args, k)}" for k in keys + extra)


def _timed(fn, repeat):
    times = []
    for _ in range(max(repeat, 3)):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times), out


def _point_sets(args):
    if args.points is not None:
        pts = read_points(args.points)
        yield pts.shape[0], pts
    else:
        for N in args.n:
            if N < 1:
                raise ValueError(f"need N >= 1, got {N}")
            yield N, halton2d(N)


def franke(x, y):
    return (
        0.75 * np.exp(-((9 * x - 2) ** 2 + (9 * y - 2) ** 2) / 4)
        + 0.75 * np.exp(-((9 * x + 1) ** 2) / 49 - (9 * y + 1) / 10)
        + 0.5 * np.exp(-((9 * x - 7) ** 2 + (9 * y - 3) ** 2) / 4)
        - 0.2 * np.exp(-((9 * x - 4) ** 2) - (9 * y - 7) ** 2)
    )


def run_bench(args, out, log):
    """Time dense and fast products per size; one CSV row per (N, L)."""
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(BENCH_HEADER)
    records = []
    for N, pts in _point_sets(args):
        u = random_vector(N, args.seed)
        t_dense, ref = _timed(lambda: dense_matvec(pts, args.t, u), args.repeat)
        levels = [auto_level(N, args.m)] if args.levels == "auto" else args.levels
        rows = []
        for L in levels:
            op = build_operator(pts, args.t, args.m, L)
            op.matvec(u)
            t_fast, b = _timed(lambda: op.matvec(u), args.repeat)
            err = rel_err_inf(b, ref)
            writer.writerow([N, args.m, L, f"{t_fast:.3g}", f"{t_dense:.3g}", f"{err:.3g}"])
            rows.append((N, args.m, L, t_fast, t_dense, err))
        best = min(rows, key=lambda r: r[3])
        out.write(
            f"# summary N={N} best_L={best[2]} auto_L={auto_level(N, args.m)} "
            f"T/N_fast={best[3] / N:.3g} T/N_dense={t_dense / N:.3g}\n"
        )
        log(f"N={N}: dense {t_dense:.3g}s, best fast {best[3]:.3g}s at L={best[2]}, E={best[5]:.3g}")
        records.extend(rows)
    return records


def errtrend_rows(samples=200, Ms=(5, 10, 20)):
    """``(rho_x, M, case, E, bound)`` for unit source radius and ``rho_x`` in ``[1.1, 21]``."""
    rows = []
    rho_x = np.linspace(1.1, 21.0, samples)
    for case, (th_x, th_y, om_x, om_y) in ERRTREND_CASES.items():
        X = to_cartesian((rho_x, np.full_like(rho_x, th_x), np.full_like(rho_x, om_x)))
        Y = to_cartesian((1.0, th_y, om_y))
        exact = green_exact(X, Y)
        for M in Ms:
            E = np.abs(exact - green_truncated(X, np.broadcast_to(Y, X.shape), M))
            for r, e in zip(rho_x, E):
                rows.append((float(r), M, case, float(e), truncation_error_bound(r, 1.0 / r, M)))
    return rows


def run_errtrend(args, out, log):
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(ERRTREND_HEADER)
    rows = errtrend_rows(args.samples)
    for r, M, case, e, bnd in rows:
        writer.writerow([f"{r:.6g}", M, case, f"{e:.6e}", f"{bnd:.6e}"])
    log(f"wrote {len(rows)} error samples")
    return rows


def _check(name, ok, detail, log):
    log(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return ok


def run_verify(args, out, log):
    """Invariant suite; returns True when every check passes."""
    unit = Square(np.zeros(2), 1.0)
    max_L = 4 if args.levels == "auto" else max(args.levels)
    ok = True

    probe = halton2d(64)
    for L in range(1, max_L + 1):
        tree = build_tree(probe, unit, L)
        rep = verify_separation(tree, args.t)
        planar = verify_separation(tree, 0.0)
        ok &= _check(
            f"separation L={L}", rep.valid and planar.valid,
            f"max ratio {rep.max_ratio:.4f} (t={args.t}), {planar.max_ratio:.4f} (t=0)", log,
        )
        s_max = [int(np.diff(lev.inter_starts).max()) for lev in tree.levels]
        ns_max = int(np.diff(tree.near_starts).max())
        counts_ok = s_max[0] <= 12 and all(s <= 27 for s in s_max[1:]) and ns_max <= 9
        ok &= _check(f"list sizes L={L}", counts_ok, f"max |S_p| per level {s_max}, max |NS_p| {ns_max}", log)

    small = halton2d(200)
    for L in (1, 2, 3):
        cov = coverage_counts(build_tree(small, unit, L))
        ok &= _check(f"exact cover N=200 L={L}", bool(np.all(cov == 1)), f"counts in [{cov.min()}, {cov.max()}]", log)

    N = args.n[0]
    pts = read_points(args.points) if args.points else halton2d(N)
    N = pts.shape[0]
    u = random_vector(N, args.seed)
    ref = dense_matvec(pts, args.t, u)
    levels = [1, 2] if args.levels == "auto" else args.levels
    for L in levels:
        op = build_operator(pts, args.t, args.m, L)
        err = rel_err_inf(op.matvec(u), ref)
        ok &= _check(f"oracle N={N} L={L}", err <= 5e-8, f"rel_err_inf {err:.3g}", log)
        v = random_vector(N, args.seed + 1)
        lhs = op.matvec(2.0 * u - 3.0 * v)
        rhs = 2.0 * op.matvec(u) - 3.0 * op.matvec(v)
        lin = float(np.max(np.abs(lhs - rhs)) / np.max(np.abs(rhs)))
        ok &= _check(f"linearity L={L}", lin <= 1e-12, f"{lin:.3g}", log)
    out.write(f"# verify {'passed' if ok else 'FAILED'}\n")
    return ok


def run_solve(args, out, log):
    """Solve one interpolation problem with the fast operator; True when converged."""
    pts = read_points(args.points) if args.points else halton2d(args.n[0])
    N = pts.shape[0]
    L = "auto" if args.levels == "auto" else args.levels[0]
    op = build_operator(pts, args.t, args.m, L)
    f = franke(pts[:, 0], pts[:, 1]) if args.rhs == "franke" else op.matvec(np.ones(N))
    rep = iterative_solve(op, f, tol=args.tol, max_iter=args.max_iter)
    interp = Interpolant(pts, rep.c, args.t)
    data_err = rel_err_inf(interp(pts), f)
    dev = float("nan")
    if N <= DENSE_CAP:
        dev = rel_err_inf(rep.c, dense_solve(assemble_dense(pts, args.t), f))
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SOLVE_HEADER)
    writer.writerow([
        N, args.t, args.m, op.L, rep.iterations, f"{rep.final_relative_residual:.3g}",
        int(rep.converged), f"{dev:.3g}", f"{data_err:.3g}",
    ])
    log(
        f"{'converged' if rep.converged else 'NOT converged'} after {rep.iterations} iterations, "
        f"residual {rep.final_relative_residual:.3g}, deviation from dense solve {dev:.3g}"
    )
    return rep.converged


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.n is None:
        args.n = _sizes(DEFAULT_N[args.mode])
    if args.mode in ("verify", "solve") and len(args.n) != 1:
        parser.error(f"--n takes a single size in {args.mode} mode")
    if args.threads is not None:
        import numba

        numba.set_num_threads(args.threads)
    warnings.filterwarnings("ignore", message=".*TBB.*")

    try:
        out = sys.stdout if args.out == "-" else open(args.out, "w")
    except OSError as exc:
        parser.error(f"cannot write {args.out}: {exc}")

    def log(msg):
        # keep CSV on stdout clean; verify output is the report itself
        to_err = out is sys.stdout and args.mode != "verify"
        print(msg, file=sys.stderr if to_err else sys.stdout)

    try:
        out.write(_config_line(args) + "\n")
        if args.mode == "bench":
            run_bench(args, out, log)
            status = 0
        elif args.mode == "errtrend":
            run_errtrend(args, out, log)
            status = 0
        elif args.mode == "verify":
            status = 0 if run_verify(args, out, log) else 1
        else:
            status = 0 if run_solve(args, out, log) else 1
    finally:
        if out is not sys.stdout:
            out.close()
    return status


if __name__ == "__main__":
    sys.exit(main())
