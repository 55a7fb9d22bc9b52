"""Command-line front end: subcommand dispatch and deterministic reports.

Every subcommand resolves its parameters in three layers — built-in defaults,
then an optional flat ``key = value`` config file, then explicit flags (flags
win) — runs its computation, prints one line per check, and writes a JSON
report plus CSV tables into ``--out-dir``.

Exit codes: 0 all checks pass; 2 usage or parameter error; 3 at least one
check failed; 4 an iterative scheme did not converge.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from .acceptance import AcceptanceContext, run_all
from .degiorgi import (
    IterationParams,
    b0_threshold,
    default_cutoff_constant,
    degiorgi_iterate,
    max_principle_iterate,
    max_principle_sufficient,
)
from .errors import BracketError, DomainError, NonConvergence, ParseError
from .geodesics import (
    arc_length,
    control_distance_2d,
    control_distance_nd,
    geodesic_height,
    turning_data,
)
from .geometry import make_power_geometry
from .orlicz import (
    algebra_checks,
    conj_inverse_and_gamma,
    gamma_bound_check,
    young_function,
    young_inequality_check,
)
from .reporting import Report, load_config, merge_config, write_csv
from .spectral import SeriesSpec, l4_partial_sums, series_coefficients
from .subrep import KernelSpec, kernel_row_integral, poincare_sobolev11_check, sobolev_endpoint_integral
from .volumes import area_2d, volume_nd

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FAILED_CHECK = 3
EXIT_NO_CONVERGENCE = 4


def _point(text: str) -> tuple[float, ...]:
    try:
        coords = tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got {text!r}") from exc
    if len(coords) < 2:
        raise argparse.ArgumentTypeError("a point needs at least two coordinates")
    return coords


@dataclass(frozen=True)
class Opt:
    """One subcommand option: config key, default, converter, CLI plumbing."""

    key: str
    default: Any
    conv: Callable[[str], Any]
    help: str = ""
    dest: str | None = None
    flag: bool = False  # boolean switch (store_true)

    @property
    def dest_name(self) -> str:
        return self.dest if self.dest is not None else self.key.replace("-", "_")


COMMON_OPTS = (
    Opt("out-dir", "degen-out", str, "directory for JSON/CSV artifacts"),
)

COMMANDS: dict[str, tuple[Opt, ...]] = {
    "geodesic": (
        Opt("sigma", 1.0, float, "profile power"),
        Opt("lambda", 0.05, float, "geodesic level in (0, f(R/2))", dest="lam"),
        Opt("samples", 100, int, "number of curve samples"),
    ),
    "distance": (
        Opt("sigma", 1.0, float, "profile power"),
        Opt("p", (0.0, 0.0), _point, "first point x1,x2[,...]"),
        Opt("q", (0.2, 0.01), _point, "second point y1,y2[,...]"),
    ),
    "ball-volume": (
        Opt("sigma", 1.0, float, "profile power"),
        Opt("x1", 0.0, float, "center abscissa"),
        Opt("r", 0.0625, float, "ball radius"),
        Opt("dim", 2, int, "ambient dimension"),
        Opt("oracle", False, bool, "also run the quadrature oracle", flag=True),
    ),
    "orlicz": (
        Opt("N", 2.0, float, "bump exponent"),
        Opt("check", "all", str, "one of all|submult|holder|young|gamma"),
        Opt("trials", 100_000, int, "random pairs for the algebra sweeps"),
        Opt("seed", 7, int, "random seed"),
    ),
    "kernel-check": (
        Opt("sigma", 1.0, float, "profile power"),
        Opt("r", 0.0625, float, "outer kernel radius"),
        Opt("dim", 2, int, "ambient dimension (row integral: 2 only)"),
        Opt("variant", "dhat", str, "dhat (truncated) or naive"),
    ),
    "sobolev-endpoint": (
        Opt("sigma", 0.4, float, "profile power"),
        Opt("N", 2.0, float, "bump exponent"),
        Opt("r", 0.0625, float, "outer radius r0"),
        Opt("y1", None, lambda s: float(s), "row abscissa (default: r0)"),
    ),
    "poincare": (
        Opt("sigma", 0.4, float, "profile power"),
        Opt("r", 0.1, float, "ball radius"),
        Opt("seed", 0, int, "random seed for the sampled means"),
    ),
    "degiorgi": (
        Opt("N", 2.0, float, "bump exponent"),
        Opt("eps", 1.0, float, "structure exponent"),
        Opt("ratio", 1.0, float, "superradius ratio"),
        Opt("b0", "auto", str, "starting level, or 'auto' for the threshold"),
        Opt("steps", 200, int, "iteration steps"),
    ),
    "maxprinciple": (
        Opt("N", 2.0, float, "bump exponent"),
        Opt("b0", 20.0, float, "starting level"),
        Opt("C", 1.0, float, "per-step constant"),
        Opt("c", default_cutoff_constant(1.5), float, "cutoff constant"),
        Opt("steps", 500, int, "iteration steps"),
    ),
    "counterexample": (
        Opt("delta0", 1.0, float, "well decay rate"),
        Opt("alpha-prime", 0.25, float, "weight exponent offset"),
        Opt("M", 4096, int, "number of series terms"),
        Opt("t", 0.0, float, "evaluation time"),
        Opt("x", 0.0, float, "evaluation abscissa"),
    ),
    "verify-all": (
        Opt("sigma", 0.4, float, "profile power for the unpinned sweeps"),
        Opt("quick", False, bool, "reduced suite (see README)", flag=True),
        Opt("seed", 20260814, int, "seed for the randomized sweeps"),
    ),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="degen",
        description="Numerical checks for an infinitely degenerate control geometry.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, opts in COMMANDS.items():
        p = sub.add_parser(name, help=opts[0].help if opts else "")
        p.add_argument("--config", default=None, help="flat key = value config file")
        for opt in (*COMMON_OPTS, *opts):
            flag = f"--{opt.key}"
            if opt.flag:
                p.add_argument(flag, dest=opt.dest_name, action="store_true",
                               default=argparse.SUPPRESS, help=opt.help)
            else:
                p.add_argument(flag, dest=opt.dest_name, type=opt.conv,
                               default=argparse.SUPPRESS, metavar="V", help=opt.help)
    return parser


def resolve_params(command: str, args: argparse.Namespace) -> dict[str, Any]:
    """Layer defaults, config file, and explicit flags for one subcommand."""
    opts = (*COMMON_OPTS, *COMMANDS[command])
    defaults = {o.key: (o.default, bool if o.flag else o.conv) for o in opts}
    config = load_config(args.config) if args.config else {}
    given = {o.key: getattr(args, o.dest_name) for o in opts if hasattr(args, o.dest_name)}
    return merge_config(defaults, config, given)


# ---------------------------------------------------------------------------
# subcommand bodies
# ---------------------------------------------------------------------------


def cmd_geodesic(params: dict[str, Any], report: Report) -> None:
    g = make_power_geometry(params["sigma"])
    lam = params["lambda"]
    n = int(params["samples"])
    if n < 2:
        raise DomainError("samples must be at least 2")
    rec = turning_data(g, lam)
    xs = rec.X * np.arange(1, n + 1) / n
    rows = []
    defect_min = math.inf
    for x in xs:
        y = geodesic_height(g, lam, float(x))
        t = arc_length(g, lam, float(x))
        rows.append((float(x), y, t))
        cap = float(g.f(float(x))) ** 2 / (lam * abs(float(g.F_prime(float(x)))))
        defect_min = min(defect_min, cap * (1.0 + 1e-9) - y)
    report.add("turning-point-level", abs(float(g.f(rec.X)) - lam), 1e-9 * lam)
    report.add("height-upper-bound", 0.0, defect_min,
               passed=defect_min >= 0.0)
    ys = [r[1] for r in rows]
    ts = [r[2] for r in rows]
    report.add("height-increasing", 0.0, 1.0,
               passed=all(b > a for a, b in zip(ys, ys[1:])))
    report.add("arc-dominates-abscissa", 0.0, 1.0,
               passed=all(t >= x for x, _, t in rows))
    report.add("final-arc-vs-turning", abs(ts[-1] - rec.R_len), 1e-6 * rec.R_len)
    out = Path(params["out-dir"])
    report.add_artifact(write_csv(out / "geodesic.csv", ["x", "y", "t"], rows))


def cmd_distance(params: dict[str, Any], report: Report) -> None:
    g = make_power_geometry(params["sigma"])
    p, q = params["p"], params["q"]
    if len(p) != len(q):
        raise DomainError("p and q must have the same dimension")
    if len(p) == 2:
        res = control_distance_2d(g, p, q, detail=True)
    else:
        res = control_distance_nd(g, p, q, detail=True)
    report.params["region"] = res.region
    report.add("lower-envelope", res.lower_bound, res.value * (1.0 + 1e-12))
    report.add("upper-envelope", res.value, res.upper_bound * (1.0 + 1e-12))
    report.add("abscissa-gap-lower-bound", abs(q[0] - p[0]), res.value * (1.0 + 1e-12))
    out = Path(params["out-dir"])
    header = ["p", "q", "distance", "lam", "region", "lower_bound", "upper_bound"]
    row = (";".join(format(c, ".17g") for c in p), ";".join(format(c, ".17g") for c in q),
           res.value, res.lam, res.region, res.lower_bound, res.upper_bound)
    report.add_artifact(write_csv(out / "distance.csv", header, [row]))


def cmd_ball_volume(params: dict[str, Any], report: Report) -> None:
    g = make_power_geometry(params["sigma"])
    dim = int(params["dim"])
    if dim == 2:
        res = area_2d(g, params["x1"], params["r"], oracle=params["oracle"])
    else:
        res = volume_nd(g, params["x1"], params["r"], dim, oracle=params["oracle"])
    report.params["regime"] = res.regime
    report.params["formula"] = res.formula_value
    report.add("formula-positive", 0.0, res.formula_value,
               passed=res.formula_value > 0.0)
    ratio = math.nan
    if params["oracle"]:
        ratio = res.formula_value / res.oracle_value
        report.params["oracle"] = res.oracle_value
        report.params["ratio"] = ratio
        report.add("formula-vs-oracle-window", ratio, 1e2,
                   passed=1e-2 <= ratio <= 1e2, ratio=ratio)
    out = Path(params["out-dir"])
    header = ["dim", "sigma", "x1", "r", "regime", "formula", "oracle", "ratio"]
    row = (dim, params["sigma"], params["x1"], params["r"], res.regime,
           res.formula_value, res.oracle_value if params["oracle"] else math.nan, ratio)
    report.add_artifact(write_csv(out / "ball_volume.csv", header, [row]))


def cmd_orlicz(params: dict[str, Any], report: Report) -> None:
    yf = young_function(params["N"])
    which = params["check"]
    if which not in ("all", "submult", "holder", "young", "gamma"):
        raise DomainError(f"unknown check {which!r}")
    trials = int(params["trials"])
    seed = int(params["seed"])
    rows = []
    if which in ("all", "submult", "holder"):
        reports = {r.name: r for r in algebra_checks(yf, trials, seed=seed)}
        if which in ("all", "submult"):
            rep = reports["submultiplicativity"]
            report.add("submultiplicativity", rep.ratio_max, 1.0 + 1e-12)
            rows.append((rep.name, rep.samples, rep.ratio_min, rep.ratio_max))
        if which in ("all", "holder"):
            rep = reports["hoelder-factor-2"]
            report.add("hoelder-factor-2", rep.ratio_max, 1.0 + 1e-12)
            rows.append((rep.name, rep.samples, rep.ratio_min, rep.ratio_max))
        if which == "all":
            rep = reports["h-growth"]
            report.add("h-growth-increments", 0.0, rep.ratio_min,
                       passed=rep.ratio_min > 0.0)
            report.add("h-growth-total", 0.75 * yf.N * math.log(20.0), rep.ratio_max)
            rows.append((rep.name, rep.samples, rep.ratio_min, rep.ratio_max))
    if which in ("all", "young"):
        rep = young_inequality_check(yf, max(1, trials // 10), seed=seed + 1)
        report.add("young-inequality", rep.ratio_max, 1.0 + 1e-12)
        rows.append((rep.name, rep.samples, rep.ratio_min, rep.ratio_max))
    if which in ("all", "gamma"):
        rep = gamma_bound_check(yf, 100)
        report.add("gamma-gauge-bound", rep.ratio_max, 1.0 + 1e-12)
        rows.append((rep.name, rep.samples, rep.ratio_min, rep.ratio_max))
    if which == "all":
        t = 3.0
        inv, _ = conj_inverse_and_gamma(yf, t)
        report.add("conjugate-inverse-roundtrip", abs(yf.phi_conj(inv) - t), 1e-9 * t)
    out = Path(params["out-dir"])
    report.add_artifact(write_csv(out / "orlicz.csv",
                                  ["family", "samples", "ratio_min", "ratio_max"], rows))


def cmd_kernel_check(params: dict[str, Any], report: Report) -> None:
    variant = {"dhat": "DHAT", "naive": "NAIVE_D"}.get(params["variant"])
    if variant is None:
        raise DomainError(f"variant must be 'dhat' or 'naive', got {params['variant']!r}")
    if int(params["dim"]) != 2:
        raise DomainError("the row integral is implemented in the plane (dim 2)")
    g = make_power_geometry(params["sigma"])
    r = params["r"]
    val = kernel_row_integral(KernelSpec(g, r, 2, variant), (r, 0.0))
    report.params["value"] = val
    report.add("row-integral-positive", 0.0, val, passed=val > 0.0)
    if params["sigma"] == 1.0:
        # Recorded windows for the reference profile.
        if variant == "DHAT":
            report.add("dhat-over-r-window", val / r, 1.75,
                       passed=1.45 <= val / r <= 1.75, ratio=val / r)
        else:
            report.add("naive-stays-large", 0.1, val)
    out = Path(params["out-dir"])
    report.add_artifact(write_csv(out / "kernel_check.csv",
                                  ["sigma", "r", "variant", "value", "value_over_r"],
                                  [(params["sigma"], r, variant, val, val / r)]))


def cmd_sobolev_endpoint(params: dict[str, Any], report: Report) -> None:
    g = make_power_geometry(params["sigma"])
    r0 = params["r"]
    y1 = params["y1"] if params["y1"] is not None else r0
    detail = sobolev_endpoint_integral(g, params["N"], r0, y1, 2, detail=True)
    for key in ("I", "bound", "gammacond_ok", "gammacond_margin", "omega"):
        report.params[key] = detail[key]
    report.add("growth-condition", 0.0, 1.0, passed=bool(detail["gammacond_ok"]))
    report.add("endpoint-ratio-cap", detail["I"] / detail["bound"], 40.0)
    out = Path(params["out-dir"])
    report.add_artifact(write_csv(
        out / "sobolev_endpoint.csv",
        ["sigma", "N", "r0", "y1", "integral", "bound", "ratio", "growth_ok"],
        [(params["sigma"], params["N"], r0, y1, detail["I"], detail["bound"],
          detail["I"] / detail["bound"], bool(detail["gammacond_ok"]))]))


def cmd_poincare(params: dict[str, Any], report: Report) -> None:
    g = make_power_geometry(params["sigma"])
    reports = poincare_sobolev11_check(g, params["r"], seed=int(params["seed"]))
    rows = []
    for rep in reports:
        report.add(rep.name, rep.ratio_max, 1.0 + 1e-9)
        rows.append((rep.name, rep.samples, rep.ratio_min, rep.ratio_max))
    out = Path(params["out-dir"])
    report.add_artifact(write_csv(out / "poincare.csv",
                                  ["inequality", "samples", "ratio_min", "ratio_max"], rows))


def cmd_degiorgi(params: dict[str, Any], report: Report) -> None:
    yf = young_function(params["N"])
    p = IterationParams(N=params["N"], eps=params["eps"],
                        superradius_ratio=params["ratio"])
    if params["b0"] == "auto":
        b0 = b0_threshold(yf, p)
        report.params["b0_resolved"] = b0
        report.params["b0_mode"] = "threshold"
    else:
        try:
            b0 = float(params["b0"])
        except ValueError as exc:
            raise DomainError(f"b0 must be a real or 'auto', got {params['b0']!r}") from exc
        report.params["b0_resolved"] = b0
        report.params["b0_mode"] = "explicit"
    steps = int(params["steps"])
    run = degiorgi_iterate(yf, p, math.exp(-b0), steps)
    report.params["status"] = run.status
    report.add("completed", float(len(run) - 1), float(steps),
               passed=run.status == "COMPLETED")
    if params["b0"] == "auto":
        growth = all(s.b >= b0 + s.k for s in run)
        report.add("level-grows-linearly", 0.0, 1.0, passed=growth)
    out = Path(params["out-dir"])
    report.add_artifact(write_csv(out / "degiorgi.csv", ["k", "U", "b"],
                                  [(s.k, s.U, s.b) for s in run]))


def cmd_maxprinciple(params: dict[str, Any], report: Report) -> None:
    yf = young_function(params["N"])
    b0 = params["b0"]
    suff = max_principle_sufficient(yf, params["C"], params["c"], b0)
    run = max_principle_iterate(yf, params["C"], params["c"], math.exp(-b0),
                                int(params["steps"]))
    report.params["status"] = run.status
    report.add("sufficient-condition", 0.0, 1.0, passed=suff)
    report.add("level-diverges", 0.0, 1.0,
               passed=run.status == "DIVERGED_B")
    out = Path(params["out-dir"])
    report.add_artifact(write_csv(out / "maxprinciple.csv", ["k", "U", "b"],
                                  [(s.k, s.U, s.b) for s in run]))


def cmd_counterexample(params: dict[str, Any], report: Report) -> None:
    spec = SeriesSpec(params["alpha-prime"], params["delta0"], int(params["M"]))
    data = series_coefficients(spec, x_points=(params["x"],), t_points=(params["t"],))
    sums = l4_partial_sums(spec, data.B[:, 0, 0])
    ms = np.arange(2, int(params["M"]) + 1)
    dyadic = 2 ** np.arange(6, int(math.log2(int(params["M"]))) + 1)
    dyadic = dyadic[dyadic <= int(params["M"])]
    fit_slope = math.nan
    fit_r2 = math.nan
    if len(dyadic) >= 3:
        y = sums[dyadic - 2]
        x = np.log(dyadic.astype(float))
        design = np.column_stack([np.ones_like(x), x])
        coef, *_ = np.linalg.lstsq(design, y, rcond=None)
        resid = y - design @ coef
        total = float(np.sum((y - y.mean()) ** 2))
        fit_slope = float(coef[1])
        fit_r2 = 1.0 - float(np.sum(resid**2)) / total if total > 0 else 1.0
    report.params["fit_slope"] = fit_slope
    report.params["fit_r2"] = fit_r2
    report.add("partial-sums-finite", 0.0, 1.0,
               passed=bool(np.all(np.isfinite(sums))))
    report.add("partial-sums-increasing", 0.0, 1.0,
               passed=bool(np.all(np.diff(sums) >= 0.0)))
    if not math.isnan(fit_slope):
        report.add("log-fit-slope-positive", 0.0, fit_slope, passed=fit_slope > 0.0)
    out = Path(params["out-dir"])
    report.add_artifact(write_csv(out / "counterexample.csv", ["M", "S_M"],
                                  list(zip(ms.tolist(), sums.tolist()))))


def cmd_verify_all(params: dict[str, Any], report: Report) -> None:
    ctx = AcceptanceContext(sigma=params["sigma"], quick=bool(params["quick"]),
                            seed=int(params["seed"]))
    results = run_all(ctx)
    out = Path(params["out-dir"])
    summary_rows = []
    for res in results:
        for stem, (header, rows) in res.tables.items():
            report.add_artifact(write_csv(out / f"c{res.number:02d}_{stem}.csv", header, rows))
        n_ok = sum(c.passed for c in res.checks)
        summary_rows.append((res.number, res.name, n_ok, len(res.checks), res.passed))
        report.add(f"criterion-{res.number:02d}-{res.name}", float(n_ok),
                   float(len(res.checks)), passed=res.passed)
        print(res.summary_line())
    report.add_artifact(write_csv(out / "verify_summary.csv",
                                  ["criterion", "name", "checks_passed", "checks_total", "pass"],
                                  summary_rows))


HANDLERS: dict[str, Callable[[dict[str, Any], Report], None]] = {
    "geodesic": cmd_geodesic,
    "distance": cmd_distance,
    "ball-volume": cmd_ball_volume,
    "orlicz": cmd_orlicz,
    "kernel-check": cmd_kernel_check,
    "sobolev-endpoint": cmd_sobolev_endpoint,
    "poincare": cmd_poincare,
    "degiorgi": cmd_degiorgi,
    "maxprinciple": cmd_maxprinciple,
    "counterexample": cmd_counterexample,
    "verify-all": cmd_verify_all,
}


def dispatch(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command
    try:
        params = resolve_params(command, args)
    except ParseError as exc:
        print(f"degen {command}: config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = Report(command=command, params=dict(params))
    for key, value in report.params.items():
        if isinstance(value, tuple):  # point params, as typed on the command line
            report.params[key] = ",".join(format(c, ".17g") for c in value)
    start = time.perf_counter()
    try:
        HANDLERS[command](params, report)
    except (DomainError, ParseError) as exc:
        print(f"degen {command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NonConvergence, BracketError) as exc:
        print(f"degen {command}: no convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    report.wall_time = time.perf_counter() - start
    out = Path(params["out-dir"])
    json_path = report.write_json(out / f"{command.replace('-', '_')}.json")
    for chk in report.checks:
        status = "PASS" if chk.passed else "FAIL"
        print(f"check {chk.name}: {status} (lhs={chk.lhs:.6g} rhs={chk.rhs:.6g})")
    print(f"report: {json_path}")
    return EXIT_OK if report.all_pass else EXIT_FAILED_CHECK


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
