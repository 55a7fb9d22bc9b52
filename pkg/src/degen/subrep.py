"""Cusp kernels, radii ladders, and the (1,1)-Sobolev/Poincare checks.

A point x in the right half-strip sees a cusp-shaped region reaching out
to distance r0 along the axis, fattened vertically by the height profile
h*(x1, .).  Averages over the far end of the cusp reconstruct a function
from its weighted gradient through the kernel

    K(x, y) = dhat(x, y) / |B(x, d(x, y))|  restricted to the cusp,

whose row integrals scale like r -- the quantitative heart of the
(1,1)-Sobolev and Poincare inequalities verified here.  The module also
provides the shrinking radii ladders that grade the cusp, the closed-form
end measures, the endpoint integral whose convergence decides when the
machinery applies, and the variant kernel built on the raw distance d,
which demonstrably fails the row-integral estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, NonConvergence
from .geodesics import (
    ball_shape,
    control_distance_2d,
    control_distance_log_gap,
    control_distance_nd,
    d_hat,
    h_star,
    h_star_log,
)
from .geometry import ComparabilityReport, Geometry
from .numeric import DEFAULT_QUADRATURE, integrate
from .volumes import area_2d, ball_columns, unit_ball_volume, volume_nd

__all__ = [
    "RadiiSequence",
    "radii_sequence",
    "end_measures",
    "KernelSpec",
    "kernel_eval",
    "kernel_row_integral",
    "subrep_residual_check",
    "sobolev_endpoint_integral",
    "poincare_sobolev11_check",
    "division_of_regions_check",
]


# ---------------------------------------------------------------------------
# Radii ladders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadiiSequence:
    """Decreasing ladder of radii grading the cusp, with chord widths.

    radii has length K+1; q[k] = sqrt(radii[k]^2 - radii[k+1]^2) is the
    half-width of the k-th ring in the transverse flat directions.
    shrink_constant records the largest observed r_k / r_{k+1} - 1, so
    r_{k+1} >= r_k / (shrink_constant + 1) across the ladder.
    """

    x1: float
    r0: float
    mode: str
    gamma: float | None
    radii: np.ndarray
    q: np.ndarray
    shrink_constant: float

    @property
    def delta_r(self) -> np.ndarray:
        """Ring widths r_k - r_{k+1} (positive)."""
        return -np.diff(self.radii)

    @property
    def delta2_r(self) -> np.ndarray:
        """Second differences of the ladder."""
        return -np.diff(self.delta_r)

    @property
    def delta_q(self) -> np.ndarray:
        """Increments of the chord widths."""
        return -np.diff(self.q)


def radii_sequence(
    g: Geometry,
    x1: float,
    r0: float,
    mode: str = "STANDARD",
    K: int = 8,
    *,
    gamma: float = 1.0,
) -> RadiiSequence:
    """Build the ladder r_0 > r_1 > ... > r_K from one of the two rules.

    STANDARD: r_{k+1} is the turning radius r*(x1, r_k) while r_k is
    above the degeneracy scale 1/|F'(x1)|, then plain halving.  GAMMA:
    r_{k+1} = r_k - gamma/|F'(x1 + r_k)| while r_k >= gamma/|F'(x1)|,
    then halving.  Both make consecutive balls carry comparable measure.
    """
    if K < 2:
        raise DomainError("ladder needs K >= 2")
    if not 0.0 <= x1 < g.R / 2.0 or not 0.0 < r0 or x1 + r0 >= g.R / 2.0:
        raise DomainError(f"ladder start outside the working region: x1={x1}, r0={r0}")
    if mode not in ("STANDARD", "GAMMA"):
        raise DomainError(f"unknown ladder mode {mode!r}")
    if mode == "GAMMA" and gamma <= 0.0:
        raise DomainError("gamma must be positive")

    radii = [r0]
    for _ in range(K):
        r = radii[-1]
        if mode == "STANDARD":
            if r >= g.inv_abs_F_prime(x1):
                nxt = ball_shape(g, x1, r).r_star
            else:
                nxt = r / 2.0
        else:
            if r >= gamma * g.inv_abs_F_prime(x1):
                nxt = r - gamma * g.inv_abs_F_prime(x1 + r)
            else:
                nxt = r / 2.0
        if not 0.0 < nxt < r:
            raise DomainError(f"ladder step left (0, r): {r} -> {nxt}")
        radii.append(nxt)
    radii_arr = np.array(radii)
    q = np.sqrt(radii_arr[:-1] ** 2 - radii_arr[1:] ** 2)
    shrink = float(np.max(radii_arr[:-1] / radii_arr[1:] - 1.0))
    return RadiiSequence(x1, r0, mode, gamma if mode == "GAMMA" else None, radii_arr, q, shrink)


def radii_ball_ratios(g: Geometry, seq: RadiiSequence, *, dim: int = 2) -> ComparabilityReport:
    """Measure ratios |B(x, r_k)| / |B(x, r_{k+1})| along the ladder."""

    def measure(r: float) -> float:
        if dim == 2:
            return area_2d(g, seq.x1, r).formula_value
        return volume_nd(g, seq.x1, r, dim).formula_value

    vals = np.array([measure(float(r)) for r in seq.radii])
    ratios = vals[:-1] / vals[1:]
    return ComparabilityReport("ladder-ball-ratios", len(ratios), float(ratios.min()), float(ratios.max()))


# ---------------------------------------------------------------------------
# End measures
# ---------------------------------------------------------------------------


def end_measures(
    g: Geometry,
    x1: float,
    radii3: Sequence[float],
    dim: int,
) -> tuple[float, float, float, float]:
    """Measures of the cusp end in its three versions plus the ball.

    radii3 = (r_k, r_{k+1}, r_{k+2}) must be consecutive ladder radii.
    Returns (E, E_tilde, E_hat, ball):
      E       curved end {r_{k+1} < y1-x1 < r_k, |y_n| < h*(x1, y1-x1)}
              (times the flat middle ball of radius q_k for dim > 2),
      E_tilde product box with constant height h*(x1, r_k) and width q_k,
      E_hat   the same box with the next width q_{k+1},
      ball    |B((x1,0), r_k)| from the regime formula.
    """
    rk, rk1, rk2 = (float(r) for r in radii3)
    if not rk > rk1 > rk2 > 0.0:
        raise DomainError(f"radii must decrease: {radii3}")
    if dim < 2:
        raise DomainError("dimension must be at least 2")
    q_k = math.sqrt(rk * rk - rk1 * rk1)
    q_k1 = math.sqrt(rk1 * rk1 - rk2 * rk2)
    h_k = h_star(g, x1, rk)
    omega = unit_ball_volume(dim - 2)
    mid_k = omega * q_k ** (dim - 2)
    e_tilde = (rk - rk1) * mid_k * 2.0 * h_k
    e_hat = (rk - rk1) * omega * q_k1 ** (dim - 2) * 2.0 * h_k
    profile = integrate(
        lambda u: 2.0 * h_star(g, x1, u), rk1, rk, DEFAULT_QUADRATURE.with_tolerances(1e-14, 1e-8)
    )
    e_curved = profile * mid_k
    if dim == 2:
        ball = area_2d(g, x1, rk).formula_value
    else:
        ball = volume_nd(g, x1, rk, dim).formula_value
    return e_curved, e_tilde, e_hat, ball


# ---------------------------------------------------------------------------
# Kernel
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelSpec:
    """Cusp kernel configuration: geometry, outer radius, dimension, variant.

    variant "DHAT" uses the truncated distance dhat in the numerator (the
    kernel that works); "NAIVE_D" uses the raw control distance d (the
    kernel whose row integral fails to scale).
    """

    geometry: Geometry
    r0: float
    dim: int = 2
    variant: str = "DHAT"

    def __post_init__(self) -> None:
        if not 0.0 < self.r0 < self.geometry.R / 2.0:
            raise DomainError(f"r0 must lie in (0, R/2), got {self.r0}")
        if self.dim < 2:
            raise DomainError("dimension must be at least 2")
        if self.variant not in ("DHAT", "NAIVE_D"):
            raise DomainError(f"unknown kernel variant {self.variant!r}")


def _ball_measure(g: Geometry, x1: float, r: float, dim: int) -> float:
    if dim == 2:
        return area_2d(g, x1, r).formula_value
    return volume_nd(g, x1, r, dim).formula_value


def _log_ball_measure_2d(g: Geometry, x1: float, r: float) -> float:
    """``ln area_2d(x1, r)``, usable where the area itself underflows."""
    if x1 > 0.0 and r <= g.inv_abs_F_prime(x1):
        return 2.0 * math.log(r) - float(g.F(x1))
    z = x1 + r
    return -float(g.F(z)) - 2.0 * math.log(-float(g.F_prime(z)))


def _in_cusp_2d(g: Geometry, x: Sequence[float], y: Sequence[float], r0: float) -> bool:
    t = y[0] - x[0]
    if not 0.0 < t <= r0:
        return False
    return abs(y[1] - x[1]) < h_star(g, x[0], t)


def _in_cusp_nd(spec: KernelSpec, x: Sequence[float], y: Sequence[float]) -> bool:
    g = spec.geometry
    t = y[0] - x[0]
    if not 0.0 < t <= spec.r0:
        return False
    ladder = radii_sequence(g, x[0], spec.r0, "STANDARD", K=_rings_to_reach(g, x[0], spec.r0, t))
    radii = ladder.radii
    k = int(np.searchsorted(-radii, -t) - 1)  # radii[k+1] < t <= radii[k]
    k = max(0, min(k, len(radii) - 2))
    q_k = ladder.q[k]
    mid = np.asarray(y[1:-1], dtype=float) - np.asarray(x[1:-1], dtype=float)
    if math.sqrt(float(mid @ mid)) >= q_k:
        return False
    return abs(y[-1] - x[-1]) < h_star(g, x[0], float(radii[k]))


def _rings_to_reach(g: Geometry, x1: float, r0: float, t: float) -> int:
    # Rings shrink at worst by halving; bound the count generously.
    return max(2, min(400, int(math.ceil(math.log2(r0 / t))) * 8 + 8))


def kernel_eval(spec: KernelSpec, x: Sequence[float], y: Sequence[float]) -> float:
    """Kernel value K(x, y); zero outside the cusp emanating from x.

    In the plane the cusp has the curved profile |y2 - x2| < h*(x1, y1-x1);
    in higher dimensions the product-box rings (widths q_k, heights
    h*(x1, r_k)) are used, matching the closed-form end measures.
    """
    g = spec.geometry
    if len(x) != spec.dim or len(y) != spec.dim:
        raise DomainError(f"points must have dimension {spec.dim}")
    if spec.dim == 2:
        if not _in_cusp_2d(g, x, y, spec.r0):
            return 0.0
        d = control_distance_2d(g, (x[0], x[1]), (y[0], y[1]))
    else:
        if not _in_cusp_nd(spec, x, y):
            return 0.0
        d = control_distance_nd(g, x, y)
    if spec.variant == "DHAT":
        num = d_hat(g, x, y).d_hat if spec.dim > 2 else d_hat(g, (x[0], x[1]), (y[0], y[1])).d_hat
    else:
        num = d
    return num / _ball_measure(g, x[0], d, spec.dim)


def kernel_row_integral(
    spec: KernelSpec,
    y: Sequence[float],
    *,
    n_t: int = 48,
    n_inner: int = 6,
    nodes: int = 48,
) -> float:
    """Integral of K(x, y) over centers x with y fixed (plane only).

    The domain is {x : y in cusp(x, r0), x1 > 0}: for each axis gap
    t = y1 - x1 the admissible x2 fill the strip |y2 - x2| < h*(x1, t).
    Quadrature is log-graded in t (the integrand is integrably singular
    as t -> 0) with Gauss nodes across the strip.
    """
    if spec.dim != 2:
        raise DomainError("row integral implemented in the plane")
    g = spec.geometry
    y1, y2 = float(y[0]), float(y[1])
    if y1 <= 0.0:
        raise DomainError("y must lie in the open right half-plane")
    t_max = min(spec.r0, y1 * (1.0 - 1e-9))
    ts = np.geomspace(t_max * 1e-8, t_max, n_t)
    gl_x, gl_w = np.polynomial.legendre.leggauss(n_inner)

    def strip_integral(t: float) -> float:
        # Strip height h*(x1, t) and ball measures underflow the double range
        # deep in the cusp while the combination h * K stays of size ~1, so
        # the whole strip contribution is assembled in log space per node.
        x1 = y1 - t
        log_h = h_star_log(g, x1, t, nodes=nodes)
        if log_h == -math.inf:
            return 0.0
        total = 0.0
        for xi, wi in zip(gl_x, gl_w):
            log_u = log_h + math.log(0.5 * (xi + 1.0))  # |y2 - x2|, symmetric
            d = control_distance_log_gap(g, x1, y1, log_u, nodes=nodes)
            num = min(d, g.inv_abs_F_prime(x1 + d)) if spec.variant == "DHAT" else d
            total += wi * num * math.exp(log_h - _log_ball_measure_2d(g, x1, d))
        return total

    vals = np.array([strip_integral(float(t)) for t in ts])
    return float(np.trapezoid(vals * ts, np.log(ts)))


# ---------------------------------------------------------------------------
# Subrepresentation residual
# ---------------------------------------------------------------------------


def subrep_residual_check(
    g: Geometry,
    r0: float,
    w: Callable[[float, float], float],
    grad_w: Callable[[float, float], tuple[float, float]],
    samples: int,
    seed: int = 0,
    *,
    x1_range: tuple[float, float] | None = None,
    n_t: int = 28,
    n_inner: int = 4,
    nodes: int = 48,
) -> ComparabilityReport:
    """Pointwise reconstruction bound |w(x) - avg_E w| <= C int |grad_A w| K.

    At random points x in the half-strip, the left side averages w over
    the curved far end E(x, r_1) of the cusp (consecutive ladder radii
    r_1 > r_2 from the STANDARD rule) and the right side integrates
    |grad_A w| K(x, .) over the whole cusp.  Samples are the left/right
    ratios; the report's max is the empirical constant C.
    """
    if samples < 1:
        raise DomainError("samples must be at least 1")
    rng = np.random.default_rng(seed)
    spec = KernelSpec(g, r0, 2, "DHAT")
    # Kernel evaluations probe distances up to a few r0 past the center, and
    # the truncation d_hat(x, y) needs x1 + d inside the half-strip; keep the
    # sampled centers well clear of that ceiling.
    lo, hi = x1_range if x1_range is not None else (0.05, g.R / 2.0 - 4.0 * r0)
    if not 0.0 < lo < hi:
        raise DomainError(f"empty center range ({lo}, {hi}); shrink r0")
    gl_x, gl_w = np.polynomial.legendre.leggauss(n_inner)
    gl_x8, gl_w8 = np.polynomial.legendre.leggauss(8)
    ratios = np.empty(samples)

    for i in range(samples):
        x1 = float(rng.uniform(lo, hi))
        x2 = float(rng.uniform(-0.2, 0.2))
        ladder = radii_sequence(g, x1, r0, "STANDARD", K=2)
        r1, r2 = float(ladder.radii[1]), float(ladder.radii[2])

        # Left: average of w over the curved end between r2 and r1.
        area = 0.0
        mean = 0.0
        for ui, wu in zip(gl_x8, gl_w8):
            u = r2 + 0.5 * (r1 - r2) * (ui + 1.0)
            du = 0.5 * (r1 - r2) * wu
            h = h_star(g, x1, u)
            for vi, wv in zip(gl_x, gl_w):
                v = h * vi  # y2 - x2 over (-h, h)
                dv = h * wv
                area += du * dv
                mean += du * dv * w(x1 + u, x2 + v)
        mean /= area
        left = abs(w(x1, x2) - mean)

        # Right: int |grad_A w| K over the cusp, log-graded in the gap t.
        ts = np.geomspace(r0 * 1e-7, r0, n_t)
        vals = np.empty(n_t)
        for j, t in enumerate(ts):
            h = h_star(g, x1, float(t))
            acc = 0.0
            for vi, wv in zip(gl_x, gl_w):
                v = h * vi
                dv = h * wv
                yy1, yy2 = x1 + float(t), x2 + v
                d = control_distance_2d(g, (x1, 0.0), (yy1, abs(v)), nodes=nodes)
                dh = d_hat(g, (x1, 0.0), (yy1, abs(v))).d_hat
                K = dh / _ball_measure(g, x1, d, 2)
                wx, wy = grad_w(yy1, yy2)
                acc += dv * math.hypot(wx, g.f(yy1) * wy) * K
            vals[j] = acc
        right = float(np.trapezoid(vals * ts, np.log(ts)))
        ratios[i] = 0.0 if left == 0.0 else left / right
    return ComparabilityReport("subrep-residual", len(ratios), float(ratios.min()), float(ratios.max()))


# ---------------------------------------------------------------------------
# Endpoint integral
# ---------------------------------------------------------------------------


def _psi_of_log(N: float, ln_arg: float) -> float:
    """Psi(e^{ln_arg}) for the N-family, overflow-free.

    Psi is the right-continuous derivative of the Young function:
    constant (2N)^N below the knot, (ln t)^N + N (ln t)^{N-1} above.
    """
    if ln_arg <= 2.0 * N:
        return (2.0 * N) ** N
    return ln_arg**N + N * ln_arg ** (N - 1.0)


def _knot_interval_length(ln_arg: Callable[[float], float], knot: float, y1: float) -> float:
    """Measure of the sublevel interval {r in (0, y1) : ln_arg(r) <= knot}.

    ln_arg diverges at both ends of (0, y1) and dips once in between, so
    the sublevel set is one interval; its edges are found on a log-dense
    grid and sharpened by bisection.
    """
    grid = y1 * np.unique(
        np.concatenate(
            [np.geomspace(1e-9, 0.5, 400), 1.0 - np.geomspace(1e-9, 0.5, 400)]
        )
    )
    below = np.array([ln_arg(float(r)) <= knot for r in grid])
    if not below.any():
        return 0.0
    idx = np.where(below)[0]
    lo_in, hi_in = grid[idx[0]], grid[idx[-1]]
    lo_out = grid[idx[0] - 1] if idx[0] > 0 else 0.0
    hi_out = grid[idx[-1] + 1] if idx[-1] + 1 < len(grid) else y1
    for _ in range(80):
        mid = 0.5 * (lo_out + lo_in)
        if ln_arg(mid) <= knot:
            lo_in = mid
        else:
            lo_out = mid
    for _ in range(80):
        mid = 0.5 * (hi_out + hi_in)
        if ln_arg(mid) <= knot:
            hi_in = mid
        else:
            hi_out = mid
    return float(hi_in - lo_in)


def geom_extra_condition_margin(g: Geometry, N: float, *, grid: np.ndarray | None = None) -> float:
    """max over r of N (r F''(r)/|F'(r)| - 1); the growth condition holds iff < 1.

    This is the sharp form of the requirement F'' <= (1 + (1-eps)/N)|F'|/r
    for some eps > 0: the margin must stay strictly below 1.
    """
    if grid is None:
        grid = np.geomspace(g.R * 1e-8, g.R * 0.499, 64)
    vals = [N * (r * g.F_second(r) / g.abs_F_prime(r) - 1.0) for r in grid]
    return float(max(vals))


def sobolev_endpoint_integral(
    g: Geometry,
    N: float,
    r0: float,
    y1: float,
    dim: int = 2,
    *,
    t_N: float = 2.0,
    detail: bool = False,
):
    """The endpoint integral I deciding the Orlicz-Sobolev inequality.

    I = (1/omega) int_0^{y1} Psi( |B(0,r0)| / (s_r omega) ) dr, where
    omega = 1/(t_N |F'(r0)|) and s_r is the two-regime cross-section scale
    at axis gap r from the evaluation point (frozen-weight r^{n-1} f(y1-r)
    below the degeneracy scale of x1 = y1-r, edge-localized above).
    Returns (I, bound, gammacond_ok) with bound = phi(r0) |F'(r0)|,
    phi(r) = |F'(r)|^N r^{N+1}.  When the growth condition fails the
    integral diverges at r -> y1 and I is +inf.  With detail=True a dict
    with the small-branch split is returned instead.
    """
    if not 0.0 < y1 <= r0 < g.R / 2.0:
        raise DomainError(f"need 0 < y1 <= r0 < R/2, got y1={y1}, r0={r0}")
    if dim < 2:
        raise DomainError("dimension must be at least 2")
    if N <= 1.0:
        raise DomainError("N must exceed 1")
    abs_fp_r0 = g.abs_F_prime(r0)
    omega = 1.0 / (t_N * abs_fp_r0)
    ln_ball = (
        -g.F(r0)
        - dim * math.log(abs_fp_r0)
        + (dim / 2.0 - 1.0) * (math.log(r0) + math.log(abs_fp_r0))
    )
    ln_omega = -math.log(t_N) - math.log(abs_fp_r0)

    def ln_s(r: float) -> float:
        x1 = y1 - r
        if r < 2.0 * g.inv_abs_F_prime(x1):
            return (dim - 1.0) * math.log(r) - g.F(x1)
        return -g.F(y1) + (dim / 2.0 - 1.0) * math.log(r) - (dim / 2.0 + 1.0) * math.log(
            g.abs_F_prime(y1)
        )

    def ln_arg(r: float) -> float:
        return ln_ball - ln_s(r) - ln_omega

    def integrand(r: float) -> float:
        return _psi_of_log(N, ln_arg(r))

    margin = geom_extra_condition_margin(g, N)
    gammacond_ok = margin < 1.0

    knot = 2.0 * N  # Psi switches branches where ln_arg = ln E = 2N
    spec = DEFAULT_QUADRATURE.with_tolerances(1e-13, 1e-9)

    if not gammacond_ok:
        total = math.inf
        small_portion = math.nan
    else:
        # Split at y1/2 and absorb both integrable singularities by
        # logarithmic substitution (r -> 0 and x1 = y1 - r -> 0).
        u_hi = math.log(y1 / 2.0)
        piece1 = integrate(
            lambda u: math.exp(u) * integrand(math.exp(u)), u_hi - 80.0, u_hi, spec
        )
        piece2 = 0.0
        v0 = math.log(2.0 / y1)
        seg = 20.0
        for k in range(60):
            part = integrate(
                lambda v: math.exp(-v) * integrand(y1 - math.exp(-v)),
                v0 + k * seg,
                v0 + (k + 1) * seg,
                spec,
            )
            piece2 += part
            if part < 1e-13 * (piece1 + piece2):
                break
        else:  # pragma: no cover
            raise NonConvergence("endpoint integral tail did not converge")
        total = (piece1 + piece2) / omega

        # Small branch: {r : Psi argument <= knot} is a single interval
        # (ln_arg dips once between its endpoint singularities); measure it
        # by locating both edges and multiply by the constant linear slope.
        length = _knot_interval_length(ln_arg, knot, y1)
        small_portion = (2.0 * N) ** N * length / omega

    bound = abs_fp_r0**N * r0 ** (N + 1.0) * abs_fp_r0
    if detail:
        return {
            "I": total,
            "bound": bound,
            "gammacond_ok": gammacond_ok,
            "gammacond_margin": margin,
            "small_portion": small_portion,
            "small_cap": (2.0 * N) ** N * r0 / omega,
            "omega": omega,
        }
    return total, bound, gammacond_ok


# ---------------------------------------------------------------------------
# (1,1)-Sobolev and Poincare
# ---------------------------------------------------------------------------


def _ball_quadrature_nodes(
    g: Geometry,
    r: float,
    *,
    n_columns: int = 28,
    n_y: int = 6,
    half: bool = False,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Quadrature nodes (x, y, weight) covering B(0, r) (or its right half).

    Columns come from the boundary solver; within each column the vertical
    interval carries Gauss nodes.  The x < 0 part mirrors by symmetry.
    """
    xs, heights = ball_columns(g, 0.0, r, n_columns=n_columns)
    gl_x, gl_w = np.polynomial.legendre.leggauss(n_y)
    col_w = np.gradient(xs)
    pts_x, pts_y, wts = [], [], []
    sides = (1.0,) if half else (1.0, -1.0)
    for x, h, cw in zip(xs, heights, col_w):
        if h <= 0.0:
            continue
        for side in sides:
            for yi, wy in zip(gl_x, gl_w):
                pts_x.append(side * x)
                pts_y.append(h * yi)
                wts.append(cw * h * wy)
    return np.array(pts_x), np.array(pts_y), np.array(wts)


def poincare_sobolev11_check(
    g: Geometry,
    r0: float,
    test_family: Sequence[tuple[str, Callable, Callable]] | None = None,
    seed: int = 0,
    *,
    radii: Sequence[float] | None = None,
    n_columns: int = 28,
    n_y: int = 6,
    nodes: int = 48,
    mc_samples: int = 160,
) -> list[ComparabilityReport]:
    """First-order (1,1) inequalities on control balls, plus their geometry.

    Produces one report per verified statement:
      sobolev-11        int |w| <= C r int |grad_A w| for the compactly
                        supported distance bump w = (1 - d/r)+^2,
      poincare-half     mean-deviation Poincare on the right half-ball,
      poincare-full     full-ball Poincare with gradient on B(0, 2r),
      ball-rect-inclusion  B(0,r) inside the rectangle (-r,r) x (+-h)
                        inside B(0,2r) (membership sampling),
    Samples in the first three are the normalized ratios over the radius
    sweep and test family; all must stay below a recorded constant.
    """
    rng = np.random.default_rng(seed)
    rs = list(radii) if radii is not None else [r0 / 2.0, r0 / 4.0, r0 / 8.0]
    if test_family is None:
        test_family = [
            ("linear-x", lambda x, y: x, lambda x, y: (1.0, 0.0)),
            ("quadratic", lambda x, y: x * x, lambda x, y: (2.0 * x, 0.0)),
            (
                "y-oscillation",
                lambda x, y: x * math.sin(y / g.f(r0)),
                lambda x, y: (math.sin(y / g.f(r0)), x * math.cos(y / g.f(r0)) / g.f(r0)),
            ),
        ]
    reports: list[ComparabilityReport] = []

    # --- Sobolev with the distance bump -----------------------------------
    sob = []
    for r in rs:
        px, py, wts = _ball_quadrature_nodes(g, r, n_columns=n_columns, n_y=n_y)
        ds = np.array(
            [control_distance_2d(g, (0.0, 0.0), (abs(x), yv), nodes=nodes) for x, yv in zip(px, py)]
        )
        slack = np.maximum(0.0, 1.0 - ds / r)
        lhs = float(wts @ slack**2)
        rhs = float(wts @ (2.0 / r * slack))  # |grad_A w| = (2/r)(1 - d/r)+ a.e.
        sob.append(lhs / (r * rhs))
    sob_arr = np.array(sob)
    reports.append(ComparabilityReport("sobolev-11", len(sob_arr), float(sob_arr.min()), float(sob_arr.max())))

    # --- Poincare, half and full ball --------------------------------------
    half_ratios, full_ratios = [], []
    for r in rs:
        hx, hy, hw = _ball_quadrature_nodes(g, r, n_columns=n_columns, n_y=n_y, half=True)
        fx, fy, fw = _ball_quadrature_nodes(g, r, n_columns=n_columns, n_y=n_y)
        gx, gy, gw = _ball_quadrature_nodes(g, 2.0 * r, n_columns=n_columns, n_y=n_y)
        for name, wfun, grad in test_family:
            for pxa, pya, pwa, gxa, gya, gwa, sink in (
                (hx, hy, hw, hx, hy, hw, half_ratios),
                (fx, fy, fw, gx, gy, gw, full_ratios),
            ):
                wv = np.array([wfun(x, yv) for x, yv in zip(pxa, pya)])
                avg = float(pwa @ wv) / float(pwa.sum())
                lhs = float(pwa @ np.abs(wv - avg))
                gv = np.empty(len(gxa))
                for j, (x, yv) in enumerate(zip(gxa, gya)):
                    dxw, dyw = grad(x, yv)
                    gv[j] = math.hypot(dxw, g.f(x) * dyw)
                rhs = float(gwa @ gv)
                sink.append(lhs / (r * rhs) if rhs > 0 else 0.0)
    ha = np.array(half_ratios)
    fa = np.array(full_ratios)
    reports.append(ComparabilityReport("poincare-half", len(ha), float(ha.min()), float(ha.max())))
    reports.append(ComparabilityReport("poincare-full", len(fa), float(fa.min()), float(fa.max())))

    # --- Inclusion sandwich -------------------------------------------------
    incl = []
    for r in rs:
        shape = ball_shape(g, 0.0, r)
        xs, heights = ball_columns(g, 0.0, r, n_columns=n_columns)
        incl.append(float(np.max(heights)) / shape.h)  # ball inside rectangle
        sx = rng.uniform(-r, r, mc_samples)
        sy = rng.uniform(-shape.h, shape.h, mc_samples)
        dmax = 0.0
        for x, yv in zip(sx, sy):
            d = control_distance_2d(g, (0.0, 0.0), (abs(x), abs(yv)), nodes=nodes)
            dmax = max(dmax, d / (2.0 * r))  # rectangle inside B(0, 2r)
        incl.append(dmax)
    incl_arr = np.array(incl)
    reports.append(
        ComparabilityReport("ball-rect-inclusion", len(incl_arr), float(incl_arr.min()), float(incl_arr.max()))
    )
    return reports


def division_of_regions_check(
    n_spaces: int = 50,
    seed: int = 0,
    *,
    n_points: int = 10,
) -> ComparabilityReport:
    """Pair-sum comparability under a two-cell partition (finite spaces).

    For random values w on a finite measure space split into cells of
    masses mu1, mu2, the symmetric pair sums S_ij = sum |w(x)-w(y)| mu mu
    obey S11 + 2 S12 + S22 <= 2 (rho + 1 + 1/rho) S12 with rho = mu1/mu2
    (equal masses give the constant 6).  Samples are attained/allowed
    ratios; all must be <= 1.
    """
    rng = np.random.default_rng(seed)
    ratios = np.empty(n_spaces)
    for i in range(n_spaces):
        m = n_points
        half = m // 2
        w = rng.normal(0.0, 1.0, m)
        mu = rng.uniform(0.2, 1.0, m)
        if i % 2 == 0:
            mu[:half] *= mu[half:].sum() / mu[:half].sum()  # equal-mass partition
        labels = np.zeros(m, dtype=bool)
        labels[:half] = True
        diff = np.abs(w[:, None] - w[None, :]) * mu[:, None] * mu[None, :]
        s11 = float(diff[labels][:, labels].sum())
        s22 = float(diff[~labels][:, ~labels].sum())
        s12 = float(diff[labels][:, ~labels].sum())
        rho = float(mu[labels].sum() / mu[~labels].sum())
        allowed = 2.0 * (rho + 1.0 + 1.0 / rho) * s12
        ratios[i] = (s11 + 2.0 * s12 + s22) / allowed if allowed > 0 else 0.0
    return ComparabilityReport("division-of-regions", len(ratios), float(ratios.min()), float(ratios.max()))
