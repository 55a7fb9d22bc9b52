"""Volumes of control balls: closed-form regime formulas and membership oracles.

The measure of a control ball B((x1, 0), r) changes character at the
degeneracy scale 1/|F'(x1)|: below it the ball looks Euclidean with a
frozen weight (volume ~ r^n f(x1)), above it the weight variation
dominates and the volume localises near the right edge of the ball
(volume ~ f(x1+r) / |F'(x1+r)|^n up to an anisotropy correction in
dimension n >= 3).  This module exposes the formulas, an independent
column-quadrature oracle built on the geodesic solver, and quadrature
probes for the auxiliary identities used to derive them (radial
integration, Laplace-type tail estimates, and the Jacobian of the
polar-like chart).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .geodesics import _seg, ball_shape, column_height, turning_data
from .geometry import ComparabilityReport, Geometry
from .numeric import DEFAULT_QUADRATURE, QuadratureSpec, bisect, integrate
from .parallel import parallel_map

__all__ = [
    "BallVolumeResult",
    "radial_integral",
    "ball_columns",
    "area_2d",
    "volume_nd",
    "thick_part_measures",
    "ball_average_mc",
    "laplace_tail_check",
    "jacobian_probe",
    "unit_ball_volume",
]


def unit_ball_volume(k: int) -> float:
    """Lebesgue volume of the Euclidean unit ball in dimension k (k >= 0)."""
    if k < 0:
        raise DomainError("dimension must be nonnegative")
    return math.pi ** (k / 2.0) / math.gamma(k / 2.0 + 1.0)


@dataclass(frozen=True)
class BallVolumeResult:
    """Volume of one control ball: closed-form value and optional oracle.

    `regime` is "SMALL" when the radius is below the degeneracy scale of
    the center (frozen-weight regime) and "LARGE" otherwise.  The oracle
    value, when requested, comes from column quadrature of the actual
    membership region and is independent of the formula.
    """

    center: float
    radius: float
    dim: int
    formula_value: float
    regime: str
    oracle_value: float | None = None

    @property
    def ratio(self) -> float | None:
        if self.oracle_value is None:
            return None
        return self.formula_value / self.oracle_value


# ---------------------------------------------------------------------------
# Radial integration
# ---------------------------------------------------------------------------


def radial_integral(
    g: Geometry,
    w: Callable[[float], float],
    r0: float,
    *,
    spec: QuadratureSpec | None = None,
) -> float:
    """Integral of a radial profile against the ball-growth density.

    Computes ``int_0^{r0} w(r) f(r) / |F'(r)| dr``, the one-dimensional
    reduction of integrals of radial functions over small central balls.
    Requires w >= 0 on [0, r0] and r0 < R/2.
    """
    if not 0.0 < r0 < g.R / 2.0:
        raise DomainError(f"radius {r0} outside (0, {g.R / 2.0})")
    spec = spec or DEFAULT_QUADRATURE

    def integrand(r: float) -> float:
        if r <= 0.0:
            return 0.0
        wr = float(w(r))
        if wr < 0.0:
            raise DomainError(f"radial profile negative at r={r}: {wr}")
        return wr * g.f_over_abs_F_prime_pow(r, 1.0)

    return integrate(integrand, 0.0, r0, spec)


# ---------------------------------------------------------------------------
# Column quadrature oracle
# ---------------------------------------------------------------------------


def _column_nodes(left: float, right: float, n_columns: int) -> np.ndarray:
    """Graded abscissa grid on [left, right], refined toward both tips.

    The boundary height of a ball collapses steeply near the tips of its
    abscissa range, so uniform sampling wastes nodes; a uniform core plus
    geometric refinement at both ends keeps the trapezoid error small.
    """
    width = right - left
    n_uniform = max(8, n_columns // 2)
    n_tip = max(6, n_columns // 4)
    core = np.linspace(left, right, n_uniform)
    tip = width * np.geomspace(1e-7, 0.5, n_tip)
    nodes = np.concatenate([core, left + tip, right - tip])
    nodes = np.clip(nodes, left, right)
    return np.unique(nodes)


def ball_columns(
    g: Geometry,
    x1: float,
    r: float,
    *,
    n_columns: int = 96,
    nodes: int = 48,
) -> tuple[np.ndarray, np.ndarray]:
    """Boundary height of B((x1,0), r) on a graded abscissa grid.

    Returns (xs, heights) where the vertical cross-section of the ball at
    abscissa x is the interval |y| < heights[i].  Centers must satisfy
    x1 = 0 or x1 - r >= 0: balls that straddle the degeneracy line from a
    positive center are outside the supported geometry.
    """
    if x1 < 0.0:
        raise DomainError("center abscissa must be nonnegative")
    if x1 > 0.0 and x1 - r < 0.0:
        raise DomainError(
            "ball from positive center reaches the degeneracy line; "
            "only centered (x1=0) or one-sided balls are supported"
        )
    if x1 + r >= g.R / 2.0:
        raise DomainError(f"ball exceeds the working interval: {x1}+{r} >= {g.R / 2.0}")
    left = max(0.0, x1 - r)
    xs = _column_nodes(left, x1 + r, n_columns)

    def height_at(x: float) -> float:
        if x <= left + 1e-15 * r and x1 > 0.0:
            return 0.0
        if x >= x1 + r * (1.0 - 1e-13):
            return 0.0
        return column_height(g, x1, float(x), r, nodes=nodes)

    heights = np.asarray(parallel_map(height_at, xs), dtype=float)
    return xs, heights


def _area_from_columns(x1: float, xs: np.ndarray, heights: np.ndarray) -> float:
    area = float(np.trapezoid(2.0 * heights, xs))
    if x1 == 0.0:
        area *= 2.0  # mirror symmetry across the degeneracy line
    return area


def _area_oracle(g: Geometry, x1: float, r: float, *, n_columns: int = 96, nodes: int = 48) -> float:
    xs, heights = ball_columns(g, x1, r, n_columns=n_columns, nodes=nodes)
    return _area_from_columns(x1, xs, heights)


# ---------------------------------------------------------------------------
# Regime formulas
# ---------------------------------------------------------------------------


def area_2d(
    g: Geometry,
    x1: float,
    r: float,
    *,
    oracle: bool = False,
    n_columns: int = 96,
    nodes: int = 48,
) -> BallVolumeResult:
    """Area of the control ball B((x1, 0), r) in the plane.

    Small regime (r <= 1/|F'(x1)|): area ~ r^2 f(x1).  Large regime
    (including every centered ball): area ~ f(x1+r) / |F'(x1+r)|^2.
    With oracle=True the membership region is integrated by column
    quadrature for an independent value.
    """
    if r <= 0.0:
        raise DomainError("radius must be positive")
    if x1 < 0.0:
        raise DomainError("center abscissa must be nonnegative")
    if x1 + r >= g.R / 2.0:
        raise DomainError(f"ball exceeds the working interval: {x1}+{r} >= {g.R / 2.0}")
    small = x1 > 0.0 and r <= g.inv_abs_F_prime(x1)
    if small:
        value = r * r * g.f(x1)
        regime = "SMALL"
    else:
        value = g.f_over_abs_F_prime_pow(x1 + r, 2.0)
        regime = "LARGE"
    oracle_value = _area_oracle(g, x1, r, n_columns=n_columns, nodes=nodes) if oracle else None
    return BallVolumeResult(x1, r, 2, value, regime, oracle_value)


def volume_nd(
    g: Geometry,
    x1: float,
    r: float,
    n: int,
    *,
    oracle: bool = False,
    n_columns: int = 64,
    nodes: int = 48,
    n_slices: int = 12,
) -> BallVolumeResult:
    """Volume of the control ball in dimension n >= 3.

    The metric degenerates in one of the n-1 "vertical" directions only;
    the small regime (r <= 2/|F'(x1)|) gives volume ~ r^n f(x1) and the
    large regime gives f(x1+r)/|F'(x1+r)|^n times the anisotropy factor
    (r |F'(x1+r)|)^{n/2 - 1}.  The oracle reduces to plane sections:
    |B| = (n-2) omega_{n-2} int_0^r A_2D(sqrt(r^2 - rho^2)) rho^{n-3} drho,
    with A_2D from column quadrature (supported for n <= 8).
    """
    if n < 3:
        raise DomainError("volume_nd requires dimension n >= 3; use area_2d in the plane")
    if r <= 0.0:
        raise DomainError("radius must be positive")
    if x1 < 0.0:
        raise DomainError("center abscissa must be nonnegative")
    if x1 + r >= g.R / 2.0:
        raise DomainError(f"ball exceeds the working interval: {x1}+{r} >= {g.R / 2.0}")
    small = x1 > 0.0 and r <= 2.0 * g.inv_abs_F_prime(x1)
    if small:
        value = r**n * g.f(x1)
        regime = "SMALL"
    else:
        edge = x1 + r
        aniso = (r * g.abs_F_prime(edge)) ** (n / 2.0 - 1.0)
        value = g.f_over_abs_F_prime_pow(edge, float(n)) * aniso
        regime = "LARGE"

    oracle_value = None
    if oracle:
        if n > 8:
            raise DomainError("membership oracle supported for n <= 8 only")
        # Plane-section reduction over the flat transverse radius rho.
        rho = 0.5 * r * (1.0 - np.cos(np.pi * (np.arange(n_slices) + 0.5) / n_slices))
        slice_r = np.sqrt(np.maximum(r * r - rho * rho, 0.0))
        areas = np.array(
            [
                _area_oracle(g, x1, float(s), n_columns=n_columns, nodes=nodes) if s > 1e-12 * r else 0.0
                for s in slice_r
            ]
        )
        integrand = areas * rho ** (n - 3)
        oracle_value = (n - 2) * unit_ball_volume(n - 2) * float(np.trapezoid(integrand, rho))
    return BallVolumeResult(x1, r, n, value, regime, oracle_value)


# ---------------------------------------------------------------------------
# Thick/thin decomposition of a ball
# ---------------------------------------------------------------------------


def thick_part_measures(
    g: Geometry,
    x1: float,
    r: float,
    *,
    n_columns: int = 96,
    nodes: int = 48,
) -> tuple[float, float, float]:
    """Split the area of B((x1,0), r) across the inner turning abscissa.

    Returns (b_plus, b_minus, total): b_plus is the area of the part with
    abscissa beyond x1 + r*, where r* = r*(x1, r) is the turning radius of
    the extremal boundary geodesic, and b_minus the remainder.  The split
    is exact by construction (b_plus + b_minus == total).
    """
    shape = ball_shape(g, x1, r)
    split = x1 + shape.r_star
    xs, heights = ball_columns(g, x1, r, n_columns=n_columns, nodes=nodes)
    if not (xs[0] < split < xs[-1]):
        raise DomainError(f"split abscissa {split} outside column range")
    h_split = column_height(g, x1, split, r, nodes=nodes)
    xs_all = np.append(xs, split)
    order = np.argsort(xs_all)
    xs_all = xs_all[order]
    heights_all = np.append(heights, h_split)[order]
    mask_plus = xs_all >= split
    xs_plus = xs_all[mask_plus]
    h_plus = heights_all[mask_plus]
    b_plus = float(np.trapezoid(2.0 * h_plus, xs_plus))
    total = float(np.trapezoid(2.0 * heights_all, xs_all))
    if x1 == 0.0:
        total *= 2.0  # mirror; the b_plus lobe is one-sided by definition
    b_minus = total - b_plus
    return b_plus, b_minus, total


# ---------------------------------------------------------------------------
# Monte-Carlo membership average
# ---------------------------------------------------------------------------


def ball_average_mc(
    g: Geometry,
    x1: float,
    r: float,
    w: Callable[[float], float],
    *,
    n_samples: int = 20000,
    seed: int = 20260814,
    nodes: int = 32,
) -> tuple[float, float]:
    """Monte-Carlo integral of w(d(center, .)) over B((x1,0), r).

    Samples the bounding box of the ball uniformly (fixed seed for
    reproducibility), tests membership through the control distance, and
    returns (estimate, standard_error).  Used as a slow consistency check
    of the radial integration identity; n_samples controls the tradeoff
    between cost and the ~n^{-1/2} statistical error.
    """
    from .geodesics import control_distance_2d

    shape = ball_shape(g, x1, r)
    left = max(0.0, x1 - r) if x1 > 0.0 else -r
    right = x1 + r
    height = 1.25 * shape.h
    rng = np.random.default_rng(seed)
    px = rng.uniform(left, right, n_samples)
    py = rng.uniform(-height, height, n_samples)
    box_area = (right - left) * 2.0 * height
    vals = np.zeros(n_samples)
    for i in range(n_samples):
        x = abs(px[i]) if x1 == 0.0 else px[i]
        if x >= g.R / 2.0 or (x1 > 0.0 and x < 0.0):
            continue
        d = control_distance_2d(g, (x1, 0.0), (x, py[i]), nodes=nodes)
        if d < r:
            vals[i] = w(d)
    mean = float(np.mean(vals))
    se = float(np.std(vals) / math.sqrt(n_samples))
    return box_area * mean, box_area * se


# ---------------------------------------------------------------------------
# Laplace-type tail estimate
# ---------------------------------------------------------------------------


def laplace_tail_check(
    g: Geometry,
    z1: float,
    r: float,
    beta: float,
    *,
    spec: QuadratureSpec | None = None,
) -> ComparabilityReport:
    """Compare a weighted edge integral with its Laplace-method value.

    Checks ``int_0^r f(z1 - w) w^beta dw ~ f(z1) / |F'(z1)|^{beta+1}``:
    the integrand decays from the edge w=0 on the scale 1/|F'(z1)|, so the
    integral localises there.  Requires beta > -1 and
    eps/|F'(z1)| < r < z1 so that the localisation scale is resolved.
    """
    if beta <= -1.0:
        raise DomainError("beta must exceed -1 for an integrable edge factor")
    if not (g.eps * g.inv_abs_F_prime(z1) < r < z1):
        raise DomainError(
            f"radius {r} outside (eps/|F'(z1)|, z1) = "
            f"({g.eps * g.inv_abs_F_prime(z1)}, {z1})"
        )
    spec = spec or DEFAULT_QUADRATURE

    if beta == 0.0:
        lhs = integrate(lambda wv: g.f(z1 - wv), 0.0, r, spec)
    elif beta > 0.0:
        lhs = integrate(lambda wv: g.f(z1 - wv) * max(wv, 0.0) ** beta, 0.0, r, spec)
    else:
        # Absorb the integrable singularity: v = w^{beta+1}.
        p = beta + 1.0
        lhs = integrate(lambda v: g.f(z1 - max(v, 0.0) ** (1.0 / p)), 0.0, r**p, spec) / p

    rhs = g.f(z1) * g.inv_abs_F_prime(z1) ** (beta + 1.0)
    ratio = lhs / rhs
    return ComparabilityReport(f"laplace-tail-beta-{beta:g}", 1, ratio, ratio)


# ---------------------------------------------------------------------------
# Jacobian of the geodesic polar chart
# ---------------------------------------------------------------------------


def jacobian_probe(
    g: Geometry,
    r: float,
    lam: float,
    *,
    boundary_tol: float = 0.02,
    nodes: int = 96,
    identity_tol: float = 1e-7,
) -> ComparabilityReport:
    """Jacobian of the (r, lambda) -> (x, y) chart against its closed form.

    For arc length r short of the turning point (region 1) the chart
    determinant reduces exactly to -sqrt(lam^2-f^2) * int_0^x f^2
    (lam^2-f^2)^{-3/2}; the full 2x2 determinant is assembled from
    quadratures of the entries and must reproduce that product (internal
    identity check).  The determinant is then compared against the
    comparability estimate f(x)^2/(lam^2 |F'(x)|).  Past the turning point
    (region 2, R < r < 2R) the determinant involves the derivative of the
    turning height, |J| = sqrt(lam^2-f^2)/lam * (2 Y'(lam) - dy/dlam|_x),
    compared against 1/|F'| at the turning abscissa.  Raises DomainError
    within boundary_tol * R of the turning arc length, where the chart is
    singular.
    """
    rec = turning_data(g, lam, n_samples=5, nodes=nodes)
    R_len = rec.R_len
    if abs(r - R_len) < boundary_tol * R_len:
        raise DomainError(
            f"arc length {r} within {boundary_tol:.0%} of the turning length {R_len}; "
            "the polar chart is singular there"
        )
    if not 0.0 < r < 2.0 * R_len * (1.0 - 1e-9):
        raise DomainError(f"arc length {r} outside (0, 2 R(lambda)) = (0, {2 * R_len})")

    region = 1 if r < R_len else 2
    target = r if region == 1 else 2.0 * R_len - r

    def arc_to(x: float) -> float:
        return _seg(g, lam, 0.0, x, "arc", nodes=nodes)

    x = bisect(lambda u: arc_to(u) - target, 1e-300, rec.X * (1.0 - 1e-12), 1e-15)
    fx = g.f(x)
    root = math.sqrt(max(lam * lam - fx * fx, 0.0))
    I3 = _seg(g, lam, 0.0, x, "dlam", nodes=nodes)  # int f^2 (lam^2-f^2)^{-3/2}

    if region == 1:
        # Assemble the 2x2 determinant entry by entry and confirm the
        # cross terms cancel, leaving x_r * dy/dlam|_x.
        x_r = root / lam
        x_lam = I3 * root / lam
        y_x = fx * fx / root
        y_lam_at_x = -lam * I3
        det_entries = x_r * (y_lam_at_x + y_x * x_lam) - x_lam * (y_x * x_r)
        det_closed = -root * I3
        if abs(det_entries - det_closed) > identity_tol * abs(det_closed):
            raise DomainError(
                f"chart determinant identity failed: {det_entries} vs {det_closed}"
            )
        estimate = fx * fx / (lam * lam * g.abs_F_prime(x))
        ratio = abs(det_closed) / estimate
        name = "jacobian-region1"
    else:
        y_lam_at_x = -lam * I3
        det = (root / lam) * (2.0 * rec.Y_prime - y_lam_at_x)
        estimate = g.inv_abs_F_prime(rec.X)
        ratio = abs(det) / estimate
        name = "jacobian-region2"
    return ComparabilityReport(name, 1, ratio, ratio)
