"""Geodesics and the control distance of a degenerate strip geometry.

Unit-speed geodesics not meeting the degeneracy line are graphs over the
abscissa characterized by a level ``lam``: along the geodesic
``dy/dx = +- f(x)^2 / sqrt(lam^2 - f(x)^2)`` and arc length satisfies
``dt/dx = lam / sqrt(lam^2 - f(x)^2)``.  The geodesic climbs until the
turning abscissa ``X(lam) = f^{-1}(lam)`` where it is vertical, then
descends mirror-symmetrically.  All quadratures here remove the
``1/sqrt`` turning singularity with the substitution
``s = sqrt(lam^2 - f(u)^2)``, under which the height integrand becomes
``1/|F'(u(s))|`` exactly.

Distances are computed by shooting: the two monotone regimes (direct
"region 1" arcs staying below the turning level, and "region 2" excursions
through the turning point) are bisected in ``lam``.  Endpoints on opposite
sides of the degeneracy line are out of scope and raise ``DomainError``.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import BracketError, DomainError, NonConvergence
from .geometry import Geometry
from .numeric import QuadratureSpec, integrate

__all__ = [
    "GeodesicRecord",
    "BallShape",
    "DistanceResult",
    "DHatRecord",
    "geodesic_height",
    "arc_length",
    "turning_data",
    "turning_height_slope",
    "h_star",
    "h_star_log",
    "ball_shape",
    "control_distance_2d",
    "control_distance_log_gap",
    "control_distance_nd",
    "d_hat",
    "column_height",
]

_DEFAULT_NODES = 64
_ORACLE_SPEC = QuadratureSpec(abs_tol=1e-14, rel_tol=1e-11, max_subdivisions=60)


@lru_cache(maxsize=16)
def _gauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _gauss_on(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = _gauss(n)
    half = 0.5 * (b - a)
    return a + half * (x + 1.0), half * w


@dataclass(frozen=True)
class GeodesicRecord:
    """Turning-point data of the geodesic at level ``lam``.

    ``X`` is the turning abscissa, ``Y`` the height climbed from the start
    abscissa to the turning point, ``R_len`` the arc length of that climb,
    ``samples`` holds ``(x, y(x), t(x))`` triples along the lower branch,
    and ``Y_prime`` is ``dY/dlam`` (already reduced to a convergent
    integral).
    """

    lam: float
    X: float
    Y: float
    R_len: float
    samples: list[tuple[float, float, float]]
    Y_prime: float


@dataclass(frozen=True)
class BallShape:
    """Shape data of the metric ball ``B((x1, 0), r)``.

    ``r_star`` is the abscissa overshoot of the highest boundary point (the
    geodesic from the center that turns exactly at arc length ``r`` does so
    at abscissa ``x1 + r_star``), and ``h`` is that maximal height.
    """

    x1: float
    r: float
    r_star: float
    h: float


@dataclass(frozen=True)
class DistanceResult:
    """Control distance together with the shooting diagnostics.

    ``region`` is one of ``HORIZONTAL``, ``REGION1``, ``REGION2`` or
    ``UPPER_BOUND_ONLY`` (vertical gap not closable inside the strip; the
    value is then only a multi-segment taxicab upper bound).  ``lower_bound``
    and ``upper_bound`` are rigorous two-sided envelopes of the true
    distance.
    """

    value: float
    lam: float
    region: str
    lower_bound: float
    upper_bound: float

    @property
    def upper_bound_only(self) -> bool:
        return self.region == "UPPER_BOUND_ONLY"


@dataclass(frozen=True)
class DHatRecord:
    """Truncated distance ``min(d, 1/|F'(x1 + d)|)`` and its ingredients."""

    d_hat: float
    d: float
    d_star: float
    ratio: float  # d_hat / (d - d_star), the two-sided comparability ratio


# -- quadrature kernels ------------------------------------------------------


# Every geodesic kernel factors as lam**power * (a scale-free integral in
# q = f/lam); the scale-free part is what the kernels below compute, with
# q = exp(-F - ln lam) so deep-cusp levels (where lam**2 or even lam itself
# would underflow) remain evaluable through ln lam alone.
_KIND_POWER = {"height": 1, "arc": 0, "yslope": 0, "dlam": -1}


def _kernel_direct(g: Geometry, log_lam: float, kind: str):
    def eval_direct(u: np.ndarray) -> np.ndarray:
        ax = np.abs(np.atleast_1d(np.asarray(u, dtype=float)))
        q = np.zeros_like(ax)
        pos = ax > 0
        q[pos] = np.exp(-np.asarray(g.F(ax[pos]), dtype=float) - log_lam)
        w = np.sqrt(np.maximum(1.0 - q * q, 0.0))
        if kind == "height":
            return q * q / w
        if kind == "arc":
            return 1.0 / w
        if kind == "dlam":
            return q * q / w**3
        if kind == "yslope":
            fp = np.asarray(g.F_prime(ax), dtype=float)
            fpp = np.asarray(g.F_second(ax), dtype=float)
            return (fpp / fp**2) / w
        raise ValueError(kind)

    return eval_direct


def _kernel_substituted(g: Geometry, log_lam: float, kind: str):
    """Integrand in the scaled variable ``sigma = sqrt(lam^2 - f^2) / lam``
    (or ``tau = ln sigma`` for the ``dlam`` kernel, whose sigma-integrand
    decays like ``1/sigma^2``), assembled in log space."""

    def u_of_sigma(sigma: np.ndarray) -> np.ndarray:
        # f(u) = lam * sqrt(1 - sigma^2)  =>  F(u) = -ln lam - 0.5 ln(1-s^2)
        w = -log_lam - 0.5 * np.log1p(-sigma * sigma)
        return np.asarray(g.F_inv(w), dtype=float)

    def eval_subst(sigma: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", over="ignore"):
            u = u_of_sigma(np.asarray(sigma, dtype=float))
            Fv = np.asarray(g.F(u), dtype=float)
            log_fp = np.log(-np.asarray(g.F_prime(u), dtype=float))
            if kind == "height":
                return np.exp(-log_fp)
            if kind == "arc":
                return np.exp(2.0 * (log_lam + Fv) - log_fp)
            if kind == "yslope":
                log_fpp = np.log(np.asarray(g.F_second(u), dtype=float))
                return np.exp(2.0 * (log_lam + Fv) + log_fpp - 3.0 * log_fp)
            raise ValueError(kind)

    def eval_subst_dlam_tau(tau: np.ndarray) -> np.ndarray:
        with np.errstate(divide="ignore", over="ignore"):
            sigma = np.exp(np.asarray(tau, dtype=float))
            u = u_of_sigma(sigma)
            log_fp = np.log(-np.asarray(g.F_prime(u), dtype=float))
            return np.exp(-np.asarray(tau, dtype=float) - log_fp)

    return eval_subst, eval_subst_dlam_tau


def _direct_layer(
    g: Geometry,
    log_lam: float,
    a: float,
    b: float,
    kind: str,
    *,
    nodes: int,
    spec: QuadratureSpec | None,
) -> float:
    """Direct-region integral of the ``q^2``-weighted kernels in ``w = F(u)``.

    In ``u`` these integrands live in a boundary layer of width
    ``~ 1/(2|F'(b)|)`` at the right end, which a fixed rule cannot resolve
    once ``(b - a)|F'(b)|`` is large; in ``w`` the decay rate is exactly 2,
    so a fixed window of ~45 units captures everything above rounding.
    """
    w_lo = float(g.F(b))
    w_hi = float(g.F(a)) if a > 0.0 else math.inf
    w_cap = min(w_hi, w_lo + 45.0)
    if w_cap <= w_lo:
        return 0.0
    # Factor the layer amplitude q_lo^2 out so the integrand handed to the
    # quadrature is O(1); otherwise adaptive tolerances cannot see integrals
    # far below their absolute floor.
    q_lo = math.exp(-w_lo - log_lam)

    def integrand(w):
        w = np.atleast_1d(np.asarray(w, dtype=float))
        u = np.asarray(g.F_inv(w), dtype=float)
        decay = np.exp(-(w - w_lo))
        q = q_lo * decay
        s2 = np.maximum(1.0 - q * q, 0.0)
        with np.errstate(divide="ignore"):
            jac = 1.0 / (-np.asarray(g.F_prime(u), dtype=float))
        if kind == "height":
            return decay * decay / np.sqrt(s2) * jac
        return decay * decay / s2**1.5 * jac  # dlam

    w_knee = min(w_cap, w_lo + 6.0)
    total = 0.0
    for lo, hi in ((w_lo, w_knee), (w_knee, w_cap)):
        if hi <= lo:
            continue
        if spec is not None:
            total += integrate(lambda x: float(integrand(x)[0]), lo, hi, spec)
        else:
            xs, ws = _gauss_on(lo, hi, nodes)
            total += float(ws @ integrand(xs))
    return q_lo * q_lo * total


def _seg_scaled(
    g: Geometry,
    log_lam: float,
    a: float,
    b: float,
    kind: str,
    *,
    nodes: int = _DEFAULT_NODES,
    spec: QuadratureSpec | None = None,
) -> float:
    """Scale-free factor of the geodesic kernel integral at level ``ln lam``.

    The true integral is ``lam**_KIND_POWER[kind]`` times this value.  The
    interval is split at the abscissa where ``f = lam/sqrt(2)``; the outer
    part is integrated in the substituted variable, which is smooth through
    the turning point.  With ``spec`` the pieces go through adaptive
    quadrature, otherwise fixed Gauss-Legendre rules with ``nodes`` points.
    """
    if b <= a:
        return 0.0
    if not math.isfinite(log_lam):
        raise DomainError(f"log turning level must be finite, got {log_lam!r}")
    log_fb = -float(g.F(b))
    # Tolerance is relative as well as absolute: deep in the cusp the log
    # levels are huge and F(F_inv(w)) round-trips only to within a few ulp.
    if log_fb > log_lam + 1e-9 + 8.0 * abs(log_lam) * sys.float_info.epsilon:
        raise DomainError(
            f"geodesic level exp({log_lam!r}) below the weight exp({log_fb!r}) at x={b!r}"
        )
    log_mid = log_lam - 0.5 * math.log(2.0)  # the level lam/sqrt(2)
    log_fa = -float(g.F(a)) if a > 0 else -math.inf
    if log_fb <= log_mid:
        umid = b
    elif log_fa >= log_mid:
        umid = a
    else:
        umid = min(b, max(a, float(g.F_inv(-log_mid))))

    total = 0.0
    if umid > a:
        if kind in ("height", "dlam"):
            # These kernels are squeezed into a boundary layer at umid once
            # the weight has decayed; integrate them in w = F(u) instead.
            total += _direct_layer(g, log_lam, a, umid, kind, nodes=nodes, spec=spec)
        else:
            direct = _kernel_direct(g, log_lam, kind)
            if spec is not None:
                total += integrate(
                    lambda x: float(direct(np.array([x]))[0]), a, umid, spec
                )
            else:
                xs, ws = _gauss_on(a, umid, nodes)
                total += float(ws @ direct(xs))
    if b > umid:
        subst, subst_dlam = _kernel_substituted(g, log_lam, kind)

        def sigma_at(x: float) -> float:
            qx = math.exp(-float(g.F(x)) - log_lam) if x > 0 else 0.0
            return math.sqrt(max(1.0 - qx * qx, 0.0))

        s_hi = sigma_at(umid)
        s_lo = sigma_at(b)
        if kind == "dlam":
            if s_lo <= 0.0:
                raise DomainError("the dlam kernel diverges at the turning point")
            t_lo, t_hi = math.log(s_lo), math.log(s_hi)
            if spec is not None:
                total += integrate(
                    lambda t: float(subst_dlam(np.array([t]))[0]), t_lo, t_hi, spec
                )
            else:
                ts, ws = _gauss_on(t_lo, t_hi, nodes)
                total += float(ws @ subst_dlam(ts))
        else:
            # the substituted kernels already carry the Jacobian 2 rho / S'
            if spec is not None:
                total += integrate(
                    lambda s: float(subst(np.array([s]))[0]), s_lo, s_hi, spec
                )
            else:
                ss, ws = _gauss_on(s_lo, s_hi, nodes)
                total += float(ws @ subst(ss))
    return total


def _seg(
    g: Geometry,
    lam: float,
    a: float,
    b: float,
    kind: str,
    *,
    nodes: int = _DEFAULT_NODES,
    spec: QuadratureSpec | None = None,
) -> float:
    """``int_a^b rho(u) / (lam^2 - f(u)^2)^p du`` for the geodesic kernels.

    ``kind`` selects ``rho``/``p``: "height" (f^2, 1/2), "arc" (lam, 1/2),
    "yslope" (lam F''/F'^2, 1/2), "dlam" (f^2, 3/2).
    """
    if b <= a:
        return 0.0
    if not (lam > 0.0 and math.isfinite(lam)):
        raise DomainError(f"turning level must be positive and finite, got {lam!r}")
    value = _seg_scaled(g, math.log(lam), a, b, kind, nodes=nodes, spec=spec)
    power = _KIND_POWER[kind]
    if power == 1:
        return lam * value
    if power == -1:
        return value / lam
    return value


def _seg_log(
    g: Geometry,
    log_lam: float,
    a: float,
    b: float,
    kind: str,
    *,
    nodes: int = _DEFAULT_NODES,
) -> float:
    """``ln`` of the geodesic kernel integral, driven by ``ln lam`` alone.

    Usable at levels far below the floating-point floor; returns ``-inf``
    for an empty interval or a scale-free factor that itself underflows.
    """
    if b <= a:
        return -math.inf
    value = _seg_scaled(g, log_lam, a, b, kind, nodes=nodes)
    if value <= 0.0:
        return -math.inf
    return _KIND_POWER[kind] * log_lam + math.log(value)


# -- public geodesic quantities ----------------------------------------------


def geodesic_height(
    g: Geometry,
    lam: float,
    x: float,
    *,
    start: float = 0.0,
    spec: QuadratureSpec | None = _ORACLE_SPEC,
    nodes: int = _DEFAULT_NODES,
) -> float:
    """Height ``y(x) = int_start^x f^2 / sqrt(lam^2 - f^2)`` of the geodesic.

    Valid up to the turning abscissa ``X(lam)`` inclusive; the quadrature is
    exact through the turning singularity.
    """
    if lam <= 0:
        raise DomainError("geodesic level must be positive")
    return _seg(g, lam, start, x, "height", spec=spec, nodes=nodes)


def arc_length(
    g: Geometry,
    lam: float,
    x: float,
    *,
    start: float = 0.0,
    spec: QuadratureSpec | None = _ORACLE_SPEC,
    nodes: int = _DEFAULT_NODES,
) -> float:
    """Arc length ``t(x) = int_start^x lam / sqrt(lam^2 - f^2)`` of the geodesic."""
    if lam <= 0:
        raise DomainError("geodesic level must be positive")
    return _seg(g, lam, start, x, "arc", spec=spec, nodes=nodes)


def turning_data(
    g: Geometry,
    lam: float,
    *,
    start: float = 0.0,
    n_samples: int = 33,
    nodes: int = 96,
) -> GeodesicRecord:
    """Turning abscissa, climbed height, arc length and branch samples.

    ``samples`` lists ``(x, y(x), t(x))`` along the climbing branch at
    ``n_samples`` abscissas up to the turning point (inclusive).
    """
    if not (0 < lam < g.f(g.R / 2)):
        raise DomainError("level must satisfy 0 < lam < f(R/2)")
    X = g.f_inv(lam)
    if X <= start:
        raise DomainError("turning abscissa does not exceed the start abscissa")
    Y = _seg(g, lam, start, X, "height", nodes=nodes)
    R_len = _seg(g, lam, start, X, "arc", nodes=nodes)
    Y_prime = _seg(g, lam, start, X, "yslope", nodes=nodes)
    xs = start + (X - start) * np.linspace(0.0, 1.0, max(n_samples, 2))
    samples = []
    for x in xs:
        samples.append(
            (
                float(x),
                _seg(g, lam, start, float(x), "height", nodes=nodes),
                _seg(g, lam, start, float(x), "arc", nodes=nodes),
            )
        )
    return GeodesicRecord(
        lam=float(lam), X=float(X), Y=Y, R_len=R_len, samples=samples, Y_prime=Y_prime
    )


def turning_height_slope(
    g: Geometry,
    lam: float,
    *,
    start: float = 0.0,
    spec: QuadratureSpec | None = None,
    nodes: int = 96,
) -> float:
    """``Y'(lam) = int_start^X (F''/F'^2) lam / sqrt(lam^2 - f^2) du``.

    The lam-derivative of the turning height, already reduced to a
    convergent integral (the boundary term vanishes).
    """
    X = g.f_inv(lam)
    if X <= start:
        raise DomainError("turning abscissa does not exceed the start abscissa")
    return _seg(g, lam, start, X, "yslope", spec=spec, nodes=nodes)


def h_star(
    g: Geometry,
    x1: float,
    t: float,
    *,
    spec: QuadratureSpec | None = None,
    nodes: int = 96,
) -> float:
    """Height climbed by the geodesic from ``x1`` that turns at ``x1 + t``.

    ``h*(x1, t) = int_{x1}^{x1+t} f^2 / sqrt(f(x1+t)^2 - f^2)``; the natural
    height scale of cusp ends of width ``t``.
    """
    if t <= 0:
        raise DomainError("cusp width must be positive")
    lam = g.f(x1 + t)
    if lam == 0.0:
        # f underflows at this level set; the true height is positive but
        # below the double-precision floor, so 0.0 is the representable value.
        return 0.0
    return _seg(g, lam, x1, x1 + t, "height", spec=spec, nodes=nodes)


def h_star_log(
    g: Geometry,
    x1: float,
    t: float,
    *,
    nodes: int = 96,
) -> float:
    """``ln h*(x1, t)``, evaluable even where the height itself underflows.

    The turning level enters only through ``ln f(x1+t) = -F(x1+t)``, so
    columns arbitrarily deep in the cusp are handled.
    """
    if t <= 0:
        raise DomainError("cusp width must be positive")
    b = x1 + t
    if b <= 0:
        raise DomainError("cusp end must have positive abscissa")
    return _seg_log(g, -float(g.F(b)), x1, b, "height", nodes=nodes)


def ball_shape(
    g: Geometry,
    x1: float,
    r: float,
    *,
    nodes: int = 96,
    rel_tol: float = 1e-12,
) -> BallShape:
    """Solve for the highest boundary point of ``B((x1, 0), r)``.

    Bisects the overshoot ``rho`` so that the geodesic from ``(x1, 0)``
    turning at ``x1 + rho`` has arc length exactly ``r`` at its turning
    point; ``h`` is its height there.
    """
    if x1 < 0:
        raise DomainError("center abscissa must be nonnegative")
    if not (0 < r):
        raise DomainError("radius must be positive")
    if x1 + r >= g.R / 2:
        raise DomainError("ball shape solve requires x1 + r < R/2")

    def arc_to_turn(rho: float) -> float:
        return _seg_scaled(g, -float(g.F(x1 + rho)), x1, x1 + rho, "arc", nodes=nodes)

    lo, hi = r * 1e-14, r
    if arc_to_turn(hi) <= r:
        raise DomainError("arc to the turning point should exceed the radius")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi or (hi - lo) <= rel_tol * r:
            break
        if arc_to_turn(mid) < r:
            lo = mid
        else:
            hi = mid
    r_star = 0.5 * (lo + hi)
    log_h = _seg_log(g, -float(g.F(x1 + r_star)), x1, x1 + r_star, "height", nodes=nodes)
    return BallShape(x1=float(x1), r=float(r), r_star=r_star, h=math.exp(log_h))


# -- the control distance ----------------------------------------------------


def _normalize_pair(g: Geometry, p, q) -> tuple[float, float, float]:
    p1, p2 = float(p[0]), float(p[1])
    q1, q2 = float(q[0]), float(q[1])
    for v in (p1, q1):
        if abs(v) > g.R / 2:
            raise DomainError(f"abscissa {v!r} outside (-R/2, R/2)")
    if p1 <= 0 and q1 <= 0:
        p1, q1 = -p1, -q1
    if p1 < 0 or q1 < 0:
        raise DomainError(
            "endpoints on opposite sides of the degeneracy line are not supported"
        )
    if p1 > q1:
        p1, q1 = q1, p1
    return p1, q1, abs(q2 - p2)


def _taxicab_upper(g: Geometry, a: float, b: float, log_dy: float) -> float:
    """Length of the best three-segment staircase path: run right to x*,
    climb dy at abscissa x*, run back; minimized over x* on a dense grid."""
    hi = g.R * (1.0 - 1e-12)
    base = max(b, 1e-320)
    grid = np.unique(
        np.concatenate(
            [
                np.linspace(base, hi, 2001),
                np.geomspace(base, hi, 2001) if base > 0 else np.array([hi]),
            ]
        )
    )
    with np.errstate(over="ignore"):
        climb = np.exp(log_dy + np.asarray(g.F(grid), dtype=float))
        cost = (grid - a) + (grid - b) + climb
    return float(np.min(cost))


def _distance_record_log(
    g: Geometry,
    a: float,
    b: float,
    log_dy: float,
    *,
    nodes: int = _DEFAULT_NODES,
    lam_rel_tol: float = 1e-10,
) -> DistanceResult:
    """Distance between ``(a, 0)`` and ``(b, dy)`` with ``dy`` given as
    ``ln dy``, so vertical gaps below the floating-point floor (deep inside
    the cusp) are handled exactly like representable ones."""
    if log_dy == -math.inf:
        return DistanceResult(b - a, math.nan, "HORIZONTAL", b - a, b - a)

    taxi = _taxicab_upper(g, a, b, log_dy)

    # Region 1 (direct graph from a to b) achieves its maximal height gain as
    # lam decreases to f(b); that boundary gain is the cusp height h*(a, b-a).
    log_fb = -float(g.F(b))
    g1_max_log = _seg_log(g, log_fb, a, b, "height", nodes=nodes) if b > a else -math.inf

    if log_dy < g1_max_log:
        lo = log_fb
        hi = lo + math.log(2.0)
        step = math.log(2.0)
        for _ in range(120):
            if _seg_log(g, hi, a, b, "height", nodes=nodes) < log_dy:
                break
            step *= 2.0
            hi += step
        else:  # pragma: no cover
            raise NonConvergence("region-1 level bracketing failed")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if hi - lo <= lam_rel_tol:
                break
            if _seg_log(g, mid, a, b, "height", nodes=nodes) > log_dy:
                lo = mid
            else:
                hi = mid
        log_lam = 0.5 * (lo + hi)
        d = _seg_scaled(g, log_lam, a, b, "arc", nodes=nodes)
        lower = max(b - a, math.exp(log_dy - log_fb))
        return DistanceResult(d, math.exp(log_lam), "REGION1", lower, taxi)

    if log_dy == g1_max_log and b > a:
        d = _seg_scaled(g, log_fb, a, b, "arc", nodes=nodes)
        lower = max(b - a, math.exp(log_dy - log_fb))
        return DistanceResult(d, math.exp(log_fb), "REGION1", lower, taxi)

    # Region 2: excursion through the turning point.  The gain
    # 2*Y_a(lam) - y_a(b; lam) grows with lam; cap the level inside the strip.
    log_cap = -float(g.F(g.R * (1.0 - 1e-9)))

    def gain2_log(log_lam: float) -> float:
        X = float(g.F_inv(-log_lam))
        if X <= b:
            return -math.inf
        diff = 2.0 * _seg_scaled(g, log_lam, a, X, "height", nodes=nodes) - _seg_scaled(
            g, log_lam, a, b, "height", nodes=nodes
        )
        return log_lam + math.log(diff) if diff > 0.0 else -math.inf

    if gain2_log(log_cap) < log_dy:
        lower = max(b - a, math.exp(log_dy - log_cap))
        return DistanceResult(taxi, math.nan, "UPPER_BOUND_ONLY", lower, taxi)

    # On-line endpoints (f(b) = 0 or underflowing) have no finite lower level;
    # any level below exp(-690) yields a sub-double gain, so this floor is the
    # deepest meaningful bracket.
    lo = log_fb if math.isfinite(log_fb) else math.log(1e-300)
    hi = log_cap
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        if hi - lo <= lam_rel_tol:
            break
        if gain2_log(mid) < log_dy:
            lo = mid
        else:
            hi = mid
    log_lam = 0.5 * (lo + hi)
    X = float(g.F_inv(-log_lam))
    d = 2.0 * _seg_scaled(g, log_lam, a, X, "arc", nodes=nodes) - _seg_scaled(
        g, log_lam, a, b, "arc", nodes=nodes
    )
    lower = max(b - a, math.exp(log_dy - log_lam))
    return DistanceResult(d, math.exp(log_lam), "REGION2", lower, taxi)


def _distance_record(
    g: Geometry, p, q, *, nodes: int = _DEFAULT_NODES, lam_rel_tol: float = 1e-10
) -> DistanceResult:
    a, b, dy = _normalize_pair(g, p, q)
    if dy == 0.0:
        return DistanceResult(b - a, math.nan, "HORIZONTAL", b - a, b - a)
    return _distance_record_log(
        g, a, b, math.log(dy), nodes=nodes, lam_rel_tol=lam_rel_tol
    )


def control_distance_log_gap(
    g: Geometry,
    x_a: float,
    x_b: float,
    log_dy: float,
    *,
    detail: bool = False,
    nodes: int = _DEFAULT_NODES,
):
    """Distance between ``(x_a, 0)`` and ``(x_b, dy)`` with ``dy = exp(log_dy)``.

    Accepts vertical gaps far below the floating-point floor (``log_dy`` very
    negative, even ``-inf`` for a horizontal pair), which arise for points
    deep inside the cusp.  Both abscissas must lie in ``[0, R/2]``.
    """
    a, b = sorted((float(x_a), float(x_b)))
    if a < 0:
        raise DomainError("log-gap distance works in the right half-strip")
    if b > g.R / 2:
        raise DomainError(f"abscissa {b!r} outside [0, R/2]")
    rec = _distance_record_log(g, a, b, float(log_dy), nodes=nodes)
    return rec if detail else rec.value


def control_distance_2d(g: Geometry, p, q, *, detail: bool = False, nodes: int = _DEFAULT_NODES):
    """Control distance between ``p`` and ``q`` in the strip.

    Both endpoints must lie in the closed half-strip on one side of the
    degeneracy line (after joint reflection), with abscissas in
    ``(-R/2, R/2)``.  Returns the distance as a float, or the full
    :class:`DistanceResult` when ``detail`` is set.  When the vertical gap is
    not closable inside the strip the returned value is a taxicab upper
    bound, flagged via ``region == "UPPER_BOUND_ONLY"``.
    """
    rec = _distance_record(g, p, q, nodes=nodes)
    return rec if detail else rec.value


def control_distance_nd(g: Geometry, p, q, *, detail: bool = False):
    """Distance for the product metric ``dx1^2 + |dx_mid|^2 + dx_n^2/f^2``.

    Coordinates split as ``(x1, mid-block, vertical)``; the distance is the
    Euclidean combination of the 2D control distance in the
    ``(x1, vertical)`` plane with the flat mid-block displacement.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape or p.ndim != 1 or len(p) < 3:
        raise DomainError("points must share a length-n coordinate vector, n >= 3")
    rec = _distance_record(g, (p[0], p[-1]), (q[0], q[-1]))
    mid = float(np.linalg.norm(p[1:-1] - q[1:-1]))
    value = math.hypot(rec.value, mid)
    if not detail:
        return value
    return DistanceResult(
        value,
        rec.lam,
        rec.region,
        math.hypot(rec.lower_bound, mid),
        math.hypot(rec.upper_bound, mid),
    )


def d_hat(g: Geometry, x, y, *, nodes: int = _DEFAULT_NODES) -> DHatRecord:
    """Truncated distance ``min(d, 1/|F'(x1 + d)|)`` from ``x`` to ``y``.

    Also reports the ball-shape overshoot ``d* = r*(x1, d)`` and the
    comparability ratio ``d_hat / (d - d*)``; the truncation is designed so
    that this ratio is pinched between dimensional constants.
    """
    rec = _distance_record(g, x, y, nodes=nodes)
    if rec.upper_bound_only:
        raise DomainError("d_hat needs an exactly resolved distance")
    d = rec.value
    x1 = min(abs(float(x[0])), abs(float(y[0])))
    if x1 + d >= g.R:
        raise DomainError("truncated distance leaves the strip")
    cap = g.inv_abs_F_prime(x1 + d)
    dh = min(d, cap)
    shape = ball_shape(g, x1, d, nodes=nodes)
    denom = d - shape.r_star
    ratio = dh / denom if denom > 0 else math.inf
    return DHatRecord(d_hat=dh, d=d, d_star=shape.r_star, ratio=ratio)


# -- ball boundary columns (used by the measure oracles) ----------------------


def column_height(
    g: Geometry,
    center_x1: float,
    x: float,
    r: float,
    *,
    nodes: int = _DEFAULT_NODES,
    iters: int = 48,
) -> float:
    """Height of the vertical cross-section of ``B((c, 0), r)`` at abscissa x.

    Cross-sections are intervals ``[-Y, Y]`` because the distance grows with
    the vertical gap; ``Y`` is found by shooting on the geodesic level: along
    the one-parameter family of geodesics joining the two abscissas, arc
    length is monotone (shrinking toward the horizontal segment in region 1,
    growing with the excursion in region 2), so the level with arc length
    exactly ``r`` is a single bisection.  Returns 0 outside the ball.
    """
    c = float(center_x1)
    x = float(x)
    if c < 0 or x < 0:
        raise DomainError("column solver works in the right half-strip")
    a, b = (x, c) if x < c else (c, x)
    if b - a >= r:
        return 0.0

    log_cap = -float(g.F(g.R * (1.0 - 1e-9)))
    log_fb = -float(g.F(b)) if b > 0 else -math.inf
    if b > a and math.isfinite(log_fb):
        junction = _seg_scaled(g, log_fb, a, b, "arc", nodes=nodes)
    else:
        junction = b - a  # a == b, or the degenerate center column

    if r > junction:
        # Region 2: length 2*T_a(lam) - t_a(b; lam) increases with lam.
        def length2(log_lam: float) -> float:
            X = float(g.F_inv(-log_lam))
            if X <= b:
                return junction
            return 2.0 * _seg_scaled(g, log_lam, a, X, "arc", nodes=nodes) - _seg_scaled(
                g, log_lam, a, b, "arc", nodes=nodes
            )

        if length2(log_cap) <= r:
            raise DomainError("ball boundary leaves the strip along this column")
        # The turning abscissa must exceed b, so ln f(b) is the exact lower
        # bracket; for the center column every level turns past it.
        lo = log_fb if math.isfinite(log_fb) else log_cap - 900.0
        hi = log_cap
        if math.isfinite(log_fb) and length2(lo) >= r:
            return 0.0  # boundary level coincides with the junction geodesic
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            if length2(mid) > r:
                hi = mid
            else:
                lo = mid
        log_lam = 0.5 * (lo + hi)
        X = float(g.F_inv(-log_lam))
        if X <= b:
            return 0.0
        two_piece = 2.0 * _seg_scaled(g, log_lam, a, X, "height", nodes=nodes) - _seg_scaled(
            g, log_lam, a, b, "height", nodes=nodes
        )
        return math.exp(log_lam) * two_piece if two_piece > 0.0 else 0.0

    # Region 1: arc length decreases monotonically from the junction value
    # (at lam = f(b)) toward b - a as lam grows, so [ln f(b), log_cap] brackets.
    lo, hi = log_fb, log_cap
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if _seg_scaled(g, mid, a, b, "arc", nodes=nodes) > r:
            lo = mid
        else:
            hi = mid
    log_lam = 0.5 * (lo + hi)
    return math.exp(_seg_log(g, log_lam, a, b, "height", nodes=nodes))
