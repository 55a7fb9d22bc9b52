"""Degenerate control geometries on a strip.

A geometry is the metric ``dt^2 = dx^2 + dy^2 / f(x)^2`` on
``(-R, R) x RR`` with ``f = exp(-F(|x|))`` built from a profile ``F`` that
blows up at the degeneracy line ``x = 0`` (so ``f(0) = 0`` to all orders).
The canonical family is the power profile ``F(x) = x**-sigma``.

This module owns the geometry container, its pointwise evaluation helpers
(numerically stable in log space near the degeneracy), and the sampled
verification of the structure conditions the rest of the package relies on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "ComparabilityReport",
    "Geometry",
    "make_power_geometry",
    "check_structure_conditions",
    "consequences_probe",
]


@dataclass(frozen=True)
class ComparabilityReport:
    """Sampled min/max of a ratio that some statement claims is pinched.

    ``ratio_min``/``ratio_max`` are the extremes observed over ``samples``
    sample points; callers compare them against the window the statement
    asserts.
    """

    name: str
    samples: int
    ratio_min: float
    ratio_max: float

    def within(self, lo: float, hi: float, tol: float = 0.0) -> bool:
        return self.ratio_min >= lo - tol and self.ratio_max <= hi + tol

    def spread(self) -> float:
        """max/min of the sampled ratio; infinity when the min is not positive."""
        if self.ratio_min <= 0:
            return math.inf
        return self.ratio_max / self.ratio_min


def _as_array(x) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    return np.atleast_1d(arr), arr.ndim == 0


@dataclass(frozen=True)
class Geometry:
    """Metric data for ``dt^2 = dx^2 + dy^2/f(x)^2`` with ``f = exp(-F(|x|))``.

    ``F``, ``F_prime``, ``F_second`` are vectorized callables on ``(0, R)``;
    ``eps`` is the lower bound on ``x |F'(x)|`` and ``C_struct`` the
    slow-variation constant of ``|F'|`` over doubled intervals.
    ``F_inverse`` (optional) solves ``F(x) = w``; a bisection fallback is
    used when it is absent.
    """

    F: Callable[[np.ndarray], np.ndarray]
    F_prime: Callable[[np.ndarray], np.ndarray]
    F_second: Callable[[np.ndarray], np.ndarray]
    R: float
    eps: float
    C_struct: float
    F_inverse: Callable[[np.ndarray], np.ndarray] | None = None

    # -- pointwise evaluation ------------------------------------------------

    def _guard(self, ax: np.ndarray) -> None:
        if np.any(ax >= self.R):
            raise DomainError(
                f"abscissa {float(np.max(ax))!r} outside the strip (|x| < {self.R!r})"
            )

    def f(self, x):
        """Metric weight ``f(x) = exp(-F(|x|))``; exactly 0 on the degeneracy line."""
        ax, scalar = _as_array(x)
        ax = np.abs(ax)
        self._guard(ax)
        out = np.zeros_like(ax)
        pos = ax > 0
        if np.any(pos):
            with np.errstate(over="ignore", under="ignore"):
                # F -> inf (and exp -> 0) at denormal abscissae is the
                # correct limiting value, not an error.
                out[pos] = np.exp(-np.asarray(self.F(ax[pos]), dtype=float))
        return float(out[0]) if scalar else out

    def abs_F_prime(self, x):
        """``|F'(|x|)|`` (positive, infinite on the degeneracy line)."""
        ax, scalar = _as_array(x)
        ax = np.abs(ax)
        self._guard(ax)
        out = np.full_like(ax, np.inf)
        pos = ax > 0
        if np.any(pos):
            out[pos] = -np.asarray(self.F_prime(ax[pos]), dtype=float)
        return float(out[0]) if scalar else out

    def inv_abs_F_prime(self, x):
        """``1/|F'(|x|)|`` extended by 0 on the degeneracy line."""
        ax, scalar = _as_array(x)
        ax = np.abs(ax)
        self._guard(ax)
        out = np.zeros_like(ax)
        pos = ax > 0
        if np.any(pos):
            out[pos] = -1.0 / np.asarray(self.F_prime(ax[pos]), dtype=float)
        return float(out[0]) if scalar else out

    def f_over_abs_F_prime_pow(self, x, power: float):
        """``f(x) / |F'(x)|**power``, evaluated in log space.

        Stable where both factors under/overflow individually (tiny x), and
        extended by its limit 0 on the degeneracy line.
        """
        ax, scalar = _as_array(x)
        ax = np.abs(ax)
        self._guard(ax)
        out = np.zeros_like(ax)
        pos = ax > 0
        if np.any(pos):
            xs = ax[pos]
            log_val = -np.asarray(self.F(xs), dtype=float) - power * np.log(
                -np.asarray(self.F_prime(xs), dtype=float)
            )
            out[pos] = np.exp(log_val)
        return float(out[0]) if scalar else out

    def F_inv(self, w):
        """Solve ``F(x) = w`` for ``x`` in ``(0, R)`` (``F`` is decreasing)."""
        wa, scalar = _as_array(w)
        if self.F_inverse is not None:
            out = np.asarray(self.F_inverse(wa), dtype=float)
        else:
            out = np.array([self._F_inv_scalar(float(wi)) for wi in wa])
        return float(out[0]) if scalar else out

    def _F_inv_scalar(self, w: float) -> float:
        hi = self.R * (1.0 - 1e-15)
        if w <= float(self.F(np.array([hi]))[0]):
            raise DomainError(f"F_inv argument {w!r} below the range of F on (0, R)")
        lo = 1e-308
        for _ in range(200):
            mid = math.sqrt(lo * hi) if lo > 0 else 0.5 * (lo + hi)
            if mid == lo or mid == hi:
                break
            if float(self.F(np.array([mid]))[0]) > w:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    def f_inv(self, lam):
        """Inverse of the increasing weight: the ``x > 0`` with ``f(x) = lam``."""
        la, scalar = _as_array(lam)
        if np.any(la <= 0):
            raise DomainError("f_inv requires a positive weight value")
        sup = self.f(self.R * (1.0 - 1e-15))
        if np.any(la >= sup):
            raise DomainError(
                f"weight value {float(np.max(la))!r} at or above the supremum {sup!r} of f"
            )
        out = self.F_inv(-np.log(la))
        return float(out) if scalar else np.asarray(out, dtype=float)

    def weight_square(self, x):
        """``S(x) = f(x)^2`` (the profile whose sup-level sets geodesics touch)."""
        ax, scalar = _as_array(x)
        ax = np.abs(ax)
        self._guard(ax)
        out = np.zeros_like(ax)
        pos = ax > 0
        if np.any(pos):
            out[pos] = np.exp(-2.0 * np.asarray(self.F(ax[pos]), dtype=float))
        return float(out[0]) if scalar else out

    def weight_square_prime(self, x):
        """``S'(x) = 2 f(x)^2 |F'(x)|`` for ``x > 0`` (log-space evaluation)."""
        ax, scalar = _as_array(x)
        ax = np.abs(ax)
        self._guard(ax)
        out = np.zeros_like(ax)
        pos = ax > 0
        if np.any(pos):
            xs = ax[pos]
            log_val = (
                math.log(2.0)
                - 2.0 * np.asarray(self.F(xs), dtype=float)
                + np.log(-np.asarray(self.F_prime(xs), dtype=float))
            )
            out[pos] = np.exp(log_val)
        return float(out[0]) if scalar else out


def make_power_geometry(sigma: float, R: float = 1.0) -> Geometry:
    """Geometry for the power profile ``F(x) = x**-sigma`` on ``(-R, R)``.

    The structure constants are exact for this family: ``eps = sigma`` (since
    ``x |F'(x)| = sigma * x**-sigma >= sigma`` on ``(0, 1]``) and slow
    variation ``C_struct = 2**(sigma+1)`` over doubled intervals.
    """
    if not (sigma > 0):
        raise DomainError("power profile requires sigma > 0")
    if not (0 < R <= 1):
        raise DomainError("strip half-width must satisfy 0 < R <= 1")
    s = float(sigma)

    # inf at the degeneracy line and at denormal abscissae is the correct
    # limiting value for these negative powers, not an error worth warning
    # about.
    def F(x):
        with np.errstate(over="ignore", divide="ignore"):
            return np.power(x, -s)

    def F_prime(x):
        with np.errstate(over="ignore", divide="ignore"):
            return -s * np.power(x, -s - 1.0)

    def F_second(x):
        with np.errstate(over="ignore", divide="ignore"):
            return s * (s + 1.0) * np.power(x, -s - 2.0)

    def F_inverse(w):
        with np.errstate(under="ignore"):
            return np.power(w, -1.0 / s)

    return Geometry(
        F=F,
        F_prime=F_prime,
        F_second=F_second,
        R=float(R),
        eps=s,
        C_struct=2.0 ** (s + 1.0),
        F_inverse=F_inverse,
    )


def _grid_array(g: Geometry, grid: Sequence[float]) -> np.ndarray:
    arr = np.asarray(list(grid), dtype=float)
    if arr.size < 2:
        raise DomainError("need at least two grid radii")
    if np.any(arr <= 0) or np.any(arr >= g.R):
        raise DomainError("grid radii must lie strictly inside (0, R)")
    return np.sort(arr)


def check_structure_conditions(
    g: Geometry, grid: Sequence[float], *, dyadic_depth: int = 40
) -> list[ComparabilityReport]:
    """Sampled verification of the structure conditions of the profile.

    Returns one report per condition:

    * ``dyadic-growth``      — F(2^-k) strictly increasing in k (ratio of
                               consecutive values, must exceed 1).
    * ``derivative-signs``   — min of (-F', F'') over the grid, must be > 0.
    * ``slow-variation``     — |F'(x)|/|F'(r)| over x in (r/2, 2r), must lie
                               in [1/C_struct, C_struct].
    * ``degeneracy-rate``    — eps/(x |F'(x)|), must lie in (0, 1].
    * ``degeneracy-rate-monotone`` — forward increments of 1/(x|F'(x)|)
                               along the grid, must be >= 0.
    * ``curvature-balance``  — x F''(x)/|F'(x)|, reported for comparison
                               against the profile's balance constant.
    """
    radii = _grid_array(g, grid)
    reports: list[ComparabilityReport] = []

    ks = np.arange(3, dyadic_depth + 1)
    dy = 2.0 ** (-ks.astype(float))
    dy = dy[dy < g.R]
    Fd = np.asarray(g.F(dy), dtype=float)
    growth = Fd[1:] / Fd[:-1]
    reports.append(
        ComparabilityReport(
            "dyadic-growth", len(growth), float(np.min(growth)), float(np.max(growth))
        )
    )

    neg_fp = -np.asarray(g.F_prime(radii), dtype=float)
    fpp = np.asarray(g.F_second(radii), dtype=float)
    signs = np.concatenate([neg_fp, fpp])
    reports.append(
        ComparabilityReport(
            "derivative-signs", len(signs), float(np.min(signs)), float(np.max(signs))
        )
    )

    ratios = []
    frac = np.linspace(0.5, 2.0, 25)
    for r in radii:
        xs = r * frac
        xs = xs[xs < g.R]
        vals = np.asarray(g.F_prime(xs), dtype=float) / float(g.F_prime(np.array([r]))[0])
        ratios.append(vals)
    allr = np.concatenate(ratios)
    reports.append(
        ComparabilityReport(
            "slow-variation", len(allr), float(np.min(allr)), float(np.max(allr))
        )
    )

    xfp = radii * neg_fp
    rate = g.eps / xfp
    reports.append(
        ComparabilityReport(
            "degeneracy-rate", len(rate), float(np.min(rate)), float(np.max(rate))
        )
    )
    inv = 1.0 / xfp
    inc = np.diff(inv)
    reports.append(
        ComparabilityReport(
            "degeneracy-rate-monotone", len(inc), float(np.min(inc)), float(np.max(inc))
        )
    )

    bal = radii * fpp / neg_fp
    reports.append(
        ComparabilityReport(
            "curvature-balance", len(bal), float(np.min(bal)), float(np.max(bal))
        )
    )
    return reports


def consequences_probe(g: Geometry, grid: Sequence[float]) -> list[ComparabilityReport]:
    """Sampled checks of the pointwise consequences of the structure conditions.

    * ``log-slope-strict``      — (x1/x2)^eps * f(x2)/f(x1) over adjacent
                                  grid pairs x1 < x2; strict comparison means
                                  every sampled value exceeds 1.
    * ``comparable-window``     — f(x)/f(r) for x within 1/|F'(r)| of r
                                  (floored at eps*r); bounded windows mean a
                                  finite pinch independent of r.
    * ``curvature-vs-degeneracy`` — [F''/|F'|^2] / [1/(x|F'|)] = x F''/|F'|,
                                  the same balance ratio both conditions see.
    """
    radii = _grid_array(g, grid)
    reports: list[ComparabilityReport] = []

    x1 = radii[:-1]
    x2 = radii[1:]
    log_ratio = (
        g.eps * (np.log(x1) - np.log(x2))
        + np.asarray(g.F(x1), dtype=float)
        - np.asarray(g.F(x2), dtype=float)
    )
    vals = np.exp(np.minimum(log_ratio, 700.0))
    reports.append(
        ComparabilityReport(
            "log-slope-strict", len(vals), float(np.min(vals)), float(np.max(vals))
        )
    )

    ratios = []
    offsets = np.linspace(-1.0, 1.0, 21)
    for r in radii:
        width = float(g.inv_abs_F_prime(r))
        lo = max(g.eps * r, r - width)
        hi = min(r + width, g.R * (1 - 1e-12))
        xs = np.clip(r + offsets * width, lo, hi)
        logs = np.asarray(g.F(np.array([r])), dtype=float)[0] - np.asarray(
            g.F(xs), dtype=float
        )
        ratios.append(np.exp(logs))
    allr = np.concatenate(ratios)
    reports.append(
        ComparabilityReport(
            "comparable-window", len(allr), float(np.min(allr)), float(np.max(allr))
        )
    )

    neg_fp = -np.asarray(g.F_prime(radii), dtype=float)
    fpp = np.asarray(g.F_second(radii), dtype=float)
    bal = (fpp / neg_fp**2) / (1.0 / (radii * neg_fp))
    reports.append(
        ComparabilityReport(
            "curvature-vs-degeneracy", len(bal), float(np.min(bal)), float(np.max(bal))
        )
    )
    return reports
