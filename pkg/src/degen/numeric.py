"""Shared numerical kernels.

Adaptive Simpson quadrature with Richardson error control, a substitution
quadrature for integrands with an inverse-square-root endpoint singularity,
bracketing bisection, and a smallest-eigenpair solver for symmetric
tridiagonal operators based on shifted inverse iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import solve_banded

try:  # LAPACK partial tridiagonal eigensolver; used only to seed the shift.
    from scipy.linalg import eigh_tridiagonal as _lapack_eigh_tridiagonal
except ImportError:  # pragma: no cover
    _lapack_eigh_tridiagonal = None

from .errors import BracketError, DomainError, NonConvergence

__all__ = [
    "QuadratureSpec",
    "DEFAULT_QUADRATURE",
    "integrate",
    "integrate_sqrt_singular",
    "bisect",
    "TridiagonalOperator",
    "smallest_eigenpair",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Error budget for adaptive quadrature.

    ``abs_tol`` and ``rel_tol`` bound the Richardson error estimate of the
    final result; ``max_subdivisions`` caps the bisection depth of any
    subinterval before the integrator gives up.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 60

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be at least 1")

    def with_tolerances(self, abs_tol: float, rel_tol: float) -> "QuadratureSpec":
        """Copy of this spec with replaced error budget."""
        return QuadratureSpec(abs_tol, rel_tol, self.max_subdivisions)


DEFAULT_QUADRATURE = QuadratureSpec()


def _simpson(fa: float, fm: float, fb: float, width: float) -> float:
    return width * (fa + 4.0 * fm + fb) / 6.0


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Integrate ``f`` over ``[a, b]`` by adaptive Simpson quadrature.

    Each subinterval is accepted once the Richardson estimate
    ``|S2 - S1| / 15`` meets its share of the error budget; the extrapolated
    value ``S2 + (S2 - S1)/15`` is accumulated.  Raises ``NonConvergence``
    when an interval still fails its budget at depth ``max_subdivisions``.
    """
    if math.isnan(a) or math.isnan(b):
        raise DomainError("integration endpoints must be finite numbers")
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0

    fa, fb = float(f(a)), float(f(b))
    m = 0.5 * (a + b)
    fm = float(f(m))
    whole = _simpson(fa, fm, fb, b - a)

    # Budget: relative tolerance is taken against a running magnitude
    # estimate, refreshed as the accumulated value grows.
    tol0 = max(spec.abs_tol, spec.rel_tol * abs(whole))

    total = 0.0
    # Stack entries: (a, fa, m, fm, b, fb, S(a,b), local_tol, depth_left)
    stack = [(a, fa, m, fm, b, fb, whole, tol0, spec.max_subdivisions)]
    while stack:
        xa, va, xm, vm, xb, vb, s_whole, tol, depth = stack.pop()
        xlm = 0.5 * (xa + xm)
        xrm = 0.5 * (xm + xb)
        vlm = float(f(xlm))
        vrm = float(f(xrm))
        s_left = _simpson(va, vlm, vm, xm - xa)
        s_right = _simpson(vm, vrm, vb, xb - xm)
        err = s_left + s_right - s_whole
        if abs(err) <= 15.0 * tol or (xm - xa) <= abs(xa) * 1e-15:
            total += s_left + s_right + err / 15.0
        elif depth <= 0:
            raise NonConvergence(
                f"adaptive quadrature stalled on [{xa!r}, {xb!r}] "
                f"(error estimate {abs(err) / 15.0:.3e}, budget {tol:.3e})"
            )
        else:
            half = 0.5 * tol
            stack.append((xa, va, xlm, vlm, xm, vm, s_left, half, depth - 1))
            stack.append((xm, vm, xrm, vrm, xb, vb, s_right, half, depth - 1))
    return sign * total


def _invert_monotone(S: Callable[[float], float], v: float, a: float, b: float) -> float:
    """Solve S(u) = v for u in [a, b], S strictly increasing (bisection)."""
    lo, hi = a, b
    for _ in range(90):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if float(S(mid)) < v:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def integrate_sqrt_singular(
    rho: Callable[[float], float],
    S: Callable[[float], float],
    a: float,
    b: float,
    spec: QuadratureSpec = DEFAULT_QUADRATURE,
    *,
    S_prime: Callable[[float], float] | None = None,
    S_sup: float | None = None,
) -> float:
    """Integrate ``rho(u) / sqrt(S_sup - S(u))`` over ``[a, b]``.

    ``S`` must be strictly increasing on ``[a, b]`` (checked on a sample
    grid); ``S_sup`` defaults to ``S(b)``, the case where the integrand is
    singular at the right endpoint.  The substitution ``w = sqrt(S_sup -
    S(u))`` turns the integral into ``2 * rho(u(w)) / S'(u(w))`` on a
    w-interval, which is smooth, and that is fed to :func:`integrate`.
    ``S_prime`` may be supplied to avoid finite differencing.
    """
    if a == b:
        return 0.0
    if b < a:
        raise DomainError("integrate_sqrt_singular expects a <= b")

    grid = np.linspace(a, b, 33)
    vals = np.array([float(S(u)) for u in grid])
    if not np.all(np.diff(vals) > 0):
        raise DomainError("S must be strictly increasing on the integration interval")

    sup = float(S_sup) if S_sup is not None else float(vals[-1])
    if sup < vals[-1] - 1e-12 * max(1.0, abs(vals[-1])):
        raise DomainError("S_sup must dominate S on the integration interval")

    if S_prime is None:
        h0 = (b - a) * 1e-7

        def S_prime(u: float, _h=h0) -> float:  # type: ignore[misc]
            lo = max(a, u - _h)
            hi = min(b, u + _h)
            return (float(S(hi)) - float(S(lo))) / (hi - lo)

    w_hi = math.sqrt(max(sup - float(vals[0]), 0.0))
    w_lo = math.sqrt(max(sup - float(vals[-1]), 0.0))
    if w_hi <= w_lo:
        return 0.0

    def transformed(w: float) -> float:
        v = sup - w * w
        if v <= vals[0]:
            u = a
        elif v >= vals[-1]:
            u = b
        else:
            u = _invert_monotone(S, v, a, b)
        num = float(rho(u))
        den = float(S_prime(u))
        if den <= 0.0:
            if num == 0.0:
                return 0.0  # flat degenerate end; the integrand vanishes there
            raise DomainError(
                f"S' vanishes at u={u!r} where rho does not; the substitution "
                "is only valid where S is strictly increasing"
            )
        return 2.0 * num / den

    return integrate(transformed, w_lo, w_hi, spec)


def bisect(
    h: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float,
) -> float:
    """Root of ``h`` on ``[lo, hi]`` by bisection to bracket width ``tol``.

    Requires a sign change (``h(lo) * h(hi) <= 0``); raises ``BracketError``
    otherwise.  Returns the bracket midpoint.
    """
    if not (tol > 0):
        raise DomainError("bisection tolerance must be positive")
    if not lo < hi:
        raise DomainError("bisection requires lo < hi")
    f_lo = float(h(lo))
    f_hi = float(h(hi))
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    if (f_lo > 0) == (f_hi > 0):
        raise BracketError(
            f"no sign change on [{lo!r}, {hi!r}]: h(lo)={f_lo!r}, h(hi)={f_hi!r}"
        )
    for _ in range(4000):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        f_mid = float(h(mid))
        if f_mid == 0.0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class TridiagonalOperator:
    """Symmetric tridiagonal operator on a uniform grid.

    ``diagonal`` has length m, ``off_diagonal`` length m-1; ``grid_step`` is
    the mesh width used for the discrete L2 normalization of eigenvectors.
    """

    diagonal: np.ndarray
    off_diagonal: np.ndarray
    grid_step: float

    def __post_init__(self):
        d = np.asarray(self.diagonal, dtype=float)
        e = np.asarray(self.off_diagonal, dtype=float)
        if d.ndim != 1 or e.ndim != 1 or len(e) != len(d) - 1:
            raise DomainError("off_diagonal must be one shorter than diagonal")
        if len(d) < 3:
            raise DomainError("operator needs at least 3 grid points")
        if not self.grid_step > 0:
            raise DomainError("grid_step must be positive")
        object.__setattr__(self, "diagonal", d)
        object.__setattr__(self, "off_diagonal", e)

    @property
    def size(self) -> int:
        return len(self.diagonal)

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diagonal * v
        out[:-1] += self.off_diagonal * v[1:]
        out[1:] += self.off_diagonal * v[:-1]
        return out

    def rayleigh(self, v: np.ndarray) -> float:
        return float(v @ self.matvec(v)) / float(v @ v)


def _sturm_smallest(d: np.ndarray, e: np.ndarray) -> float:
    """Crude lower-edge estimate of the spectrum via Sturm-count bisection."""
    r = np.zeros_like(d)
    r[:-1] += np.abs(e)
    r[1:] += np.abs(e)
    lo = float(np.min(d - r))
    hi = float(np.max(d + r))
    e2 = e * e
    tiny = 1e-300

    def count_below(x: float) -> int:
        cnt = 0
        p = d[0] - x
        if p < 0:
            cnt += 1
        for i in range(1, len(d)):
            denom = p if p != 0.0 else tiny
            p = (d[i] - x) - e2[i - 1] / denom
            if p < 0:
                cnt += 1
        return cnt

    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if count_below(mid) >= 1:
            hi = mid
        else:
            lo = mid
    return lo


def smallest_eigenpair(
    T: TridiagonalOperator,
    *,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue and eigenvector of ``T`` by shifted inverse iteration.

    The shift (and, when available, the starting vector) is seeded by a
    bisection-based partial eigensolve, then refined by inverse iterations
    with Rayleigh-quotient updates until the relative residual
    ``|T v - lam v| / |lam v|`` is at machine level.  The returned vector is
    normalized so that ``grid_step * sum(v**2) == 1`` with a nonnegative
    central entry, and the returned eigenvalue is exactly the Rayleigh
    quotient of the returned vector.
    """
    d = T.diagonal
    e = T.off_diagonal
    m = T.size
    scale = float(np.max(np.abs(d)) + 2.0 * (np.max(np.abs(e)) if len(e) else 0.0))
    scale = max(scale, 1e-300)

    v: np.ndarray | None = None
    if _lapack_eigh_tridiagonal is not None:
        try:
            w, vec = _lapack_eigh_tridiagonal(d, e, select="i", select_range=(0, 0))
            lam_seed = float(w[0])
            v = np.ascontiguousarray(vec[:, 0])
        except Exception:
            lam_seed = _sturm_smallest(d, e)
    else:  # pragma: no cover - scipy always provides it in practice
        lam_seed = _sturm_smallest(d, e)
    if v is None:
        v = np.ones(m) / math.sqrt(m)

    mu = lam_seed - max(1e-8 * abs(lam_seed), 1e-13 * scale)
    ab = np.zeros((3, m))
    lam = mu
    converged = False
    for _ in range(max_iter):
        ab[0, 1:] = e
        ab[1, :] = d - mu
        ab[2, :-1] = e
        try:
            w = solve_banded((1, 1), ab, v)
        except np.linalg.LinAlgError:
            mu -= max(1e-10 * abs(mu), 1e-12 * scale)
            continue
        nrm = float(np.linalg.norm(w))
        if not math.isfinite(nrm) or nrm == 0.0:
            mu -= max(1e-10 * abs(mu), 1e-12 * scale)
            continue
        v = w / nrm
        lam = float(v @ T.matvec(v))
        res = float(np.linalg.norm(T.matvec(v) - lam * v))
        if res <= max(tol * abs(lam), 1e-13 * scale):
            converged = True
            break
        mu = lam  # Rayleigh-quotient shift once we are in the basin
    if not converged:
        raise NonConvergence(
            f"inverse iteration failed to reach residual {tol:g} in {max_iter} steps"
        )

    v = v / math.sqrt(T.grid_step * float(v @ v))
    center = (m - 1) // 2
    anchor = center if abs(v[center]) > 1e-14 * float(np.max(np.abs(v))) else int(np.argmax(np.abs(v)))
    if v[anchor] < 0:
        v = -v
    lam = float(v @ T.matvec(v)) / float(v @ v)
    return lam, v
