"""Young-function machinery for the iteration-with-logarithmic-loss scheme.

The central object is the family Phi_N(t) = t (ln t)^N for t >= E = e^{2N},
extended linearly below the knot E.  Everything downstream needs its
conjugate, the conjugate's inverse, the induced gauge Gamma, and Orlicz
(Luxemburg) norms over finite discrete measures, together with the small
set of inequalities (submultiplicativity, Young, Hoelder) that make the
iteration close.  All evaluations are exact piecewise formulas or Newton
solves on monotone convex one-dimensional equations; no tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, NonConvergence
from .geometry import ComparabilityReport
from .numeric import DEFAULT_QUADRATURE, QuadratureSpec, bisect, integrate

__all__ = [
    "YoungFunction",
    "young_function",
    "phi_inverse",
    "conjugate_quadrature",
    "conj_inverse_and_gamma",
    "gamma_of",
    "h_of",
    "DiscreteMeasureSpace",
    "orlicz_norm",
    "algebra_checks",
    "young_inequality_check",
    "gamma_bound_check",
]


def _newton_increasing(
    p: Callable[[float], float],
    dp: Callable[[float], float],
    x0: float,
    *,
    tol: float = 1e-14,
    max_iter: int = 200,
) -> float:
    """Newton iteration for an increasing convex function from the right.

    Starting at or above the root of a convex increasing function, Newton
    steps decrease monotonically to the root; guarded against stagnation.
    """
    x = x0
    for _ in range(max_iter):
        fx = p(x)
        step = fx / dp(x)
        x_new = x - step
        if not math.isfinite(x_new):
            raise NonConvergence(f"Newton step left the domain at x={x}")
        if abs(step) <= tol * max(1.0, abs(x)):
            return x_new
        x = x_new
    raise NonConvergence("Newton iteration did not converge")


@dataclass(frozen=True)
class YoungFunction:
    """The Young function t (ln t)^N above its knot, linear below.

    Fields expose the defining exponent N, the knot E = e^{2N}, and
    callable handles for the function, its (right-continuous) derivative,
    the convex conjugate, and the conjugate's inverse.  The handles are
    pure closures; instances are immutable and safe to share.
    """

    N: float
    E: float
    phi: Callable[[float], float] = field(repr=False)
    phi_prime: Callable[[float], float] = field(repr=False)
    phi_conj: Callable[[float], float] = field(repr=False)
    phi_conj_inverse: Callable[[float], float] = field(repr=False)

    @property
    def slope_low(self) -> float:
        """Slope of the linear piece: (2N)^N = Phi(E)/E = Phi'(E-)."""
        return (2.0 * self.N) ** self.N

    @property
    def slope_high(self) -> float:
        """Right derivative at the knot: (3/2)(2N)^N = Phi'(E+)."""
        return 1.5 * (2.0 * self.N) ** self.N

    @property
    def phi_at_knot(self) -> float:
        """Phi(E) = (2N e^2)^N."""
        return self.E * (2.0 * self.N) ** self.N


def young_function(N: float, *, allow_large_N: bool = False) -> YoungFunction:
    """Build the Young function Phi_N with all derived handles.

    N must lie in (1, 2]; the constants downstream (conjugate bounds, the
    gauge estimate with gamma = 2^N) are derived under that restriction.
    Larger N is admitted only with allow_large_N=True.
    """
    if not N > 1.0:
        raise DomainError(f"N must exceed 1, got {N}")
    if N > 2.0 and not allow_large_N:
        raise DomainError(f"N={N} outside (1, 2]; pass allow_large_N=True to override")

    E = math.exp(2.0 * N)
    s_lo = (2.0 * N) ** N  # Phi(E)/E, slope of the linear piece
    s_hi = 1.5 * s_lo  # Phi'(E+)
    phi_E = E * s_lo
    conj_at_s_hi = 0.5 * phi_E  # E*s_hi - phi_E, where the smooth branch starts

    def phi(t: float) -> float:
        if t < 0.0:
            raise DomainError(f"Young function argument must be nonnegative, got {t}")
        if t < E:
            return s_lo * t
        lt = math.log(t)
        return t * lt**N

    def phi_prime(t: float) -> float:
        if t < 0.0:
            raise DomainError(f"Young function argument must be nonnegative, got {t}")
        if t < E:
            return s_lo
        lt = math.log(t)
        return lt**N + N * lt ** (N - 1.0)

    def _conj_slope_solve(s: float) -> float:
        # g = ln t at the contact point of the supporting line of slope s:
        # g^N + N g^{N-1} = s, g >= 2N.
        g0 = max(2.0 * N, s ** (1.0 / N))
        return _newton_increasing(
            lambda g: g**N + N * g ** (N - 1.0) - s,
            lambda g: N * g ** (N - 2.0) * (g + N - 1.0),
            g0,
        )

    def phi_conj(s: float) -> float:
        if s < 0.0:
            raise DomainError(f"conjugate argument must be nonnegative, got {s}")
        if s <= s_lo:
            return 0.0
        if s < s_hi:
            return E * s - phi_E
        g = _conj_slope_solve(s)
        if g > 700.0:  # e^g beyond double range; the conjugate truly is astronomical
            return math.inf
        # Legendre value t*s - Phi(t) with t = e^g; s - g^N = N g^{N-1} exactly.
        return math.exp(g) * N * g ** (N - 1.0)

    def phi_conj_inverse(y: float) -> float:
        if y < 0.0:
            raise DomainError(f"conjugate-inverse argument must be nonnegative, got {y}")
        if y == 0.0:
            return s_lo  # right-continuous generalized inverse
        if y <= conj_at_s_hi:
            return (y + phi_E) / E
        ln_y = math.log(y)
        g = _conj_inv_solve(ln_y)
        return g**N + N * g ** (N - 1.0)

    def _conj_inv_solve(ln_y: float) -> float:
        # Solve g + ln N + (N-1) ln g = ln y for g >= 2N.
        lnN = math.log(N)
        g0 = max(2.0 * N, ln_y)
        return _newton_increasing(
            lambda g: g + lnN + (N - 1.0) * math.log(g) - ln_y,
            lambda g: 1.0 + (N - 1.0) / g,
            g0,
        )

    yf = YoungFunction(N, E, phi, phi_prime, phi_conj, phi_conj_inverse)
    object.__setattr__(yf, "_conj_inv_log", _conj_inv_solve)
    return yf


def phi_inverse(yf: YoungFunction, y: float) -> float:
    """Inverse of the Young function (exact piecewise / Newton)."""
    if y < 0.0:
        raise DomainError(f"inverse argument must be nonnegative, got {y}")
    if y <= yf.phi_at_knot:
        return y / yf.slope_low
    N = yf.N
    ln_y = math.log(y)
    u = _newton_increasing(
        lambda u: u + N * math.log(u) - ln_y,
        lambda u: 1.0 + N / u,
        max(2.0 * N, ln_y),
    )
    return math.exp(u)


def conjugate_quadrature(
    yf: YoungFunction, s: float, *, spec: QuadratureSpec | None = None
) -> float:
    """Conjugate via the derivative-inverse integral (verification route).

    Computes int_0^s (Phi')^{-1}(sigma) dsigma with the generalized
    inverse resolved by bisection, independent of the closed-form branches
    of phi_conj.  Slow; used to validate the primary evaluation.
    """
    spec = spec or DEFAULT_QUADRATURE
    s_lo, s_hi = yf.slope_low, yf.slope_high
    if s <= s_lo:
        return 0.0

    def prime_inverse(sigma: float) -> float:
        if sigma <= s_lo:
            return 0.0
        if sigma <= s_hi:
            return yf.E
        hi = yf.E
        while yf.phi_prime(hi) < sigma:
            hi *= 4.0
        return bisect(lambda t: yf.phi_prime(t) - sigma, yf.E, hi, 1e-13)

    total = yf.E * (min(s, s_hi) - s_lo)
    if s > s_hi:
        total += integrate(prime_inverse, s_hi, s, spec)
    return total


def conj_inverse_and_gamma(yf: YoungFunction, t: float) -> tuple[float, float]:
    """Conjugate inverse at t together with the gauge Gamma(t).

    Gamma(t) = 1 / conj_inverse(1/t) is the modulus that converts measure
    ratios into iteration gains.  For t < e^{-2N} the derived bound
    Gamma(t) <= 2^N / (ln 1/t)^N is verified on the fly (it is how the
    gauge is used downstream), with a hard failure if violated.
    """
    if t <= 0.0:
        raise DomainError(f"argument must be positive, got {t}")
    conj_inv = yf.phi_conj_inverse(t)
    gamma = 1.0 / yf.phi_conj_inverse(1.0 / t)
    if t < math.exp(-2.0 * yf.N):
        bound = 2.0**yf.N / math.log(1.0 / t) ** yf.N
        if gamma > bound * (1.0 + 1e-12):
            raise NonConvergence(
                f"gauge bound violated: Gamma({t}) = {gamma} > {bound}"
            )
    return conj_inv, gamma


def gamma_of(yf: YoungFunction, x: float) -> float:
    """The gauge Gamma(x) = 1 / conj_inverse(1/x) alone."""
    if x <= 0.0:
        raise DomainError(f"argument must be positive, got {x}")
    return 1.0 / yf.phi_conj_inverse(1.0 / x)


def h_of(yf: YoungFunction, t: float) -> float:
    """Log-scale gain h(t) = ln conj_inverse(e^t) = -ln Gamma(e^{-t}).

    Evaluated in logarithms so arbitrarily large t is fine; h grows like
    N ln t and is bounded below by its value ln((2N)^N) at -inf.
    """
    N = yf.N
    conj_at_s_hi = 0.5 * yf.phi_at_knot
    if t <= math.log(conj_at_s_hi):
        return math.log((math.exp(t) + yf.phi_at_knot) / yf.E)
    g = yf._conj_inv_log(t)  # type: ignore[attr-defined]
    # s = g^N + N g^{N-1}; in logs to survive huge t
    return N * math.log(g) + math.log1p(N / g)


# ---------------------------------------------------------------------------
# Discrete measure spaces and Luxemburg norms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DiscreteMeasureSpace:
    """Finite measure as point masses: weights[i] at points[i]."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)
        if w.ndim != 1 or len(w) != len(pts):
            raise DomainError("weights must align with points")
        if not np.all(w > 0.0):
            raise DomainError("all masses must be positive")
        if not np.isfinite(w.sum()):
            raise DomainError("total mass must be finite")

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())


def _modular(yf: YoungFunction, conjugate: bool, vals: np.ndarray, w: np.ndarray, k: float) -> float:
    fn = yf.phi_conj if conjugate else yf.phi
    total = 0.0
    for v, wi in zip(vals, w):
        total += wi * fn(v / k)
        if total > 1e6:  # far beyond the unit level; stop early
            return total
    return total


def orlicz_norm(
    yf: YoungFunction,
    values: Sequence[float] | np.ndarray,
    space: DiscreteMeasureSpace,
    *,
    conjugate: bool = False,
    tol: float = 1e-12,
) -> float:
    """Luxemburg norm inf{k > 0 : sum_i w_i Phi(|f_i|/k) <= 1}.

    The modular is strictly decreasing in k wherever positive, so the
    infimum is located by bisection on a doubling bracket.  The zero
    function has norm 0 by convention.  With conjugate=True the norm is
    taken in the conjugate function instead (used for the Hoelder check).
    """
    vals = np.abs(np.asarray(values, dtype=float))
    if vals.shape != space.weights.shape:
        raise DomainError("values must align with the measure space")
    if not np.all(np.isfinite(vals)):
        raise DomainError("values must be finite")
    if np.all(vals == 0.0):
        return 0.0
    w = space.weights

    def level(k: float) -> float:
        return _modular(yf, conjugate, vals, w, k) - 1.0

    k_hi = float(np.max(vals)) + float(w @ vals)
    for _ in range(400):
        if level(k_hi) <= 0.0:
            break
        k_hi *= 2.0
    else:  # pragma: no cover
        raise NonConvergence("norm bracketing failed (upper)")
    k_lo = k_hi
    for _ in range(2000):
        k_lo *= 0.5
        if level(k_lo) > 0.0:
            break
    else:  # pragma: no cover
        raise NonConvergence("norm bracketing failed (lower)")
    lo, hi = k_lo, k_hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if level(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * hi:
            break
    return hi


# ---------------------------------------------------------------------------
# Inequality sweeps
# ---------------------------------------------------------------------------


def _log_uniform(rng: np.random.Generator, lo: float, hi: float, n: int) -> np.ndarray:
    return np.exp(rng.uniform(math.log(lo), math.log(hi), n))


def algebra_checks(
    yf: YoungFunction, trials: int, seed: int = 0
) -> list[ComparabilityReport]:
    """Randomized verification of the three workhorse properties.

    (i) submultiplicativity Phi(ab) <= Phi(a) Phi(b) on log-uniform pairs;
    (ii) the factor-2 Hoelder inequality int |fg| <= 2 ||f|| ||g||_conj on
    random discrete spaces; (iii) growth of h on t = 5, 10, ..., 100:
    positive, increasing, and h(100) - h(5) >= 0.75 N ln 20 (three
    quarters of its asymptotic N ln t slope over that window).

    Reports: "submultiplicativity" and "hoelder-factor-2" record the
    min/max of the normalized ratios (all must stay <= 1); "h-growth"
    records ratio_min = smallest increment and ratio_max = total gain
    over the grid.
    """
    if trials < 1:
        raise DomainError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    reports: list[ComparabilityReport] = []

    a = _log_uniform(rng, 1e-4, 1e6, trials)
    b = _log_uniform(rng, 1e-4, 1e6, trials)
    sub = np.array(
        [yf.phi(ai * bi) / (yf.phi(ai) * yf.phi(bi)) for ai, bi in zip(a, b)]
    )
    reports.append(
        ComparabilityReport("submultiplicativity", len(sub), float(sub.min()), float(sub.max()))
    )

    n_holder = max(1, min(trials, 1000))
    ratios = np.empty(n_holder)
    for i in range(n_holder):
        m = int(rng.integers(3, 40))
        space = DiscreteMeasureSpace(np.arange(m, dtype=float), _log_uniform(rng, 0.05, 5.0, m))
        f = rng.normal(0.0, 3.0, m) * _log_uniform(rng, 0.01, 100.0, m)
        gvals = rng.normal(0.0, 3.0, m) * _log_uniform(rng, 0.01, 100.0, m)
        lhs = float(space.weights @ np.abs(f * gvals))
        rhs = 2.0 * orlicz_norm(yf, f, space) * orlicz_norm(yf, gvals, space, conjugate=True)
        ratios[i] = lhs / rhs if rhs > 0 else 0.0
    reports.append(
        ComparabilityReport("hoelder-factor-2", n_holder, float(ratios.min()), float(ratios.max()))
    )

    ts = np.arange(5.0, 101.0, 5.0)
    hs = np.array([h_of(yf, t) for t in ts])
    increments = np.diff(hs)
    reports.append(
        ComparabilityReport("h-growth", len(hs), float(increments.min()), float(hs[-1] - hs[0]))
    )
    return reports


def young_inequality_check(yf: YoungFunction, trials: int, seed: int = 1) -> ComparabilityReport:
    """t s <= Phi(t) + conjugate(s) on log-uniform random pairs.

    Samples are ts / (Phi(t) + conj(s)); all must be <= 1 (+1e-12).
    """
    rng = np.random.default_rng(seed)
    t = _log_uniform(rng, 1e-6, 1e8, trials)
    s = _log_uniform(rng, 1e-6, 1e8, trials)
    ratios = np.empty(trials)
    for i in range(trials):
        denom = yf.phi(t[i]) + yf.phi_conj(s[i])
        ratios[i] = t[i] * s[i] / denom if denom > 0.0 else 0.0
    return ComparabilityReport("young-inequality", trials, float(ratios.min()), float(ratios.max()))


def gamma_bound_check(yf: YoungFunction, n_points: int = 100) -> ComparabilityReport:
    """Gamma(x) (ln 1/x)^N / 2^N on log-spaced x < e^{-2N} (must be <= 1)."""
    N = yf.N
    xs = np.exp(np.linspace(math.log(math.exp(-2.0 * N) * 0.999), math.log(1e-280), n_points))
    ratios = np.array(
        [gamma_of(yf, float(x)) * math.log(1.0 / x) ** N / 2.0**N for x in xs]
    )
    return ComparabilityReport("gamma-gauge-bound", n_points, float(ratios.min()), float(ratios.max()))
