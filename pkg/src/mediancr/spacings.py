"""Expected order-statistic spacing profiles.

For a sample of size n from a continuous F, write l(k) for the expected gap
E[X_(k+1)] - E[X_(k)], k = 0..n, with the conventions X_(0) = inf of the
support and X_(n+1) = sup of the support.  Equivalently

    l(k) = C(n, k) * integral of F(x)^k (1 - F(x))^(n-k) dx.

A profile pairs these gaps with the selection ratios r(k) = b(k; n, 1/2) / l(k)
that drive the randomized region constructions.  Two closed forms matter:

* uniform on [-a, a]: l(k) = 2a / (n + 1) for every k, so r(k) is proportional
  to C(n, k);
* exponential(rate): l(k) = 1 / (rate * (n - k)) for k < n and l(n) = +inf,
  so r(k) is proportional to C(n - 1, k) with r(n) = 0.

Profiles from closed forms carry an exact integer representation of the ratio
ordering so tie groups are detected without floating-point comparisons.  Data
-driven and numeric profiles are floating point; their tie grouping uses a
relative tolerance of 1e-9.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from scipy import integrate as _integrate

from .distributions import DistributionSpec, binom_pmf
from .errors import DegenerateDataError
from .regions import SortedSample

__all__ = [
    "RATIO_TIE_RTOL",
    "LkProfile",
    "lk_uniform",
    "lk_exponential",
    "lk_mom",
    "lk_edf",
    "lk_numeric",
    "lk_numeric_profile",
]

RATIO_TIE_RTOL = 1e-9


@dataclass(frozen=True)
class LkProfile:
    """Spacing profile for a given sample size.

    Attributes
    ----------
    n : int
        Sample size.
    l : tuple of float
        Expected spacings l(0..n); entries may be +inf.
    ratio : tuple of float
        Selection ratios r(k) = binom_pmf(k, n) / l(k); 0.0 where l(k) is
        infinite.
    exact_ratio : tuple of int or None
        When the profile comes from a closed form, integers proportional to
        the ratios (common positive scale), enabling exact tie grouping.
    """

    n: int
    l: tuple[float, ...]
    ratio: tuple[float, ...]
    exact_ratio: tuple[int, ...] | None = None

    @property
    def is_exact(self) -> bool:
        return self.exact_ratio is not None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"profile needs n >= 1, got {self.n}")
        if len(self.l) != self.n + 1 or len(self.ratio) != self.n + 1:
            raise ValueError("profile arrays must have n + 1 entries")
        if self.exact_ratio is not None and len(self.exact_ratio) != self.n + 1:
            raise ValueError("exact_ratio must have n + 1 entries")
        if any(v < 0 for v in self.l) or any(v < 0 for v in self.ratio):
            raise ValueError("spacings and ratios must be nonnegative")


def _ratios_from_l(n: int, l: tuple[float, ...]) -> tuple[float, ...]:
    out = []
    for k, lk in enumerate(l):
        if math.isinf(lk):
            out.append(0.0)
        elif lk == 0.0:
            out.append(math.inf)
        else:
            out.append(binom_pmf(k, n) / lk)
    return tuple(out)


@lru_cache(maxsize=None)
def lk_uniform(n: int, half_width: float = 1.0) -> LkProfile:
    """Profile of the uniform distribution on [-half_width, half_width].

    All n + 1 spacings equal 2 * half_width / (n + 1); the ratio ordering is
    that of the binomial coefficients C(n, k).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if half_width <= 0.0:
        raise ValueError(f"half_width must be positive, got {half_width}")
    gap = 2.0 * half_width / (n + 1)
    l = (gap,) * (n + 1)
    return LkProfile(n, l, _ratios_from_l(n, l),
                     tuple(math.comb(n, k) for k in range(n + 1)))


@lru_cache(maxsize=None)
def lk_exponential(n: int, rate: float = 1.0) -> LkProfile:
    """Profile of the exponential distribution with the given rate.

    l(k) = 1 / (rate * (n - k)) for k < n; the top spacing is infinite because
    the support is unbounded above.  Ratios are proportional to C(n - 1, k)
    with r(n) = 0.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if rate <= 0.0:
        raise ValueError(f"rate must be positive, got {rate}")
    l = tuple(1.0 / (rate * (n - k)) for k in range(n)) + (math.inf,)
    exact = tuple(math.comb(n - 1, k) for k in range(n)) + (0,)
    return LkProfile(n, l, _ratios_from_l(n, l), exact)


def lk_mom(sample: SortedSample) -> LkProfile:
    """Method-of-moments profile: each interior spacing estimates itself.

    l_hat(k) = x_(k+1) - x_(k) for k = 1..n-1; the boundary entries are +inf
    (ratio 0), so the boundary counts can never be selected.  Tied interior
    observations give a zero spacing, which this estimator cannot use.
    """
    n = sample.n
    if n < 2:
        raise ValueError(f"need at least 2 observations, got {n}")
    gaps = []
    for k in range(1, n):
        gap = sample.values[k] - sample.values[k - 1]
        if gap == 0.0:
            raise DegenerateDataError(
                "tied observations give a zero spacing; jitter the data first"
            )
        gaps.append(gap)
    l = (math.inf,) + tuple(gaps) + (math.inf,)
    return LkProfile(n, l, _ratios_from_l(n, l))


def lk_edf(sample: SortedSample) -> LkProfile:
    """Plug-in profile: the spacing integral evaluated at the empirical CDF.

    l_hat(k) = C(n, k) * sum_{i=2}^{n} (1 - (i-1)/n)^(n-k) ((i-1)/n)^k
               * (x_(i) - x_(i-1)).

    All entries are finite (the empirical CDF has bounded support), so the
    boundary counts may enter a selection.  Ties only shrink the affected
    terms; no error is raised.
    """
    n = sample.n
    if n < 2:
        raise ValueError(f"need at least 2 observations, got {n}")
    vals = sample.values
    l = []
    for k in range(n + 1):
        acc = 0.0
        for i in range(2, n + 1):
            p = (i - 1) / n
            acc += (1.0 - p) ** (n - k) * p ** k * (vals[i - 1] - vals[i - 2])
        l.append(math.comb(n, k) * acc)
    l = tuple(l)
    return LkProfile(n, l, _ratios_from_l(n, l))


# -- numeric profile ---------------------------------------------------------

# Probe abscissas for endpoint behavior, and the log-log slope at which the
# tail is declared non-integrable.  The families here either diverge at least
# as fast as 1/u (slope <= -0.95 after the slowly varying correction) or are
# integrable with slope >= -0.5; the threshold sits between with wide margin.
_PROBE_US = (1e-5, 1e-7, 1e-9)
_DIVERGENCE_SLOPE = -0.95


def _tail_slope(g, lower: bool) -> float:
    vals = []
    for u in _PROBE_US:
        x = u if lower else 1.0 - u
        v = g(x)
        if not math.isfinite(v) or v <= 0.0:
            # Hitting 0 or overflow in the extreme tail means the integrand
            # vanishes (integrable) or explodes (caught by the slope below).
            return 0.0 if (math.isfinite(v) and v >= 0.0) else _DIVERGENCE_SLOPE
        vals.append(math.log(v))
    # slope of log g against log u, u -> 0 (mirrored for the upper tail)
    slopes = []
    for a in range(len(_PROBE_US) - 1):
        du = math.log(_PROBE_US[a + 1]) - math.log(_PROBE_US[a])
        slopes.append((vals[a + 1] - vals[a]) / du)
    return min(slopes)


def lk_numeric(dist: DistributionSpec, n: int, k: int) -> float:
    """Expected spacing l(k) under ``dist`` by adaptive quadrature.

    The integral is computed in probability space,

        l(k) = C(n, k) * integral_0^1 u^k (1 - u)^(n-k) / f(Q(u)) du,

    with Q the quantile function of ``dist``.  Non-integrable tails (an
    unbounded support end, or a tail too heavy for the order statistic mean
    to exist) are detected from the endpoint behavior of the integrand and
    reported as +inf.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0 <= k <= n:
        raise ValueError(f"k must be in 0..{n}, got {k}")

    def g(u: float) -> float:
        q = dist.quantile(u)
        den = dist.pdf(q)
        if den <= 0.0:
            return math.inf
        return u ** k * (1.0 - u) ** (n - k) / den

    if k == 0:
        lo_div = not math.isfinite(dist.support[0]) or _tail_slope(g, True) <= _DIVERGENCE_SLOPE
    else:
        lo_div = _tail_slope(g, True) <= _DIVERGENCE_SLOPE
    if lo_div:
        return math.inf
    if k == n:
        hi_div = not math.isfinite(dist.support[1]) or _tail_slope(g, False) <= _DIVERGENCE_SLOPE
    else:
        hi_div = _tail_slope(g, False) <= _DIVERGENCE_SLOPE
    if hi_div:
        return math.inf

    val, _ = _integrate.quad(g, 0.0, 1.0, epsabs=1e-13, epsrel=1e-10, limit=500)
    return math.comb(n, k) * val


def lk_numeric_profile(dist: DistributionSpec, n: int) -> LkProfile:
    """Full numeric profile for ``dist`` at sample size n."""
    l = tuple(lk_numeric(dist, n, k) for k in range(n + 1))
    return LkProfile(n, l, _ratios_from_l(n, l))
