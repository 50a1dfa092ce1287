"""Classical confidence procedures for the median.

Nine standard competitors: the t interval (a mean procedure, included as the
conventional default), the Wilcoxon signed-rank interval on Walsh averages,
the exact sign (order-statistic) region, the asymptotic median interval with
a kernel density estimate at the median, and five bootstrap intervals (basic,
bootstrap-SE with a t quantile, percentile, bias-corrected, and BCa).

Interval procedures return a single closed interval; the order-statistic
constructions return half-open regions so they compose with the count-based
membership rule.
"""

from __future__ import annotations

import bisect
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .distributions import (
    RngStream,
    binom_cdf,
    norm_cdf,
    norm_quantile,
    signed_rank_null_cdf,
    t_quantile,
)
from .errors import DegenerateDataError, InfeasibleLevelError
from .regions import Interval, Region, SortedSample, make_sample, region_from_gamma0

__all__ = [
    "ClampedProbabilityWarning",
    "cr_t",
    "cr_wilcoxon",
    "cr_sign",
    "kde_at_median",
    "cr_asymp_median",
    "BootstrapDistribution",
    "bootstrap_medians",
    "jackknife_acceleration",
    "cr_bootstrap",
]

BOOTSTRAP_VARIANTS = ("basic", "se", "percentile", "bc", "bca")


class ClampedProbabilityWarning(UserWarning):
    """A bootstrap tail probability was clamped away from 0 or 1."""


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")


def _closed(lo: float, hi: float) -> Region:
    return Region((Interval(float(lo), float(hi), closed_hi=True),))


def cr_t(sample: SortedSample, alpha: float) -> Region:
    """Mean +- t quantile times the standard error, as a closed interval.

    Zero sample variance collapses the interval to the single point at the
    common value.  Requires n >= 2.
    """
    _check_alpha(alpha)
    n = sample.n
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    arr = sample.as_array()
    mean = float(np.mean(arr))
    sd = float(np.std(arr, ddof=1))
    if sd == 0.0:
        return _closed(mean, mean)
    half = t_quantile(1.0 - alpha / 2.0, n - 1) * sd / math.sqrt(n)
    return _closed(mean - half, mean + half)


def _walsh_averages(values: tuple[float, ...]) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    i, j = np.triu_indices(arr.size)
    return np.sort((arr[i] + arr[j]) / 2.0)


def cr_wilcoxon(sample: SortedSample, alpha: float) -> Region:
    """Signed-rank region: a half-open window of ordered Walsh averages.

    With N = n(n+1)/2 Walsh averages W_(1) <= ... <= W_(N) and the exact null
    CDF of the signed-rank statistic, the region is [W_(k1+1), W_(k2+1)) where
    k1 is the largest w with CDF(w) <= alpha/2 and k2 the smallest w with
    CDF(w) >= 1 - alpha/2.  Levels beyond 1 - 2^(1-n) are infeasible.
    """
    _check_alpha(alpha)
    n = sample.n
    if n < 1:
        raise ValueError("need at least one observation")
    if 0.5 ** n > alpha / 2.0:
        raise InfeasibleLevelError(
            requested=1.0 - alpha,
            attainable=1.0 - 2.0 ** (1 - n),
            detail="signed-rank window undefined at this level",
        )
    top = n * (n + 1) // 2
    k1 = max(w for w in range(top + 1) if signed_rank_null_cdf(w, n) <= alpha / 2.0)
    k2 = min(w for w in range(top + 1) if signed_rank_null_cdf(w, n) >= 1.0 - alpha / 2.0)
    walsh = make_sample(_walsh_averages(sample.values))
    return region_from_gamma0(walsh, range(k1 + 1, k2 + 1))


def cr_sign(sample: SortedSample, alpha: float) -> Region:
    """Exact count-based region between mirrored order statistics.

    [x_(k1+1), x_(k2+1)) with k1 the largest count whose binomial CDF is at
    most alpha/2 (k1 = -1 when none, opening the region at -inf) and k2 the
    smallest count with CDF at least 1 - alpha/2 (k2 = n closes at +inf).
    Never infeasible; small n simply yields unbounded regions.
    """
    _check_alpha(alpha)
    n = sample.n
    k1 = -1
    for w in range(n + 1):
        if binom_cdf(w, n) <= alpha / 2.0:
            k1 = w
        else:
            break
    k2 = n
    for w in range(n + 1):
        if binom_cdf(w, n) >= 1.0 - alpha / 2.0:
            k2 = w
            break
    return region_from_gamma0(sample, range(k1 + 1, k2 + 1))


def kde_at_median(sample: SortedSample) -> float:
    """Gaussian kernel density estimate evaluated at the sample median.

    Bandwidth h = 0.9 * min(sd, IQR / 1.34) * n^(-1/5).  A zero bandwidth
    (no spread on the chosen scale) is degenerate.
    """
    n = sample.n
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    arr = sample.as_array()
    sd = float(np.std(arr, ddof=1))
    q75, q25 = np.percentile(arr, [75.0, 25.0])
    h = 0.9 * min(sd, (q75 - q25) / 1.34) * n ** (-0.2)
    if h <= 0.0:
        raise DegenerateDataError("zero bandwidth: sample has no usable spread")
    z = (sample.median - arr) / h
    return float(np.mean(np.exp(-0.5 * z * z)) / (h * math.sqrt(2.0 * math.pi)))


def cr_asymp_median(sample: SortedSample, alpha: float) -> Region:
    """Large-sample interval: median +- z / (2 sqrt(n) f_hat(median))."""
    _check_alpha(alpha)
    f_hat = kde_at_median(sample)
    half = norm_quantile(1.0 - alpha / 2.0) / (2.0 * math.sqrt(sample.n) * f_hat)
    m = sample.median
    return _closed(m - half, m + half)


@dataclass(frozen=True)
class BootstrapDistribution:
    """Sorted bootstrap medians plus the observed sample median."""

    medians: tuple[float, ...]
    observed_median: float

    @property
    def breps(self) -> int:
        return len(self.medians)

    def quantile(self, p: float) -> float:
        """Ceiling-index empirical quantile: the ceil(p * B)-th order statistic."""
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p must be in [0, 1], got {p}")
        idx = max(math.ceil(p * self.breps), 1)
        return self.medians[idx - 1]

    def cdf_at(self, x: float) -> float:
        """Fraction of bootstrap medians at or below x."""
        return bisect.bisect_right(self.medians, x) / self.breps


def bootstrap_medians(sample: SortedSample, breps: int, rng: RngStream) -> BootstrapDistribution:
    """Medians of ``breps`` with-replacement resamples, deterministic in rng."""
    if breps < 1:
        raise ValueError(f"breps must be >= 1, got {breps}")
    n = sample.n
    arr = sample.as_array()
    gen = rng.generator()
    idx = gen.integers(0, n, size=(breps, n))
    med = np.sort(np.median(arr[idx], axis=1))
    return BootstrapDistribution(tuple(float(v) for v in med), sample.median)


def jackknife_acceleration(sample: SortedSample, formula: str = "cubed") -> float:
    """Acceleration constant from leave-one-out medians.

    ``formula="cubed"`` is the standard estimate
    a = sum(d^3) / (6 * (sum(d^2))^(3/2)) with d_i the deviations of the
    leave-one-out medians from their mean.  ``formula="squared"`` is kept as a
    compatibility variant that squares instead of cubes the numerator terms.
    A zero denominator (all leave-one-out medians equal) yields 0.
    """
    if formula not in ("cubed", "squared"):
        raise ValueError(f"formula must be 'cubed' or 'squared', got {formula!r}")
    n = sample.n
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    arr = sample.as_array()
    loo = np.empty(n)
    for i in range(n):
        loo[i] = np.median(np.delete(arr, i))
    d = loo.mean() - loo
    denom = float(np.sum(d * d)) ** 1.5
    if denom == 0.0:
        return 0.0
    num = float(np.sum(d ** 3)) if formula == "cubed" else float(np.sum(d * d))
    return num / (6.0 * denom)


def _clamped_p0(boot: BootstrapDistribution) -> float:
    p0 = boot.cdf_at(boot.observed_median)
    lo = 1.0 / (2.0 * boot.breps)
    hi = 1.0 - lo
    if p0 < lo or p0 > hi:
        warnings.warn(
            "bootstrap tail probability clamped; bias correction is saturated",
            ClampedProbabilityWarning,
            stacklevel=3,
        )
        return min(max(p0, lo), hi)
    return p0


def cr_bootstrap(
    sample: SortedSample,
    alpha: float,
    boot: BootstrapDistribution,
    variant: str,
    acceleration_formula: str = "cubed",
) -> Region:
    """One of the five bootstrap intervals, as a closed interval.

    Parameters
    ----------
    sample : SortedSample
        The observed data (used by the BCa jackknife).
    alpha : float
        Miscoverage level.
    boot : BootstrapDistribution
        Precomputed bootstrap medians; share one across variants to compare
        them on identical resamples.
    variant : str
        One of "basic", "se", "percentile", "bc", "bca".
    acceleration_formula : str
        Passed through to jackknife_acceleration for the BCa variant.
    """
    _check_alpha(alpha)
    if variant not in BOOTSTRAP_VARIANTS:
        raise ValueError(f"variant must be one of {BOOTSTRAP_VARIANTS}, got {variant!r}")
    m = boot.observed_median
    if variant == "basic":
        lo = 2.0 * m - boot.quantile(1.0 - alpha / 2.0)
        hi = 2.0 * m - boot.quantile(alpha / 2.0)
        return _closed(lo, hi)
    if variant == "se":
        if sample.n < 2:
            raise ValueError(f"need n >= 2, got {sample.n}")
        se = float(np.std(np.asarray(boot.medians), ddof=1))
        if se == 0.0:
            return _closed(m, m)
        half = t_quantile(1.0 - alpha / 2.0, sample.n - 1) * se
        return _closed(m - half, m + half)
    if variant == "percentile":
        return _closed(boot.quantile(alpha / 2.0), boot.quantile(1.0 - alpha / 2.0))

    z_lo = norm_quantile(alpha / 2.0)
    z_hi = norm_quantile(1.0 - alpha / 2.0)
    z0 = norm_quantile(_clamped_p0(boot))
    if variant == "bc":
        p_lo = float(norm_cdf(2.0 * z0 + z_lo))
        p_hi = float(norm_cdf(2.0 * z0 + z_hi))
    else:  # bca
        a = jackknife_acceleration(sample, acceleration_formula)
        p_lo = float(norm_cdf(z0 + (z0 + z_lo) / (1.0 - a * (z0 + z_lo))))
        p_hi = float(norm_cdf(z0 + (z0 + z_hi) / (1.0 - a * (z0 + z_hi))))
    return _closed(boot.quantile(p_lo), boot.quantile(p_hi))
