"""Expected-spacing profiles: closed forms, data estimates, quadrature."""

import math

import numpy as np
import pytest

from mediancr.distributions import (
    RngStream,
    cauchy,
    exponential,
    logistic,
    normal,
    normal_mixture,
    sample,
    uniform,
)
from mediancr.errors import DegenerateDataError
from mediancr.regions import make_sample
from mediancr.spacings import (
    LkProfile,
    lk_edf,
    lk_exponential,
    lk_mom,
    lk_numeric,
    lk_numeric_profile,
    lk_uniform,
)

# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def test_uniform_profile_values():
    p = lk_uniform(4, half_width=1.0)
    assert p.n == 4
    assert p.l == (0.4, 0.4, 0.4, 0.4, 0.4)
    assert p.exact_ratio == (1, 4, 6, 4, 1)
    assert p.is_exact


def test_uniform_profile_scales_with_half_width():
    assert lk_uniform(4, half_width=3.0).l == tuple(5 * [6.0 / 5.0])
    # Ratios are scale free.
    assert lk_uniform(4, half_width=3.0).exact_ratio == lk_uniform(4).exact_ratio


def test_exponential_profile_values():
    p = lk_exponential(3, rate=1.0)
    assert p.l == (1.0 / 3.0, 0.5, 1.0, math.inf)
    assert p.exact_ratio == (1, 2, 1, 0)
    q = lk_exponential(2, rate=2.0)
    assert q.l == (0.25, 0.5, math.inf)


def test_exponential_profile_n10_ratios():
    # C(9, k) for k = 0..9, then 0 for the infinite top spacing.
    assert lk_exponential(10).exact_ratio == (1, 9, 36, 84, 126, 126, 84, 36, 9, 1, 0)


def test_profile_ratio_floats_follow_exact():
    p = lk_exponential(10)
    expected = np.array([1, 9, 36, 84, 126, 126, 84, 36, 9, 1, 0], dtype=float)
    top = p.ratio[0]
    np.testing.assert_allclose(np.array(p.ratio) / top, expected, rtol=1e-12)


def test_profile_validation():
    with pytest.raises(ValueError):
        LkProfile(n=2, l=(1.0, 1.0), ratio=(1.0, 1.0, 1.0))
    with pytest.raises(ValueError):
        LkProfile(n=2, l=(1.0, -1.0, 1.0), ratio=(1.0, 1.0, 1.0))


# ---------------------------------------------------------------------------
# Data-driven estimates
# ---------------------------------------------------------------------------


def test_mom_profile_is_spacings_with_infinite_ends():
    s = make_sample([1.0, 3.0, 4.0])
    p = lk_mom(s)
    assert p.l == (math.inf, 2.0, 1.0, math.inf)
    assert p.ratio[0] == 0.0 and p.ratio[3] == 0.0
    # r(k) = P{B = k} / l(k) with B ~ Binomial(3, 1/2).
    assert p.ratio[1] == pytest.approx(0.375 / 2.0)
    assert p.ratio[2] == pytest.approx(0.375 / 1.0)


def test_mom_rejects_tied_interior():
    with pytest.raises(DegenerateDataError):
        lk_mom(make_sample([1.0, 1.0, 2.0]))


def test_mom_n2_has_no_interior_constraint():
    # With n = 2 every spacing estimate is infinite except the middle one.
    p = lk_mom(make_sample([0.0, 1.0]))
    assert p.l == (math.inf, 1.0, math.inf)


def test_edf_profile_n2_example():
    # Single spacing d = x_(2) - x_(1) = 1: l(k) = C(2,k) (1/2)^(2-k+k) d ... in
    # closed form the weights reduce to (1/4, 1/2, 1/4).
    p = lk_edf(make_sample([0.0, 1.0]))
    assert p.l == (0.25, 0.5, 0.25)


def test_edf_profile_all_finite_and_scale_equivariant():
    s = make_sample([0.0, 0.5, 1.25, 3.0, 7.0])
    p = lk_edf(s)
    assert all(math.isfinite(v) and v > 0 for v in p.l)
    doubled = lk_edf(make_sample([0.0, 1.0, 2.5, 6.0, 14.0]))
    np.testing.assert_allclose(doubled.l, 2.0 * np.array(p.l), rtol=1e-12)


def test_edf_profile_shift_invariant():
    a = lk_edf(make_sample([1.0, 2.0, 4.0, 8.0]))
    b = lk_edf(make_sample([101.0, 102.0, 104.0, 108.0]))
    np.testing.assert_allclose(a.l, b.l, rtol=1e-12)


def test_edf_handles_all_tied_sample():
    # All mass at one point: every estimated spacing is zero.
    p = lk_edf(make_sample([2.0, 2.0, 2.0]))
    assert p.l == (0.0, 0.0, 0.0, 0.0)


def test_estimates_require_n_at_least_two():
    with pytest.raises(ValueError):
        lk_mom(make_sample([1.0]))
    with pytest.raises(ValueError):
        lk_edf(make_sample([1.0]))


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------


def test_numeric_matches_uniform_closed_form():
    for n in (2, 5, 9):
        dist = uniform(-1.0, 1.0)
        for k in range(n + 1):
            assert lk_numeric(dist, n, k) == pytest.approx(2.0 / (n + 1), abs=1e-9)


def test_numeric_matches_exponential_closed_form():
    dist = exponential(1.0)
    for n in (3, 6, 10):
        for k in range(n):
            assert lk_numeric(dist, n, k) == pytest.approx(1.0 / (n - k), abs=1e-9)
        assert lk_numeric(dist, n, n) == math.inf


def test_numeric_exponential_frozen_value():
    assert lk_numeric(exponential(1.0), 10, 3) == pytest.approx(1.0 / 7.0, abs=1e-12)


def test_numeric_divergence_flags():
    # Heavy Cauchy tails push the two extreme spacings on each side to +inf;
    # lighter tails diverge only at the outermost spacing.
    c = cauchy()
    assert lk_numeric(c, 8, 0) == math.inf
    assert lk_numeric(c, 8, 1) == math.inf
    assert lk_numeric(c, 8, 7) == math.inf
    assert lk_numeric(c, 8, 8) == math.inf
    assert lk_numeric(c, 8, 2) == pytest.approx(1.4274, abs=2e-4)
    nrm = normal()
    assert lk_numeric(nrm, 8, 0) == math.inf
    assert lk_numeric(nrm, 8, 8) == math.inf
    assert math.isfinite(lk_numeric(nrm, 8, 1))
    lgt = logistic()
    assert lk_numeric(lgt, 6, 0) == math.inf
    assert math.isfinite(lk_numeric(lgt, 6, 1))


def test_numeric_profile_shape():
    p = lk_numeric_profile(normal(), 5)
    assert p.n == 5
    assert p.l[0] == math.inf and p.l[5] == math.inf
    assert all(math.isfinite(v) for v in p.l[1:5])
    # Symmetric distribution: interior spacings mirror.
    assert p.l[1] == pytest.approx(p.l[4], rel=1e-8)
    assert p.l[2] == pytest.approx(p.l[3], rel=1e-8)


def test_numeric_against_monte_carlo_spacings():
    # 200k samples of sorted normal data, n = 5: the mean interior spacings
    # must straddle the quadrature values within 4 standard errors.
    n, reps = 5, 200_000
    rng = RngStream(77, ("mc-spacing",))
    x = np.sort(
        sample(normal(), n * reps, rng).reshape(reps, n), axis=1
    )
    gaps = np.diff(x, axis=1)
    for k in range(1, n):
        est = gaps[:, k - 1].mean()
        se = gaps[:, k - 1].std(ddof=1) / math.sqrt(reps)
        assert abs(lk_numeric(normal(), n, k) - est) <= 4.0 * se


def test_numeric_domain():
    with pytest.raises(ValueError):
        lk_numeric(normal(), 0, 0)
    with pytest.raises(ValueError):
        lk_numeric(normal(), 5, 6)
    with pytest.raises(ValueError):
        lk_numeric(normal(), 5, -1)


def test_study_mixture_profile_is_asymmetric():
    # The unequal-variance two-component mixture used in the simulation study
    # is not symmetric about its median, and its spacing profile shows it:
    # ratios do not mirror. Guard against "optimizing" this into symmetry.
    mix = normal_mixture(0.6, -5.0, 3.0, 5.0, 2.0)
    p = lk_numeric_profile(mix, 8)
    vals = np.array([v for v in p.ratio if math.isfinite(v)])
    top = vals.max()
    asym = max(
        abs(p.ratio[k] - p.ratio[8 - k]) / top
        for k in range(1, 8)
        if math.isfinite(p.ratio[k]) and math.isfinite(p.ratio[8 - k])
    )
    assert asym > 1e-3


def test_symmetric_mixture_profile_mirrors():
    mix = normal_mixture(0.5, -5.0, 3.0, 5.0, 3.0)
    p = lk_numeric_profile(mix, 8)
    for k in range(9):
        lo, hi = p.l[k], p.l[8 - k]
        if math.isinf(lo) or math.isinf(hi):
            assert lo == hi
        else:
            assert lo == pytest.approx(hi, rel=1e-7)
