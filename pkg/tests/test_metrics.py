"""Tests for region and trace agreement metrics.

region_f1 is checked against a boolean-mask oracle: paint each region set
onto a per-sample mask and compute F1 from the mask intersection. CCC and
Spearman are checked against from-the-definition loops and scipy.
"""

import warnings

import numpy as np
import pytest
from numpy.random import default_rng
from scipy import stats

from ordaffect.errors import LengthMismatch, RegionsOverlap
from ordaffect.inflection import InflectionRegion
from ordaffect.metrics import (
    ccc,
    delta_te,
    dtw_similarity,
    region_f1,
    spearman_rho,
    temporal_characteristics,
    time_efficiency,
)
from ordaffect.trace import AnnotationTrace, TimeInterval


def _mask(regions, total_len):
    m = np.zeros(total_len, dtype=bool)
    for iv in regions:
        m[iv.start_idx:iv.end_idx] = True
    return m


def mask_f1(gt, pred, total_len):
    gm, pm = _mask(gt, total_len), _mask(pred, total_len)
    if not gm.any() and not pm.any():
        return 1.0
    if not gm.any() or not pm.any():
        return 0.0
    inter = int((gm & pm).sum())
    return 2.0 * inter / (int(gm.sum()) + int(pm.sum()))


def _random_regions(rng, total_len, max_regions=6):
    """Sorted, disjoint (possibly touching) half-open intervals."""
    out = []
    cursor = 0
    for _ in range(int(rng.integers(0, max_regions + 1))):
        if cursor >= total_len:
            break
        start = int(rng.integers(cursor, total_len))
        end = int(rng.integers(start + 1, total_len + 1))
        out.append(TimeInterval(start, end))
        cursor = end + int(rng.integers(0, 4))
    return out


class TestRegionF1:
    def test_hand_worked_overlap(self):
        # |gt| = 4, |pred| = 4, intersection = [2, 4) of size 2.
        gt = [TimeInterval(0, 4)]
        pred = [TimeInterval(2, 6)]
        assert region_f1(gt, pred, 10) == 2.0 * 2 / (4 + 4)

    def test_identical_sets_score_one(self):
        regs = [TimeInterval(1, 4), TimeInterval(8, 12)]
        assert region_f1(regs, regs, 20) == 1.0

    def test_disjoint_sets_score_zero(self):
        assert region_f1([TimeInterval(0, 5)], [TimeInterval(5, 10)], 10) == 0.0

    def test_both_empty_is_one(self):
        assert region_f1([], [], 50) == 1.0

    def test_one_empty_is_zero(self):
        assert region_f1([], [TimeInterval(0, 3)], 50) == 0.0
        assert region_f1([TimeInterval(0, 3)], [], 50) == 0.0

    def test_matches_mask_oracle(self):
        rng = default_rng(8201)
        for _ in range(400):
            total_len = int(rng.integers(1, 201))
            gt = _random_regions(rng, total_len)
            pred = _random_regions(rng, total_len)
            got = region_f1(gt, pred, total_len)
            want = mask_f1(gt, pred, total_len)
            assert got == pytest.approx(want, abs=1e-15), (gt, pred, total_len)

    def test_unsorted_input_allowed(self):
        gt = [TimeInterval(8, 12), TimeInterval(1, 4)]
        pred = [TimeInterval(2, 9)]
        want = mask_f1(gt, pred, 20)
        assert region_f1(gt, pred, 20) == pytest.approx(want, abs=1e-15)

    def test_region_objects_with_interval_attribute(self):
        gt = [InflectionRegion(TimeInterval(0, 4), source="gt")]
        pred = [InflectionRegion(TimeInterval(2, 6), source="model")]
        assert region_f1(gt, pred, 10) == 0.5

    def test_overlapping_regions_rejected(self):
        with pytest.raises(RegionsOverlap):
            region_f1([TimeInterval(0, 5), TimeInterval(4, 8)], [], 10)

    def test_out_of_bounds_rejected(self):
        with pytest.raises(ValueError):
            region_f1([TimeInterval(0, 11)], [], 10)


class TestTimeEfficiency:
    def test_fraction_uncovered(self):
        regs = [TimeInterval(0, 10), TimeInterval(20, 30)]
        assert time_efficiency(regs, 40) == (40 - 20) / 40

    def test_no_regions_is_one(self):
        assert time_efficiency([], 25) == 1.0

    def test_full_coverage_is_zero(self):
        assert time_efficiency([TimeInterval(0, 25)], 25) == 0.0

    def test_bad_total_len(self):
        with pytest.raises(ValueError):
            time_efficiency([], 0)


class TestDeltaTE:
    def test_mean_absolute_gap(self):
        assert delta_te([0.5, 0.8], [0.7, 0.6]) == pytest.approx(0.2)

    def test_zero_for_identical(self):
        assert delta_te([0.1, 0.2, 0.3], [0.1, 0.2, 0.3]) == 0.0

    def test_shape_mismatch(self):
        with pytest.raises(LengthMismatch):
            delta_te([0.1, 0.2], [0.1])


def naive_ccc(x, y):
    n = len(x)
    mx = sum(x) / n
    my = sum(y) / n
    vx = sum((v - mx) ** 2 for v in x) / n
    vy = sum((v - my) ** 2 for v in y) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(x, y)) / n
    return 2.0 * cov / (vx + vy + (mx - my) ** 2)


class TestCCC:
    def test_matches_naive_definition(self):
        rng = default_rng(8202)
        for _ in range(100):
            n = int(rng.integers(2, 60))
            x = rng.normal(size=n)
            y = rng.normal(size=n)
            assert abs(ccc(x, y) - naive_ccc(x.tolist(), y.tolist())) < 1e-12

    def test_perfect_agreement(self):
        x = np.array([0.0, 1.0, 3.0, -2.0])
        assert ccc(x, x) == 1.0

    def test_penalizes_scale_and_shift(self):
        # Pearson of (x, 2x + 1) is 1 but CCC must drop below it.
        rng = default_rng(8203)
        x = rng.normal(size=50)
        assert ccc(x, 2.0 * x + 1.0) < 1.0

    def test_sign_flip_negative(self):
        rng = default_rng(8204)
        x = rng.normal(size=30)
        assert ccc(x, -x) < 0.0

    def test_both_constant_warns_and_zero(self):
        with pytest.warns(RuntimeWarning):
            assert ccc(np.ones(5), np.full(5, 3.0)) == 0.0

    def test_one_constant_is_zero_without_warning(self):
        rng = default_rng(8205)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            assert ccc(np.ones(10), rng.normal(size=10)) == 0.0

    def test_errors(self):
        with pytest.raises(LengthMismatch):
            ccc([1.0, 2.0], [1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            ccc([1.0], [2.0])

    def test_accepts_trace_objects(self):
        rng = default_rng(8206)
        x = rng.normal(size=20)
        y = rng.normal(size=20)
        assert ccc(AnnotationTrace(x, 4), AnnotationTrace(y, 4)) == ccc(x, y)


class TestSpearman:
    def test_matches_scipy_with_ties(self):
        rng = default_rng(8207)
        for _ in range(100):
            n = int(rng.integers(3, 60))
            # integer-valued draws force plenty of rank ties
            x = rng.integers(0, 6, size=n).astype(float)
            y = rng.integers(0, 6, size=n).astype(float)
            if np.all(x == x[0]) or np.all(y == y[0]):
                continue
            want = stats.spearmanr(x, y).statistic
            assert abs(spearman_rho(x, y) - want) < 1e-12

    def test_monotone_nonlinear_is_one(self):
        x = np.array([-3.0, -1.0, 0.5, 2.0, 4.0])
        assert spearman_rho(x, x ** 3) == pytest.approx(1.0, abs=1e-15)

    def test_reversed_is_minus_one(self):
        x = np.arange(10.0)
        assert spearman_rho(x, -x) == pytest.approx(-1.0, abs=1e-15)

    def test_constant_input_warns_and_zero(self):
        with pytest.warns(RuntimeWarning):
            assert spearman_rho(np.ones(5), np.arange(5.0)) == 0.0

    def test_errors(self):
        with pytest.raises(LengthMismatch):
            spearman_rho([1.0, 2.0], [1.0])
        with pytest.raises(ValueError):
            spearman_rho([1.0], [2.0])


class TestDtwSimilarity:
    def test_identical_shape_is_one(self):
        rng = default_rng(8208)
        x = rng.normal(size=40)
        # dtw similarity normalizes per trace, so affine copies score 1
        assert dtw_similarity(x, 3.0 * x + 5.0) == 1.0

    def test_bounded(self):
        rng = default_rng(8209)
        for _ in range(30):
            x = rng.normal(size=int(rng.integers(2, 40)))
            y = rng.normal(size=int(rng.integers(2, 40)))
            s = dtw_similarity(x, y)
            assert 0.0 < s <= 1.0

    def test_symmetric(self):
        rng = default_rng(8210)
        x = rng.normal(size=25)
        y = rng.normal(size=31)
        assert dtw_similarity(x, y) == dtw_similarity(y, x)

    def test_opposite_trend_scores_below_noisy_copy(self):
        rng = default_rng(8212)
        t = np.linspace(0.0, 1.0, 64)
        noisy = t + rng.normal(0.0, 0.05, size=64)
        assert dtw_similarity(t, 1.0 - t) < dtw_similarity(t, noisy)

    def test_matches_formula(self):
        from ordaffect.clustering import dtw_distance

        rng = default_rng(8211)
        x = rng.normal(size=20)
        y = rng.normal(size=30)

        def norm(v):
            return (v - v.min()) / (v.max() - v.min())

        want = 1.0 / (1.0 + dtw_distance(norm(x), norm(y)) / 30)
        assert dtw_similarity(x, y) == want


class TestTemporalCharacteristics:
    def test_hand_worked_table(self):
        # session a: clips of 8 and 16 samples at 4 Hz -> 2.0 s and 4.0 s
        # session b: one clip of 24 samples -> exactly 6.0 s (not short)
        per_session = [
            ("a", [TimeInterval(0, 8), TimeInterval(20, 36)], 100),
            ("b", [TimeInterval(10, 34)], 40),
        ]
        out = temporal_characteristics(per_session, 4)
        rows = {r.session_id: r for r in out["rows"]}
        a, b = rows["a"], rows["b"]
        assert a.clip_count == 2
        assert a.total_s == 6.0
        assert a.mean_s == 3.0
        assert a.short_count == 2  # both strictly under 6 s
        assert a.te == (100 - 24) / 100
        assert a.te_over_half is True
        assert b.clip_count == 1
        assert b.total_s == 6.0
        assert b.short_count == 0  # exactly 6 s is not short
        assert b.te == (40 - 24) / 40
        assert b.te_over_half is False
        assert out["te_over_half_sessions"] == 1

    def test_aggregate_mean_sd_formatting(self):
        per_session = [
            ("a", [TimeInterval(0, 24)], 100),   # 6 s
            ("b", [TimeInterval(0, 40)], 100),   # 10 s
        ]
        out = temporal_characteristics(per_session, 4)
        agg = out["aggregate"]["total_s"]
        assert agg["mean"] == 8.0
        assert agg["sd"] == 2.0  # population sd of {6, 10}
        assert agg["formatted"] == "8.00 ± 2.00"

    def test_short_clip_threshold_configurable(self):
        per_session = [("a", [TimeInterval(0, 8)], 50)]  # 2 s clip
        strict = temporal_characteristics(per_session, 4, short_clip_s=1.0)
        loose = temporal_characteristics(per_session, 4, short_clip_s=3.0)
        assert strict["rows"][0].short_count == 0
        assert loose["rows"][0].short_count == 1

    def test_empty_session_list(self):
        out = temporal_characteristics([], 4)
        assert out["rows"] == []
        assert out["aggregate"] == {}
        assert out["te_over_half_sessions"] == 0

    def test_session_without_clips(self):
        out = temporal_characteristics([("a", [], 20)], 4)
        row = out["rows"][0]
        assert row.clip_count == 0
        assert row.total_s == 0.0
        assert row.mean_s == 0.0
        assert row.te == 1.0

    def test_fractional_rate(self):
        from fractions import Fraction

        per_session = [("a", [TimeInterval(0, 3)], 10)]
        out = temporal_characteristics(per_session, Fraction(1, 2))
        assert out["rows"][0].total_s == 6.0
