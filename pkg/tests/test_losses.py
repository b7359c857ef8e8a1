"""Ordinal loss oracles: finite-difference gradients and probability laws.

The analytic gradients are checked against central finite differences
(h = 1e-5) with relative error under 1e-5; the class probabilities are
checked for normalization, monotonicity, and collapse of the middle class
as the cutpoints close.
"""

import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import rel_err
from ordaffect.losses import (Cutpoints, bce_grad_pair, bce_loss, bce_prob,
                              cross_entropy, oce_grad_pair, oce_loss,
                              oce_probs, softmax, total_loss)

H = 1e-5
TOL = 1e-5


class TestCutpoints:
    def test_defaults(self):
        c = Cutpoints()
        assert (c.c0, c.c1) == (-1.0, 1.0)

    def test_order_enforced(self):
        with pytest.raises(ValueError):
            Cutpoints(1.0, -1.0)
        with pytest.raises(ValueError):
            Cutpoints(0.5, 0.5)


class TestBce:
    def test_prob_is_sigmoid(self):
        np.testing.assert_allclose(bce_prob(0.0), 0.5)
        np.testing.assert_allclose(bce_prob(np.log(3)), 0.75)

    def test_loss_matches_nll_definition(self, rng):
        # the naive -log(sigmoid) oracle itself loses relative precision as
        # the loss approaches 0, so the tolerance sits above oracle noise
        for _ in range(50):
            p_i, p_j = rng.normal(0, 3, 2)
            p = p_j - p_i
            sig = 1.0 / (1.0 + np.exp(-p))
            assert rel_err(bce_loss(p_i, p_j, 1), -np.log(sig)) < 1e-9
            assert rel_err(bce_loss(p_i, p_j, 0), -np.log(1 - sig)) < 1e-9

    def test_loss_stable_in_tails(self):
        # naive -log sigma overflows here; softplus form stays finite
        assert np.isfinite(bce_loss(0.0, -1000.0, 1))
        assert abs(bce_loss(0.0, -1000.0, 1) - 1000.0) < 1e-9
        assert bce_loss(0.0, 1000.0, 1) == pytest.approx(0.0, abs=1e-12)

    def test_gradient_against_finite_differences(self):
        # 200 seeded configurations, relative error < 1e-5
        rng = np.random.default_rng(2024)
        worst = 0.0
        for _ in range(200):
            p_i, p_j = rng.normal(0, 4, 2)
            y = int(rng.integers(0, 2))
            g_i, g_j = bce_grad_pair(p_i, p_j, y)
            num_i = (bce_loss(p_i + H, p_j, y) - bce_loss(p_i - H, p_j, y)) / (2 * H)
            num_j = (bce_loss(p_i, p_j + H, y) - bce_loss(p_i, p_j - H, y)) / (2 * H)
            worst = max(worst, rel_err(g_i, num_i), rel_err(g_j, num_j))
        assert worst < TOL

    def test_broadcasts(self):
        p_i = np.zeros(4)
        p_j = np.array([-1.0, 0.0, 1.0, 2.0])
        y = np.array([0, 1, 0, 1])
        assert bce_loss(p_i, p_j, y).shape == (4,)
        g_i, g_j = bce_grad_pair(p_i, p_j, y)
        np.testing.assert_array_equal(g_i, -g_j)


class TestOceProbs:
    def test_sum_to_one_large_grid(self):
        rng = np.random.default_rng(7)
        p = rng.uniform(-60, 60, 100_000)
        c0 = rng.uniform(-10, 5, 100_000)
        worst = 0.0
        for ci in (Cutpoints(-1, 1), Cutpoints(-0.01, 0.01), Cutpoints(-8, 3)):
            p0, p1, p2 = oce_probs(p, ci)
            worst = max(worst, np.abs(p0 + p1 + p2 - 1.0).max())
        assert worst < 1e-12
        del c0

    def test_edge_classes_monotone(self):
        # strict on the range where float64 sigmoids are not saturated at
        # exactly 0.0 or 1.0 (beyond |x| ~ 37 adjacent values collide)
        p = np.linspace(-30, 30, 20_001)
        p0, _, p2 = oce_probs(p)
        assert np.all(np.diff(p0) < 0)  # strictly decreasing
        assert np.all(np.diff(p2) > 0)  # strictly increasing

    def test_edge_classes_monotone_nonstrict_in_saturated_tails(self):
        p = np.linspace(-80, 80, 10_001)
        p0, _, p2 = oce_probs(p)
        assert np.all(np.diff(p0) <= 0)
        assert np.all(np.diff(p2) >= 0)

    def test_middle_class_collapses_with_cutpoints(self):
        cuts = Cutpoints(1.0 - 1e-8, 1.0)
        p = np.linspace(-20, 20, 4001)
        _, p1, _ = oce_probs(p, cuts)
        assert p1.max() < 1e-8

    def test_middle_class_peaks_between_cutpoints(self):
        p = np.linspace(-6, 6, 1201)
        _, p1, _ = oce_probs(p, Cutpoints(-1, 1))
        assert abs(p[np.argmax(p1)]) < 1e-9  # symmetric cuts peak at 0

    def test_matches_naive_difference_in_safe_range(self):
        p = np.linspace(-5, 5, 101)
        cuts = Cutpoints(-1, 1)
        p0, p1, p2 = oce_probs(p, cuts)
        sig = lambda x: 1.0 / (1.0 + np.exp(-x))
        np.testing.assert_allclose(p0, sig(cuts.c0 - p), rtol=1e-12)
        np.testing.assert_allclose(p1, sig(cuts.c1 - p) - sig(cuts.c0 - p),
                                   rtol=1e-9, atol=1e-15)
        np.testing.assert_allclose(p2, 1.0 - sig(cuts.c1 - p), rtol=1e-9)

    def test_no_catastrophic_cancellation_in_tail(self):
        # at p = 40 the naive difference of sigmoids is 0.0; the product
        # form keeps full relative precision
        _, p1, _ = oce_probs(40.0, Cutpoints(-1, 1))
        assert p1 > 0.0
        # closed form: P1 = sigma(c1-p) sigma(p-c0) (1 - e^{c0-c1})
        sig = lambda x: 1.0 / (1.0 + np.exp(-x))
        expected = sig(1 - 40) * sig(40 + 1) * (1 - np.exp(-2))
        assert rel_err(p1, expected) < 1e-12


class TestOceLoss:
    def test_equals_nll_of_probs(self, rng):
        for _ in range(100):
            p_i, p_j = rng.normal(0, 3, 2)
            cuts = Cutpoints(*np.sort(rng.normal(0, 2, 2)))
            probs = oce_probs(p_j - p_i, cuts)
            for cls in (0, 1, 2):
                assert rel_err(oce_loss(p_i, p_j, cls, cuts),
                               -np.log(probs[cls])) < 1e-10

    def test_gradient_against_finite_differences(self):
        # 200 seeded configurations, relative error < 1e-5
        rng = np.random.default_rng(4242)
        worst = 0.0
        for _ in range(200):
            p_i, p_j = rng.normal(0, 4, 2)
            cuts = Cutpoints(*np.sort(rng.uniform(-3, 3, 2)))
            if cuts.c1 - cuts.c0 < 1e-3:
                cuts = Cutpoints(cuts.c0, cuts.c0 + 1e-3)
            cls = int(rng.integers(0, 3))
            g_i, g_j = oce_grad_pair(p_i, p_j, cls, cuts)
            num_i = (oce_loss(p_i + H, p_j, cls, cuts)
                     - oce_loss(p_i - H, p_j, cls, cuts)) / (2 * H)
            num_j = (oce_loss(p_i, p_j + H, cls, cuts)
                     - oce_loss(p_i, p_j - H, cls, cuts)) / (2 * H)
            worst = max(worst, rel_err(g_i, num_i), rel_err(g_j, num_j))
        assert worst < TOL

    def test_swap_symmetry_with_symmetric_cuts(self, rng):
        # swapping the pair flips the sign of p_ij: "greater" <-> "less"
        cuts = Cutpoints(-1.5, 1.5)
        for _ in range(50):
            p_i, p_j = rng.normal(0, 3, 2)
            assert oce_loss(p_i, p_j, 2, cuts) == pytest.approx(
                oce_loss(p_j, p_i, 0, cuts), rel=1e-12)
            assert oce_loss(p_i, p_j, 1, cuts) == pytest.approx(
                oce_loss(p_j, p_i, 1, cuts), rel=1e-12)

    def test_clamp_warns_and_caps(self):
        with pytest.warns(RuntimeWarning):
            capped = oce_loss(0.0, 1e6, 0)
        assert np.isfinite(capped)
        assert capped <= -np.log(1e-300) + 1e-9

    def test_vectorized(self):
        p_i = np.zeros(3)
        p_j = np.array([-3.0, 0.0, 3.0])
        cls = np.array([0, 1, 2])
        out = oce_loss(p_i, p_j, cls)
        assert out.shape == (3,)
        assert np.all(np.isfinite(out))


class TestSoftmaxCrossEntropy:
    def test_softmax_normalizes(self, rng):
        z = rng.normal(0, 10, (8, 5))
        s = softmax(z)
        np.testing.assert_allclose(s.sum(axis=-1), 1.0, rtol=1e-12)
        assert np.all(s > 0)

    def test_softmax_shift_invariant(self, rng):
        z = rng.normal(0, 3, 7)
        np.testing.assert_allclose(softmax(z), softmax(z + 123.0), rtol=1e-12)

    def test_softmax_extreme_logits_stable(self):
        s = softmax(np.array([1000.0, 0.0, -1000.0]))
        assert np.all(np.isfinite(s))
        assert s[0] == pytest.approx(1.0)

    def test_cross_entropy_1d_and_2d(self):
        q = np.array([0.2, 0.5, 0.3])
        assert cross_entropy(q, 1) == pytest.approx(-np.log(0.5), rel=1e-12)
        q2 = np.array([[0.2, 0.8], [0.9, 0.1]])
        out = cross_entropy(q2, np.array([1, 0]))
        np.testing.assert_allclose(out, [-np.log(0.8), -np.log(0.9)], rtol=1e-12)

    def test_cross_entropy_floor(self):
        q = np.array([1.0, 0.0])
        assert np.isfinite(cross_entropy(q, 1))


class TestTotalLoss:
    @staticmethod
    def _item(p_i, p_j, cls, q_i, q_j, c):
        return {"p_i": p_i, "p_j": p_j, "cls": cls, "q_i": q_i, "q_j": q_j, "c": c}

    def test_hand_computed_single_item(self):
        q = np.array([0.5, 0.25, 0.25])
        item = self._item(0.0, 0.0, 1, q, q, 0)
        probs = oce_probs(0.0)
        expected = -np.log(probs[1]) + 0.001 * (2 * -np.log(0.5))
        assert total_loss([item]) == pytest.approx(expected, rel=1e-12)

    def test_mean_reduction(self):
        q = np.array([0.9, 0.1])
        a = self._item(0.0, 2.0, 2, q, q, 0)
        one = total_loss([a])
        two = total_loss([a, a])
        assert two == pytest.approx(one, rel=1e-12)

    def test_alpha_zero_skips_aux(self):
        item = self._item(0.0, 1.0, 2, None, None, None)
        expected = oce_loss(0.0, 1.0, 2)
        assert total_loss([item], alpha=0.0) == pytest.approx(expected, rel=1e-12)

    def test_empty_batch_rejected(self):
        with pytest.raises(ValueError):
            total_loss([])

    def test_mismatched_aux_rejected(self):
        from ordaffect.errors import DimensionMismatch
        item = self._item(0.0, 1.0, 2, np.array([0.5, 0.5]),
                          np.array([0.3, 0.3, 0.4]), 0)
        with pytest.raises(DimensionMismatch):
            total_loss([item])

    def test_aux_label_out_of_range_rejected(self):
        from ordaffect.errors import DimensionMismatch
        q = np.array([0.5, 0.5])
        with pytest.raises(DimensionMismatch):
            total_loss([self._item(0.0, 1.0, 2, q, q, 5)])


class TestHypothesisProperties:
    @given(st.floats(-50, 50), st.floats(-5, 5), st.floats(0.01, 5))
    @settings(max_examples=200, deadline=None)
    def test_probs_always_normalized(self, p, c0, width):
        p0, p1, p2 = oce_probs(p, Cutpoints(c0, c0 + width))
        assert abs(p0 + p1 + p2 - 1.0) < 1e-12
        assert min(p0, p1, p2) >= 0.0

    @given(st.floats(-20, 20), st.floats(-20, 20))
    @settings(max_examples=200, deadline=None)
    def test_bce_grad_antisymmetric(self, p_i, p_j):
        g_i, g_j = bce_grad_pair(p_i, p_j, 1)
        assert g_i == -g_j
