"""Segment windows and ordinal pair construction."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ordaffect.errors import NoGroundTruth, SessionTooShort
from ordaffect.pairing import (FIRST_INDEX, WINDOW_FRAMES, PairSample,
                               build_pairs, build_segments, label_to_class,
                               segment_matrix)
from ordaffect.sessions import Session
from ordaffect.trace import AnnotationTrace


def make_session(T, d_f=3, gt_values=None, seed=0, d_b=2):
    rng = np.random.default_rng(seed)
    feats = rng.standard_normal((T, d_f))
    names = tuple(f"f{k}" for k in range(d_f))
    bio = rng.standard_normal(d_b)
    gt = None if gt_values is None else AnnotationTrace(np.asarray(gt_values), 4)
    return Session("s0", 4, feats, names, bio, tuple(f"b{k}" for k in range(d_b)), gt)


class TestConstants:
    def test_window_and_first_index(self):
        assert WINDOW_FRAMES == 12
        assert FIRST_INDEX == 13

    def test_label_to_class(self):
        assert label_to_class(-1) == 0
        assert label_to_class(0) == 1
        assert label_to_class(1) == 2


class TestBuildSegments:
    def test_count_is_t_minus_12(self):
        for T in (13, 14, 20, 100):
            assert len(build_segments(make_session(T))) == T - 12

    def test_frames_are_trailing_window(self):
        sess = make_session(20)
        segs = build_segments(sess)
        assert segs[0].index_i == 13
        assert segs[-1].index_i == 20
        for seg in segs:
            i = seg.index_i
            np.testing.assert_array_equal(seg.frames, sess.features[i - 12:i])
            np.testing.assert_array_equal(seg.biography, sess.biography)

    def test_min_length_boundary(self):
        assert len(build_segments(make_session(13))) == 1
        with pytest.raises(SessionTooShort):
            build_segments(make_session(12))


class TestSegmentMatrix:
    def test_matches_per_segment_ravel(self):
        # naive loop is the oracle for the strided construction
        for T, d_f in ((13, 1), (17, 3), (40, 5)):
            sess = make_session(T, d_f=d_f, seed=T)
            mat = segment_matrix(sess)
            segs = build_segments(sess)
            assert mat.shape == (T - 12, 12 * d_f)
            for r, seg in enumerate(segs):
                np.testing.assert_array_equal(mat[r], seg.frames.ravel())

    def test_row_index_correspondence(self):
        sess = make_session(30, d_f=2)
        mat = segment_matrix(sess)
        # row r corresponds to 1-based index r + 13
        r = 7
        i = r + 13
        np.testing.assert_array_equal(mat[r], sess.features[i - 12:i].ravel())


class TestBuildPairs:
    def test_count_formula(self):
        for T in (17, 18, 30, 100):
            for gap in (1, 4, 7):
                sess = make_session(T, gt_values=np.linspace(0, 1, T))
                expected = max(0, T - 12 - gap)
                assert len(build_pairs(sess, gap=gap)) == expected

    def test_no_pairs_when_too_short_for_gap(self):
        sess = make_session(14, gt_values=np.zeros(14))
        assert build_pairs(sess, gap=4) == []

    def test_labels_from_gt_sign(self):
        T = 20
        gt = np.zeros(T)
        gt[16] = 1.0   # 1-based index 17
        gt[18] = -1.0  # 1-based index 19
        sess = make_session(T, gt_values=gt)
        pairs = build_pairs(sess, gap=4)
        by_i = {p.i: p for p in pairs}
        # i=13, j=17: A_17 - A_13 = 1  -> +1
        assert by_i[13].label == 1
        # i=15, j=19: -1 - 0 = -1 -> -1
        assert by_i[15].label == -1
        # i=14, j=18: 0 - 0 -> 0
        assert by_i[14].label == 0

    def test_eps_band_maps_small_changes_to_equal(self):
        T = 20
        gt = np.linspace(0, 0.19, T)  # per-4-sample change 0.04
        sess = make_session(T, gt_values=gt)
        assert all(p.label == 1 for p in build_pairs(sess, gap=4, eps=0.0))
        assert all(p.label == 0 for p in build_pairs(sess, gap=4, eps=0.05))

    def test_negating_gt_flips_labels(self):
        rng = np.random.default_rng(17)
        for _ in range(20):
            T = int(rng.integers(18, 60))
            gt = np.cumsum(rng.standard_normal(T))
            a = build_pairs(make_session(T, gt_values=gt), gap=4, eps=0.1)
            b = build_pairs(make_session(T, gt_values=-gt), gap=4, eps=0.1)
            assert [p.label for p in a] == [-p.label for p in b]
            assert [(p.i, p.j) for p in a] == [(p.i, p.j) for p in b]

    def test_j_is_i_plus_gap_and_in_range(self):
        sess = make_session(40, gt_values=np.sin(np.arange(40)))
        for gap in (1, 3, 9):
            for p in build_pairs(sess, gap=gap):
                assert p.j == p.i + gap
                assert FIRST_INDEX <= p.i and p.j <= 40

    def test_requires_gt(self):
        with pytest.raises(NoGroundTruth):
            build_pairs(make_session(20))

    def test_gap_and_eps_validated(self):
        sess = make_session(20, gt_values=np.zeros(20))
        with pytest.raises(ValueError):
            build_pairs(sess, gap=0)
        with pytest.raises(ValueError):
            build_pairs(sess, eps=-0.5)

    @given(st.integers(17, 80), st.integers(1, 6))
    @settings(max_examples=60, deadline=None)
    def test_pair_count_property(self, T, gap):
        sess = make_session(T, gt_values=np.arange(float(T)))
        assert len(build_pairs(sess, gap=gap)) == max(0, T - 12 - gap)


class TestBalance:
    @staticmethod
    def _flat_then_rise(T=60):
        gt = np.zeros(T)
        gt[40:] = np.arange(T - 40) * 1.0  # minority of rising pairs
        return make_session(T, gt_values=gt)

    def test_majority_downsampled_to_second_count(self):
        sess = self._flat_then_rise()
        raw = build_pairs(sess, gap=4)
        counts = {lab: sum(p.label == lab for p in raw) for lab in (-1, 0, 1)}
        top, second = sorted(counts.values(), reverse=True)[:2]
        assert top > second  # fixture really is imbalanced
        balanced = build_pairs(sess, gap=4, balance=True)
        new_counts = {lab: sum(p.label == lab for p in balanced) for lab in (-1, 0, 1)}
        assert max(new_counts.values()) == second
        # minority classes untouched
        for lab in (-1, 0, 1):
            if counts[lab] != max(counts.values()):
                assert new_counts[lab] == counts[lab]

    def test_balance_deterministic_per_seed(self):
        sess = self._flat_then_rise()
        a = build_pairs(sess, gap=4, balance=True, seed=5)
        b = build_pairs(sess, gap=4, balance=True, seed=5)
        assert [(p.i, p.j, p.label) for p in a] == [(p.i, p.j, p.label) for p in b]

    def test_balance_noop_when_already_balanced(self):
        T = 21
        gt = np.array([0.0, 1.0, 0.0] * 7)
        sess = make_session(T, gt_values=gt)
        raw = build_pairs(sess, gap=3)
        balanced = build_pairs(sess, gap=3, balance=True)
        counts = {lab: sum(p.label == lab for p in raw) for lab in (-1, 0, 1)}
        if len(set(counts.values())) == 1:
            assert balanced == raw


class TestPairSample:
    def test_label_validated(self):
        with pytest.raises(ValueError):
            PairSample(13, 17, 2)
        PairSample(13, 17, 1)
