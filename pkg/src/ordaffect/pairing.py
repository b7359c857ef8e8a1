"""Model inputs: feature segments and ordinal-labeled training pairs.

A segment at sample index i (1-based, i > 12) stacks the 12 log-feature
frames ending at i, so the first valid index is 13 and a session of T
frames yields T - 12 segments. Training pairs compare indices i and
j = i + gap (gap default 4 samples, one second at 4 Hz) and carry the sign
of the ground-truth change: +1 if A_j - A_i > eps, -1 if < -eps, else 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LengthMismatch, NoGroundTruth, SessionTooShort
from .sessions import Session

__all__ = [
    "WINDOW_FRAMES",
    "FIRST_INDEX",
    "FeatureSegment",
    "PairSample",
    "build_segments",
    "build_pairs",
    "segment_matrix",
    "label_to_class",
]

WINDOW_FRAMES = 12
FIRST_INDEX = WINDOW_FRAMES + 1  # 1-based


@dataclass(frozen=True, eq=False)
class FeatureSegment:
    """12 consecutive feature frames ending at 1-based sample index_i."""

    index_i: int
    frames: np.ndarray      # (12, d_f)
    biography: np.ndarray   # (d_b,)

    def __post_init__(self):
        if self.index_i <= WINDOW_FRAMES:
            raise ValueError(f"segment index must exceed {WINDOW_FRAMES}, got {self.index_i}")
        if self.frames.shape[0] != WINDOW_FRAMES:
            raise ValueError(f"segment needs {WINDOW_FRAMES} frames, got {self.frames.shape[0]}")


@dataclass(frozen=True)
class PairSample:
    """Ordinal comparison between sample indices i and j = i + gap."""

    i: int
    j: int
    label: int  # -1, 0, +1

    def __post_init__(self):
        if self.label not in (-1, 0, 1):
            raise ValueError(f"label must be -1, 0 or +1, got {self.label}")


def label_to_class(label: int) -> int:
    """Map ordinal label {-1, 0, +1} to class index {0, 1, 2}."""
    return int(label) + 1


def _check_length(session: Session) -> int:
    T = session.n_frames
    if T < FIRST_INDEX:
        raise SessionTooShort(
            f"session {session.session_id} has {T} frames, needs at least {FIRST_INDEX}")
    return T


def build_segments(session: Session) -> list[FeatureSegment]:
    """One segment per valid index i in [13, T]; frames rows i-12..i-1 (0-based)."""
    T = _check_length(session)
    return [
        FeatureSegment(i, session.features[i - WINDOW_FRAMES:i], session.biography)
        for i in range(FIRST_INDEX, T + 1)
    ]


def segment_matrix(session: Session) -> np.ndarray:
    """(T - 12, 12 * d_f) matrix of flattened segments, row r for index r + 13.

    Row-equal to np.ravel of build_segments(...)[r].frames; built with a
    sliding window to avoid the per-segment Python loop.
    """
    T = _check_length(session)
    d_f = session.features.shape[1]
    windows = np.lib.stride_tricks.sliding_window_view(
        session.features, WINDOW_FRAMES, axis=0)       # (T-11, d_f, 12)
    windows = np.moveaxis(windows[1:], 2, 1)            # rows for i = 13..T
    return np.ascontiguousarray(windows).reshape(T - WINDOW_FRAMES, WINDOW_FRAMES * d_f)


def build_pairs(session: Session, gap: int = 4, eps: float = 0.0,
                balance: bool = False, seed: int = 0) -> list[PairSample]:
    """Ordinal pairs (i, i + gap) labeled by the GT change sign.

    With balance=True the most frequent label is down-sampled (seeded,
    without replacement) to the second-largest label count; off by default
    to keep the raw distribution.
    """
    if gap < 1:
        raise ValueError(f"gap must be >= 1, got {gap}")
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    T = _check_length(session)
    if session.gt is None:
        raise NoGroundTruth(f"session {session.session_id} has no GT trace")
    if len(session.gt) != T:
        raise LengthMismatch(
            f"GT trace has {len(session.gt)} samples, session has {T} frames")
    values = session.gt.values
    pairs = []
    for i in range(FIRST_INDEX, T - gap + 1):
        j = i + gap
        diff = values[j - 1] - values[i - 1]
        label = 1 if diff > eps else (-1 if diff < -eps else 0)
        pairs.append(PairSample(i, j, label))
    if balance and pairs:
        pairs = _downsample_majority(pairs, seed)
    return pairs


def _downsample_majority(pairs: list[PairSample], seed: int) -> list[PairSample]:
    labels = np.asarray([p.label for p in pairs])
    counts = {lab: int((labels == lab).sum()) for lab in (-1, 0, 1)}
    ordered = sorted(counts.items(), key=lambda kv: -kv[1])
    majority, top = ordered[0]
    cap = ordered[1][1]
    if cap == 0 or top == cap:
        return pairs
    rng = np.random.default_rng(seed)
    keep_idx = np.nonzero(labels == majority)[0]
    keep = set(rng.choice(keep_idx, size=cap, replace=False).tolist())
    return [p for n, p in enumerate(pairs)
            if p.label != majority or n in keep]
