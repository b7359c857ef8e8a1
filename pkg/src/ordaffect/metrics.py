"""Evaluation metrics for region selections and reconstructed traces.

Region agreement is duration-weighted: F1 = 2|gt intersect pred| over
|gt| + |pred| with durations counted in samples. Time efficiency (TE) is
the fraction of a session left unannotated; delta-TE compares a method's
per-session TE against the ground truth's. Trace agreement uses CCC
(absolute agreement), Spearman rho on mid-ranks (trend), and a bounded
DTW similarity (shape).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .clustering import DtwParams, dtw_distance
from .errors import LengthMismatch, RegionsOverlap
from .trace import TimeInterval

__all__ = [
    "region_f1",
    "time_efficiency",
    "delta_te",
    "ccc",
    "spearman_rho",
    "dtw_similarity",
    "TemporalRow",
    "temporal_characteristics",
]


def _intervals(regions) -> list[TimeInterval]:
    out = [getattr(r, "interval", r) for r in regions]
    ordered = sorted(out)
    for a, b in zip(ordered, ordered[1:]):
        if b.start_idx < a.end_idx:
            raise RegionsOverlap(f"{a} overlaps {b}")
    return ordered


def _covered(regions, total_len: int) -> int:
    total = 0
    for iv in regions:
        if iv.start_idx < 0 or iv.end_idx > total_len:
            raise ValueError(f"region {iv} outside [0, {total_len})")
        total += len(iv)
    return total


def region_f1(gt_regions, pred_regions, total_len: int) -> float:
    """Duration-weighted F1 between two disjoint region sets.

    Both empty counts as perfect agreement (1); exactly one empty is 0.
    """
    gt = _intervals(gt_regions)
    pred = _intervals(pred_regions)
    gt_len = _covered(gt, total_len)
    pred_len = _covered(pred, total_len)
    if gt_len == 0 and pred_len == 0:
        return 1.0
    if gt_len == 0 or pred_len == 0:
        return 0.0
    inter = 0
    gi = pi = 0
    while gi < len(gt) and pi < len(pred):
        a, b = gt[gi], pred[pi]
        inter += max(0, min(a.end_idx, b.end_idx) - max(a.start_idx, b.start_idx))
        if a.end_idx <= b.end_idx:
            gi += 1
        else:
            pi += 1
    return 2.0 * inter / (gt_len + pred_len)


def time_efficiency(regions, total_len: int) -> float:
    """Fraction of the session NOT covered by regions."""
    if total_len <= 0:
        raise ValueError(f"total_len must be positive, got {total_len}")
    covered = _covered(_intervals(regions), total_len)
    return (total_len - covered) / total_len


def delta_te(gt_tes, pred_tes) -> float:
    """Mean absolute per-session gap between two TE lists."""
    a = np.asarray(gt_tes, dtype=np.float64)
    b = np.asarray(pred_tes, dtype=np.float64)
    if a.shape != b.shape:
        raise LengthMismatch(f"TE lists disagree: {a.shape} vs {b.shape}")
    return float(np.abs(a - b).mean())


def _values(x) -> np.ndarray:
    return np.asarray(getattr(x, "values", x), dtype=np.float64).ravel()


def ccc(x, y) -> float:
    """Concordance correlation: 2 cov / (var x + var y + (mean gap)^2).

    Population moments. Two constant inputs score 0 by convention, flagged
    with a RuntimeWarning.
    """
    xv, yv = _values(x), _values(y)
    if xv.size != yv.size:
        raise LengthMismatch(f"length mismatch: {xv.size} vs {yv.size}")
    if xv.size < 2:
        raise ValueError("need at least 2 samples")
    mx, my = xv.mean(), yv.mean()
    vx, vy = xv.var(), yv.var()
    if vx == 0.0 and vy == 0.0:
        warnings.warn("ccc of two constant traces is 0 by convention", RuntimeWarning)
        return 0.0
    cov = ((xv - mx) * (yv - my)).mean()
    return float(2.0 * cov / (vx + vy + (mx - my) ** 2))


def spearman_rho(x, y) -> float:
    """Pearson correlation of mid-ranks (ties share the average rank).

    A constant input makes the rank variance zero; returns 0 with a flag.
    """
    xv, yv = _values(x), _values(y)
    if xv.size != yv.size:
        raise LengthMismatch(f"length mismatch: {xv.size} vs {yv.size}")
    if xv.size < 2:
        raise ValueError("need at least 2 samples")
    rx = rankdata(xv, method="average")
    ry = rankdata(yv, method="average")
    sx, sy = rx.std(), ry.std()
    if sx == 0.0 or sy == 0.0:
        warnings.warn("spearman undefined for a constant input; returning 0",
                      RuntimeWarning)
        return 0.0
    return float(((rx - rx.mean()) * (ry - ry.mean())).mean() / (sx * sy))


def dtw_similarity(x, y, params: DtwParams = DtwParams()) -> float:
    """Bounded shape similarity: 1 / (1 + dtw(x_hat, y_hat) / L).

    Inputs are min-max normalized per trace and L is the longer length, so
    the score lands in (0, 1] with 1 for identical shapes.
    """
    xv, yv = _values(x), _values(y)

    def norm(v):
        lo, hi = v.min(), v.max()
        return np.zeros_like(v) if hi == lo else (v - lo) / (hi - lo)

    dist = dtw_distance(norm(xv), norm(yv), params)
    return float(1.0 / (1.0 + dist / max(xv.size, yv.size)))


@dataclass
class TemporalRow:
    """Per-session clip statistics."""

    session_id: str
    clip_count: int
    total_s: float
    mean_s: float
    short_count: int
    te: float
    te_over_half: bool


def temporal_characteristics(per_session, rate_hz, short_clip_s: float = 6.0) -> dict:
    """Clip-count/duration/TE table with mean +/- sd aggregates.

    per_session is an iterable of (session_id, regions, total_len) triples.
    Short clips are those strictly under short_clip_s seconds. Aggregates
    use population standard deviation and include a "mean +/- sd" string
    per column.
    """
    from fractions import Fraction
    rate = Fraction(rate_hz)
    rows: list[TemporalRow] = []
    for session_id, regions, total_len in per_session:
        ivs = _intervals(regions)
        durations = np.asarray([len(iv) / float(rate) for iv in ivs])
        total = float(durations.sum()) if ivs else 0.0
        te = time_efficiency(ivs, total_len)
        rows.append(TemporalRow(
            session_id=session_id,
            clip_count=len(ivs),
            total_s=total,
            mean_s=float(durations.mean()) if ivs else 0.0,
            short_count=int((durations < short_clip_s).sum()) if ivs else 0,
            te=te,
            te_over_half=te > 0.5,
        ))

    def agg(values):
        arr = np.asarray(values, dtype=np.float64)
        mean, sd = float(arr.mean()), float(arr.std())
        return {"mean": mean, "sd": sd, "formatted": f"{mean:.2f} ± {sd:.2f}"}

    aggregate = {
        "clip_count": agg([r.clip_count for r in rows]),
        "total_s": agg([r.total_s for r in rows]),
        "mean_s": agg([r.mean_s for r in rows]),
        "short_count": agg([r.short_count for r in rows]),
        "te": agg([r.te for r in rows]),
    } if rows else {}
    return {
        "rows": rows,
        "aggregate": aggregate,
        "te_over_half_sessions": sum(r.te_over_half for r in rows),
    }
