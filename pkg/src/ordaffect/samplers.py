"""Baseline region samplers and the event-feature ranking that feeds the
rule-based one.

The random and uniform samplers deliberately see nothing but the trace
length and a target count (matched to the average ground-truth inflection
count), so they encode no task knowledge. The rule-based sampler reads one
event feature (score by default), segments maximal runs of nonzero change,
and marks short events (at most 5 s) at their midpoint and long events at
both ends. Feature ranking pools per-sample diffs across sessions and
sorts by absolute Pearson correlation with the ground-truth diffs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import (CountTooLarge, LengthMismatch, NoGroundTruth,
                     SessionTooShort, UnknownFeature)
from .inflection import InflectionConfig, InflectionRegion, expand_and_merge
from .sessions import Session

__all__ = [
    "random_regions",
    "uniform_regions",
    "rule_based_regions",
    "FeatureRank",
    "rank_features",
    "write_ranking_csv",
    "DEFAULT_TIME_FEATURES",
    "SHORT_EVENT_S",
]

DEFAULT_TIME_FEATURES = frozenset({"t", "t_s", "time", "time_s", "frame", "frame_idx",
                                   "index", "tick"})
SHORT_EVENT_S = 5.0


def _count(mean_count: float) -> int:
    if mean_count <= 0:
        raise ValueError(f"mean count must be positive, got {mean_count}")
    return int(round(mean_count))  # round-half-to-even


def _wrap(intervals, source: str) -> list[InflectionRegion]:
    return [InflectionRegion(iv, source) for iv in intervals]


def random_regions(trace_len: int, mean_count: float, rate_hz, seed: int,
                   config: InflectionConfig = InflectionConfig()) -> list[InflectionRegion]:
    """Uniformly drawn center indices (without replacement), expanded and merged."""
    n = _count(mean_count)
    if n > trace_len:
        raise CountTooLarge(f"cannot draw {n} indices from a trace of {trace_len}")
    rng = np.random.default_rng(seed)
    indices = np.sort(rng.choice(trace_len, size=n, replace=False))
    return _wrap(expand_and_merge(indices, trace_len, rate_hz, config), "random")


def uniform_regions(trace_len: int, mean_count: float, rate_hz,
                    config: InflectionConfig = InflectionConfig()) -> list[InflectionRegion]:
    """Evenly spaced center indices at (k + 1/2) * T / n, expanded and merged."""
    n = _count(mean_count)
    if n > trace_len:
        raise CountTooLarge(f"cannot place {n} indices on a trace of {trace_len}")
    indices = np.asarray([int((k + 0.5) * trace_len / n) for k in range(n)])
    return _wrap(expand_and_merge(indices, trace_len, rate_hz, config), "uniform")


def rule_based_regions(session: Session, event_feature: str = "score",
                       config: InflectionConfig = InflectionConfig()) -> list[InflectionRegion]:
    """Regions around event-feature changes.

    Maximal runs of nonzero per-sample change are events; an event of
    duration at most 5 s contributes its midpoint index, a longer one its
    start and end indices. The rest follows the usual expand/merge step.
    """
    if event_feature not in session.feature_names:
        raise UnknownFeature(event_feature)
    values = session.feature_column(event_feature)
    rate = Fraction(session.sample_rate_hz)
    diffs = np.diff(values)
    nonzero = diffs != 0.0
    indices: list[int] = []
    t = 0
    while t < nonzero.size:
        if not nonzero[t]:
            t += 1
            continue
        start = t
        while t < nonzero.size and nonzero[t]:
            t += 1
        end = t - 1  # inclusive last changing diff
        # diff d covers the step from sample d to d+1, so the event spans
        # time [start, end + 1] in samples.
        duration_s = (end + 1 - start) / float(rate)
        if duration_s <= SHORT_EVENT_S:
            indices.append((start + end + 1) // 2)
        else:
            indices.extend([start, end + 1])
    intervals = expand_and_merge(sorted(set(indices)), session.n_frames,
                                 session.sample_rate_hz, config)
    return _wrap(intervals, "rule")


@dataclass(frozen=True)
class FeatureRank:
    name: str
    r: float
    zero_variance: bool = False


def rank_features(sessions, exclude=DEFAULT_TIME_FEATURES) -> list[FeatureRank]:
    """Features sorted by |Pearson r| between pooled frame diffs and GT diffs.

    Diffs are concatenated across sessions before the correlation. A
    zero-variance input yields r = 0 with a flag and a RuntimeWarning.
    Trivial time-index features are excluded by name.
    """
    if not sessions:
        raise ValueError("no sessions")
    names = sessions[0].feature_names
    dx_parts: list[np.ndarray] = []
    dy_parts: list[np.ndarray] = []
    for sess in sessions:
        if sess.feature_names != names:
            raise LengthMismatch(
                f"session {sess.session_id} feature names disagree with {sessions[0].session_id}")
        if sess.n_frames < 2:
            raise SessionTooShort(
                f"session {sess.session_id} has {sess.n_frames} frames, needs >= 2")
        if sess.gt is None:
            raise NoGroundTruth(f"session {sess.session_id} has no GT trace")
        dx_parts.append(np.diff(sess.features, axis=0))
        dy_parts.append(np.diff(sess.gt.values))
    dx = np.vstack(dx_parts)
    dy = np.concatenate(dy_parts)

    ranks: list[FeatureRank] = []
    dy_c = dy - dy.mean()
    dy_ss = float(dy_c @ dy_c)
    for col, name in enumerate(names):
        if name in exclude:
            continue
        fx = dx[:, col]
        fx_c = fx - fx.mean()
        fx_ss = float(fx_c @ fx_c)
        if fx_ss == 0.0 or dy_ss == 0.0:
            warnings.warn(f"zero variance while ranking feature {name!r}; r set to 0",
                          RuntimeWarning)
            ranks.append(FeatureRank(name, 0.0, zero_variance=True))
            continue
        r = float((fx_c @ dy_c) / np.sqrt(fx_ss * dy_ss))
        ranks.append(FeatureRank(name, r))
    ranks.sort(key=lambda fr: -abs(fr.r))
    return ranks


def write_ranking_csv(ranks, path, config_hash: str | None = None) -> None:
    lines = []
    if config_hash is not None:
        lines.append(f"# config_hash: {config_hash}")
    lines.append("rank,feature,r,abs_r,zero_variance")
    for pos, fr in enumerate(ranks, start=1):
        lines.append(f"{pos},{fr.name},{fr.r!r},{abs(fr.r)!r},{int(fr.zero_variance)}")
    Path(path).write_text("\n".join(lines) + "\n")
