"""Inflection detection: local extrema, gradient-change complement, regions.

An inflection point is a local maximum or local minimum of an affect trace
(minima are found by running the maxima routine on the negated trace). The
neighbor comparison is strict and plateaus contribute their midpoint index,
floor((left_edge + right_edge) / 2); the first and last samples never
qualify. A complementary rule adds points where the slope changes sharply
without forming an extremum, which extrema detection alone misses in long
gentle stretches.

Each point becomes the center of an annotation window extending a half
window (default 2.5 s) on each side; overlapping or touching windows merge
into one region.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import TraceTooShort
from .trace import AnnotationTrace, TimeInterval

__all__ = [
    "InflectionConfig",
    "InflectionRegion",
    "find_inflections",
    "gradient_complement",
    "expand_and_merge",
    "detection_indices",
    "detect_regions",
    "merge_intervals",
    "write_regions_json",
    "read_regions_json",
]


@dataclass(frozen=True)
class InflectionConfig:
    """Detection knobs.

    half_window_s: half-width of the annotation window around each point.
    gradient_threshold: slope-change threshold for the complement rule; None
        selects the 75th percentile of |slope change| over the trace, which
        is scale-free.
    """

    half_window_s: float = 2.5
    gradient_threshold: float | None = None

    def __post_init__(self):
        if self.half_window_s <= 0:
            raise ValueError("half_window_s must be positive")


@dataclass(frozen=True)
class InflectionRegion:
    """A half-open annotation interval with provenance."""

    interval: TimeInterval
    source: str = "model"


def _strict_maxima(x: np.ndarray) -> list[int]:
    # Strict-neighbor local maxima; plateau -> floor of edge midpoint.
    n = x.size
    out = []
    i = 1
    i_max = n - 1
    while i < i_max:
        if x[i - 1] < x[i]:
            i_ahead = i + 1
            while i_ahead < i_max and x[i_ahead] == x[i]:
                i_ahead += 1
            if x[i_ahead] < x[i]:
                out.append((i + i_ahead - 1) // 2)
                i = i_ahead
        i += 1
    return out


def find_inflections(trace: AnnotationTrace) -> np.ndarray:
    """Sorted indices of local maxima and local minima."""
    x = trace.values
    if x.size < 3:
        raise TraceTooShort(f"need at least 3 samples, got {x.size}")
    maxima = _strict_maxima(x)
    minima = _strict_maxima(-x)
    return np.union1d(np.asarray(maxima, dtype=int), np.asarray(minima, dtype=int))


def gradient_complement(trace: AnnotationTrace, detected,
                        config: InflectionConfig = InflectionConfig()) -> np.ndarray:
    """Indices with a large slope change that extrema detection missed.

    At interior index t the slope change is (x[t+1]-x[t]) - (x[t]-x[t-1]),
    in value units per sample. Indices already in `detected` are skipped.
    """
    x = trace.values
    if x.size < 3:
        return np.asarray([], dtype=int)
    dslope = np.abs(x[2:] - 2.0 * x[1:-1] + x[:-2])  # at indices 1..n-2
    threshold = config.gradient_threshold
    if threshold is None:
        threshold = float(np.percentile(dslope, 75))
    detected = set(int(i) for i in np.asarray(detected).ravel())
    hits = [t + 1 for t in np.nonzero(dslope > threshold)[0] if (t + 1) not in detected]
    return np.asarray(hits, dtype=int)


def merge_intervals(intervals) -> list[TimeInterval]:
    """Union of intervals; overlapping or touching pieces coalesce."""
    ordered = sorted(intervals)
    merged: list[TimeInterval] = []
    for iv in ordered:
        if merged and iv.start_idx <= merged[-1].end_idx:
            last = merged[-1]
            merged[-1] = TimeInterval(last.start_idx, max(last.end_idx, iv.end_idx))
        else:
            merged.append(iv)
    return merged


def expand_and_merge(indices, trace_len: int, rate_hz,
                     config: InflectionConfig = InflectionConfig()) -> list[TimeInterval]:
    """Expand each index to a centered window, clamp to the trace, merge.

    The window is [t - half, t + half] seconds, i.e. 2 * half * rate samples
    half-open, clamped to [0, trace_len]. Output is disjoint and sorted.
    """
    rate = Fraction(rate_hz)
    half_frac = Fraction(config.half_window_s).limit_denominator(10**9) * rate
    half = int(round(half_frac))  # exact when half_window_s * rate is integral
    intervals = []
    for idx in indices:
        idx = int(idx)
        if not 0 <= idx < trace_len:
            raise ValueError(f"index {idx} outside trace of length {trace_len}")
        start = max(0, idx - half)
        end = min(trace_len, idx + half)
        if end > start:
            intervals.append(TimeInterval(start, end))
    return merge_intervals(intervals)


def detection_indices(trace: AnnotationTrace,
                      config: InflectionConfig = InflectionConfig()) -> np.ndarray:
    """Union of extrema and gradient-complement indices, sorted."""
    base = find_inflections(trace)
    extra = gradient_complement(trace, base, config)
    return np.union1d(base, extra)


def detect_regions(trace: AnnotationTrace, config: InflectionConfig = InflectionConfig(),
                   source: str = "model") -> list[InflectionRegion]:
    """Full detection pipeline: extrema + gradient complement, expanded and merged."""
    indices = detection_indices(trace, config)
    intervals = expand_and_merge(indices, len(trace), trace.sample_rate_hz, config)
    return [InflectionRegion(iv, source) for iv in intervals]


# ---------------------------------------------------------------------------
# Regions JSON: [{"start_s": .., "end_s": .., "source": ..}, ...]
# ---------------------------------------------------------------------------

def write_regions_json(regions, rate_hz, path, config_hash: str | None = None) -> None:
    rate = Fraction(rate_hz)
    payload = {
        "regions": [
            {
                "start_s": reg.interval.start_s(rate),
                "end_s": reg.interval.end_s(rate),
                "source": reg.source,
            }
            for reg in regions
        ]
    }
    if config_hash is not None:
        payload["config_hash"] = config_hash
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_regions_json(path, rate_hz) -> list[InflectionRegion]:
    data = json.loads(Path(path).read_text())
    records = data["regions"] if isinstance(data, dict) else data
    return [
        InflectionRegion(
            TimeInterval.from_seconds(rec["start_s"], rec["end_s"], rate_hz),
            rec.get("source", "model"),
        )
        for rec in records
    ]
