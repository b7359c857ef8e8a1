"""Assemble a full-session affect trace from annotated regions.

Annotators record relative traces only inside selected regions. The full
reconstruction places each region trace on top of the running value at the
region start, then fills the gap after the region by continuing the
region's closing trend: the slope is taken between the region's midpoint
sample and its last sample, and propagated one sample at a time up to and
including the next region's start (or the end of the session after the
last region). Samples before the first region hold the baseline value 0.
A single-sample region has no trend and propagates a slope of zero.
"""

from __future__ import annotations

import numpy as np

from .errors import LengthMismatch, RegionsOverlap
from .trace import AnnotationTrace, TimeInterval

__all__ = ["interpolate", "interpolate_trace"]


def _validate(total_len: int, regions) -> list[tuple[TimeInterval, np.ndarray]]:
    if total_len <= 0:
        raise ValueError(f"total_len must be positive, got {total_len}")
    prepared = []
    for interval, values in regions:
        arr = np.asarray(values, dtype=np.float64).ravel()
        if interval.start_idx < 0 or interval.end_idx > total_len:
            raise ValueError(f"region {interval} outside trace of length {total_len}")
        if arr.size != len(interval):
            raise LengthMismatch(
                f"region {interval} spans {len(interval)} samples, trace has {arr.size}")
        prepared.append((interval, arr))
    prepared.sort(key=lambda item: item[0].start_idx)
    for (a, _), (b, _) in zip(prepared, prepared[1:]):
        if b.start_idx < a.end_idx:
            raise RegionsOverlap(f"{a} overlaps {b}")
    return prepared


def _closing_slope(start_idx: int, end_idx: int, values: np.ndarray) -> float:
    # Trend between the region's midpoint sample and its last sample.
    mid = (start_idx + 1 + end_idx) // 2
    span = end_idx - mid
    if span <= 0:
        return 0.0
    local_mid = mid - start_idx - 1
    return float(values[-1] - values[local_mid]) / span


def interpolate(total_len: int, regions) -> np.ndarray:
    """Reconstruct a length-`total_len` trace from (interval, values) pairs.

    Each region's values are relative to the reconstruction at the region
    start (zero-baselined region traces keep the result continuous).
    """
    prepared = _validate(total_len, regions)
    out = np.zeros(total_len, dtype=np.float64)
    for r, (interval, values) in enumerate(prepared):
        s, e = interval.start_idx, interval.end_idx
        offset = out[s]
        out[s:e] = offset + values
        slope = _closing_slope(s, e, values)
        stop = prepared[r + 1][0].start_idx if r + 1 < len(prepared) else total_len - 1
        for t in range(e, stop + 1):
            out[t] = out[t - 1] + slope
    return out


def interpolate_trace(total_len: int, regions, rate_hz) -> AnnotationTrace:
    """Same as `interpolate` but wrapped with the session sample rate."""
    return AnnotationTrace(interpolate(total_len, regions), rate_hz)
