"""Affect annotation traces: zero-baselining, session normalization, resampling.

A trace is a uniformly sampled sequence of relative affect values. The
annotation convention is relative and unbounded: every session starts at a
neutral 0 and only changes are recorded, so traces are zero-baselined (first
value subtracted) and, when cross-session comparability is needed, affinely
mapped to [0, 1] per session.

Time is handled as integer sample indices internally; seconds appear only at
I/O boundaries. This keeps interval arithmetic exact (no float accumulation
when regions are intersected, merged, or measured).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import EmptyTrace

__all__ = [
    "AnnotationTrace",
    "TimeInterval",
    "zero_baseline",
    "normalize_session",
    "resample",
    "read_trace_csv",
    "write_trace_csv",
    "read_trace_jsonl",
    "write_trace_jsonl",
]


def _as_rate(rate) -> Fraction:
    f = Fraction(rate)
    if f <= 0:
        raise ValueError(f"sample rate must be positive, got {rate}")
    return f


@dataclass(frozen=True)
class AnnotationTrace:
    """Uniformly sampled relative affect values.

    values: 1-d float64 array, non-empty.
    sample_rate_hz: positive rational; the default 4 matches logs cleaned to
        4 steps per second.
    t0: start time of the first sample, in seconds.
    """

    values: np.ndarray
    sample_rate_hz: Fraction = Fraction(4)
    t0: float = 0.0

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.size == 0:
            raise EmptyTrace("trace needs a non-empty 1-d value sequence")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "sample_rate_hz", _as_rate(self.sample_rate_hz))

    def __len__(self) -> int:
        return self.values.size

    @property
    def duration_s(self) -> float:
        """Span covered by the samples: len / rate seconds."""
        return float(len(self) / self.sample_rate_hz)

    def times(self) -> np.ndarray:
        """Sample times in seconds (t0 + k / rate)."""
        rate = float(self.sample_rate_hz)
        return self.t0 + np.arange(len(self)) / rate

    def with_values(self, values: np.ndarray) -> "AnnotationTrace":
        return AnnotationTrace(values, self.sample_rate_hz, self.t0)


@dataclass(frozen=True, order=True)
class TimeInterval:
    """Half-open interval [start_idx, end_idx) in sample units."""

    start_idx: int
    end_idx: int

    def __post_init__(self):
        if not self.start_idx < self.end_idx:
            raise ValueError(
                f"interval needs start < end, got [{self.start_idx}, {self.end_idx})"
            )

    def __len__(self) -> int:
        return self.end_idx - self.start_idx

    def start_s(self, rate) -> float:
        return float(self.start_idx / _as_rate(rate))

    def end_s(self, rate) -> float:
        return float(self.end_idx / _as_rate(rate))

    def duration_s(self, rate) -> float:
        return float(len(self) / _as_rate(rate))

    def overlaps(self, other: "TimeInterval") -> bool:
        return self.start_idx < other.end_idx and other.start_idx < self.end_idx

    @staticmethod
    def from_seconds(start_s, end_s, rate) -> "TimeInterval":
        """Exact conversion; start_s * rate and end_s * rate must be integral."""
        r = _as_rate(rate)
        lo = Fraction(start_s) * r
        hi = Fraction(end_s) * r
        if lo.denominator != 1 or hi.denominator != 1:
            raise ValueError(
                f"[{start_s}, {end_s}) s is not aligned to the {rate} Hz sample grid"
            )
        return TimeInterval(int(lo), int(hi))


def zero_baseline(trace: AnnotationTrace) -> AnnotationTrace:
    """Subtract the first value so the trace starts at exactly 0."""
    return trace.with_values(trace.values - trace.values[0])


def normalize_session(trace: AnnotationTrace) -> AnnotationTrace:
    """Affine map of the trace onto [0, 1].

    A constant trace maps to all zeros: this keeps the zero-start convention
    for sessions where the annotator never moved.
    """
    lo = trace.values.min()
    hi = trace.values.max()
    if hi == lo:
        return trace.with_values(np.zeros_like(trace.values))
    return trace.with_values((trace.values - lo) / (hi - lo))


def resample(trace: AnnotationTrace, target_hz) -> AnnotationTrace:
    """Linear interpolation of the trace onto a target-rate grid.

    Grid positions are computed with exact rational arithmetic in source
    sample units, so same-rate resampling is the identity bit for bit and
    endpoints land exactly on source samples whenever the rates divide.
    """
    tgt = _as_rate(target_hz)
    src = trace.sample_rate_hz
    if tgt == src:
        return trace.with_values(trace.values.copy())
    n = len(trace)
    # last reachable target index: pos_k = k * src/tgt <= n - 1
    step = src / tgt  # source samples per target sample
    m = int((n - 1) / step) + 1
    out = np.empty(m, dtype=np.float64)
    vals = trace.values
    for k in range(m):
        pos = k * step
        i = pos.numerator // pos.denominator
        frac = pos - i
        if frac == 0:
            out[k] = vals[i]
        else:
            w = float(frac)
            out[k] = vals[i] * (1.0 - w) + vals[i + 1] * w
    return AnnotationTrace(out, tgt, trace.t0)


# ---------------------------------------------------------------------------
# I/O: CSV columns `t_s,value`; JSONL records {"t": ..., "v": ...}.
# The sample rate is declared by the caller (manifest), never inferred.
# ---------------------------------------------------------------------------

def write_trace_csv(trace: AnnotationTrace, path, header_comment: str | None = None) -> None:
    lines = []
    if header_comment:
        lines.append(f"# {header_comment}")
    lines.append("t_s,value")
    rate = float(trace.sample_rate_hz)
    for k, v in enumerate(trace.values):
        lines.append(f"{trace.t0 + k / rate!r},{float(v)!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_trace_csv(path, sample_rate_hz=4) -> AnnotationTrace:
    rate = _as_rate(sample_rate_hz)
    t0 = None
    values = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("t_s"):
            continue
        t_str, v_str = line.split(",")
        if t0 is None:
            t0 = float(t_str)
        values.append(float(v_str))
    if t0 is None:
        raise EmptyTrace(f"no samples in {path}")
    return AnnotationTrace(np.asarray(values), rate, t0)


def write_trace_jsonl(trace: AnnotationTrace, path) -> None:
    rate = float(trace.sample_rate_hz)
    with open(path, "w") as fh:
        for k, v in enumerate(trace.values):
            fh.write(json.dumps({"t": trace.t0 + k / rate, "v": float(v)}) + "\n")


def read_trace_jsonl(path, sample_rate_hz=4) -> AnnotationTrace:
    rate = _as_rate(sample_rate_hz)
    t0 = None
    values = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        rec = json.loads(line)
        if t0 is None:
            t0 = float(rec["t"])
        values.append(float(rec["v"]))
    if t0 is None:
        raise EmptyTrace(f"no samples in {path}")
    return AnnotationTrace(np.asarray(values), rate, t0)
