"""Synthetic corpora with known structure for tests, demos and calibration.

Three generators:

- archetype trace corpus: four trend families (rising, falling, hill,
  valley) with additive noise; the family count is the known-correct
  cluster count.
- mixed-signal world: each session's latent affect is A = s1 + g * s2 + s3
  where s1 follows a per-session trend archetype, s2 is an independent
  smooth signal, the sign g depends on the player group recorded in the
  biography, and s3 is a faster oscillation gated by a few "action burst"
  envelopes, so true inflections cluster inside bursts and leave long calm
  stretches between them. All three signals are visible in the log
  features, but the sign g is only in the biography, so conditioning on it
  matters. One feature is a score counter whose events cluster inside the
  bursts, one leaks the archetype (useful to the auxiliary head), and the
  rest are mixtures, drifts and noise.
- flat-segment world: ground truth holds exactly constant for a 30 s span
  while a clean 1 Hz feature keeps oscillating; outside the span that
  oscillation contributes 0.05 of the GT. Sampled at 4 Hz with comparison
  gap 4 the oscillation is invisible to ordinal labels (its one-second
  difference is zero) but a squared-error fit must chase it, which is the
  over-sampling contrast the fixture isolates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.ndimage import gaussian_filter1d

from .sessions import Session
from .trace import AnnotationTrace

__all__ = [
    "ARCHETYPES",
    "archetype_curve",
    "make_archetype_corpus",
    "SynthWorld",
    "make_world",
    "make_flat_world",
    "make_monotone_world",
    "FLAT_SPAN_S",
]

ARCHETYPES = ("rising", "falling", "hill", "valley")
FLAT_SPAN_S = (45.0, 75.0)

WORLD_FEATURES = ("momentum", "progress", "pressure", "defense",
                  "drift", "score", "mode", "echo")
FLAT_FEATURES = ("slow", "fast", "slow_mix", "noise")
BIO_NAMES = ("group[0]", "group[1]", "skill")


def archetype_curve(kind: str, t: np.ndarray) -> np.ndarray:
    """Base trend on normalized time t in [0, 1], ranging over [-1, 1]."""
    if kind == "rising":
        return 2.0 * t - 1.0
    if kind == "falling":
        return 1.0 - 2.0 * t
    if kind == "hill":
        return 2.0 * np.sin(np.pi * t) - 1.0
    if kind == "valley":
        return 1.0 - 2.0 * np.sin(np.pi * t)
    raise ValueError(f"unknown archetype {kind!r}")


def make_archetype_corpus(n_per: int = 20, noise: float = 0.05, seed: int = 0,
                          rate_hz=4, length_range: tuple[int, int] = (100, 140)
                          ) -> tuple[list[AnnotationTrace], list[int]]:
    """Noisy traces from the four trend families, shuffled; returns labels too."""
    rng = np.random.default_rng(seed)
    traces, labels = [], []
    for a_idx, kind in enumerate(ARCHETYPES):
        for _ in range(n_per):
            length = int(rng.integers(length_range[0], length_range[1] + 1))
            t = np.linspace(0.0, 1.0, length)
            values = archetype_curve(kind, t) + rng.normal(0.0, noise, size=length)
            traces.append(AnnotationTrace(values, rate_hz))
            labels.append(a_idx)
    order = rng.permutation(len(traces))
    return [traces[i] for i in order], [labels[i] for i in order]


def _sinusoid_mix(rng, t_s: np.ndarray, n: int, freq_range, amp_range) -> np.ndarray:
    out = np.zeros_like(t_s)
    for _ in range(n):
        freq = rng.uniform(*freq_range)
        amp = rng.uniform(*amp_range)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        out += amp * np.sin(2.0 * np.pi * freq * t_s + phase)
    return out


def _smooth_noise(rng, n: int, sigma: float, amp: float) -> np.ndarray:
    raw = gaussian_filter1d(rng.normal(size=n), sigma=sigma)
    peak = np.abs(raw).max()
    return raw * (amp / peak) if peak > 0 else raw


def _burst_gate(rng, t_s: np.ndarray, duration: float) -> np.ndarray:
    """Smooth 0..1 activity envelope made of a few raised-cosine bursts."""
    gate = np.zeros_like(t_s)
    for _ in range(int(rng.integers(4, 8))):
        center = rng.uniform(0.10, 0.90) * duration
        half = rng.uniform(6.0, 11.0)
        u = (t_s - center) / half
        gate += np.where(np.abs(u) < 1.0, np.cos(0.5 * np.pi * u) ** 2, 0.0)
    return np.clip(gate, 0.0, 1.0)


def _score_counter(rng, gate: np.ndarray, rate: float) -> np.ndarray:
    """Normalized cumulative score whose events cluster where the gate is high.

    The jump train is smoothed with a short finite kernel so the counter
    ramps over a couple of seconds per event but stays exactly constant
    elsewhere (plateaus have bitwise-zero increments).
    """
    lam = (0.02 + 0.35 * gate) / rate
    jumps = np.where(rng.uniform(size=gate.size) < lam,
                     rng.integers(1, 4, size=gate.size) * 10.0, 0.0)
    kernel = np.hanning(11)[1:-1]
    kernel /= kernel.sum()
    score = np.cumsum(np.convolve(jumps, kernel, mode="same"))
    top = score[-1]
    return score / top if top > 0 else score


@dataclass
class SynthWorld:
    """Train/test sessions plus the generator's hidden per-session labels."""

    train: list[Session]
    test: list[Session]
    archetype: dict[str, int] = field(default_factory=dict)
    group: dict[str, int] = field(default_factory=dict)

    @property
    def all_sessions(self) -> list[Session]:
        return self.train + self.test

    def splits(self) -> dict[str, str]:
        out = {s.session_id: "train" for s in self.train}
        out.update({s.session_id: "test" for s in self.test})
        return out


def _world_session(rng, sid: str, a_idx: int, group: int, T: int, rate) -> Session:
    t_s = np.arange(T) / float(rate)
    t_norm = t_s / t_s[-1]
    s1 = archetype_curve(ARCHETYPES[a_idx], t_norm) \
        + _sinusoid_mix(rng, t_s, 2, (0.010, 0.030), (0.10, 0.18))
    s2 = _sinusoid_mix(rng, t_s, 3, (0.020, 0.050), (0.15, 0.30))
    gate = _burst_gate(rng, t_s, t_s[-1])
    s3 = gate * _sinusoid_mix(rng, t_s, 2, (0.08, 0.15), (0.12, 0.20))
    sign = 1.0 if group == 0 else -1.0
    affect = s1 + sign * s2 + s3

    drift = _smooth_noise(rng, T, sigma=40.0, amp=0.4)
    lag = 8  # two seconds
    echo = np.concatenate([np.full(lag, s1[0]), (s1 + s3)[:-lag]])
    noise = lambda amp: rng.normal(0.0, amp, size=T)
    features = np.column_stack([
        s1 + s3 + noise(0.002),                  # momentum
        0.6 * s1 + 0.2 * drift + noise(0.002),   # progress
        s2 + noise(0.002),                       # pressure
        -0.8 * s2 + noise(0.002),                # defense
        drift,                                   # drift
        _score_counter(rng, gate, float(rate)),  # score
        np.full(T, a_idx / 3.0) + noise(0.01),   # mode
        echo + noise(0.002),                     # echo
    ])
    skill = rng.uniform(0.0, 1.0)
    bio = np.asarray([1.0 - group, float(group), skill])
    return Session(sid, Fraction(rate), features, WORLD_FEATURES, bio, BIO_NAMES,
                   AnnotationTrace(affect, rate))


def make_world(n_train: int = 60, n_test: int = 20, duration_s: float = 120.0,
               rate_hz=4, seed: int = 0) -> SynthWorld:
    """Mixed-signal world: biography-signed combination of two smooth signals."""
    rng = np.random.default_rng(seed)
    rate = Fraction(rate_hz)
    T = int(duration_s * rate)
    world = SynthWorld([], [])
    for n in range(n_train + n_test):
        sid = f"s{n:03d}"
        a_idx = n % len(ARCHETYPES)
        group = (n // len(ARCHETYPES)) % 2
        sess = _world_session(rng, sid, a_idx, group, T, rate)
        (world.train if n < n_train else world.test).append(sess)
        world.archetype[sid] = a_idx
        world.group[sid] = group
    return world


def _flat_session(rng, sid: str, T: int, rate, flat_span) -> Session:
    t_s = np.arange(T) / float(rate)
    slow = _sinusoid_mix(rng, t_s, 2, (0.008, 0.018), (0.4, 0.7))
    fast = np.sin(2.0 * np.pi * 1.0 * t_s + rng.uniform(0.0, 2.0 * np.pi))
    affect = slow + 0.05 * fast
    lo = int(round(flat_span[0] * float(rate)))
    hi = int(round(flat_span[1] * float(rate)))
    affect[lo:hi] = affect[lo]

    features = np.column_stack([
        slow + rng.normal(0.0, 0.01, size=T),
        fast,
        0.5 * slow + rng.normal(0.0, 0.01, size=T),
        rng.normal(0.0, 0.05, size=T),
    ])
    bio = np.asarray([1.0])
    return Session(sid, Fraction(rate), features, FLAT_FEATURES, bio, ("const",),
                   AnnotationTrace(affect, rate))


def make_flat_world(n_train: int = 12, n_test: int = 2, duration_s: float = 120.0,
                    rate_hz=4, seed: int = 0,
                    flat_span: tuple[float, float] = FLAT_SPAN_S) -> SynthWorld:
    """Flat-segment fixture: GT exactly constant over flat_span seconds."""
    rng = np.random.default_rng(seed)
    rate = Fraction(rate_hz)
    T = int(duration_s * rate)
    world = SynthWorld([], [])
    for n in range(n_train + n_test):
        sid = f"f{n:03d}"
        sess = _flat_session(rng, sid, T, rate, flat_span)
        (world.train if n < n_train else world.test).append(sess)
    return world


def make_monotone_world(n_train: int = 8, n_test: int = 2, duration_s: float = 50.0,
                        rate_hz=4, seed: int = 0) -> SynthWorld:
    """Strictly increasing affect driven by a visible accumulating feature."""
    rng = np.random.default_rng(seed)
    rate = Fraction(rate_hz)
    T = int(duration_s * rate)
    t_s = np.arange(T) / float(rate)
    world = SynthWorld([], [])
    for n in range(n_train + n_test):
        pace = rng.uniform(0.5, 1.5) + 0.4 * np.sin(
            2.0 * np.pi * rng.uniform(0.01, 0.03) * t_s + rng.uniform(0, 2 * np.pi)) ** 2
        affect = np.cumsum(pace) / T
        features = np.column_stack([
            affect + rng.normal(0.0, 0.02, size=T),
            pace + rng.normal(0.0, 0.05, size=T),
            rng.normal(0.0, 0.2, size=T),
        ])
        sess = Session(f"m{n:02d}", rate, features, ("level", "pace", "noise"),
                       np.asarray([1.0]), ("const",), AnnotationTrace(affect, rate))
        (world.train if n < n_train else world.test).append(sess)
    return world
