"""
From region traces to a full-session trace
==========================================

Annotators only label selected regions, and each region trace is relative:
it starts at zero and records movement within the region. The assembly rule
rebuilds a full-session trace from those pieces:

* a region is placed on top of the running value at its start sample;
* after the region ends, its closing trend (the slope between the midpoint
  sample and the last sample) continues one sample at a time, up to and
  including the next region's start;
* samples before the first region hold the baseline 0.

This script walks the worked 8-sample example and then a denser session.
"""

import os
from fractions import Fraction

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ordaffect.interpolate import interpolate
from ordaffect.trace import TimeInterval

out_dir = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(out_dir, exist_ok=True)

# --- the 8-sample walkthrough -------------------------------------------
# Region 1 covers samples [0, 3) and rises 0, 1, 2: its closing slope is
# (2 - 1) / 1 = +1 per sample, so samples 3, 4, 5 continue 3, 4, 5.
# Region 2 covers [5, 8) and lands on the running value 5; its relative
# trace 0, -1, -1 produces 5, 4, 4, and its closing slope is 0.
regions = [
    (TimeInterval(0, 3), np.array([0.0, 1.0, 2.0])),
    (TimeInterval(5, 8), np.array([0.0, -1.0, -1.0])),
]
full = interpolate(8, regions)
print("walkthrough:", full.tolist())
assert full.tolist() == [0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 4.0, 4.0]

# --- a denser session ----------------------------------------------------
# Three annotated regions in a 60-sample session (15 s at 4 Hz). The gaps
# are filled by each region's closing trend, so the reconstruction stays
# piecewise linear between regions, which shows up as exactly zero second
# differences there.
rate = Fraction(4)
rng = np.random.default_rng(0)
spans = [TimeInterval(8, 20), TimeInterval(28, 36), TimeInterval(44, 56)]
traces = []
for iv in spans:
    steps = rng.choice([-0.25, 0.0, 0.25], size=len(iv) - 1)
    traces.append(np.concatenate([[0.0], np.cumsum(steps)]))

full = interpolate(60, list(zip(spans, traces)))
d2 = np.diff(full, 2)
outside = np.ones(58, dtype=bool)
for iv in spans:
    outside[max(iv.start_idx - 2, 0):iv.end_idx] = False
print(f"max |second difference| outside regions: {np.abs(d2[outside]).max():.1e}")

t = np.arange(60) / float(rate)
fig, ax = plt.subplots(figsize=(9, 3.2))
ax.plot(t, full, color="black", lw=1.2, label="assembled trace")
for k, (iv, values) in enumerate(zip(spans, traces)):
    seg = slice(iv.start_idx, iv.end_idx)
    ax.plot(t[seg], full[seg], lw=3.0, alpha=0.6,
            label="annotated region" if k == 0 else None)
ax.set_xlabel("time (s)")
ax.set_ylabel("relative affect")
ax.legend()
fig.tight_layout()
path = os.path.join(out_dir, "interpolation.png")
fig.savefig(path, dpi=120)
print(f"wrote {path}")
