"""
Trend clustering of affect traces
=================================

Retrospective traces from different sessions have different lengths and
scales, but their shapes repeat: rises, falls, arcs. The clustering module
min-max normalizes each trace, resamples it to a common length, measures
shape distance with dynamic time warping, and partitions with a medoid
scheme. The cluster count is scanned and picked by balancing silhouette
against cluster-size entropy.

Here we build a corpus with four planted trend archetypes, let the scan
pick k, and draw each recovered cluster around its medoid.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ordaffect.clustering import cluster, scan_k, select_k
from ordaffect.synth import make_archetype_corpus

out_dir = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(out_dir, exist_ok=True)

# 80 traces, 20 per archetype, mild noise, slightly varying lengths
traces, truth = make_archetype_corpus(n_per=20, noise=0.05, seed=7)
print(f"{len(traces)} traces, lengths {min(t.values.size for t in traces)}"
      f"..{max(t.values.size for t in traces)} samples")

# The scan scores every k; both ingredients are normalized before averaging
# so neither dominates on raw scale.
print(f"\n{'k':>3} {'silhouette':>11} {'entropy':>9} {'score':>7}")
for row in scan_k(traces, (2, 7)):
    print(f"{row.k:>3} {row.silhouette:>11.3f} {row.entropy:>9.3f} {row.score:>7.3f}")

best = select_k(traces, (2, 7))
print(f"\nselected k = {best.k}")

# Cluster labels are arbitrary ids, so compare against the planted archetypes
# with a contingency table rather than direct equality.
table = np.zeros((best.k, 4), dtype=int)
for label, true in zip(best.labels, truth):
    table[label, true] += 1
print("cluster x archetype contingency:")
print(table)
purity = table.max(axis=1).sum() / len(traces)
print(f"purity {purity:.2f}")

fig, axes = plt.subplots(1, best.k, figsize=(3.2 * best.k, 3.0), sharey=True)
assignment = cluster(traces, best.k)
for c, ax in enumerate(np.atleast_1d(axes)):
    members = [i for i, l in enumerate(assignment.labels) if l == c]
    for i in members:
        v = traces[i].values
        v = (v - v.min()) / (v.max() - v.min())
        ax.plot(np.linspace(0, 1, v.size), v, color="tab:gray", alpha=0.25, lw=0.8)
    mid = assignment.medoid_ids[c]
    v = traces[mid].values
    v = (v - v.min()) / (v.max() - v.min())
    ax.plot(np.linspace(0, 1, v.size), v, color="tab:red", lw=2.0)
    ax.set_title(f"cluster {c} (n={len(members)})")
    ax.set_xlabel("normalized time")
fig.tight_layout()
path = os.path.join(out_dir, "clusters.png")
fig.savefig(path, dpi=120)
print(f"wrote {path}")
