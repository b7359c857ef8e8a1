"""
Pairwise preference probabilities
=================================

A trained scorer assigns each moment a scalar utility; a pair of moments
(i, j) is compared through the difference p_ij = p_j - p_i. Two losses
read that difference:

* binary logistic: P(j preferred) = sigma(p_ij), two classes only;
* three-class cumulative link: fixed cutpoints c0 < c1 carve the score
  axis into "less", "equal", "greater", which gives ties a home.

This script traces both across the score axis and shows how the cutpoint
gap controls the size of the "equal" band.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ordaffect.losses import Cutpoints, bce_prob, oce_probs

out_dir = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(out_dir, exist_ok=True)

p = np.linspace(-6.0, 6.0, 601)

# With the default cutpoints (-1, 1) the middle class occupies roughly the
# band between them; the outer classes take over in the tails.
cuts = Cutpoints(-1.0, 1.0)
p0, p1, p2 = oce_probs(p, cuts)
print("default cutpoints (-1, 1)")
print(f"  P(equal) peaks at p_ij = {p[np.argmax(p1)]:+.2f} with value {p1.max():.3f}")
print(f"  probabilities sum to 1 within {np.abs(p0 + p1 + p2 - 1).max():.2e}")

fig, axes = plt.subplots(1, 3, figsize=(13, 3.6), sharey=True)
axes[0].plot(p, bce_prob(p), color="tab:blue")
axes[0].set_title("binary: P(j preferred)")
axes[0].set_xlabel("p_ij")

axes[1].plot(p, p0, label="less")
axes[1].plot(p, p1, label="equal")
axes[1].plot(p, p2, label="greater")
axes[1].axvline(cuts.c0, color="gray", lw=0.8, ls=":")
axes[1].axvline(cuts.c1, color="gray", lw=0.8, ls=":")
axes[1].set_title("three-class, cutpoints (-1, 1)")
axes[1].set_xlabel("p_ij")
axes[1].legend()

# Shrinking the gap between the cutpoints starves the middle class: at
# c1 - c0 = 1e-8 the "equal" probability never rises above ~2.5e-9 and the
# model degenerates to the binary one.
for gap in (2.0, 0.5, 1e-8):
    c = Cutpoints(-gap / 2, gap / 2)
    _, mid, _ = oce_probs(p, c)
    axes[2].plot(p, mid, label=f"gap {gap:g}")
    print(f"cutpoint gap {gap:<6g} max P(equal) = {mid.max():.3e}")
axes[2].set_title("P(equal) vs cutpoint gap")
axes[2].set_xlabel("p_ij")
axes[2].legend()

fig.tight_layout()
path = os.path.join(out_dir, "probability_curves.png")
fig.savefig(path, dpi=120)
print(f"wrote {path}")
