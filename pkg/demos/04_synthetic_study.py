"""
End-to-end study on a synthetic world
=====================================

The full loop on generated data where ground truth is known:

1. sample a world of play sessions (logged features + a latent affect
   trace per session, with per-player biography flipping one channel);
2. train the pairwise ordinal scorer on exact-gap frame pairs;
3. reconstruct each test session's trajectory and detect inflection
   regions on the session-normalized trace;
4. compare against random and uniform region placement given the same
   region budget, scoring duration-weighted F1 and time efficiency.

Runs a reduced world so it finishes in a few seconds; the shipped test
suite runs the full-size version.
"""

import os
import time

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from ordaffect.clustering import cluster
from ordaffect.inflection import InflectionConfig, detect_regions, detection_indices
from ordaffect.losses import Cutpoints
from ordaffect.metrics import (ccc, delta_te, dtw_similarity, region_f1,
                               spearman_rho, time_efficiency)
from ordaffect.model import NetworkConfig, reconstruct, train
from ordaffect.samplers import random_regions, uniform_regions
from ordaffect.synth import make_world
from ordaffect.trace import normalize_session

out_dir = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(out_dir, exist_ok=True)

t0 = time.time()
world = make_world(n_train=30, n_test=8, duration_s=120.0, rate_hz=4, seed=1)
print(f"world: {len(world.train)} train / {len(world.test)} test sessions, "
      f"{world.train[0].n_frames} frames each")

# Detection runs on session-normalized traces, so the slope threshold is a
# fraction of each session's value range.
detect_cfg = InflectionConfig(gradient_threshold=0.02)
gt_regions = {s.session_id: detect_regions(normalize_session(s.gt), detect_cfg,
                                           source="gt") for s in world.test}
budget = float(np.mean([detection_indices(normalize_session(s.gt), detect_cfg).size
                        for s in world.test]))
gt_tes = [time_efficiency(gt_regions[s.session_id], s.n_frames) for s in world.test]
print(f"ground truth: {budget:.1f} inflection points per session, "
      f"TE {np.mean(gt_tes):.3f}")

# Auxiliary labels come from clustering the training traces; the ordinal
# loss gets a small classification head on top of the shared encoder.
aux = {s.session_id: int(l) for s, l in
       zip(world.train, cluster([s.gt for s in world.train], 4).labels)}

net = NetworkConfig(encoder_layers=(64,), latent_dim=16, film_hidden=8,
                    aux_classes=4, seed=1, learning_rate=3e-4, batch_size=256,
                    epochs=40, alpha=0.001, optimizer="adam")
result = train(world.train, net, cuts=Cutpoints(-1.0, 1.0), gap=4, eps=0.10,
               aux_labels=aux)
print(f"trained {net.epochs} epochs, loss {result.history[0]['loss']:.4f} -> "
      f"{result.history[-1]['loss']:.4f} ({time.time() - t0:.0f}s)")

# Reconstruct, normalize, detect; baselines get the same region budget.
methods = {"model": {}, "random": {}, "uniform": {}}
recons = {}
for n, s in enumerate(world.test):
    trace = normalize_session(reconstruct(s, result.weights, net))
    recons[s.session_id] = trace
    methods["model"][s.session_id] = detect_regions(trace, detect_cfg)
    methods["random"][s.session_id] = random_regions(s.n_frames, budget, 4,
                                                     seed=1 + n, config=detect_cfg)
    methods["uniform"][s.session_id] = uniform_regions(s.n_frames, budget, 4,
                                                       config=detect_cfg)

print(f"\n{'method':>8} {'F1':>6} {'TE':>6} {'dTE':>6}")
for name, regions in methods.items():
    f1s = [region_f1(gt_regions[s.session_id], regions[s.session_id], s.n_frames)
           for s in world.test]
    tes = [time_efficiency(regions[s.session_id], s.n_frames) for s in world.test]
    print(f"{name:>8} {np.mean(f1s):>6.3f} {np.mean(tes):>6.3f} "
          f"{delta_te(gt_tes, tes):>6.3f}")

# Trace-level agreement for the reconstructions themselves.
sess = world.test[0]
gt_norm = normalize_session(sess.gt)
model_trace = recons[sess.session_id]
print(f"\nfirst test session: ccc {ccc(gt_norm, model_trace):.3f}, "
      f"spearman {spearman_rho(gt_norm, model_trace):.3f}, "
      f"dtw similarity {dtw_similarity(gt_norm, model_trace):.3f}")

t = np.arange(sess.n_frames) / 4.0
fig, ax = plt.subplots(figsize=(10, 3.4))
ax.plot(t, gt_norm.values, color="black", lw=1.2, label="ground truth")
ax.plot(t, model_trace.values, color="tab:blue", lw=1.0, label="reconstruction")
for k, region in enumerate(methods["model"][sess.session_id]):
    iv = region.interval
    ax.axvspan(iv.start_idx / 4.0, iv.end_idx / 4.0, color="tab:orange",
               alpha=0.25, label="detected region" if k == 0 else None)
ax.set_xlabel("time (s)")
ax.set_ylabel("normalized affect")
ax.legend(loc="upper right")
fig.tight_layout()
path = os.path.join(out_dir, "synthetic_study.png")
fig.savefig(path, dpi=120)
print(f"wrote {path}")
