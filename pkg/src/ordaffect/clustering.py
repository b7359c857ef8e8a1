"""Trend clustering of affect traces under dynamic time warping.

Traces are min-max normalized and linearly resampled to a common length,
then partitioned with a medoid-update scheme (assign to nearest medoid,
re-pick each cluster's medoid as the member minimizing within-cluster
distance). Medoid seeds come from a farthest-first traversal starting at
the global medoid, which makes the partition a deterministic function of
the data; the seed argument is accepted for interface stability. All ties
break toward the lowest index.

k is chosen over a range by balancing the silhouette score against the
cluster-size entropy: both are normalized (silhouette min-max over the
scanned range, entropy by ln k) and averaged; ties go to the smaller k.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyTrace, TooFewSessions

__all__ = [
    "DtwParams",
    "ClusterAssignment",
    "KScore",
    "dtw_distance",
    "dtw_distance_matrix",
    "silhouette_score",
    "label_entropy",
    "cluster",
    "scan_k",
    "select_k",
    "cluster_report",
]

_MAX_ITER = 100


@dataclass(frozen=True)
class DtwParams:
    """window: optional band half-width in samples (widened to |n - m| when
    narrower, so the end cell stays reachable); local cost is the squared
    difference."""

    window: int | None = None

    def __post_init__(self):
        if self.window is not None and self.window < 0:
            raise ValueError(f"window must be >= 0, got {self.window}")


@dataclass
class ClusterAssignment:
    k: int
    labels: np.ndarray
    medoid_ids: list[int]
    silhouette: float
    entropy: float


@dataclass
class KScore:
    """Per-k row of the selection scan."""

    k: int
    silhouette: float
    entropy: float
    norm_silhouette: float
    norm_entropy: float
    score: float
    assignment: ClusterAssignment


def _trace_values(trace) -> np.ndarray:
    return np.asarray(getattr(trace, "values", trace), dtype=np.float64).ravel()


def dtw_distance(a, b, params: DtwParams = DtwParams()) -> float:
    """Dynamic-programming alignment cost with squared-difference local cost.

    Computed over anti-diagonals so each step is a vector operation rather
    than a Python-level cell loop.
    """
    x = _trace_values(a)
    y = _trace_values(b)
    n, m = x.size, y.size
    if n == 0 or m == 0:
        raise EmptyTrace("dtw inputs must be non-empty")
    cost = (x[:, None] - y[None, :]) ** 2
    window = params.window
    if window is not None:
        window = max(window, abs(n - m))

    # diag arrays indexed by i (0..n); diag_s[i] = D[i, s - i] where D is the
    # (n+1) x (m+1) accumulated-cost table with an infinite border.
    inf = np.inf
    prev2 = np.full(n + 1, inf)
    prev2[0] = 0.0  # D[0, 0]
    prev1 = np.full(n + 1, inf)  # s = 1: both D[0,1] and D[1,0] are border cells
    cur = prev2
    for s in range(2, n + m + 1):
        lo = max(1, s - m)
        hi = min(n, s - 1)
        if window is not None:
            lo = max(lo, -((window - s) // 2))   # ceil((s - window) / 2)
            hi = min(hi, (s + window) // 2)
        cur = np.full(n + 1, inf)
        if lo <= hi:
            idx = np.arange(lo, hi + 1)
            best = np.minimum(prev1[idx - 1], prev1[idx])
            best = np.minimum(best, prev2[idx - 1])
            cur[idx] = cost[idx - 1, s - idx - 1] + best
        prev2, prev1 = prev1, cur
    return float(cur[n])


def dtw_distance_matrix(traces, params: DtwParams = DtwParams()) -> np.ndarray:
    arrays = [_trace_values(t) for t in traces]
    n = len(arrays)
    dist = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            dist[i, j] = dist[j, i] = dtw_distance(arrays[i], arrays[j], params)
    return dist


def _resample_to_length(x: np.ndarray, length: int) -> np.ndarray:
    if x.size == length:
        return x.copy()
    src = np.linspace(0.0, 1.0, x.size)
    tgt = np.linspace(0.0, 1.0, length)
    return np.interp(tgt, src, x)


def _minmax(x: np.ndarray) -> np.ndarray:
    lo, hi = x.min(), x.max()
    if hi == lo:
        return np.zeros_like(x)
    return (x - lo) / (hi - lo)


def _prepare(traces, resample_len: int) -> list[np.ndarray]:
    out = []
    for t in traces:
        x = _trace_values(t)
        if x.size == 0:
            raise EmptyTrace("cannot cluster an empty trace")
        out.append(_minmax(_resample_to_length(x, resample_len)))
    return out


def silhouette_score(dist: np.ndarray, labels: np.ndarray) -> float:
    """Mean silhouette over points; singleton clusters score 0, as does the
    0/0 case of coincident points."""
    labels = np.asarray(labels)
    n = labels.size
    ks = np.unique(labels)
    scores = np.zeros(n)
    for idx in range(n):
        own = labels[idx]
        mask_own = (labels == own)
        n_own = int(mask_own.sum())
        if n_own <= 1:
            scores[idx] = 0.0
            continue
        a = dist[idx, mask_own].sum() / (n_own - 1)
        b = np.inf
        for other in ks:
            if other == own:
                continue
            b = min(b, dist[idx, labels == other].mean())
        denom = max(a, b)
        scores[idx] = 0.0 if denom == 0.0 else (b - a) / denom
    return float(scores.mean())


def label_entropy(labels: np.ndarray, k: int | None = None) -> float:
    """Natural-log entropy of the cluster-size distribution."""
    labels = np.asarray(labels)
    counts = np.bincount(labels, minlength=k or 0).astype(np.float64)
    probs = counts[counts > 0] / labels.size
    return float(-(probs * np.log(probs)).sum())


def _farthest_first_medoids(dist: np.ndarray, k: int) -> list[int]:
    totals = dist.sum(axis=1)
    medoids = [int(np.argmin(totals))]
    while len(medoids) < k:
        nearest = dist[:, medoids].min(axis=1)
        nearest[medoids] = -np.inf  # never re-pick a chosen medoid
        medoids.append(int(np.argmax(nearest)))
    return medoids


def _assign(dist: np.ndarray, medoids: list[int]) -> np.ndarray:
    ordered = sorted(medoids)
    labels = np.argmin(dist[:, ordered], axis=1)
    for c, mid in enumerate(ordered):
        labels[mid] = c  # pin each medoid to its own cluster
    return labels


def _update_medoids(dist: np.ndarray, labels: np.ndarray, k: int) -> list[int]:
    medoids = []
    for c in range(k):
        members = np.nonzero(labels == c)[0]
        within = dist[np.ix_(members, members)].sum(axis=1)
        medoids.append(int(members[np.argmin(within)]))
    return medoids


def cluster(traces, k: int, params: DtwParams = DtwParams(), seed: int = 0,
            resample_len: int = 128, dist: np.ndarray | None = None) -> ClusterAssignment:
    """Partition traces into k trend clusters; deterministic for given data.

    A precomputed DTW distance matrix may be passed to avoid recomputation
    across k values. seed is accepted for interface stability; the
    farthest-first initialization makes the result data-determined.
    """
    n = len(traces)
    if k > n:
        raise TooFewSessions(f"k={k} exceeds {n} sessions")
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if dist is None:
        dist = dtw_distance_matrix(_prepare(traces, resample_len), params)
    medoids = _farthest_first_medoids(dist, k)
    labels = _assign(dist, medoids)
    for _ in range(_MAX_ITER):
        new_medoids = _update_medoids(dist, labels, k)
        new_labels = _assign(dist, new_medoids)
        if sorted(new_medoids) == sorted(medoids):
            labels = new_labels
            break
        medoids, labels = new_medoids, new_labels
    medoid_ids = sorted(medoids)
    return ClusterAssignment(
        k=k,
        labels=labels,
        medoid_ids=medoid_ids,
        silhouette=silhouette_score(dist, labels),
        entropy=label_entropy(labels, k),
    )


def _pick_best(scored: list[tuple[int, float]]) -> int:
    """k with the highest score; exact ties resolve to the smaller k."""
    best_k, best_score = scored[0]
    for k, score in scored[1:]:
        if score > best_score or (score == best_score and k < best_k):
            best_k, best_score = k, score
    return best_k


def scan_k(traces, k_range: tuple[int, int] = (2, 7),
           params: DtwParams = DtwParams(), seed: int = 0,
           resample_len: int = 128) -> list[KScore]:
    """Cluster at every k in the range and score the silhouette/entropy balance."""
    lo, hi = k_range
    if lo < 2:
        raise ValueError(f"k range must start at 2 or above, got {lo}")
    hi = min(hi, len(traces))
    if hi < lo:
        raise TooFewSessions(
            f"need at least {lo} sessions for k range {k_range}, got {len(traces)}")
    dist = dtw_distance_matrix(_prepare(traces, resample_len), params)
    rows = []
    for k in range(lo, hi + 1):
        asg = cluster(traces, k, params, seed, resample_len, dist=dist)
        rows.append([k, asg.silhouette, asg.entropy / np.log(k), asg])
    sils = np.asarray([r[1] for r in rows])
    span = sils.max() - sils.min()
    for r in rows:
        r.append(0.0 if span == 0.0 else (r[1] - sils.min()) / span)
    return [
        KScore(k=k, silhouette=sil, entropy=asg.entropy,
               norm_silhouette=nsil, norm_entropy=nent,
               score=(nsil + nent) / 2.0, assignment=asg)
        for k, sil, nent, asg, nsil in rows
    ]


def select_k(traces, k_range: tuple[int, int] = (2, 7),
             params: DtwParams = DtwParams(), seed: int = 0,
             resample_len: int = 128) -> ClusterAssignment:
    """Pick the k that best balances silhouette and size entropy."""
    scores = scan_k(traces, k_range, params, seed, resample_len)
    best = _pick_best([(s.k, s.score) for s in scores])
    return next(s.assignment for s in scores if s.k == best)


def cluster_report(scores: list[KScore], chosen: ClusterAssignment,
                   config_hash: str | None = None) -> dict:
    """JSON-ready per-k table plus the chosen assignment."""
    report = {
        "per_k": [
            {
                "k": s.k,
                "silhouette": s.silhouette,
                "entropy": s.entropy,
                "norm_silhouette": s.norm_silhouette,
                "norm_entropy": s.norm_entropy,
                "score": s.score,
            }
            for s in scores
        ],
        "selected_k": chosen.k,
        "labels": [int(l) for l in chosen.labels],
        "medoid_ids": [int(m) for m in chosen.medoid_ids],
        "silhouette": chosen.silhouette,
        "entropy": chosen.entropy,
    }
    if config_hash is not None:
        report["config_hash"] = config_hash
    return report
