"""Ordinal preference network with biography conditioning.

Architecture, all float64 with tanh nonlinearities:

    x  = flattened 12-frame feature window          (12 * d_f,)
    h  = tanh(W h + b) per encoder layer
    z  = tanh(W_lat h + b_lat)                      latent
    g  = tanh(W_f1 bio + b_f1)                      conditioning hidden
    z' = gamma(g) * z + beta(g)                     feature-wise affine
    p  = w_p . z' + b_p                             scalar utility
    q  = softmax(W_q z' + b_q)                      auxiliary class head

Training is Siamese: a pair (i, j) runs both segments through the same
weights and scores p_ij = p_j - p_i with the ordinal three-class loss plus
an auxiliary cross-entropy on both branches (weight alpha). The trajectory
for a session is the per-segment utility sequence; the first 12 samples
(which have no full window) are back-filled with the first utility so the
trace has one value per frame.

Gradients are analytic (hand backprop over the batch); optimizers are
plain SGD and Adam with a seeded uniform fan-in init, so a fixed config and
seed reproduce runs bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, NoGroundTruth, NoTrainingData
from .losses import Cutpoints, cross_entropy, oce_grad_pair, oce_loss, softmax
from .pairing import (FIRST_INDEX, WINDOW_FRAMES, FeatureSegment, build_pairs,
                      label_to_class, segment_matrix)
from .trace import AnnotationTrace

__all__ = [
    "NetworkConfig",
    "ModelWeights",
    "TrainResult",
    "init_weights",
    "forward",
    "train",
    "train_regression",
    "reconstruct",
    "pair_accuracy",
    "save_checkpoint",
    "load_checkpoint",
    "write_training_log",
]

CHECKPOINT_FORMAT = "ordinal-affect-checkpoint"
CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class NetworkConfig:
    """Network shape, ablation flags and optimization settings."""

    encoder_layers: tuple[int, ...] = (32,)
    latent_dim: int = 16
    film_hidden: int = 8
    aux_classes: int = 4
    use_film: bool = True
    use_aux: bool = True
    seed: int = 0
    optimizer: str = "adam"
    learning_rate: float = 1e-3
    batch_size: int = 64
    epochs: int = 100
    alpha: float = 0.001

    def __post_init__(self):
        object.__setattr__(self, "encoder_layers", tuple(int(w) for w in self.encoder_layers))
        if self.latent_dim <= 0:
            raise ValueError("latent_dim must be positive")
        if self.aux_classes < 2:
            raise ValueError("aux_classes must be >= 2")
        if any(w <= 0 for w in self.encoder_layers):
            raise ValueError("encoder widths must be positive")
        if self.optimizer not in ("sgd", "adam"):
            raise ValueError(f"unknown optimizer {self.optimizer!r}")

    def to_dict(self) -> dict:
        return {
            "encoder_layers": list(self.encoder_layers),
            "latent_dim": self.latent_dim,
            "film_hidden": self.film_hidden,
            "aux_classes": self.aux_classes,
            "use_film": self.use_film,
            "use_aux": self.use_aux,
            "seed": self.seed,
            "optimizer": self.optimizer,
            "learning_rate": self.learning_rate,
            "batch_size": self.batch_size,
            "epochs": self.epochs,
            "alpha": self.alpha,
        }

    @staticmethod
    def from_dict(data: dict) -> "NetworkConfig":
        return NetworkConfig(**data)


@dataclass
class ModelWeights:
    """All parameters; names and iteration order are fixed for serialization."""

    enc_w: list[np.ndarray]
    enc_b: list[np.ndarray]
    lat_w: np.ndarray
    lat_b: np.ndarray
    film_w1: np.ndarray
    film_b1: np.ndarray
    film_wg: np.ndarray
    film_bg: np.ndarray
    film_wb: np.ndarray
    film_bb: np.ndarray
    head_w: np.ndarray
    head_b: np.ndarray
    aux_w: np.ndarray
    aux_b: np.ndarray

    @property
    def in_dim(self) -> int:
        return (self.enc_w[0] if self.enc_w else self.lat_w).shape[1]

    @property
    def bio_dim(self) -> int:
        return self.film_w1.shape[1]

    def named_arrays(self) -> list[tuple[str, np.ndarray]]:
        out = []
        for l, (w, b) in enumerate(zip(self.enc_w, self.enc_b)):
            out.append((f"enc_w.{l}", w))
            out.append((f"enc_b.{l}", b))
        out.extend([
            ("lat_w", self.lat_w), ("lat_b", self.lat_b),
            ("film_w1", self.film_w1), ("film_b1", self.film_b1),
            ("film_wg", self.film_wg), ("film_bg", self.film_bg),
            ("film_wb", self.film_wb), ("film_bb", self.film_bb),
            ("head_w", self.head_w), ("head_b", self.head_b),
            ("aux_w", self.aux_w), ("aux_b", self.aux_b),
        ])
        return out

    def arrays(self) -> list[np.ndarray]:
        return [arr for _, arr in self.named_arrays()]

    def copy(self) -> "ModelWeights":
        return ModelWeights(
            [w.copy() for w in self.enc_w], [b.copy() for b in self.enc_b],
            self.lat_w.copy(), self.lat_b.copy(),
            self.film_w1.copy(), self.film_b1.copy(),
            self.film_wg.copy(), self.film_bg.copy(),
            self.film_wb.copy(), self.film_bb.copy(),
            self.head_w.copy(), self.head_b.copy(),
            self.aux_w.copy(), self.aux_b.copy(),
        )

    def zeros_like(self) -> "ModelWeights":
        out = self.copy()
        for arr in out.arrays():
            arr[...] = 0.0
        return out

    def check_finite(self) -> None:
        for name, arr in self.named_arrays():
            if not np.all(np.isfinite(arr)):
                raise FloatingPointError(f"non-finite values in {name}")


def init_weights(config: NetworkConfig, d_f: int, d_b: int) -> ModelWeights:
    """Seeded uniform fan-in init; biases start at zero."""
    rng = np.random.default_rng(config.seed)

    def uniform(shape, fan_in):
        lim = 1.0 / np.sqrt(max(fan_in, 1))
        return rng.uniform(-lim, lim, size=shape)

    in_dim = WINDOW_FRAMES * d_f
    enc_w, enc_b = [], []
    prev = in_dim
    for width in config.encoder_layers:
        enc_w.append(uniform((width, prev), prev))
        enc_b.append(np.zeros(width))
        prev = width
    lat_w = uniform((config.latent_dim, prev), prev)
    lat_b = np.zeros(config.latent_dim)
    film_w1 = uniform((config.film_hidden, d_b), d_b)
    film_b1 = np.zeros(config.film_hidden)
    film_wg = uniform((config.latent_dim, config.film_hidden), config.film_hidden)
    film_bg = np.zeros(config.latent_dim)
    film_wb = uniform((config.latent_dim, config.film_hidden), config.film_hidden)
    film_bb = np.zeros(config.latent_dim)
    head_w = uniform((config.latent_dim,), config.latent_dim)
    head_b = np.zeros(())
    aux_w = uniform((config.aux_classes, config.latent_dim), config.latent_dim)
    aux_b = np.zeros(config.aux_classes)
    return ModelWeights(enc_w, enc_b, lat_w, lat_b, film_w1, film_b1,
                        film_wg, film_bg, film_wb, film_bb, head_w, head_b,
                        aux_w, aux_b)


# ---------------------------------------------------------------------------
# Forward / backward
# ---------------------------------------------------------------------------

def _forward_batch(x: np.ndarray, bio: np.ndarray, w: ModelWeights,
                   config: NetworkConfig, want_cache: bool = False):
    """Batched forward pass; x is (B, 12*d_f), bio is (B, d_b)."""
    if x.shape[1] != w.in_dim:
        raise DimensionMismatch(f"segment width {x.shape[1]} != model input {w.in_dim}")
    if config.use_film and bio.shape[1] != w.bio_dim:
        raise DimensionMismatch(f"biography width {bio.shape[1]} != model {w.bio_dim}")
    acts = [x]
    a = x
    for wl, bl in zip(w.enc_w, w.enc_b):
        a = np.tanh(a @ wl.T + bl)
        acts.append(a)
    z = np.tanh(a @ w.lat_w.T + w.lat_b)
    if config.use_film:
        g = np.tanh(bio @ w.film_w1.T + w.film_b1)
        gamma = g @ w.film_wg.T + w.film_bg
        beta = g @ w.film_wb.T + w.film_bb
        zp = gamma * z + beta
    else:
        g = gamma = beta = None
        zp = z
    p = zp @ w.head_w + w.head_b
    logits = zp @ w.aux_w.T + w.aux_b
    q = softmax(logits, axis=-1)
    cache = (acts, z, g, gamma, zp) if want_cache else None
    return p, q, cache


def forward(segment: FeatureSegment, weights: ModelWeights,
            config: NetworkConfig) -> tuple[float, np.ndarray]:
    """Utility p and auxiliary distribution q for one segment."""
    x = np.asarray(segment.frames, dtype=np.float64).reshape(1, -1)
    bio = np.asarray(segment.biography, dtype=np.float64).reshape(1, -1)
    p, q, _ = _forward_batch(x, bio, weights, config)
    return float(p[0]), q[0]


# ---------------------------------------------------------------------------
# Optimizers
# ---------------------------------------------------------------------------

class _Sgd:
    def __init__(self, params: list[np.ndarray], lr: float):
        self.params = params
        self.lr = lr

    def step(self, grads: list[np.ndarray]) -> None:
        for p, gr in zip(self.params, grads):
            p -= self.lr * gr


class _Adam:
    def __init__(self, params: list[np.ndarray], lr: float,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.params = params
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.m = [np.zeros_like(p) for p in params]
        self.v = [np.zeros_like(p) for p in params]
        self.t = 0

    def step(self, grads: list[np.ndarray]) -> None:
        self.t += 1
        bc1 = 1.0 - self.beta1 ** self.t
        bc2 = 1.0 - self.beta2 ** self.t
        for p, gr, m, v in zip(self.params, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * gr
            v *= self.beta2
            v += (1.0 - self.beta2) * gr * gr
            p -= self.lr * (m / bc1) / (np.sqrt(v / bc2) + self.eps)


def _make_optimizer(config: NetworkConfig, params: list[np.ndarray]):
    if config.optimizer == "sgd":
        return _Sgd(params, config.learning_rate)
    return _Adam(params, config.learning_rate)


# ---------------------------------------------------------------------------
# Training
# ---------------------------------------------------------------------------

@dataclass
class TrainResult:
    weights: ModelWeights
    config: NetworkConfig
    history: list[dict]
    d_f: int
    d_b: int


@dataclass
class _Dataset:
    x_all: np.ndarray       # (n_rows, 12*d_f) stacked segment matrices
    bio_all: np.ndarray     # (n_sessions, d_b)
    sess_idx: np.ndarray    # (N,) item -> session
    rows_i: np.ndarray      # (N,) item -> global row of segment i
    rows_j: np.ndarray | None
    cls: np.ndarray | None  # ordinal class per item
    target: np.ndarray | None  # regression target per item
    aux: np.ndarray | None  # auxiliary class per item


def _normalize_aux_labels(sessions, aux_labels) -> np.ndarray:
    if isinstance(aux_labels, dict):
        return np.asarray([int(aux_labels[s.session_id]) for s in sessions])
    arr = np.asarray([int(a) for a in aux_labels])
    if arr.size != len(sessions):
        raise DimensionMismatch(
            f"{arr.size} auxiliary labels for {len(sessions)} sessions")
    return arr


def _stack_segments(sessions):
    mats = [segment_matrix(s) for s in sessions]
    widths = {m.shape[1] for m in mats}
    if len(widths) > 1:
        raise DimensionMismatch(f"sessions disagree on feature width: {sorted(widths)}")
    bio_dims = {s.biography.size for s in sessions}
    if len(bio_dims) > 1:
        raise DimensionMismatch(f"sessions disagree on biography width: {sorted(bio_dims)}")
    offsets = np.cumsum([0] + [m.shape[0] for m in mats])
    x_all = np.vstack(mats)
    bio_all = np.stack([s.biography for s in sessions])
    return x_all, bio_all, offsets


def _build_pair_dataset(sessions, gap, eps, balance, seed, aux_arr) -> _Dataset:
    x_all, bio_all, offsets = _stack_segments(sessions)
    sess_idx, rows_i, rows_j, cls = [], [], [], []
    for s_n, sess in enumerate(sessions):
        for pair in build_pairs(sess, gap=gap, eps=eps, balance=balance, seed=seed):
            sess_idx.append(s_n)
            rows_i.append(offsets[s_n] + pair.i - FIRST_INDEX)
            rows_j.append(offsets[s_n] + pair.j - FIRST_INDEX)
            cls.append(label_to_class(pair.label))
    if not rows_i:
        raise NoTrainingData("no training pairs could be built")
    aux = aux_arr[np.asarray(sess_idx)] if aux_arr is not None else None
    return _Dataset(x_all, bio_all, np.asarray(sess_idx), np.asarray(rows_i),
                    np.asarray(rows_j), np.asarray(cls), None, aux)


def _build_regression_dataset(sessions, aux_arr) -> _Dataset:
    x_all, bio_all, offsets = _stack_segments(sessions)
    sess_idx, rows, target = [], [], []
    for s_n, sess in enumerate(sessions):
        if sess.gt is None:
            raise NoGroundTruth(f"session {sess.session_id} has no GT trace")
        n_seg = sess.n_frames - WINDOW_FRAMES
        sess_idx.extend([s_n] * n_seg)
        rows.extend(range(offsets[s_n], offsets[s_n] + n_seg))
        target.extend(sess.gt.values[WINDOW_FRAMES:])
    if not rows:
        raise NoTrainingData("no training segments could be built")
    aux = aux_arr[np.asarray(sess_idx)] if aux_arr is not None else None
    return _Dataset(x_all, bio_all, np.asarray(sess_idx), np.asarray(rows),
                    None, None, np.asarray(target, dtype=np.float64), aux)


def _aux_loss_and_grad(q, aux_cls, alpha, batch_n):
    """Mean-scaled auxiliary CE and dLoss/dlogits for one branch."""
    ce = cross_entropy(q, aux_cls)
    onehot = np.zeros_like(q)
    onehot[np.arange(q.shape[0]), aux_cls] = 1.0
    dlogits = (alpha / batch_n) * (q - onehot)
    return float(np.sum(ce)) * alpha, dlogits


def _run_training(data: _Dataset, config: NetworkConfig, cuts: Cutpoints,
                  regression: bool) -> TrainResult:
    d_f = data.x_all.shape[1] // WINDOW_FRAMES
    d_b = data.bio_all.shape[1]
    weights = init_weights(config, d_f, d_b)
    grads = weights.zeros_like()
    opt = _make_optimizer(config, weights.arrays())
    rng = np.random.default_rng(config.seed + 1)
    n_items = data.rows_i.size
    use_aux = config.use_aux and data.aux is not None
    history: list[dict] = []

    for epoch in range(config.epochs):
        order = rng.permutation(n_items)
        epoch_loss = 0.0
        for start in range(0, n_items, config.batch_size):
            take = order[start:start + config.batch_size]
            bn = take.size
            bio = data.bio_all[data.sess_idx[take]]
            for arr in grads.arrays():
                arr[...] = 0.0

            if regression:
                x = data.x_all[data.rows_i[take]]
                p, q, cache = _forward_batch(x, bio, weights, config, want_cache=True)
                resid = p - data.target[take]
                batch_loss = float(np.sum(resid * resid))
                dp = (2.0 / bn) * resid
                dlogits = None
                if use_aux:
                    aux_cls = data.aux[take]
                    aux_loss, dlogits = _aux_loss_and_grad(q, aux_cls, config.alpha, bn)
                    batch_loss += aux_loss
                _backward_with_bio(dp, dlogits, q, cache, bio, weights, config, grads)
            else:
                x_i = data.x_all[data.rows_i[take]]
                x_j = data.x_all[data.rows_j[take]]
                p_i, q_i, cache_i = _forward_batch(x_i, bio, weights, config, want_cache=True)
                p_j, q_j, cache_j = _forward_batch(x_j, bio, weights, config, want_cache=True)
                cls = data.cls[take]
                batch_loss = float(np.sum(oce_loss(p_i, p_j, cls, cuts)))
                g_i, g_j = oce_grad_pair(p_i, p_j, cls, cuts)
                dlog_i = dlog_j = None
                if use_aux:
                    aux_cls = data.aux[take]
                    li, dlog_i = _aux_loss_and_grad(q_i, aux_cls, config.alpha, bn)
                    lj, dlog_j = _aux_loss_and_grad(q_j, aux_cls, config.alpha, bn)
                    batch_loss += li + lj
                _backward_with_bio(g_i / bn, dlog_i, q_i, cache_i, bio, weights, config, grads)
                _backward_with_bio(g_j / bn, dlog_j, q_j, cache_j, bio, weights, config, grads)

            batch_mean = batch_loss / bn
            if not np.isfinite(batch_mean):
                raise RuntimeError(
                    f"non-finite loss at epoch {epoch}, items {start}:{start + bn} "
                    f"(lr={config.learning_rate}, optimizer={config.optimizer})")
            opt.step(grads.arrays())
            epoch_loss += batch_loss
        history.append({"epoch": epoch, "loss": epoch_loss / n_items})
    weights.check_finite()
    return TrainResult(weights, config, history, d_f, d_b)


def _backward_with_bio(dp, dlogits, q, cache, bio, weights, config, grads):
    # Same as _backward_batch but with the biography batch threaded through
    # for the conditioning branch.
    acts, z, g, gamma, zp = cache
    grads.head_w += dp @ zp
    grads.head_b += dp.sum()
    dzp = dp[:, None] * weights.head_w[None, :]
    if dlogits is not None:
        grads.aux_w += dlogits.T @ zp
        grads.aux_b += dlogits.sum(axis=0)
        dzp = dzp + dlogits @ weights.aux_w
    if config.use_film:
        dgamma = dzp * z
        dbeta = dzp
        dz = dzp * gamma
        grads.film_wg += dgamma.T @ g
        grads.film_bg += dgamma.sum(axis=0)
        grads.film_wb += dbeta.T @ g
        grads.film_bb += dbeta.sum(axis=0)
        dg = (dgamma @ weights.film_wg + dbeta @ weights.film_wb) * (1.0 - g * g)
        grads.film_w1 += dg.T @ bio
        grads.film_b1 += dg.sum(axis=0)
    else:
        dz = dzp
    dz_pre = dz * (1.0 - z * z)
    grads.lat_w += dz_pre.T @ acts[-1]
    grads.lat_b += dz_pre.sum(axis=0)
    da = dz_pre @ weights.lat_w
    for l in reversed(range(len(weights.enc_w))):
        a_out, a_in = acts[l + 1], acts[l]
        dz_l = da * (1.0 - a_out * a_out)
        grads.enc_w[l] += dz_l.T @ a_in
        grads.enc_b[l] += dz_l.sum(axis=0)
        da = dz_l @ weights.enc_w[l]


def train(sessions, config: NetworkConfig, *, cuts: Cutpoints = Cutpoints(),
          gap: int = 4, eps: float = 0.0, aux_labels=None,
          balance: bool = False) -> TrainResult:
    """Fit the ordinal pairwise objective on GT-labeled sessions.

    aux_labels (per-session cluster ids, list or session_id map) are
    required when config.use_aux is set and ignored otherwise.
    """
    if not sessions:
        raise NoTrainingData("no sessions")
    aux_arr = None
    if config.use_aux:
        if aux_labels is None:
            raise ValueError("use_aux requires aux_labels (per-session cluster ids)")
        aux_arr = _normalize_aux_labels(sessions, aux_labels)
        if aux_arr.min() < 0 or aux_arr.max() >= config.aux_classes:
            raise DimensionMismatch(
                f"aux labels must lie in [0, {config.aux_classes}), "
                f"got [{aux_arr.min()}, {aux_arr.max()}]")
    data = _build_pair_dataset(sessions, gap, eps, balance, config.seed, aux_arr)
    return _run_training(data, config, cuts, regression=False)


def train_regression(sessions, config: NetworkConfig, *,
                     aux_labels=None) -> TrainResult:
    """Baseline variant: same architecture, mean-squared-error on GT values."""
    if not sessions:
        raise NoTrainingData("no sessions")
    aux_arr = None
    if config.use_aux:
        if aux_labels is None:
            raise ValueError("use_aux requires aux_labels (per-session cluster ids)")
        aux_arr = _normalize_aux_labels(sessions, aux_labels)
    data = _build_regression_dataset(sessions, aux_arr)
    return _run_training(data, config, Cutpoints(), regression=True)


# ---------------------------------------------------------------------------
# Reconstruction and evaluation helpers
# ---------------------------------------------------------------------------

def reconstruct(session, weights: ModelWeights, config: NetworkConfig) -> AnnotationTrace:
    """Per-segment utilities as a full-length trace.

    Utilities exist for indices 13..T; the first 12 samples are back-filled
    with the first utility so the trace aligns sample-for-sample with the
    session.
    """
    x = segment_matrix(session)
    bio = np.broadcast_to(session.biography, (x.shape[0], session.biography.size))
    p, _, _ = _forward_batch(x, np.ascontiguousarray(bio), weights, config)
    values = np.concatenate([np.full(WINDOW_FRAMES, p[0]), p])
    return AnnotationTrace(values, session.sample_rate_hz)


def pair_accuracy(sessions, weights: ModelWeights, config: NetworkConfig,
                  cuts: Cutpoints = Cutpoints(), gap: int = 4,
                  eps: float = 0.0) -> float:
    """Fraction of GT pairs whose predicted ordinal class (argmax of the
    three class probabilities) matches the label."""
    from .losses import oce_probs
    hits = 0
    total = 0
    for sess in sessions:
        x = segment_matrix(sess)
        bio = np.ascontiguousarray(
            np.broadcast_to(sess.biography, (x.shape[0], sess.biography.size)))
        p, _, _ = _forward_batch(x, bio, weights, config)
        for pair in build_pairs(sess, gap=gap, eps=eps):
            p_ij = p[pair.j - FIRST_INDEX] - p[pair.i - FIRST_INDEX]
            probs = np.asarray(oce_probs(p_ij, cuts))
            hits += int(np.argmax(probs) == label_to_class(pair.label))
            total += 1
    return hits / total if total else 0.0


# ---------------------------------------------------------------------------
# Checkpoint serialization
# ---------------------------------------------------------------------------

def save_checkpoint(path, weights: ModelWeights, config: NetworkConfig,
                    extra: dict | None = None) -> None:
    """Versioned JSON checkpoint; float round-trip is bit-exact."""
    arrays = {
        name: {"shape": list(arr.shape), "data": [float(v) for v in arr.ravel()]}
        for name, arr in weights.named_arrays()
    }
    payload = {
        "format": CHECKPOINT_FORMAT,
        "format_version": CHECKPOINT_VERSION,
        "config": config.to_dict(),
        "arrays": arrays,
    }
    if extra:
        payload.update(extra)
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def load_checkpoint(path) -> tuple[ModelWeights, NetworkConfig, dict]:
    data = json.loads(Path(path).read_text())
    if data.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"not a checkpoint file: {path}")
    if data.get("format_version") != CHECKPOINT_VERSION:
        raise ValueError(f"unsupported checkpoint version {data.get('format_version')}")
    config = NetworkConfig.from_dict(data["config"])
    raw = data["arrays"]

    def arr(name):
        spec = raw[name]
        return np.asarray(spec["data"], dtype=np.float64).reshape(spec["shape"])

    n_layers = len(config.encoder_layers)
    weights = ModelWeights(
        [arr(f"enc_w.{l}") for l in range(n_layers)],
        [arr(f"enc_b.{l}") for l in range(n_layers)],
        arr("lat_w"), arr("lat_b"),
        arr("film_w1"), arr("film_b1"),
        arr("film_wg"), arr("film_bg"),
        arr("film_wb"), arr("film_bb"),
        arr("head_w"), arr("head_b"),
        arr("aux_w"), arr("aux_b"),
    )
    meta = {k: v for k, v in data.items() if k not in ("format", "format_version",
                                                       "config", "arrays")}
    return weights, config, meta


def write_training_log(path, history, config_hash: str | None = None) -> None:
    """JSONL training log, one record per epoch."""
    lines = []
    if config_hash is not None:
        lines.append(json.dumps({"config_hash": config_hash}, sort_keys=True))
    for rec in history:
        lines.append(json.dumps(rec, sort_keys=True))
    Path(path).write_text("\n".join(lines) + "\n")
