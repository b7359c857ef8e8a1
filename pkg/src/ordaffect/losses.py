"""Pairwise ordinal losses and their analytic gradients.

The pairwise score is p_ij = p_j - p_i, the difference of the two scalar
utilities produced by the shared encoder. Two losses operate on it:

* binary logistic (two classes: j preferred or not), and
* a three-class cumulative-link loss with fixed cutpoints c0 < c1 that adds
  an explicit "equal" class between "less" and "greater".

All log-probabilities are computed in softplus form. The middle-class
probability is a difference of sigmoids and cancels catastrophically in the
tails if evaluated naively, so it is evaluated as the product
sigma(c1-p) * sigma(p-c0) * (1 - exp(c0-c1)), which is exact to relative
rounding error for any p.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import DimensionMismatch

__all__ = [
    "Cutpoints",
    "bce_prob",
    "bce_loss",
    "bce_grad_pair",
    "oce_probs",
    "oce_loss",
    "oce_grad_pair",
    "softmax",
    "cross_entropy",
    "total_loss",
]

_PROB_FLOOR = 1e-300
_LOSS_CEIL = -np.log(_PROB_FLOOR)


@dataclass(frozen=True)
class Cutpoints:
    """Ordered cutpoints partitioning the latent score into three classes.

    Fixed constants chosen by the experimenter, not learned. Defaults (-1, 1).
    """

    c0: float = -1.0
    c1: float = 1.0

    def __post_init__(self):
        if not self.c0 < self.c1:
            raise ValueError(f"cutpoints must satisfy c0 < c1, got ({self.c0}, {self.c1})")


def _softplus(x):
    # log(1 + e^x), stable on both tails
    return np.logaddexp(0.0, x)


def bce_prob(p_ij):
    """P(j preferred over i) = sigma(p_ij)."""
    return expit(p_ij)


def bce_loss(p_i, p_j, y_ij):
    """Binary logistic loss on the pair difference.

    y_ij = 1 means j is preferred over i. Equals softplus(p_ij) - y * p_ij,
    which is the stable form of -y log sigma - (1-y) log(1-sigma).
    """
    p = np.asarray(p_j, dtype=np.float64) - np.asarray(p_i, dtype=np.float64)
    return _softplus(p) - np.asarray(y_ij, dtype=np.float64) * p


def bce_grad_pair(p_i, p_j, y_ij):
    """(dL/dp_i, dL/dp_j) for bce_loss."""
    p = np.asarray(p_j, dtype=np.float64) - np.asarray(p_i, dtype=np.float64)
    g = expit(p) - np.asarray(y_ij, dtype=np.float64)
    return -g, g


def oce_probs(p_ij, cuts: Cutpoints = Cutpoints()):
    """Three-class probabilities (P0, P1, P2) at latent score p_ij.

    P0 = sigma(c0 - p_ij)            less
    P1 = sigma(c1 - p_ij) - P0       equal
    P2 = 1 - sigma(c1 - p_ij)        greater
    """
    p = np.asarray(p_ij, dtype=np.float64)
    a = cuts.c0 - p
    b = cuts.c1 - p
    p0 = expit(a)
    p2 = expit(-b)
    p1 = expit(b) * expit(-a) * (-np.expm1(cuts.c0 - cuts.c1))
    return p0, p1, p2


def oce_loss(p_i, p_j, cls, cuts: Cutpoints = Cutpoints()):
    """Negative log-likelihood of the true ordinal class (0 less, 1 equal, 2 greater).

    Underflowing probabilities are clamped at 1e-300 (loss capped, never NaN);
    a clamp emits a RuntimeWarning since it signals a diverging score.
    """
    p = np.asarray(p_j, dtype=np.float64) - np.asarray(p_i, dtype=np.float64)
    cls = np.asarray(cls)
    a = cuts.c0 - p
    b = cuts.c1 - p
    loss0 = _softplus(-a)  # -log sigma(c0 - p)
    loss2 = _softplus(b)   # -log (1 - sigma(c1 - p))
    # -log P1 = softplus(-b) + softplus(a) - log(1 - e^{c0-c1}); last term constant
    loss1 = _softplus(-b) + _softplus(a) - np.log(-np.expm1(cuts.c0 - cuts.c1))
    out = np.where(cls == 0, loss0, np.where(cls == 1, loss1, loss2))
    if np.any(out > _LOSS_CEIL):
        warnings.warn("ordinal loss clamped at probability floor 1e-300", RuntimeWarning)
        out = np.minimum(out, _LOSS_CEIL)
    return out if out.ndim else float(out)


def oce_grad_pair(p_i, p_j, cls, cuts: Cutpoints = Cutpoints()):
    """(dL/dp_i, dL/dp_j) for oce_loss.

    d/dp_ij of the per-class NLL:
      class 0:  sigma(p - c0)
      class 1:  sigma(p - c1) - sigma(c0 - p)
      class 2: -sigma(c1 - p)
    """
    p = np.asarray(p_j, dtype=np.float64) - np.asarray(p_i, dtype=np.float64)
    cls = np.asarray(cls)
    g0 = expit(p - cuts.c0)
    g1 = expit(p - cuts.c1) - expit(cuts.c0 - p)
    g2 = -expit(cuts.c1 - p)
    g = np.where(cls == 0, g0, np.where(cls == 1, g1, g2))
    return -g, g


def softmax(logits, axis=-1):
    z = np.asarray(logits, dtype=np.float64)
    z = z - z.max(axis=axis, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=axis, keepdims=True)


def cross_entropy(q, cls):
    """-log q[cls] on an already-normalized distribution q."""
    q = np.asarray(q, dtype=np.float64)
    p = np.maximum(q[..., cls] if q.ndim == 1 else np.take_along_axis(
        q, np.asarray(cls).reshape(-1, 1), axis=-1).squeeze(-1), _PROB_FLOOR)
    return -np.log(p)


def total_loss(batch, alpha: float = 0.001, cuts: Cutpoints = Cutpoints()):
    """Mean training objective over a batch of pair samples.

    Each item is a dict with keys: p_i, p_j (scalar utilities), cls (ordinal
    class 0/1/2), q_i, q_j (auxiliary class distributions), c (auxiliary
    label). Per item: OCE(cls, p_ij) + alpha * (CE(c, q_i) + CE(c, q_j)).
    The reduction is the arithmetic mean, which keeps alpha meaningful
    independent of batch size.
    """
    if not batch:
        raise ValueError("empty batch")
    vals = []
    for item in batch:
        main = oce_loss(item["p_i"], item["p_j"], item["cls"], cuts)
        aux = 0.0
        if alpha != 0.0:
            q_i = np.asarray(item["q_i"], dtype=np.float64)
            q_j = np.asarray(item["q_j"], dtype=np.float64)
            if q_i.shape != q_j.shape:
                raise DimensionMismatch(
                    f"aux distributions disagree: {q_i.shape} vs {q_j.shape}")
            c = int(item["c"])
            if not 0 <= c < q_i.shape[-1]:
                raise DimensionMismatch(
                    f"aux label {c} outside distribution of size {q_i.shape[-1]}")
            aux = float(cross_entropy(q_i, c) + cross_entropy(q_j, c))
        vals.append(float(main) + alpha * aux)
    return float(np.mean(vals))
