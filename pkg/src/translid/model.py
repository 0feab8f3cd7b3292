"""Embedding -> single unidirectional LSTM -> one logistic output unit.

Per timestep, with gates stacked in the order (i, f, g, o)::

    a_t = x_t W + h_{t-1} U + b
    i, f, o = sigmoid(a_i), sigmoid(a_f), sigmoid(a_o);  g = tanh(a_g)
    c_t = f * c_{t-1} + i * g
    h_t = o * tanh(c_t)

with ``c_0 = h_0 = 0``. The last hidden state goes through inverted dropout
(training only) and then ``score = sigmoid(w_out . h_T + b_out)``.

Sequences are never padded. The batched functions take a ``(B, T)`` id matrix
of equal-length sequences; callers group mixed lengths themselves
(:func:`group_by_length`). Row 0 of the embedding table is padding: ids are in
``[1, V]`` so it is never read and its gradient is always zero.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Sequence

import numpy as np

from .rng import SplitMix64, derive_seed

PARAM_NAMES = ("E", "W", "U", "b", "w_out", "b_out")
# entries that carry the L2 penalty
WEIGHT_NAMES = ("W", "U", "w_out")
FORGET_BIAS = 1.0
SCORE_CLAMP = 1e-12


@dataclass(frozen=True)
class Hyperparams:
    vocab_size: int = 4096
    embed_dim: int = 8
    hidden: int = 32
    dropout: float = 0.2
    l2: float = 1e-4
    seed: int = 0

    def __post_init__(self):
        if min(self.vocab_size, self.embed_dim, self.hidden) < 1:
            raise ValueError("vocab_size, embed_dim and hidden must be >= 1")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")
        if self.l2 < 0:
            raise ValueError("l2 must be >= 0")


@dataclass
class ModelParams:
    E: np.ndarray  # (V + 1, D), row 0 is padding
    W: np.ndarray  # (4, D, H)
    U: np.ndarray  # (4, H, H)
    b: np.ndarray  # (4, H)
    w_out: np.ndarray  # (H,)
    b_out: np.ndarray  # (1,)

    @property
    def vocab_size(self) -> int:
        return self.E.shape[0] - 1

    @property
    def embed_dim(self) -> int:
        return self.E.shape[1]

    @property
    def hidden(self) -> int:
        return self.U.shape[1]

    def arrays(self) -> dict[str, np.ndarray]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def copy(self) -> "ModelParams":
        return ModelParams(**{k: v.copy() for k, v in self.arrays().items()})

    def zeros_like(self) -> "ModelParams":
        return ModelParams(**{k: np.zeros_like(v) for k, v in self.arrays().items()})

    def num_trainable(self) -> int:
        """Number of trainable scalars (the fixed padding row is not counted)."""
        return sum(v.size for v in self.arrays().values()) - self.embed_dim

    def shapes(self) -> tuple:
        return tuple(v.shape for v in self.arrays().values())

    def equals(self, other: "ModelParams") -> bool:
        return all(np.array_equal(a, b) for a, b in zip(self.arrays().values(), other.arrays().values()))


# gradients share the parameter layout
Gradients = ModelParams


def init_params(hyper: Hyperparams) -> ModelParams:
    """Glorot-uniform weights from the seeded generator; zero biases except the
    forget gate (1.0); zero padding row.

    Draw order: E, W_i, W_f, W_g, W_o, U_i, U_f, U_g, U_o, w_out.
    """
    V, D, H = hyper.vocab_size, hyper.embed_dim, hyper.hidden
    rng = SplitMix64(derive_seed(hyper.seed, 0x1D17))

    def glorot(fan_in, fan_out, shape):
        s = np.sqrt(6.0 / (fan_in + fan_out))
        return rng.uniform(-s, s, shape)

    E = glorot(V, D, (V + 1, D))
    E[0] = 0.0
    W = np.stack([glorot(D, H, (D, H)) for _ in range(4)])
    U = np.stack([glorot(H, H, (H, H)) for _ in range(4)])
    w_out = glorot(H, 1, (H,))
    b = np.zeros((4, H))
    b[1] = FORGET_BIAS
    return ModelParams(E, W, U, b, w_out, np.zeros(1))


def sigmoid(x):
    return 0.5 * (1.0 + np.tanh(0.5 * x))


@dataclass
class ForwardCache:
    ids: np.ndarray  # (B, T)
    x: np.ndarray  # (T, B, D) embedded inputs
    acts: np.ndarray  # (T, B, 4H) gate activations i, f, g, o
    c: np.ndarray  # (T + 1, B, H), c[0] = 0
    h: np.ndarray  # (T + 1, B, H), h[0] = 0
    tanh_c: np.ndarray  # (T, B, H), tanh(c[t + 1])
    mask: np.ndarray  # (B, H) inverted-dropout multipliers
    h_drop: np.ndarray  # (B, H)
    score: np.ndarray  # (B,)
    shapes: tuple  # parameter shapes at forward time

    @property
    def steps(self) -> int:
        return self.ids.shape[1]


def dropout_mask(rng: SplitMix64, shape, rate: float) -> np.ndarray:
    if rate == 0.0:
        return np.ones(shape)
    keep = rng.random_array(shape) >= rate
    return keep / (1.0 - rate)


def _stacked(params: ModelParams):
    H = params.hidden
    Wc = params.W.transpose(1, 0, 2).reshape(params.embed_dim, 4 * H)
    Uc = params.U.transpose(1, 0, 2).reshape(H, 4 * H)
    return Wc, Uc, params.b.reshape(4 * H)


def _check_ids(params: ModelParams, ids: np.ndarray) -> None:
    if ids.ndim != 2 or ids.shape[1] == 0:
        raise ValueError("input sequence must be non-empty")
    if ids.min() < 1 or ids.max() > params.vocab_size:
        raise ValueError(f"token id out of range [1, {params.vocab_size}]")


def forward_batch(params: ModelParams, ids: np.ndarray, mask: np.ndarray | None = None) -> tuple[np.ndarray, ForwardCache]:
    """Scores for a ``(B, T)`` batch of equal-length sequences."""
    ids = np.asarray(ids, dtype=np.int64)
    _check_ids(params, ids)
    B, T = ids.shape
    H = params.hidden
    Wc, Uc, bc = _stacked(params)

    x = params.E[ids.T]  # (T, B, D)
    acts = np.empty((T, B, 4 * H))
    c = np.zeros((T + 1, B, H))
    h = np.zeros((T + 1, B, H))
    tanh_c = np.empty((T, B, H))
    for t in range(T):
        a = x[t] @ Wc + h[t] @ Uc + bc
        acts[t, :, : 2 * H] = sigmoid(a[:, : 2 * H])
        acts[t, :, 2 * H : 3 * H] = np.tanh(a[:, 2 * H : 3 * H])
        acts[t, :, 3 * H :] = sigmoid(a[:, 3 * H :])
        i, f, g, o = (acts[t, :, k * H : (k + 1) * H] for k in range(4))
        c[t + 1] = f * c[t] + i * g
        tanh_c[t] = np.tanh(c[t + 1])
        h[t + 1] = o * tanh_c[t]

    if mask is None:
        mask = np.ones((B, H))
    h_drop = h[T] * mask
    score = sigmoid(h_drop @ params.w_out + params.b_out[0])
    cache = ForwardCache(ids, x, acts, c, h, tanh_c, mask, h_drop, score, params.shapes())
    return score, cache


def backward_batch(params: ModelParams, cache: ForwardCache, labels: np.ndarray) -> Gradients:
    """Gradients of the summed (not averaged) cross-entropy over the batch."""
    if cache.shapes != params.shapes():
        raise ValueError("cache was produced with differently shaped parameters")
    labels = np.asarray(labels, dtype=np.float64)
    H, D = params.hidden, params.embed_dim
    Wc, Uc, _ = _stacked(params)
    T = cache.steps

    dz = cache.score - labels  # d(BCE)/d(logit)
    grads = params.zeros_like()
    grads.w_out[:] = cache.h_drop.T @ dz
    grads.b_out[0] = dz.sum()

    dWc = np.zeros_like(Wc)
    dUc = np.zeros_like(Uc)
    dbc = np.zeros(4 * H)
    dh = np.outer(dz, params.w_out) * cache.mask
    dc = np.zeros_like(dh)
    da = np.empty((dh.shape[0], 4 * H))
    for t in range(T - 1, -1, -1):
        acts = cache.acts[t]
        i, f, g, o = (acts[:, k * H : (k + 1) * H] for k in range(4))
        tc = cache.tanh_c[t]
        dc = dc + dh * o * (1.0 - tc * tc)
        da[:, :H] = dc * g * i * (1.0 - i)
        da[:, H : 2 * H] = dc * cache.c[t] * f * (1.0 - f)
        da[:, 2 * H : 3 * H] = dc * i * (1.0 - g * g)
        da[:, 3 * H :] = dh * tc * o * (1.0 - o)
        dWc += cache.x[t].T @ da
        dUc += cache.h[t].T @ da
        dbc += da.sum(axis=0)
        np.add.at(grads.E, cache.ids[:, t], da @ Wc.T)
        dh = da @ Uc.T
        dc = dc * f

    grads.W[:] = dWc.reshape(D, 4, H).transpose(1, 0, 2)
    grads.U[:] = dUc.reshape(H, 4, H).transpose(1, 0, 2)
    grads.b[:] = dbc.reshape(4, H)
    grads.E[0] = 0.0
    return grads


def _as_ids(seq) -> np.ndarray:
    ids = getattr(seq, "ids", seq)
    return np.asarray(ids, dtype=np.int64).reshape(1, -1)


def forward(
    params: ModelParams,
    seq,
    training: bool = False,
    rng: SplitMix64 | None = None,
    dropout: float = 0.0,
) -> tuple[float, ForwardCache]:
    """Score one sequence. ``training`` with ``dropout > 0`` needs ``rng``."""
    mask = None
    if training and dropout > 0.0:
        if rng is None:
            raise ValueError("training-mode dropout needs an rng")
        mask = dropout_mask(rng, (1, params.hidden), dropout)
    score, cache = forward_batch(params, _as_ids(seq), mask)
    return float(score[0]), cache


def backward(params: ModelParams, cache: ForwardCache, label: int) -> Gradients:
    return backward_batch(params, cache, np.array([label]))


def bce(score, label):
    s = np.clip(score, SCORE_CLAMP, 1.0 - SCORE_CLAMP)
    return -(label * np.log(s) + (1 - label) * np.log(1.0 - s))


def l2_penalty(params: ModelParams) -> float:
    return float(sum(np.sum(getattr(params, name) ** 2) for name in WEIGHT_NAMES))


def loss(score: float, label: int, params: ModelParams | None = None, l2: float = 0.0) -> float:
    """Binary cross-entropy plus ``l2 * sum(weight**2)`` over W, U and w_out."""
    if not 0.0 <= score <= 1.0 or np.isnan(score):
        raise ValueError(f"score must lie in [0, 1], got {score}")
    value = float(bce(score, label))
    if l2 and params is not None:
        value += l2 * l2_penalty(params)
    return value


def predict(params: ModelParams, seq) -> tuple[float, int]:
    """Score and label; a score of exactly 0.5 is label 0."""
    score, _ = forward(params, seq)
    return score, int(score > 0.5)


def group_by_length(sequences: Sequence[Sequence[int]]) -> list[tuple[int, list[int]]]:
    """``[(T, indices), ...]`` by ascending length, indices in input order."""
    groups: dict[int, list[int]] = {}
    for idx, seq in enumerate(sequences):
        groups.setdefault(len(seq), []).append(idx)
    return sorted(groups.items())


def score_batch(params: ModelParams, sequences: Sequence[Sequence[int]]) -> np.ndarray:
    """Inference scores for mixed-length sequences, returned in input order."""
    out = np.empty(len(sequences))
    for _, idx in group_by_length(sequences):
        ids = np.array([sequences[i] for i in idx], dtype=np.int64)
        scores, _ = forward_batch(params, ids)
        out[idx] = scores
    return out
