"""Adam training loop with L2, dropout and early stopping, plus model files."""

from __future__ import annotations

import hashlib
import logging
import math
import struct
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import Corpus
from .encoding import Featurizer
from .errors import CorpusError, ModelFileError, ModeMismatchError, NumericError
from .model import (
    PARAM_NAMES,
    WEIGHT_NAMES,
    Gradients,
    Hyperparams,
    ModelParams,
    backward_batch,
    bce,
    dropout_mask,
    forward_batch,
    group_by_length,
    init_params,
    l2_penalty,
    score_batch,
)
from .rng import SplitMix64, derive_seed

logger = logging.getLogger(__name__)

GRAD_CLIP = 10.0


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 64
    max_epochs: int = 50
    patience: int = 3
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")
        if self.patience < 1:
            raise ValueError("patience must be >= 1")
        if self.max_epochs < 0:
            raise ValueError("max_epochs must be >= 0")


@dataclass
class OptimizerState:
    m: ModelParams
    v: ModelParams
    t: int = 0
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def fresh(cls, params: ModelParams, config: TrainConfig | None = None) -> "OptimizerState":
        config = config or TrainConfig()
        return cls(params.zeros_like(), params.zeros_like(), 0, config.lr, config.beta1, config.beta2, config.eps)


def adam_step(params: ModelParams, grads: Gradients, state: OptimizerState, l2: float = 0.0):
    """One Adam update, in place. L2 enters as ``g + 2 * l2 * theta`` on the
    weight matrices before the moment updates."""
    if params.shapes() != grads.shapes() or params.shapes() != state.m.shapes():
        raise ValueError("parameter, gradient and optimizer shapes differ")
    state.t += 1
    bc1 = 1.0 - state.beta1**state.t
    bc2 = 1.0 - state.beta2**state.t
    for name in PARAM_NAMES:
        theta = getattr(params, name)
        g = getattr(grads, name)
        if l2 and name in WEIGHT_NAMES:
            g = g + 2.0 * l2 * theta
        m = getattr(state.m, name)
        v = getattr(state.v, name)
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * (g * g)
        theta -= state.lr * (m / bc1) / (np.sqrt(v / bc2) + state.eps)
    return params, state


@dataclass
class TrainHistory:
    """Epoch 0 is the untrained model; epochs 1.. follow each pass over the data."""

    train_loss: list[float] = field(default_factory=list)
    val_loss: list[float] = field(default_factory=list)
    val_acc: list[float] = field(default_factory=list)
    best_epoch: int = 0

    @property
    def epochs_run(self) -> int:
        return len(self.train_loss) - 1

    def to_tsv(self) -> str:
        lines = ["epoch\ttrain_loss\tval_loss\tval_acc"]
        for e, (tl, vl, va) in enumerate(zip(self.train_loss, self.val_loss, self.val_acc)):
            lines.append(f"{e}\t{tl:.10g}\t{vl:.10g}\t{va:.10g}")
        return "\n".join(lines) + "\n"


class EarlyStopping:
    """Tracks the best validation loss; ``update`` returns True when training should stop."""

    def __init__(self, patience: int):
        self.patience = patience
        self.best = math.inf
        self.best_epoch = -1
        self.bad_epochs = 0

    def update(self, epoch: int, val_loss: float) -> bool:
        if val_loss < self.best:
            self.best, self.best_epoch, self.bad_epochs = val_loss, epoch, 0
            return False
        self.bad_epochs += 1
        return self.bad_epochs >= self.patience


def batch_gradient(
    params: ModelParams,
    sequences: Sequence[Sequence[int]],
    labels: Sequence[int],
    rng: SplitMix64 | None = None,
    dropout: float = 0.0,
) -> tuple[Gradients, float]:
    """Mean cross-entropy gradient and mean loss over a mixed-length batch.

    Equal-length sequences are processed together; groups go by ascending
    length and masks are drawn in that order, so results are reproducible.
    """
    total = params.zeros_like()
    loss_sum = 0.0
    for _, idx in group_by_length(sequences):
        ids = np.array([sequences[i] for i in idx], dtype=np.int64)
        y = np.array([labels[i] for i in idx], dtype=np.float64)
        mask = dropout_mask(rng, (len(idx), params.hidden), dropout) if rng is not None else None
        scores, cache = forward_batch(params, ids, mask)
        loss_sum += float(np.sum(bce(scores, y)))
        g = backward_batch(params, cache, y)
        for name in PARAM_NAMES:
            getattr(total, name)[...] += getattr(g, name)
    n = len(sequences)
    for name in PARAM_NAMES:
        arr = getattr(total, name)
        arr /= n
        np.clip(arr, -GRAD_CLIP, GRAD_CLIP, out=arr)
    return total, loss_sum / n


def evaluate_loss(params: ModelParams, sequences, labels) -> tuple[float, float]:
    """(mean cross-entropy, accuracy at 0.5) with dropout off."""
    scores = score_batch(params, sequences)
    y = np.asarray(labels, dtype=np.float64)
    return float(np.mean(bce(scores, y))), float(np.mean((scores > 0.5) == (y == 1)))


def train(
    train_corpus: Corpus,
    val_corpus: Corpus,
    featurizer: Featurizer,
    hyper: Hyperparams,
    config: TrainConfig = TrainConfig(),
) -> tuple[ModelParams, TrainHistory]:
    """Mini-batch Adam; returns the parameters of the best validation epoch."""
    train_corpus.require_both_labels()
    if not len(val_corpus):
        raise CorpusError("validation corpus is empty")
    if hyper.vocab_size != featurizer.vocab_size:
        raise ValueError(f"hyper.vocab_size={hyper.vocab_size} but featurizer emits V={featurizer.vocab_size}")

    x_train = featurizer.encode_many(train_corpus.texts)
    y_train = train_corpus.labels
    x_val = featurizer.encode_many(val_corpus.texts)
    y_val = val_corpus.labels

    params = init_params(hyper)
    state = OptimizerState.fresh(params, config)
    history = TrainHistory()
    stopper = EarlyStopping(config.patience)

    def record(epoch, train_loss):
        val_loss, val_acc = evaluate_loss(params, x_val, y_val)
        if not (math.isfinite(train_loss) and math.isfinite(val_loss)):
            raise NumericError(f"non-finite loss at epoch {epoch}")
        history.train_loss.append(train_loss)
        history.val_loss.append(val_loss)
        history.val_acc.append(val_acc)
        logger.info("epoch %d train %.4f val %.4f acc %.4f", epoch, train_loss, val_loss, val_acc)
        return stopper.update(epoch, val_loss)

    base_loss, _ = evaluate_loss(params, x_train, y_train)
    record(0, base_loss + hyper.l2 * l2_penalty(params))
    best = params.copy()

    order = list(range(len(x_train)))
    for epoch in range(1, config.max_epochs + 1):
        SplitMix64(derive_seed(config.seed, 1, epoch)).shuffle(order)
        drop_rng = SplitMix64(derive_seed(config.seed, 2, epoch))
        loss_sum = 0.0
        for start in range(0, len(order), config.batch_size):
            batch = order[start : start + config.batch_size]
            grads, batch_loss = batch_gradient(
                params, [x_train[i] for i in batch], [y_train[i] for i in batch], drop_rng, hyper.dropout
            )
            loss_sum += batch_loss * len(batch)
            adam_step(params, grads, state, hyper.l2)
        stop = record(epoch, loss_sum / len(order) + hyper.l2 * l2_penalty(params))
        if stopper.best_epoch == epoch:
            best = params.copy()
        if stop:
            break

    history.best_epoch = stopper.best_epoch
    return best, history


# --- model files -------------------------------------------------------------

MAGIC = b"TLIDMDL\x00"
FORMAT_VERSION = 1
_MODES = {"phonetic": 0, "chars": 1}
# magic, version, mode, V, D, H, seed, dropout, l2
_HEADER = struct.Struct("<8sHBIIIQdd")


@dataclass
class SavedModel:
    params: ModelParams
    hyper: Hyperparams
    mode: str
    pattern_checksum: bytes = bytes(32)
    language_names: dict[int, str] = field(default_factory=lambda: {1: "lang1", 0: "lang0"})

    def check_compatible(self, featurizer: Featurizer) -> None:
        if featurizer.mode != self.mode:
            raise ModeMismatchError(f"mode mismatch: model is {self.mode!r}, requested {featurizer.mode!r}")
        if self.mode == "phonetic" and featurizer.pattern_checksum() != self.pattern_checksum:
            raise ModeMismatchError("pattern set differs from the one the model was trained with")
        if featurizer.vocab_size != self.hyper.vocab_size:
            raise ModeMismatchError("vocabulary size differs from the model's")


def _pack_str(s: str) -> bytes:
    raw = s.encode("utf-8")
    return struct.pack("<H", len(raw)) + raw


def serialize_model(model: SavedModel) -> bytes:
    h = model.hyper
    parts = [
        _HEADER.pack(MAGIC, FORMAT_VERSION, _MODES[model.mode], h.vocab_size, h.embed_dim, h.hidden,
                     h.seed, h.dropout, h.l2),
        model.pattern_checksum,
        _pack_str(model.language_names.get(1, "lang1")),
        _pack_str(model.language_names.get(0, "lang0")),
    ]
    for name in PARAM_NAMES:
        parts.append(np.ascontiguousarray(getattr(model.params, name), dtype="<f8").tobytes())
    body = b"".join(parts)
    return body + hashlib.sha256(body).digest()


def deserialize_model(data: bytes) -> SavedModel:
    if len(data) < _HEADER.size + 32 + 32 or data[:8] != MAGIC:
        raise ModelFileError("corrupt model file: bad magic or truncated")
    body, digest = data[:-32], data[-32:]
    if hashlib.sha256(body).digest() != digest:
        raise ModelFileError("corrupt model file: checksum mismatch")
    magic, version, mode_code, V, D, H, seed, dropout, l2 = _HEADER.unpack_from(body)
    if version != FORMAT_VERSION:
        raise ModelFileError(f"corrupt model file: unsupported version {version}")
    modes = {v: k for k, v in _MODES.items()}
    if mode_code not in modes:
        raise ModelFileError("corrupt model file: unknown tokenizer mode")
    pos = _HEADER.size
    checksum = body[pos : pos + 32]
    pos += 32
    names = []
    for _ in range(2):
        (n,) = struct.unpack_from("<H", body, pos)
        names.append(body[pos + 2 : pos + 2 + n].decode("utf-8"))
        pos += 2 + n
    hyper = Hyperparams(V, D, H, dropout, l2, seed)
    shapes = {"E": (V + 1, D), "W": (4, D, H), "U": (4, H, H), "b": (4, H), "w_out": (H,), "b_out": (1,)}
    arrays = {}
    for name in PARAM_NAMES:
        count = int(np.prod(shapes[name]))
        if pos + 8 * count > len(body):
            raise ModelFileError("corrupt model file: truncated parameters")
        arrays[name] = np.frombuffer(body, dtype="<f8", count=count, offset=pos).astype(np.float64).reshape(shapes[name])
        pos += 8 * count
    if pos != len(body):
        raise ModelFileError("corrupt model file: trailing bytes")
    return SavedModel(ModelParams(**arrays), hyper, modes[mode_code], checksum, {1: names[0], 0: names[1]})


def save_model(path: str | Path, model: SavedModel) -> None:
    Path(path).write_bytes(serialize_model(model))


def load_model(path: str | Path) -> SavedModel:
    path = Path(path)
    if not path.is_file():
        raise ModelFileError(f"model file not found: {path}")
    return deserialize_model(path.read_bytes())


# --- config files ------------------------------------------------------------


def parse_config(text: str) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


def coerce_fields(cls, values: dict[str, str]) -> dict:
    """Convert string values to the field types of dataclass ``cls`` (unknown keys ignored)."""
    out = {}
    for f in fields(cls):
        if f.name in values:
            kind = type(f.default)
            out[f.name] = kind(values[f.name])
    return out
