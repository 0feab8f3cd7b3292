"""Accuracy, ROC curve and AUC."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .corpus import Corpus
from .encoding import Featurizer
from .model import score_batch
from .training import SavedModel


@dataclass(frozen=True)
class ScoredSet:
    scores: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "scores", np.asarray(self.scores, dtype=np.float64))
        object.__setattr__(self, "labels", np.asarray(self.labels, dtype=np.int64))
        if self.scores.shape != self.labels.shape or self.scores.ndim != 1:
            raise ValueError("scores and labels must be 1-d and the same length")
        if not len(self.scores):
            raise ValueError("empty scored set")

    def __len__(self):
        return len(self.scores)


def accuracy(scored: ScoredSet, threshold: float = 0.5) -> float:
    """Fraction with ``(score > threshold) == (label == 1)``; ties go to label 0."""
    return float(np.mean((scored.scores > threshold) == (scored.labels == 1)))


def roc_auc(scored: ScoredSet) -> tuple[float, list[tuple[float, float]]]:
    """Exact ROC curve and trapezoidal AUC.

    Thresholds are +inf followed by every distinct score in descending order
    (predict positive when ``score >= threshold``), so the curve runs from
    (0, 0) to (1, 1). The area is accumulated in integer counts and divided
    once, which makes it bit-equal to normalized Mann-Whitney pair counting.
    """
    pos = scored.labels == 1
    n_pos = int(pos.sum())
    n_neg = len(scored) - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValueError("ROC needs both labels present")

    order = np.argsort(-scored.scores, kind="stable")
    s = scored.scores[order]
    p = pos[order]
    # last index of each block of tied scores
    ends = np.flatnonzero(np.r_[s[1:] != s[:-1], True])
    tp = np.cumsum(p)[ends]
    fp = (ends + 1) - tp
    tp = np.r_[0, tp].astype(np.int64)
    fp = np.r_[0, fp].astype(np.int64)

    twice_area = int(np.sum((fp[1:] - fp[:-1]) * (tp[1:] + tp[:-1])))
    auc = twice_area / (2 * n_pos * n_neg)
    points = [(f / n_neg, t / n_pos) for f, t in zip(fp.tolist(), tp.tolist())]
    return auc, points


@dataclass
class EvalReport:
    accuracy: float
    auc: float
    roc: list[tuple[float, float]]
    per_language_accuracy: dict[int, float]
    counts: dict[int, int]
    language_names: dict[int, str] = field(default_factory=dict)
    mode: str = ""

    def format(self) -> str:
        lines = [
            f"mode\t{self.mode}",
            f"accuracy\t{self.accuracy:.6f}",
            f"auc\t{self.auc:.6f}",
        ]
        for label in (1, 0):
            name = self.language_names.get(label, str(label))
            lines.append(f"accuracy[{name}]\t{self.per_language_accuracy[label]:.6f}")
            lines.append(f"count[{name}]\t{self.counts[label]}")
        return "\n".join(lines) + "\n"


def score_corpus(model: SavedModel, corpus: Corpus, featurizer: Featurizer) -> ScoredSet:
    model.check_compatible(featurizer)
    if not len(corpus):
        raise ValueError("empty test corpus")
    scores = score_batch(model.params, featurizer.encode_many(corpus.texts))
    return ScoredSet(scores, np.array(corpus.labels))


def evaluate(model: SavedModel, test: Corpus, featurizer: Featurizer, roc_path: str | Path | None = None) -> EvalReport:
    scored = score_corpus(model, test, featurizer)
    auc, points = roc_auc(scored)
    per_lang, counts = {}, {}
    for label in (0, 1):
        sel = scored.labels == label
        counts[label] = int(sel.sum())
        per_lang[label] = accuracy(ScoredSet(scored.scores[sel], scored.labels[sel])) if sel.any() else float("nan")
    report = EvalReport(accuracy(scored), auc, points, per_lang, counts, dict(model.language_names), model.mode)
    if roc_path is not None:
        write_roc(roc_path, points)
    return report


def write_roc(path: str | Path, points: Sequence[tuple[float, float]]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for fpr, tpr in points:
            fh.write(f"{fpr:.10g}\t{tpr:.10g}\n")


def comparison_table(reports: dict[str, EvalReport]) -> str:
    """Side-by-side accuracy/AUC table, one row per model."""
    width = max(len(name) for name in reports)
    lines = [f"{'Model':<{width}}\tAccuracy\tAUC"]
    for name, rep in reports.items():
        lines.append(f"{name:<{width}}\t{rep.accuracy:.4f}\t{rep.auc:.4f}")
    return "\n".join(lines) + "\n"
