"""Spelling-perturbation study.

Every vowel of a test word is replaced by ``count`` copies of itself, with
``count`` drawn uniformly from {0, ..., N}. The model's correct-class scores
before and after are compared with two statistics:

* ``sigma / cv`` where ``sigma`` is the population std-dev of the fractional
  score change ``(after - before) / before`` and ``cv`` is median / std-dev of
  the unperturbed scores;
* ``min_u``, the smaller tail ``min(u, 1 - u)`` of the normalized
  Mann-Whitney statistic between the two score samples (0.5 means
  indistinguishable, 0 means no overlap).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .corpus import Corpus
from .encoding import Featurizer
from .model import score_batch
from .rng import SplitMix64, derive_seed
from .training import SavedModel

logger = logging.getLogger(__name__)

VOWELS = frozenset("aeiou")
EXCLUDE_BELOW = 1e-9


@dataclass(frozen=True)
class PerturbationConfig:
    N: int
    vowels: frozenset = VOWELS
    seed: int = 0

    def __post_init__(self):
        if self.N < 0:
            raise ValueError("N must be >= 0")


def perturb_word(word: str, config: PerturbationConfig, rng) -> str:
    """Scan ``word`` once, left to right; inserted copies are not re-scanned.

    ``rng`` needs an ``integers(low, high)`` method (closed range), one call
    per vowel in order of appearance.
    """
    out = []
    for ch in word:
        if ch in config.vowels:
            out.append(ch * rng.integers(0, config.N))
        else:
            out.append(ch)
    return "".join(out)


def word_rng(seed: int, N: int, index: int) -> SplitMix64:
    """Independent stream per (seed, N, word index)."""
    return SplitMix64(derive_seed(seed, N, index))


def correct_class_score(score, true_label):
    """The model's score for the true language: ``s`` for label 1, ``1 - s`` for label 0."""
    score = np.asarray(score, dtype=np.float64)
    return np.where(np.asarray(true_label) == 1, score, 1.0 - score)


def fractional_difference(before, after):
    """``(after - before) / before``; NaN where ``before <= 1e-9`` (excluded)."""
    before = np.asarray(before, dtype=np.float64)
    after = np.asarray(after, dtype=np.float64)
    ok = before > EXCLUDE_BELOW
    out = np.full(np.broadcast(before, after).shape, np.nan)
    np.divide(after - before, before, out=out, where=ok)
    return out


def sigma_correctscore(fracdiffs: Sequence[float]) -> float:
    x = np.asarray(fracdiffs, dtype=np.float64)
    if x.size < 2:
        raise ValueError("need at least 2 fractional differences")
    return float(np.std(x))


def cv_correctscore(before_scores: Sequence[float]) -> float:
    x = np.asarray(before_scores, dtype=np.float64)
    if x.size < 2:
        raise ValueError("need at least 2 scores")
    sd = float(np.std(x))
    if sd == 0.0 or np.all(x == x[0]):
        raise ValueError("zero standard deviation: CV undefined")
    return float(np.median(x)) / sd


def midranks(values: np.ndarray) -> np.ndarray:
    """1-based ranks with ties sharing their average rank (stored doubled, as integers)."""
    order = np.argsort(values, kind="stable")
    sorted_vals = values[order]
    starts = np.flatnonzero(np.r_[True, sorted_vals[1:] != sorted_vals[:-1]])
    ends = np.r_[starts[1:], len(values)]
    twice = np.empty(len(values), dtype=np.int64)
    # doubled average of ranks start+1 .. end
    twice[order] = np.repeat(starts + 1 + ends, ends - starts)
    return twice


def _twice_u(after, before) -> tuple[int, int]:
    a = np.asarray(after, dtype=np.float64)
    b = np.asarray(before, dtype=np.float64)
    if not a.size or not b.size:
        raise ValueError("both samples must be non-empty")
    twice_ranks = midranks(np.concatenate([a, b]))
    n1, n2 = a.size, b.size
    return int(twice_ranks[:n1].sum()) - n1 * (n1 + 1), 2 * n1 * n2


def mann_whitney_u(after: Sequence[float], before: Sequence[float]) -> float:
    """P(after > before) + 0.5 * P(tie) via ranks, exact in integer arithmetic."""
    twice_u, total = _twice_u(after, before)
    return twice_u / total


def min_u(before: Sequence[float], after: Sequence[float]) -> float:
    twice_u, total = _twice_u(after, before)
    return min(twice_u, total - twice_u) / total


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman rank correlation (Pearson on midranks); NaN if either side is constant."""
    rx = midranks(np.asarray(x, dtype=np.float64)).astype(np.float64)
    ry = midranks(np.asarray(y, dtype=np.float64)).astype(np.float64)
    rx -= rx.mean()
    ry -= ry.mean()
    denom = np.sqrt((rx * rx).sum() * (ry * ry).sum())
    return float((rx * ry).sum() / denom) if denom else float("nan")


@dataclass
class SweepRow:
    N: int
    sigma: float
    cv: float
    ratio: float
    min_u: float
    excluded: int
    scored: int
    degenerate: bool = False


@dataclass
class RobustnessReport:
    rows: list[SweepRow] = field(default_factory=list)

    def to_tsv(self) -> str:
        lines = ["N\tsigma\tcv\tratio\tmin_u\texcluded"]
        for r in self.rows:
            lines.append(f"{r.N}\t{r.sigma:.10g}\t{r.cv:.10g}\t{r.ratio:.10g}\t{r.min_u:.10g}\t{r.excluded}")
        return "\n".join(lines) + "\n"

    def format_blocks(self) -> str:
        blocks = []
        for r in self.rows:
            head = f"N = {r.N}" + ("  (degenerate: every vowel deleted)" if r.degenerate else "")
            blocks.append(
                f"{head}\n"
                f"  Coefficient of variation (CV)   {r.cv:.4f}\n"
                f"  Fractional variation std.dev    {r.sigma:.4f}\n"
                f"  sigma / CV                      {r.ratio:.4f}\n"
                f"  min. U                          {r.min_u:.4f}\n"
                f"  excluded words                  {r.excluded} of {r.scored + r.excluded}"
            )
        return "\n".join(blocks) + "\n"

    def column(self, name: str) -> list[float]:
        return [getattr(r, name) for r in self.rows]


def sweep(
    model: SavedModel,
    test: Corpus,
    featurizer: Featurizer,
    Ns: Sequence[int],
    seed: int = 0,
    per_language: bool = False,
    rng_factory: Callable[[int, int, int], object] = word_rng,
) -> RobustnessReport:
    """Perturb every test word once per N and tabulate the metrics.

    ``rng_factory(seed, N, word_index)`` supplies each word's draws.
    ``per_language`` takes the smaller of the two per-language ``min_u``
    values instead of pooling both languages.
    """
    if not Ns:
        raise ValueError("Ns must be non-empty")
    model.check_compatible(featurizer)
    texts, labels = test.texts, np.array(test.labels)
    if not texts:
        raise ValueError("empty test corpus")
    before = correct_class_score(score_batch(model.params, featurizer.encode_many(texts)), labels)
    cv = cv_correctscore(before)

    report = RobustnessReport()
    for N in Ns:
        config = PerturbationConfig(N, seed=seed)
        perturbed = [perturb_word(w, config, rng_factory(seed, N, i)) for i, w in enumerate(texts)]
        keep = np.array([bool(p) for p in perturbed]) & (before > EXCLUDE_BELOW)
        kept_words = [p for p, k in zip(perturbed, keep) if k]
        after = np.full(len(texts), np.nan)
        if kept_words:
            after[keep] = correct_class_score(score_batch(model.params, featurizer.encode_many(kept_words)), labels[keep])
        b, a = before[keep], after[keep]
        sigma = sigma_correctscore(fractional_difference(b, a))
        if per_language:
            mu = min(min_u(b[labels[keep] == lab], a[labels[keep] == lab]) for lab in (0, 1) if np.any(labels[keep] == lab))
        else:
            mu = min_u(b, a)
        excluded = int(len(texts) - keep.sum())
        if N == 0:
            logger.warning("N = 0 deletes every vowel; treat this row as a degenerate endpoint")
        report.rows.append(SweepRow(N, sigma, cv, sigma / cv, mu, excluded, int(keep.sum()), N == 0))
    return report
