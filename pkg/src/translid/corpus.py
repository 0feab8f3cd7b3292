"""Word corpora: normalization, file loading, stratified splits, statistics
and a deterministic synthetic generator."""

from __future__ import annotations

import logging
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .errors import CorpusError
from .rng import SplitMix64, derive_seed

logger = logging.getLogger(__name__)

_NON_LETTER = re.compile(r"[^a-z]+")
WORD_RE = re.compile(r"[a-z]+")


@dataclass(frozen=True)
class LabeledWord:
    text: str
    label: int

    def __post_init__(self):
        if not WORD_RE.fullmatch(self.text):
            raise ValueError(f"not a normalized word: {self.text!r}")
        if self.label not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {self.label!r}")


@dataclass(frozen=True)
class Corpus:
    words: tuple[LabeledWord, ...]
    language_names: dict[int, str] = field(default_factory=lambda: {1: "lang1", 0: "lang0"})

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    @property
    def texts(self) -> list[str]:
        return [w.text for w in self.words]

    @property
    def labels(self) -> list[int]:
        return [w.label for w in self.words]

    def label_counts(self) -> dict[int, int]:
        counts = Counter(self.labels)
        return {0: counts.get(0, 0), 1: counts.get(1, 0)}

    def require_both_labels(self) -> None:
        counts = self.label_counts()
        if not len(self):
            raise CorpusError("corpus is empty")
        if counts[0] == 0 or counts[1] == 0:
            raise CorpusError(f"corpus needs both labels, got counts {counts}")

    def merge(self, other: "Corpus") -> "Corpus":
        names = {**self.language_names, **other.language_names}
        return Corpus(self.words + other.words, names)


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.9
    val_fraction: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction <= 1.0:
            raise ValueError("train_fraction must be in (0, 1]")
        if not 0.0 <= self.val_fraction < 1.0:
            raise ValueError("val_fraction must be in [0, 1)")
        if self.train_fraction + self.val_fraction > 1.0 + 1e-12:
            raise ValueError("train_fraction + val_fraction must not exceed 1")


def normalize_word(raw: str) -> str | None:
    """Lowercase ``raw`` and keep only a-z; ``None`` if nothing survives.

    Accented letters are dropped outright, not transliterated ("café" -> "caf").
    """
    text = _NON_LETTER.sub("", raw.casefold())
    return text or None


def words_from_text(text: str, label: int) -> tuple[list[LabeledWord], int]:
    words, rejected = [], 0
    for token in text.split():
        norm = normalize_word(token)
        if norm is None:
            rejected += 1
        else:
            words.append(LabeledWord(norm, label))
    return words, rejected


def load_corpus(path: str | Path, label: int, name: str | None = None) -> Corpus:
    """Read a whitespace-separated UTF-8 token file and tag every word with ``label``."""
    path = Path(path)
    if not path.is_file():
        raise CorpusError(f"corpus file not found: {path}")
    words, rejected = words_from_text(path.read_text(encoding="utf-8"), label)
    if rejected:
        logger.info("%s: rejected %d tokens with no a-z letters", path, rejected)
    if not words:
        raise CorpusError(f"{path}: zero surviving words")
    return Corpus(tuple(words), {label: name or path.stem})


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5 + 1e-9))


def split(corpus: Corpus, spec: SplitSpec) -> tuple[Corpus, Corpus, Corpus]:
    """Stratified, seeded split into (train, val, test).

    Each label's words are shuffled, then the labels are interleaved by their
    fractional position ``(i + 0.5) / n_label`` so that every prefix of the
    merged order keeps the label proportions within one word. The merged order
    is cut at ``round(train * n)`` and ``round((train + val) * n)``.
    """
    if not len(corpus):
        raise CorpusError("cannot split an empty corpus")
    rng = SplitMix64(derive_seed(spec.seed, 0x5B17))
    keyed = []
    for label in (0, 1):
        members = [w for w in corpus.words if w.label == label]
        rng.shuffle(members)
        n = len(members)
        keyed.extend(((i + 0.5) / n, label, w) for i, w in enumerate(members))
    keyed.sort(key=lambda item: (item[0], item[1]))
    ordered = [w for _, _, w in keyed]

    n = len(ordered)
    n_train = min(n, _round_half_up(spec.train_fraction * n))
    n_trval = min(n, _round_half_up((spec.train_fraction + spec.val_fraction) * n))
    parts = ordered[:n_train], ordered[n_train:n_trval], ordered[n_trval:]
    out = []
    for part in parts:
        part = list(part)
        rng.shuffle(part)
        out.append(Corpus(tuple(part), dict(corpus.language_names)))
    return out[0], out[1], out[2]


def syllable_stats(
    corpus: Corpus, tokenizer: Callable[[str], Sequence[str]]
) -> tuple[dict[int, Counter], dict[int, Counter]]:
    """Per-label histograms of syllables-per-word and characters-per-syllable."""
    per_word: dict[int, Counter] = {}
    per_syllable: dict[int, Counter] = {}
    for w in corpus.words:
        tokens = tokenizer(w.text)
        per_word.setdefault(w.label, Counter())[len(tokens)] += 1
        lengths = per_syllable.setdefault(w.label, Counter())
        for tok in tokens:
            lengths[len(tok)] += 1
    return per_word, per_syllable


def write_histogram(path: str | Path, hist: Counter) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for value in sorted(hist):
            fh.write(f"{value}\t{hist[value]}\n")


# --- synthetic corpora -------------------------------------------------------


@dataclass(frozen=True)
class LanguageSpec:
    """Syllable inventory plus a distribution over syllables-per-word (1-4)."""

    syllables: tuple[str, ...]
    length_weights: tuple[float, float, float, float] = (0.2, 0.45, 0.25, 0.1)
    name: str = "lang"

    def __post_init__(self):
        if len(set(self.syllables)) < 5:
            raise ValueError("a language needs at least 5 distinct syllables")
        for syl in self.syllables:
            if not WORD_RE.fullmatch(syl):
                raise ValueError(f"syllable must be a-z only: {syl!r}")
        if len(self.length_weights) != 4 or min(self.length_weights) < 0 or sum(self.length_weights) <= 0:
            raise ValueError("length_weights must be 4 non-negative weights")

    def length_probabilities(self) -> list[float]:
        total = sum(self.length_weights)
        return [w / total for w in self.length_weights]


def _draw_categorical(rng: SplitMix64, probs: Sequence[float]) -> int:
    u = rng.random()
    acc = 0.0
    for i, p in enumerate(probs):
        acc += p
        if u < acc:
            return i
    return len(probs) - 1


def sample_syllables(rng: SplitMix64, spec: LanguageSpec) -> list[str]:
    n_syl = 1 + _draw_categorical(rng, spec.length_probabilities())
    return [spec.syllables[rng.randbelow(len(spec.syllables))] for _ in range(n_syl)]


def generate_synthetic(
    lang1: LanguageSpec, lang0: LanguageSpec, n_per_language: int, seed: int = 0
) -> Corpus:
    """``n_per_language`` random words per language; label 1 is ``lang1``."""
    if n_per_language < 1:
        raise ValueError("n_per_language must be >= 1")
    if set(lang1.syllables) == set(lang0.syllables):
        raise ValueError("the two syllable inventories must differ")
    words = []
    for label, spec in ((1, lang1), (0, lang0)):
        rng = SplitMix64(derive_seed(seed, label))
        for _ in range(n_per_language):
            words.append(LabeledWord("".join(sample_syllables(rng, spec)), label))
    return Corpus(tuple(words), {1: lang1.name, 0: lang0.name})


# Disjoint inventories loosely modelled on romanized Bangla and Korean.
DEMO_LANG1 = LanguageSpec(
    ("a", "mi", "tu", "bha", "lo", "ba", "shi", "ke", "mo", "na", "ro", "sho",
     "di", "jo", "pa", "khu", "ghu", "dho", "ni", "ra"),
    (0.15, 0.5, 0.25, 0.1),
    "bangla",
)
DEMO_LANG0 = LanguageSpec(
    ("sa", "rang", "hae", "neun", "gyeo", "jeo", "kkeo", "yeo", "eun", "seu",
     "hal", "jan", "dong", "geu", "myeon", "eo", "bwa", "nae", "ui", "chu"),
    (0.2, 0.4, 0.3, 0.1),
    "korean",
)

# Same letters, similar letter frequencies, different consonant-vowel pairings.
HARD_LANG1 = LanguageSpec(
    ("ka", "mi", "to", "ne", "su", "ri", "po", "la", "de", "gu", "na", "si"),
    (0.2, 0.45, 0.25, 0.1),
    "alpha",
)
HARD_LANG0 = LanguageSpec(
    ("ki", "ma", "te", "no", "sa", "ru", "pe", "li", "do", "ga", "ni", "tu"),
    (0.2, 0.45, 0.25, 0.1),
    "beta",
)

PRESETS = {"demo": (DEMO_LANG1, DEMO_LANG0), "hard": (HARD_LANG1, HARD_LANG0)}


def write_corpus(path: str | Path, words: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for w in words:
            fh.write(w + "\n")
