"""Phonetic-syllable and character tokenizers.

Syllables come from Liang's hyphenation algorithm driven by Italian patterns.
A pattern such as ``a1ca`` interleaves letters with priority digits; every
pattern that matches inside ``.word.`` contributes its digits to the gaps it
covers, each gap keeps the maximum, and odd maxima are break points.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .errors import PatternError

_LETTERS = re.compile(r"[a-z]+")
_EXCEPTION = re.compile(r"[a-z]+(-[a-z]+)+")


def _parse_pattern(line: str) -> tuple[str, tuple[int, ...]]:
    """Split ``a1ca`` into ``("aca", (0, 1, 0, 0))``.

    The key keeps any boundary dots; the digit vector has one slot per gap
    between the non-dot letters, including both ends.
    """
    body = line
    lead = body.startswith(".")
    trail = len(body) > 1 and body.endswith(".")
    if lead:
        body = body[1:]
    if trail:
        body = body[:-1]
    if "." in body:
        raise PatternError(f"'.' only allowed at pattern ends: {line!r}")

    letters: list[str] = []
    digits = [0]
    prev_digit = False
    for ch in body:
        if ch.isdigit():
            if prev_digit:
                raise PatternError(f"adjacent digits in pattern: {line!r}")
            digits[-1] = int(ch)
            prev_digit = True
        elif "a" <= ch <= "z":
            letters.append(ch)
            digits.append(0)
            prev_digit = False
        else:
            raise PatternError(f"illegal character {ch!r} in pattern: {line!r}")
    if not letters:
        raise PatternError(f"pattern has no letters: {line!r}")
    key = ("." if lead else "") + "".join(letters) + ("." if trail else "")
    return key, tuple(digits)


@dataclass(frozen=True)
class PatternSet:
    patterns: dict[str, tuple[int, ...]]
    left_min: int = 2
    right_min: int = 2
    exceptions: dict[str, tuple[int, ...]] = field(default_factory=dict)
    _trie: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.left_min < 1 or self.right_min < 1:
            raise PatternError("left_min and right_min must be >= 1")
        if not self.patterns:
            raise PatternError("empty pattern set")
        if not self._trie:
            self._trie.update(_build_trie(self.patterns))

    def __len__(self):
        return len(self.patterns)

    def checksum(self) -> bytes:
        """SHA-256 of a canonical serialization; independent of file layout."""
        h = hashlib.sha256()
        h.update(f"LEFTMIN {self.left_min}\nRIGHTMIN {self.right_min}\n".encode())
        for key in sorted(self.patterns):
            h.update(f"{key}:{''.join(map(str, self.patterns[key]))}\n".encode())
        for word in sorted(self.exceptions):
            h.update(f"!{word}:{','.join(map(str, self.exceptions[word]))}\n".encode())
        return h.digest()


def _build_trie(patterns: dict[str, tuple[int, ...]]) -> dict:
    """Character trie over the dotted keys; terminal nodes hold gap values
    in ``.word.`` coordinates (one slot per gap of the dotted key)."""
    root: dict = {}
    for key, digits in patterns.items():
        full = list(digits)
        if key.startswith("."):
            full.insert(0, 0)
        if key.endswith(".") and len(key) > 1:
            full.append(0)
        node = root
        for ch in key:
            node = node.setdefault(ch, {})
        node[None] = tuple(full)
    return root


def parse_patterns(text: str, source: str = "<string>") -> PatternSet:
    patterns: dict[str, tuple[int, ...]] = {}
    exceptions: dict[str, tuple[int, ...]] = {}
    left_min = right_min = 2
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith(("%", "#")):
            continue
        head, _, rest = line.partition(" ")
        try:
            if head == "LEFTMIN":
                left_min = int(rest)
                continue
            if head == "RIGHTMIN":
                right_min = int(rest)
                continue
        except ValueError:
            raise PatternError(f"{source}:{lineno}: bad header value {rest!r}") from None
        if _EXCEPTION.fullmatch(line):
            parts = line.split("-")
            cuts, pos = [], 0
            for part in parts[:-1]:
                pos += len(part)
                cuts.append(pos)
            exceptions["".join(parts)] = tuple(cuts)
            continue
        try:
            key, digits = _parse_pattern(line)
        except PatternError as exc:
            raise PatternError(f"{source}:{lineno}: {exc}") from None
        if key in patterns:
            # Liang takes the maximum over all matches, so duplicates merge that way.
            digits = tuple(map(max, patterns[key], digits))
        patterns[key] = digits
    if not patterns:
        raise PatternError(f"{source}: no patterns found")
    return PatternSet(patterns, left_min, right_min, exceptions)


def load_patterns(path: str | Path) -> PatternSet:
    path = Path(path)
    if not path.is_file():
        raise PatternError(f"pattern file not found: {path}")
    return parse_patterns(path.read_text(encoding="utf-8"), str(path))


def italian_patterns() -> PatternSet:
    """The bundled Italian pattern set (see ``data/README.md``)."""
    ref = resources.files("translid") / "data" / "italian.pat"
    return parse_patterns(ref.read_text(encoding="utf-8"), "italian.pat")


def hyphenation_points(word: str, patterns: PatternSet) -> list[int]:
    """Sorted cut positions ``k`` (split between ``word[k-1]`` and ``word[k]``)."""
    if not _LETTERS.fullmatch(word):
        raise ValueError(f"word must match [a-z]+: {word!r}")
    if word in patterns.exceptions:
        return list(patterns.exceptions[word])

    dotted = f".{word}."
    # values[g] is the gap before dotted[g]; word gap k is dotted gap k + 1
    values = [0] * (len(dotted) + 1)
    trie = patterns._trie
    for start in range(len(dotted)):
        node = trie
        for pos in range(start, len(dotted)):
            node = node.get(dotted[pos])
            if node is None:
                break
            gaps = node.get(None)
            if gaps is not None:
                for offset, v in enumerate(gaps):
                    if v > values[start + offset]:
                        values[start + offset] = v
    lo, hi = patterns.left_min, len(word) - patterns.right_min
    return [k for k in range(lo, hi + 1) if values[k + 1] % 2 == 1]


@dataclass(frozen=True)
class SyllableSequence:
    syllables: tuple[str, ...]
    source: str

    def __post_init__(self):
        if "".join(self.syllables) != self.source or not all(self.syllables):
            raise ValueError("syllables must be non-empty and concatenate to the source")

    def __len__(self):
        return len(self.syllables)

    def __iter__(self):
        return iter(self.syllables)


def tokenize_phonetic(word: str, patterns: PatternSet) -> SyllableSequence:
    cuts = [0, *hyphenation_points(word, patterns), len(word)]
    return SyllableSequence(tuple(word[a:b] for a, b in zip(cuts, cuts[1:])), word)


def tokenize_chars(word: str) -> list[str]:
    if not _LETTERS.fullmatch(word):
        raise ValueError(f"word must match [a-z]+: {word!r}")
    return list(word)


class Tokenizer:
    """Callable ``word -> list[str]`` for either mode."""

    def __init__(self, mode: str, patterns: PatternSet | None = None):
        if mode not in ("phonetic", "chars"):
            raise ValueError(f"unknown tokenizer mode {mode!r}")
        if mode == "phonetic" and patterns is None:
            raise ValueError("phonetic mode needs a pattern set")
        self.mode = mode
        self.patterns = patterns if mode == "phonetic" else None

    def __call__(self, word: str) -> list[str]:
        if self.mode == "phonetic":
            return list(tokenize_phonetic(word, self.patterns).syllables)
        return tokenize_chars(word)

    def pattern_checksum(self) -> bytes:
        return self.patterns.checksum() if self.patterns is not None else bytes(32)
