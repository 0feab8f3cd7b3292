"""Token sequences to integer ids.

Phonetic mode hashes each syllable with MD5 into ``[1, V]``; the baseline maps
letters alphabetically (a=1 ... z=26). Id 0 is the padding row of the
embedding table and is never emitted.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Sequence

from .errors import EncodingError
from .tokenizer import PatternSet, SyllableSequence, Tokenizer, tokenize_chars, tokenize_phonetic

DEFAULT_VOCAB_SIZE = 4096
ALPHABET_SIZE = 26


@dataclass(frozen=True)
class EncodedSequence:
    ids: tuple[int, ...]
    mode: str
    vocab_size: int

    def __len__(self):
        return len(self.ids)


def hash_token_md5(token: str, vocab_size: int) -> int:
    """``1 + int.from_bytes(md5(token)[:8], "big") % vocab_size``."""
    if not token:
        raise EncodingError("cannot hash an empty token")
    if vocab_size < 1:
        raise EncodingError("vocab_size must be >= 1")
    digest = hashlib.md5(token.encode("utf-8")).digest()
    return 1 + int.from_bytes(digest[:8], "big") % vocab_size


def encode_phonetic(syllables: SyllableSequence | Sequence[str], vocab_size: int = DEFAULT_VOCAB_SIZE) -> EncodedSequence:
    ids = tuple(hash_token_md5(s, vocab_size) for s in syllables)
    if not ids:
        raise EncodingError("empty syllable sequence")
    return EncodedSequence(ids, "phonetic", vocab_size)


def encode_chars(chars: Sequence[str]) -> EncodedSequence:
    ids = []
    for ch in chars:
        if len(ch) != 1 or not "a" <= ch <= "z":
            raise EncodingError(f"not a single a-z character: {ch!r}")
        ids.append(ord(ch) - ord("a") + 1)
    if not ids:
        raise EncodingError("empty character sequence")
    return EncodedSequence(tuple(ids), "chars", ALPHABET_SIZE)


class Featurizer:
    """Word -> :class:`EncodedSequence` for a fixed mode (and pattern set)."""

    def __init__(self, mode: str, patterns: PatternSet | None = None, vocab_size: int = DEFAULT_VOCAB_SIZE):
        self.tokenizer = Tokenizer(mode, patterns)
        self.mode = mode
        self.vocab_size = vocab_size if mode == "phonetic" else ALPHABET_SIZE

    @property
    def patterns(self) -> PatternSet | None:
        return self.tokenizer.patterns

    def pattern_checksum(self) -> bytes:
        return self.tokenizer.pattern_checksum()

    def encode(self, word: str) -> EncodedSequence:
        if self.mode == "phonetic":
            return encode_phonetic(tokenize_phonetic(word, self.patterns), self.vocab_size)
        return encode_chars(tokenize_chars(word))

    def encode_many(self, words: Sequence[str]) -> list[tuple[int, ...]]:
        return [self.encode(w).ids for w in words]
