import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import md5_bucket
from translid.encoding import Featurizer, encode_chars, encode_phonetic, hash_token_md5
from translid.errors import EncodingError
from translid.rng import SplitMix64

tokens = st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=12)


def test_md5_against_rfc1321_oracle():
    assert hash_token_md5("ta", 4096) == md5_bucket("ta", 4096) == 2253
    for tok in ["gi", "ta", "bha", "saranghae", "x" * 80]:
        assert hash_token_md5(tok, 4096) == md5_bucket(tok, 4096)


@given(tokens, st.integers(1, 10**6))
def test_hash_range_and_determinism(tok, V):
    h = hash_token_md5(tok, V)
    assert 1 <= h <= V
    assert h == hash_token_md5(tok, V)


def test_hash_v1_and_empty():
    assert hash_token_md5("anything", 1) == 1
    with pytest.raises(EncodingError):
        hash_token_md5("", 10)


def test_encode_phonetic():
    assert len(encode_phonetic(["a"], 50).ids) == 1
    fwd = encode_phonetic(["gi", "ta"], 4096).ids
    assert encode_phonetic(["ta", "gi"], 4096).ids == fwd[::-1]
    seq = encode_phonetic(["bha", "lo", "ba"], 4096)
    assert seq.ids == tuple(md5_bucket(s, 4096) for s in ["bha", "lo", "ba"])
    assert seq.mode == "phonetic" and seq.vocab_size == 4096


def test_encode_chars():
    assert encode_chars(list("abz")).ids == (1, 2, 26)
    assert encode_chars(["a"]).ids == (1,)
    assert encode_chars(list("korean")).ids == (11, 15, 18, 5, 1, 14)
    with pytest.raises(EncodingError):
        encode_chars(["A"])
    with pytest.raises(EncodingError):
        encode_chars(["ab"])


def test_hash_spread():
    rng = SplitMix64(1)
    seen = set()
    while len(seen) < 100_000:
        n = 3 + rng.randbelow(8)
        seen.add("".join(chr(97 + rng.randbelow(26)) for _ in range(n)))
    loads = np.bincount([hash_token_md5(t, 4096) for t in seen], minlength=4097)[1:]
    assert loads.max() < 3 * loads.mean()


def test_featurizer_modes(patterns):
    f = Featurizer("phonetic", patterns, 4096)
    assert f.encode("gita").ids == (md5_bucket("gi", 4096), md5_bucket("ta", 4096))
    c = Featurizer("chars")
    assert c.vocab_size == 26 and c.encode("abz").ids == (1, 2, 26)
    assert c.pattern_checksum() == bytes(32)
