import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import min_u_pairs
from translid.corpus import DEMO_LANG0, DEMO_LANG1, SplitSpec, generate_synthetic, split
from translid.encoding import Featurizer
from translid.model import Hyperparams, ModelParams
from translid.rng import SplitMix64
from translid.robustness import (
    PerturbationConfig,
    correct_class_score,
    cv_correctscore,
    fractional_difference,
    mann_whitney_u,
    min_u,
    perturb_word,
    sigma_correctscore,
    spearman,
    sweep,
    word_rng,
)
from translid.training import SavedModel, TrainConfig, train

words = st.text(alphabet="abcdeiklmnorstuy", min_size=1, max_size=15)


class Constant:
    def __init__(self, value):
        self.value = value

    def integers(self, low, high):
        return self.value


def test_perturb_no_vowels():
    for N in range(6):
        assert perturb_word("krk", PerturbationConfig(N), SplitMix64(N)) == "krk"


@given(words)
def test_perturb_identity_when_count_one(word):
    assert perturb_word(word, PerturbationConfig(4), Constant(1)) == word


def test_perturb_pinned_draws():
    # SplitMix64(35) yields randbelow(4) draws 3 then 2
    rng = SplitMix64(35)
    assert [rng.integers(0, 3), rng.integers(0, 3)] == [3, 2]
    assert perturb_word("gita", PerturbationConfig(3), SplitMix64(35)) == "giiitaa"


def test_perturb_n_zero_deletes_vowels():
    assert perturb_word("bhalobashi", PerturbationConfig(0), SplitMix64(1)) == "bhlbsh"
    assert perturb_word("aei", PerturbationConfig(0), SplitMix64(1)) == ""


@given(words, st.integers(0, 6), st.integers(0, 2**64 - 1))
def test_perturb_properties(word, N, seed):
    cfg = PerturbationConfig(N)
    out = perturb_word(word, cfg, SplitMix64(seed))
    assert out == perturb_word(word, cfg, SplitMix64(seed))
    strip = lambda s: "".join(c for c in s if c not in "aeiou")
    assert strip(out) == strip(word)
    if N == 1:
        it = iter(word)
        assert all(c in it for c in out)  # subsequence


def test_correct_class_score():
    assert correct_class_score(0.2, 1) == pytest.approx(0.2)
    assert correct_class_score(0.7, 0) == pytest.approx(0.3)
    assert list(correct_class_score([0.5, 0.5], [0, 1])) == [0.5, 0.5]


def test_fractional_difference():
    assert fractional_difference(0.3, 0.3) == 0.0
    assert fractional_difference(0.2, 0.4) == pytest.approx(1.0)
    assert np.isnan(fractional_difference(1e-12, 0.4))


def test_sigma_and_cv():
    assert sigma_correctscore([0.3, 0.3, 0.3]) == 0.0
    assert sigma_correctscore([-1.0, 1.0]) == 1.0
    assert cv_correctscore([0.0, 1.0]) == 1.0
    with pytest.raises(ValueError):
        cv_correctscore([0.4, 0.4, 0.4])
    with pytest.raises(ValueError):
        sigma_correctscore([0.1])


def test_min_u_examples():
    assert min_u([0.1, 0.5], [0.3, 0.7]) == 0.25
    assert min_u([0.2, 0.4, 0.4], [0.2, 0.4, 0.4]) == 0.5
    assert min_u([0.8, 0.9], [0.1, 0.2, 0.3]) == 0.0
    with pytest.raises(ValueError):
        min_u([], [0.1])


samples = st.lists(st.integers(0, 20).map(lambda v: v / 20), min_size=1, max_size=60)


@given(samples, samples)
def test_min_u_rank_equals_pairs(a, b):
    assert min_u(a, b) == min_u_pairs(a, b)
    assert min_u(a, b) == min_u(b, a)
    assert 0.0 <= min_u(a, b) <= 0.5
    assert mann_whitney_u(a, b) + mann_whitney_u(b, a) == pytest.approx(1.0)


def test_spearman():
    assert spearman([1, 2, 3, 4], [10, 20, 30, 40]) == pytest.approx(1.0)
    assert spearman([1, 2, 3, 4], [4, 3, 2, 1]) == pytest.approx(-1.0)
    scipy_stats = pytest.importorskip("scipy.stats")
    x, y = [1, 2, 3, 4, 5], [0.3, 0.1, 0.1, 0.7, 0.2]
    assert spearman(x, y) == pytest.approx(scipy_stats.spearmanr(x, y).statistic)


@pytest.fixture(scope="module")
def model_and_test(patterns):
    c = generate_synthetic(DEMO_LANG1, DEMO_LANG0, 400, seed=31)
    tr, va, _ = split(c, SplitSpec(0.9, 0.1, 31))
    f = Featurizer("phonetic", patterns)
    hp = Hyperparams(seed=31)
    p, _ = train(tr, va, f, hp, TrainConfig(max_epochs=15, seed=31))
    test = generate_synthetic(DEMO_LANG1, DEMO_LANG0, 150, seed=32)
    return SavedModel(p, hp, "phonetic", f.pattern_checksum(), c.language_names), f, test


def test_sweep_table(model_and_test):
    model, f, test = model_and_test
    rep = sweep(model, test, f, [0, 1, 3], seed=5)
    assert [r.N for r in rep.rows] == [0, 1, 3]
    assert rep.rows[0].degenerate and not rep.rows[1].degenerate
    for r in rep.rows:
        assert 0 <= r.min_u <= 0.5 and r.ratio >= 0
        assert r.scored + r.excluded == len(test)
    assert rep.to_tsv().splitlines()[0] == "N\tsigma\tcv\tratio\tmin_u\texcluded"
    assert rep.to_tsv() == sweep(model, test, f, [0, 1, 3], seed=5).to_tsv()
    assert "min. U" in rep.format_blocks()


def test_sweep_identity_rng(model_and_test):
    model, f, test = model_and_test
    rep = sweep(model, test, f, [2, 5], rng_factory=lambda s, n, i: Constant(1))
    for r in rep.rows:
        assert r.sigma == 0.0 and r.min_u == 0.5 and r.excluded == 0


def test_sweep_per_language(model_and_test):
    model, f, test = model_and_test
    pooled = sweep(model, test, f, [3], seed=2).rows[0]
    per = sweep(model, test, f, [3], seed=2, per_language=True).rows[0]
    assert per.sigma == pooled.sigma and 0 <= per.min_u <= 0.5


def test_word_streams_independent_of_order():
    a = [perturb_word("bhalobasha", PerturbationConfig(3), word_rng(9, 3, i)) for i in range(20)]
    b = [perturb_word("bhalobasha", PerturbationConfig(3), word_rng(9, 3, i)) for i in reversed(range(20))]
    assert a == b[::-1]
