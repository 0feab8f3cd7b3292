import numpy as np
import pytest

from oracles import ScalarAdam
from translid.corpus import DEMO_LANG0, DEMO_LANG1, Corpus, LabeledWord, SplitSpec, generate_synthetic, split
from translid.encoding import Featurizer
from translid.errors import CorpusError, ModelFileError, ModeMismatchError
from translid.model import WEIGHT_NAMES, Hyperparams, ModelParams, init_params
from translid.training import (
    EarlyStopping,
    OptimizerState,
    SavedModel,
    TrainConfig,
    TrainHistory,
    adam_step,
    batch_gradient,
    coerce_fields,
    deserialize_model,
    load_model,
    parse_config,
    save_model,
    serialize_model,
    train,
)


def small_params(seed=0):
    return init_params(Hyperparams(vocab_size=20, embed_dim=3, hidden=4, seed=seed))


def flat(p: ModelParams):
    return np.concatenate([a.ravel() for a in p.arrays().values()])


def test_zero_gradient_leaves_params():
    p = small_params()
    before = p.copy()
    adam_step(p, p.zeros_like(), OptimizerState.fresh(p), l2=0.0)
    assert p.equals(before)


def test_first_step_closed_form():
    p = ModelParams(np.zeros((2, 1)), np.zeros((4, 1, 1)), np.zeros((4, 1, 1)), np.zeros((4, 1)), np.zeros(1), np.zeros(1))
    g = p.zeros_like()
    g.w_out[0] = 1.0
    state = OptimizerState.fresh(p)
    adam_step(p, g, state)
    # m_hat = g, v_hat = g^2 on the first step
    assert p.w_out[0] == pytest.approx(-0.001 / (1.0 + 1e-8), rel=1e-15)
    assert state.t == 1


def test_momentum_after_gradient_stops():
    theta = [0.0]
    ref = ScalarAdam(1)
    p = ModelParams(np.zeros((2, 1)), np.zeros((4, 1, 1)), np.zeros((4, 1, 1)), np.zeros((4, 1)), np.zeros(1), np.zeros(1))
    state = OptimizerState.fresh(p)
    for gval in (1.0, 0.0, 0.0):
        g = p.zeros_like()
        g.b_out[0] = gval
        adam_step(p, g, state)
        theta = ref.step(theta, [gval])
        assert p.b_out[0] == pytest.approx(theta[0], abs=1e-15)
    assert p.b_out[0] < -0.002


def test_vectorized_adam_matches_scalar_reference():
    rng = np.random.default_rng(0)
    p = small_params()
    for arr in p.arrays().values():
        arr[...] = rng.normal(size=arr.shape)
    decay = np.concatenate([np.full(a.size, name in WEIGHT_NAMES) for name, a in p.arrays().items()])
    theta = list(flat(p))
    ref = ScalarAdam(len(theta), lr=0.01)
    state = OptimizerState.fresh(p, TrainConfig(lr=0.01))
    for _ in range(200):
        g = p.zeros_like()
        for arr in g.arrays().values():
            arr[...] = rng.normal(size=arr.shape)
        adam_step(p, g, state, l2=1e-3)
        theta = ref.step(theta, list(flat(g)), l2=1e-3, decay_mask=decay)
    assert np.max(np.abs(flat(p) - np.array(theta))) < 1e-12


def test_adam_shape_mismatch():
    a, b = small_params(), init_params(Hyperparams(vocab_size=21, embed_dim=3, hidden=4))
    with pytest.raises(ValueError):
        adam_step(a, b, OptimizerState.fresh(a))


def test_early_stopping_rule():
    stop = EarlyStopping(patience=1)
    assert stop.update(1, 0.5) is False
    assert stop.update(2, 0.6) is True
    assert stop.best_epoch == 1
    stop = EarlyStopping(patience=3)
    for e, v in enumerate([0.9, 0.8, 0.85, 0.84, 0.7, 0.71, 0.72]):
        assert stop.update(e, v) is False
    assert stop.update(7, 0.75) is True and stop.best_epoch == 4


def test_batch_gradient_is_mean_of_examples():
    p = small_params(3)
    seqs = [[1, 2], [3], [4, 5], [6, 7, 8]]
    labels = [1, 0, 0, 1]
    mean, _ = batch_gradient(p, seqs, labels)
    parts = [batch_gradient(p, [s], [y])[0] for s, y in zip(seqs, labels)]
    for name in mean.arrays():
        expected = sum(getattr(g, name) for g in parts) / 4
        np.testing.assert_allclose(getattr(mean, name), expected, atol=1e-14)


@pytest.fixture(scope="module")
def demo_data():
    c = generate_synthetic(DEMO_LANG1, DEMO_LANG0, 300, seed=3)
    tr, va, _ = split(c, SplitSpec(0.9, 0.1, 3))
    return tr, va


def test_train_deterministic_and_descends(patterns, demo_data):
    tr, va = demo_data
    f = Featurizer("phonetic", patterns, 512)
    hp = Hyperparams(vocab_size=512, hidden=16, seed=1)
    cfg = TrainConfig(max_epochs=8, seed=1)
    p1, h1 = train(tr, va, f, hp, cfg)
    p2, h2 = train(tr, va, f, hp, cfg)
    assert p1.equals(p2) and h1 == h2
    assert h1.train_loss[h1.best_epoch] < h1.train_loss[0]
    assert h1.epochs_run <= h1.best_epoch + cfg.patience
    assert len(h1.train_loss) == len(h1.val_loss) == len(h1.val_acc)


def test_train_reaches_high_validation_accuracy(patterns):
    c = generate_synthetic(DEMO_LANG1, DEMO_LANG0, 500, seed=4)
    tr, va, _ = split(c, SplitSpec(0.9, 0.1, 4))
    hp = Hyperparams(vocab_size=4096, seed=4)
    p, h = train(tr, va, Featurizer("phonetic", patterns), hp, TrainConfig(max_epochs=20, seed=4))
    assert max(h.val_acc) >= 0.99


def test_early_stop_returns_best_weights(demo_data):
    tr, va = demo_data
    flipped = Corpus(tuple(LabeledWord(w.text, 1 - w.label) for w in va.words))
    f = Featurizer("chars")
    hp = Hyperparams(vocab_size=26, hidden=8, seed=2)
    p, h = train(tr, flipped, f, hp, TrainConfig(max_epochs=10, patience=1, seed=2, lr=0.01))
    assert h.best_epoch == 0 and h.epochs_run == 1
    assert p.equals(init_params(hp))


def test_train_requires_both_labels(patterns):
    one = Corpus((LabeledWord("ami", 1), LabeledWord("tumi", 1)))
    with pytest.raises(CorpusError):
        train(one, one, Featurizer("chars"), Hyperparams(vocab_size=26), TrainConfig(max_epochs=1))


def test_model_file_round_trip(tmp_path, patterns):
    hp = Hyperparams(vocab_size=64, embed_dim=5, hidden=6, dropout=0.3, l2=1e-3, seed=99)
    f = Featurizer("phonetic", patterns, 64)
    model = SavedModel(init_params(hp), hp, "phonetic", f.pattern_checksum(), {1: "bangla", 0: "korean"})
    path = tmp_path / "m.bin"
    save_model(path, model)
    back = load_model(path)
    assert back.params.equals(model.params)
    assert back.hyper == hp and back.mode == "phonetic"
    assert back.pattern_checksum == model.pattern_checksum
    assert back.language_names == {1: "bangla", 0: "korean"}
    assert serialize_model(back) == path.read_bytes()
    back.check_compatible(f)


def test_model_file_corruption(tmp_path):
    hp = Hyperparams(vocab_size=26, embed_dim=2, hidden=2)
    data = serialize_model(SavedModel(init_params(hp), hp, "chars"))
    with pytest.raises(ModelFileError, match="corrupt model file"):
        deserialize_model(data[:-10])
    flipped = bytearray(data)
    flipped[60] ^= 1
    with pytest.raises(ModelFileError, match="corrupt model file"):
        deserialize_model(bytes(flipped))
    with pytest.raises(ModelFileError):
        deserialize_model(b"not a model")


def test_mode_mismatch(patterns):
    hp = Hyperparams(vocab_size=4096)
    model = SavedModel(init_params(Hyperparams(vocab_size=26, hidden=2)), hp, "phonetic", Featurizer("phonetic", patterns).pattern_checksum())
    with pytest.raises(ModeMismatchError, match="mode mismatch"):
        model.check_compatible(Featurizer("chars"))


def test_config_parsing():
    values = parse_config("# defaults\nbatch-size = 32\nlr=0.01  # faster\nhidden = 16\n")
    assert coerce_fields(TrainConfig, values) == {"batch_size": 32, "lr": 0.01}
    assert coerce_fields(Hyperparams, values) == {"hidden": 16}
    with pytest.raises(ValueError):
        parse_config("just words")


def test_history_tsv():
    h = TrainHistory([0.7, 0.5], [0.69, 0.4], [0.5, 0.9], 1)
    lines = h.to_tsv().splitlines()
    assert lines[0] == "epoch\ttrain_loss\tval_loss\tval_acc"
    assert lines[2] == "1\t0.5\t0.4\t0.9"
