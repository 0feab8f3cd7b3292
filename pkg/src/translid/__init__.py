"""Language identification of transliterated words from phonetic syllables."""

from .corpus import Corpus, LabeledWord, SplitSpec, generate_synthetic, load_corpus, normalize_word, split
from .encoding import EncodedSequence, Featurizer, encode_chars, encode_phonetic, hash_token_md5
from .model import Hyperparams, ModelParams, forward, init_params, predict
from .tokenizer import PatternSet, italian_patterns, load_patterns, tokenize_chars, tokenize_phonetic
from .training import SavedModel, TrainConfig, load_model, save_model, train

__version__ = "0.1.0"
