"""Command-line interface: ``translid {train,evaluate,predict,robustness,stats,synth}``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import fields
from pathlib import Path

from . import corpus as corpus_mod
from .corpus import Corpus, SplitSpec, load_corpus, normalize_word, split, syllable_stats, write_histogram
from .encoding import DEFAULT_VOCAB_SIZE, Featurizer
from .errors import NumericError, TranslidError
from .evaluation import comparison_table, evaluate
from .model import Hyperparams, predict
from .robustness import sweep
from .tokenizer import PatternSet, Tokenizer, load_patterns
from .training import SavedModel, TrainConfig, coerce_fields, load_model, parse_config, save_model, train

logger = logging.getLogger("translid")

EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 1, 2, 3
MODE_TITLES = {"phonetic": "Phonetic syllables", "chars": "Letters (baseline)"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_corpora(p, required=True):
    p.add_argument("--lang1", required=required, help="corpus file for label 1")
    p.add_argument("--lang0", required=required, help="corpus file for label 0")
    p.add_argument("--name1", help="display name for label 1 (default: file stem)")
    p.add_argument("--name0", help="display name for label 0 (default: file stem)")


def _add_patterns(p):
    p.add_argument("--patterns", help="hyphenation pattern file (required in phonetic mode)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="translid", description="Language identification of transliterated words.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("train", help="train a model")
    _add_corpora(p)
    _add_patterns(p)
    p.add_argument("--mode", choices=("phonetic", "chars"), default="phonetic")
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--history", help="history TSV (default: history.tsv next to --out)")
    p.add_argument("--config", help="key = value defaults file")
    p.add_argument("--seed", type=int)
    p.add_argument("--val-fraction", type=float)
    p.add_argument("--vocab-size", type=int)
    p.add_argument("--embed-dim", type=int)
    p.add_argument("--hidden", type=int)
    p.add_argument("--dropout", type=float)
    p.add_argument("--l2", type=float)
    p.add_argument("--batch-size", type=int)
    p.add_argument("--max-epochs", type=int)
    p.add_argument("--patience", type=int)
    p.add_argument("--lr", type=float)
    p.add_argument("--beta1", type=float)
    p.add_argument("--beta2", type=float)
    p.add_argument("--eps", type=float)

    p = sub.add_parser("evaluate", help="accuracy, AUC and ROC on test corpora")
    p.add_argument("--model", required=True)
    _add_corpora(p)
    _add_patterns(p)
    p.add_argument("--mode", choices=("phonetic", "chars"), help="expected model mode")
    p.add_argument("--roc", default="roc.tsv", help="ROC points output (fpr<TAB>tpr)")
    p.add_argument("--report", help="also write the report to this file")
    p.add_argument("--compare", help="second (baseline) model for a side-by-side table")

    p = sub.add_parser("predict", help="score words from arguments or stdin")
    p.add_argument("--model", required=True)
    _add_patterns(p)
    p.add_argument("words", nargs="*")

    p = sub.add_parser("robustness", help="vowel-perturbation sweep")
    p.add_argument("--model", required=True)
    _add_corpora(p)
    _add_patterns(p)
    p.add_argument("--N-list", dest="n_list", required=True, help="comma-separated perturbation parameters")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="sweep.tsv")
    p.add_argument("--per-language", action="store_true", help="min_u as the minimum over languages")

    p = sub.add_parser("stats", help="syllable histograms per language")
    _add_corpora(p)
    _add_patterns(p)
    p.add_argument("--mode", choices=("phonetic", "chars"), default="phonetic")
    p.add_argument("--out-dir", default=".")

    p = sub.add_parser("synth", help="write a synthetic two-language corpus")
    p.add_argument("--preset", choices=sorted(corpus_mod.PRESETS), default="demo")
    p.add_argument("--n", type=int, default=1000, help="words per language")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", default=".")
    return parser


# --- helpers -----------------------------------------------------------------


def _patterns_for(mode: str, path: str | None) -> PatternSet | None:
    if mode != "phonetic":
        return None
    if not path:
        raise UsageError("--patterns is required in phonetic mode")
    if not Path(path).is_file():
        raise UsageError(f"pattern file not found: {path}")
    return load_patterns(path)


def _featurizer_for(model: SavedModel, patterns_path: str | None) -> Featurizer:
    f = Featurizer(model.mode, _patterns_for(model.mode, patterns_path), model.hyper.vocab_size)
    model.check_compatible(f)
    return f


def _load_pair(args) -> Corpus:
    c1 = load_corpus(args.lang1, 1, args.name1)
    c0 = load_corpus(args.lang0, 0, args.name0)
    return c1.merge(c0)


def _merged_settings(args) -> tuple[Hyperparams, TrainConfig, float]:
    values: dict[str, str] = {}
    if args.config:
        values.update(parse_config(Path(args.config).read_text(encoding="utf-8")))
    for key, val in vars(args).items():
        if val is not None and key not in ("lang1", "lang0", "name1", "name0", "patterns", "out", "history", "config", "command", "mode", "verbose"):
            values[key] = str(val)
    if args.mode == "chars":
        values["vocab_size"] = "26"
    values.setdefault("vocab_size", str(DEFAULT_VOCAB_SIZE))
    hyper = Hyperparams(**coerce_fields(Hyperparams, values))
    config = TrainConfig(**coerce_fields(TrainConfig, values))
    val_fraction = float(values.get("val_fraction", 0.1))
    known = {f.name for f in fields(Hyperparams)} | {f.name for f in fields(TrainConfig)} | {"val_fraction"}
    unknown = set(values) - known
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return hyper, config, val_fraction


# --- subcommands -------------------------------------------------------------


def cmd_train(args) -> int:
    patterns = _patterns_for(args.mode, args.patterns)
    hyper, config, val_fraction = _merged_settings(args)
    data = _load_pair(args)
    train_c, val_c, _ = split(data, SplitSpec(1.0 - val_fraction, val_fraction, config.seed))
    featurizer = Featurizer(args.mode, patterns, hyper.vocab_size)
    params, history = train(train_c, val_c, featurizer, hyper, config)

    model = SavedModel(params, hyper, args.mode, featurizer.pattern_checksum(), dict(data.language_names))
    out = Path(args.out)
    save_model(out, model)
    history_path = Path(args.history) if args.history else out.parent / "history.tsv"
    history_path.write_text(history.to_tsv(), encoding="utf-8")
    b = history.best_epoch
    print(f"best epoch {b}: val_loss {history.val_loss[b]:.6f} val_acc {history.val_acc[b]:.6f}")
    print(f"wrote {out} and {history_path}")
    return 0


def cmd_evaluate(args) -> int:
    model = load_model(args.model)
    if args.mode and args.mode != model.mode:
        raise TranslidError(f"mode mismatch: model is {model.mode!r}, requested {args.mode!r}")
    test = _load_pair(args)
    report = evaluate(model, test, _featurizer_for(model, args.patterns), args.roc)
    text = report.format()
    if args.compare:
        other = load_model(args.compare)
        other_report = evaluate(other, test, _featurizer_for(other, args.patterns))
        rows = {MODE_TITLES[model.mode]: report, MODE_TITLES[other.mode]: other_report}
        if len(rows) < 2:
            rows = {args.model: report, args.compare: other_report}
        text += "\n" + comparison_table(rows)
    sys.stdout.write(text)
    if args.report:
        Path(args.report).write_text(text, encoding="utf-8")
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    featurizer = _featurizer_for(model, args.patterns)
    tokens = args.words if args.words else sys.stdin.read().split()
    out = []
    for raw in tokens:
        word = normalize_word(raw)
        if word is None:
            out.append(f"{raw}\tSKIP")
            continue
        score, label = predict(model.params, featurizer.encode(word))
        out.append(f"{word}\t{score:.6f}\t{model.language_names[label]}")
    if out:
        sys.stdout.write("\n".join(out) + "\n")
    return 0


def _parse_n_list(text: str) -> list[int]:
    try:
        values = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--N-list must be comma-separated integers: {text!r}") from None
    if not values or min(values) < 0:
        raise UsageError("--N-list needs at least one non-negative integer")
    unique = list(dict.fromkeys(values))
    if len(unique) < len(values):
        logger.warning("duplicate N values removed: %s", ",".join(map(str, unique)))
    return unique


def cmd_robustness(args) -> int:
    Ns = _parse_n_list(args.n_list)
    model = load_model(args.model)
    featurizer = _featurizer_for(model, args.patterns)
    test = _load_pair(args)
    report = sweep(model, test, featurizer, Ns, seed=args.seed, per_language=args.per_language)
    Path(args.out).write_text(report.to_tsv(), encoding="utf-8")
    sys.stdout.write(report.format_blocks())
    return 0


def cmd_stats(args) -> int:
    patterns = _patterns_for(args.mode, args.patterns)
    data = _load_pair(args)
    per_word, per_syl = syllable_stats(data, Tokenizer(args.mode, patterns))
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for label in sorted(per_word, reverse=True):
        name = data.language_names.get(label, f"label{label}")
        write_histogram(out / f"syllables_per_word.{name}.tsv", per_word[label])
        write_histogram(out / f"syllable_length.{name}.tsv", per_syl[label])
        mode = max(per_word[label], key=lambda k: (per_word[label][k], -k))
        print(f"{name}: {sum(per_word[label].values())} words, most common syllables/word = {mode}")
    return 0


def cmd_synth(args) -> int:
    lang1, lang0 = corpus_mod.PRESETS[args.preset]
    data = corpus_mod.generate_synthetic(lang1, lang0, args.n, args.seed)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for label, spec in ((1, lang1), (0, lang0)):
        path = out / f"{spec.name}.txt"
        corpus_mod.write_corpus(path, [w.text for w in data.words if w.label == label])
        print(f"wrote {path}")
    return 0


COMMANDS = {
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "predict": cmd_predict,
    "robustness": cmd_robustness,
    "stats": cmd_stats,
    "synth": cmd_synth,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"translid {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"translid {args.command}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (TranslidError, ValueError, OSError) as exc:
        print(f"translid {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
