"""Phonetic vs letter-baseline comparison and a perturbation sweep on synthetic data.

    python3 scripts/run_benchmark.py --preset demo --n 2500 --seed 5 --out-dir bench/

Writes ``comparison.txt``, ``sweep.tsv`` and one ROC file per mode.
"""

import argparse
import time
from pathlib import Path

from translid.corpus import PRESETS, SplitSpec, generate_synthetic, split
from translid.encoding import Featurizer
from translid.evaluation import comparison_table, evaluate
from translid.model import Hyperparams
from translid.robustness import sweep
from translid.tokenizer import italian_patterns, load_patterns
from translid.training import SavedModel, TrainConfig, train

TITLES = {"phonetic": "Phonetic syllables", "chars": "Letters (baseline)"}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--preset", choices=sorted(PRESETS), default="demo")
    ap.add_argument("--n", type=int, default=2500, help="words per language before splitting")
    ap.add_argument("--seed", type=int, default=5)
    ap.add_argument("--max-epochs", type=int, default=50)
    ap.add_argument("--patterns", help="pattern file (default: bundled Italian patterns)")
    ap.add_argument("--N-list", dest="n_list", default="1,2,3,4,5")
    ap.add_argument("--out-dir", default="bench")
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    patterns = load_patterns(args.patterns) if args.patterns else italian_patterns()
    lang1, lang0 = PRESETS[args.preset]
    data = generate_synthetic(lang1, lang0, args.n, args.seed)
    train_c, val_c, test_c = split(data, SplitSpec(0.72, 0.08, args.seed))
    print(f"{args.preset}: train {len(train_c)}, val {len(val_c)}, test {len(test_c)}")

    reports, models = {}, {}
    for mode in ("phonetic", "chars"):
        featurizer = Featurizer(mode, patterns if mode == "phonetic" else None)
        hyper = Hyperparams(vocab_size=featurizer.vocab_size, seed=args.seed)
        t0 = time.perf_counter()
        params, history = train(train_c, val_c, featurizer, hyper, TrainConfig(max_epochs=args.max_epochs, seed=args.seed))
        model = SavedModel(params, hyper, mode, featurizer.pattern_checksum(), dict(data.language_names))
        reports[TITLES[mode]] = evaluate(model, test_c, featurizer, out / f"roc.{mode}.tsv")
        models[mode] = (model, featurizer)
        print(f"{mode}: best epoch {history.best_epoch} of {history.epochs_run}, {time.perf_counter() - t0:.1f}s")

    table = comparison_table(reports)
    (out / "comparison.txt").write_text(table, encoding="utf-8")
    print(table)

    model, featurizer = models["phonetic"]
    Ns = [int(x) for x in args.n_list.split(",")]
    report = sweep(model, test_c, featurizer, Ns, seed=args.seed)
    (out / "sweep.tsv").write_text(report.to_tsv(), encoding="utf-8")
    print(report.format_blocks())


if __name__ == "__main__":
    main()
