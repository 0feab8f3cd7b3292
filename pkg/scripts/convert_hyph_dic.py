"""Convert a hunspell/LibreOffice ``hyph_*.dic`` file into the plain pattern format.

The output keeps one Liang pattern per line plus ``LEFTMIN``/``RIGHTMIN``
headers. Patterns containing anything other than a-z, digits and the '.'
boundary marker (apostrophe rules, non-standard ``/`` alternatives) are
dropped: the tokenizer only ever sees normalized a-z words, so they can never
match.

    python scripts/convert_hyph_dic.py hyph_it_IT.dic src/translid/data/italian.pat
"""

import argparse
import re
import sys

PATTERN_RE = re.compile(r"[.a-z0-9]+")
SKIP_PREFIXES = ("%", "#", "COMPOUNDLEFTHYPHENMIN", "COMPOUNDRIGHTHYPHENMIN", "NOHYPHEN")


def convert(lines, left_min=2, right_min=2):
    lines = iter(lines)
    next(lines)  # charset line
    kept, dropped = [], 0
    for raw in lines:
        line = raw.strip()
        if not line or line.startswith(SKIP_PREFIXES):
            continue
        if line.startswith("LEFTHYPHENMIN"):
            left_min = int(line.split()[1])
            continue
        if line.startswith("RIGHTHYPHENMIN"):
            right_min = int(line.split()[1])
            continue
        if PATTERN_RE.fullmatch(line):
            kept.append(line)
        else:
            dropped += 1
    header = [f"LEFTMIN {left_min}", f"RIGHTMIN {right_min}"]
    return header + kept, dropped


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("dic")
    parser.add_argument("out")
    parser.add_argument("--source-note", default=None,
                        help="comment line written at the top of the output")
    args = parser.parse_args(argv)

    with open(args.dic, "rb") as fh:
        charset = fh.readline().decode("ascii").strip()
    with open(args.dic, encoding=charset) as fh:
        lines, dropped = convert(fh.read().split("\n"))

    with open(args.out, "w", encoding="utf-8") as fh:
        if args.source_note:
            fh.write(f"% {args.source_note}\n")
        fh.write("\n".join(lines) + "\n")
    print(f"wrote {len(lines) - 2} patterns, dropped {dropped}", file=sys.stderr)


if __name__ == "__main__":
    main()
