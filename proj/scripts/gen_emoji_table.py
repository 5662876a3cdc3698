"""Regenerate data/emoji.tsv from the `emoji` Python package.

Usage: python3 scripts/gen_emoji_table.py > data/emoji.tsv
"""
import re
import sys
import unicodedata

import emoji


def describe(name: str) -> str:
    text = unicodedata.normalize("NFKD", name.strip(":"))
    text = text.encode("ascii", "ignore").decode("ascii").lower()
    text = re.sub(r"[^a-z]+", " ", text)
    return " ".join(text.split())


def main() -> None:
    rows = {}
    for glyph, info in emoji.EMOJI_DATA.items():
        if glyph.isascii():
            continue
        desc = describe(info["en"])
        if not desc:
            continue
        key = " ".join(f"{ord(c):04X}" for c in glyph)
        rows[key] = desc
    sys.stdout.write(f"# emoji {emoji.__version__}; {len(rows)} sequences\n")
    for key in sorted(rows, key=lambda k: [int(x, 16) for x in k.split()]):
        sys.stdout.write(f"{key}\t{rows[key]}\n")


if __name__ == "__main__":
    main()
