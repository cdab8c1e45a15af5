#!/usr/bin/env python3
"""Download the rec.motorcycles / sci.space subset of 20 Newsgroups and write
it as the TSV corpus read by `edvw classify` and the acceptance suite.

    python3 scripts/fetch_20ng.py [--out data/20ng.tsv]

Label 0 is rec.motorcycles, label 1 is sci.space. Headers, footers and quotes
are kept; tabs and newlines inside a post are collapsed to spaces.
"""

import argparse
import pathlib

from sklearn.datasets import fetch_20newsgroups

CATEGORIES = ["rec.motorcycles", "sci.space"]


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", default="data/20ng.tsv", type=pathlib.Path)
    args = parser.parse_args()

    data = fetch_20newsgroups(subset="all", categories=CATEGORIES, shuffle=False)
    names = data.target_names
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with args.out.open("w", encoding="utf-8") as f:
        for i, (text, target) in enumerate(zip(data.data, data.target)):
            label = CATEGORIES.index(names[target])
            f.write(f"doc{i:05d}\t{label}\t{' '.join(text.split())}\n")
    print(f"wrote {len(data.data)} documents to {args.out}")


if __name__ == "__main__":
    main()
