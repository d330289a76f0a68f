#!/usr/bin/env python3
"""Generate the separable synthetic corpus (CHAT files, alignments, manifest)."""

import argparse
from pathlib import Path

from addetect.synthetic import generate_corpus


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True, help="corpus root directory")
    parser.add_argument("--per-class", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    manifest = generate_corpus(Path(args.out), n_per_class=args.per_class, seed=args.seed)
    print(f"manifest: {manifest}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
