#!/usr/bin/env python3
"""Desk-scale end-to-end experiment on the synthetic corpus.

Generates 40 documents, runs PBFT with both prompt positions over 3 seeds
and 5 folds on the deterministic bag-of-tokens backend, then prints the
voted-accuracy table.  Finishes in seconds on a laptop.
"""

import argparse
import time
from pathlib import Path

from addetect.modeling.inputs import Paradigm, PromptPosition
from addetect.sweep import SweepSpec, run_sweep
from addetect.synthetic import generate_corpus


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", required=True)
    parser.add_argument("--seeds", type=int, nargs="+", default=[0, 1, 2])
    parser.add_argument("--epochs", type=int, default=20)
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()

    workdir = Path(args.workdir)
    manifest = generate_corpus(workdir / "corpus", n_per_class=20, seed=0)
    spec = SweepSpec(
        paradigms=(Paradigm.PBFT,),
        backends=("toy",),
        positions=(PromptPosition.BEFORE, PromptPosition.AFTER),
        seeds=tuple(args.seeds),
        variants=("subjects+pauses",),
        epochs=args.epochs,
        learning_rate=0.05,
        weight_decay=0.01,
        cv_folds=5,
    )
    start = time.perf_counter()
    result = run_sweep(spec, manifest, workdir / "work", jobs=args.jobs)
    elapsed = time.perf_counter() - start
    print(result.report.table, end="")
    print(f"\ncompleted in {elapsed:.1f} s")
    print(f"records: {result.records_dir}")
    print(f"summary: {result.summary_csv}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
