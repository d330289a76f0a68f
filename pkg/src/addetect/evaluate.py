"""Aggregate prediction records into voted accuracies per system and seed.

The fusion ladder follows the experiment protocol: majority voting over a
run's last three epochs first, then (optionally) across the two prompt
positions, then across backends.  Cross-validation accuracy pools each
seed's out-of-fold predictions into one training-set accuracy; test
accuracy uses the fold-free runs.  Seed-level accuracies are then
summarized as mean / sample std / max.
"""

from __future__ import annotations

import csv
import io
from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping, Sequence

from .corpus import Sample, Split
from .ensemble import FusionScheme, MetricsSummary, VoteGroup, VotedPrediction, accuracy, fuse_systems, summarize, vote
from .errors import CoverageError
from .records import PredictionRecord

LAST_EPOCH_WINDOW = 3

SUMMARY_COLUMNS = ("system", "paradigm", "position_scheme", "backend_scheme", "split", "mean", "std", "max")

_POSITION_ORDER = ("-", "before", "after")


@dataclass(frozen=True)
class SystemCell:
    paradigm: str
    backend_scheme: str
    position_scheme: str
    split: str  # "cv" | "test"
    summary: MetricsSummary

    @property
    def system(self) -> str:
        return f"{self.paradigm}:{self.backend_scheme}:{self.position_scheme}"


RunKey = tuple[str, str, str | None, int, int | None]  # paradigm, backend, position, seed, fold


def epoch_voted(
    records: Sequence[PredictionRecord],
    last_n: int = LAST_EPOCH_WINDOW,
) -> dict[RunKey, dict[str, VotedPrediction]]:
    """Vote each run's last `last_n` epochs down to one prediction per sample."""
    by_run: dict[str, list[PredictionRecord]] = defaultdict(list)
    for record in records:
        by_run[record.run_id].append(record)
    voted: dict[RunKey, dict[str, VotedPrediction]] = {}
    for run_id in sorted(by_run):
        recs = by_run[run_id]
        first = recs[0]
        key: RunKey = (first.paradigm, first.backend, first.position, first.seed, first.fold)
        kept_epochs = set(sorted({r.epoch for r in recs})[-last_n:])
        per_sample: dict[str, list[PredictionRecord]] = defaultdict(list)
        for record in recs:
            if record.epoch in kept_epochs:
                per_sample[record.sample_id].append(record)
        out = voted.setdefault(key, {})
        for sample_id in sorted(per_sample):
            constituents = tuple(sorted(per_sample[sample_id], key=lambda r: r.epoch))
            out[sample_id] = vote(VoteGroup(constituents, FusionScheme.LAST_EPOCHS))
    return voted


def _position_label(position: str | None) -> str:
    return position if position is not None else "-"


def _scheme_selections(
    backends: list[str],
    positions: list[str | None],
    scheme: FusionScheme,
) -> list[tuple[tuple[str, list[str]], tuple[str, list[str | None]]]]:
    individual_b = [(b, [b]) for b in backends]
    individual_p = [(_position_label(p), [p]) for p in positions]
    combined_b = ("+".join(backends), backends) if len(backends) > 1 else None
    fusable = [p for p in positions if p is not None]
    combined_p = ("+".join(fusable), list(fusable)) if len(fusable) > 1 else None

    selections = []
    if scheme is FusionScheme.LAST_EPOCHS:
        selections = [(b, p) for b in individual_b for p in individual_p]
    elif scheme is FusionScheme.CROSS_POSITION:
        if combined_p is not None:
            selections = [(b, combined_p) for b in individual_b]
        else:
            selections = [(b, p) for b in individual_b for p in individual_p]
    elif scheme is FusionScheme.CROSS_MODEL:
        if combined_b is not None:
            selections = [(combined_b, p) for p in individual_p]
        else:
            selections = [(b, p) for b in individual_b for p in individual_p]
    else:  # COMBINED: the full grid
        all_b = individual_b + ([combined_b] if combined_b else [])
        all_p = individual_p + ([combined_p] if combined_p else [])
        selections = [(b, p) for b in all_b for p in all_p]
    return selections


def _fused_predictions(
    voted: Mapping[RunKey, dict[str, VotedPrediction]],
    paradigm: str,
    backend_list: list[str],
    position_list: list[str | None],
    seed: int,
    fold: int | None,
) -> dict[str, VotedPrediction]:
    per_backend = []
    for backend in backend_list:
        position_maps = []
        for position in position_list:
            key = (paradigm, backend, position, seed, fold)
            if key not in voted:
                raise CoverageError(
                    f"missing run for paradigm={paradigm} backend={backend} "
                    f"position={_position_label(position)} seed={seed} fold={fold}"
                )
            position_maps.append(voted[key])
        if len(position_maps) == 1:
            per_backend.append(position_maps[0])
        else:
            per_backend.append(fuse_systems(position_maps, FusionScheme.CROSS_POSITION))
    if len(per_backend) == 1:
        return dict(per_backend[0])
    return fuse_systems(per_backend, FusionScheme.CROSS_MODEL)


def evaluate_records(
    records: Sequence[PredictionRecord],
    samples: Sequence[Sample],
    scheme: FusionScheme = FusionScheme.COMBINED,
    last_n: int = LAST_EPOCH_WINDOW,
) -> list[SystemCell]:
    """Summaries for every system the scheme requests, for CV and test splits."""
    gold_train = {s.sample_id: s.label for s in samples if s.split is Split.TRAIN}
    gold_test = {s.sample_id: s.label for s in samples if s.split is Split.TEST}
    voted = epoch_voted(records, last_n=last_n)

    paradigms = [p for p in ("tft", "pbft") if any(k[0] == p for k in voted)]
    cells: list[SystemCell] = []
    for paradigm in paradigms:
        keys = [k for k in voted if k[0] == paradigm]
        backends = sorted({k[1] for k in keys})
        present = {k[2] for k in keys}
        positions: list[str | None] = [None] if None in present else []
        positions += [p for p in _POSITION_ORDER if p != "-" and p in present]

        for (b_label, b_list), (p_label, p_list) in _scheme_selections(backends, positions, scheme):
            for split, gold in (("cv", gold_train), ("test", gold_test)):
                want_folds = split == "cv"
                matching = [
                    k for k in keys if k[1] in b_list and k[2] in p_list and ((k[4] is not None) == want_folds)
                ]
                if not matching or not gold:
                    continue
                seeds = sorted({k[3] for k in matching})
                accuracies = []
                for seed in seeds:
                    folds = sorted({k[4] for k in matching if k[3] == seed}, key=lambda f: (f is None, f))
                    pooled: dict[str, VotedPrediction] = {}
                    for fold in folds:
                        fused = _fused_predictions(voted, paradigm, b_list, p_list, seed, fold)
                        overlap = set(pooled) & set(fused)
                        if overlap:
                            raise CoverageError(f"samples predicted by multiple folds: {sorted(overlap)}")
                        pooled.update(fused)
                    labels = {sample_id: vp.pred for sample_id, vp in pooled.items()}
                    accuracies.append(accuracy(labels, gold))
                cells.append(
                    SystemCell(
                        paradigm=paradigm,
                        backend_scheme=b_label,
                        position_scheme=p_label,
                        split=split,
                        summary=summarize(accuracies),
                    )
                )
    return cells


def cells_to_csv(cells: Sequence[SystemCell]) -> str:
    """Full-precision summary CSV (one row per system/split)."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for cell in cells:
        writer.writerow(
            [
                cell.system,
                cell.paradigm,
                cell.position_scheme,
                cell.backend_scheme,
                cell.split,
                repr(cell.summary.mean_acc),
                repr(cell.summary.std_acc),
                repr(cell.summary.max_acc),
            ]
        )
    return buffer.getvalue()


def cells_from_csv(text: str) -> list[SystemCell]:
    reader = csv.DictReader(io.StringIO(text))
    cells = []
    for row in reader:
        cells.append(
            SystemCell(
                paradigm=row["paradigm"],
                backend_scheme=row["backend_scheme"],
                position_scheme=row["position_scheme"],
                split=row["split"],
                summary=MetricsSummary(
                    mean_acc=float(row["mean"]),
                    std_acc=float(row["std"]),
                    max_acc=float(row["max"]),
                    n_runs=0,
                ),
            )
        )
    return cells
