"""Dataset manifest, labels, splits, and stratified cross-validation folds."""

from __future__ import annotations

import csv
import json
import logging
import random
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Sequence

from .errors import FoldError, ManifestError

log = logging.getLogger(__name__)

MANIFEST_COLUMNS = ("sample_id", "label", "split", "transcript_path", "alignment_path", "asr_path")


class Label(Enum):
    AD = "AD"
    NON_AD = "NonAD"


class Split(Enum):
    TRAIN = "train"
    TEST = "test"


_LABELS = {label.value.lower(): label for label in Label}
_SPLITS = {split.value: split for split in Split}


@dataclass(frozen=True)
class Sample:
    sample_id: str
    label: Label
    split: Split
    transcript_path: Path
    alignment_path: Path | None = None
    asr_path: Path | None = None


def load_manifest(path: str | Path) -> list[Sample]:
    """Load and validate the manifest CSV; paths resolve relative to the file."""
    path = Path(path)
    base = path.parent
    with path.open(newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        header = tuple(reader.fieldnames or ())
        if set(MANIFEST_COLUMNS) - set(header):
            raise ManifestError(
                f"{path}: manifest header must include {', '.join(MANIFEST_COLUMNS)}; got {', '.join(header)}"
            )
        rows = list(reader)

    problems: list[str] = []
    seen: set[str] = set()
    samples: list[Sample] = []
    for lineno, row in enumerate(rows, start=2):
        sample_id = (row.get("sample_id") or "").strip()
        if not sample_id:
            problems.append(f"row {lineno}: empty sample_id")
            continue
        if sample_id in seen:
            problems.append(f"row {lineno}: duplicate sample_id {sample_id!r}")
            continue
        seen.add(sample_id)
        label = _LABELS.get((row.get("label") or "").strip().lower())
        if label is None:
            problems.append(f"row {lineno}: unknown label {row.get('label')!r}")
            continue
        split = _SPLITS.get((row.get("split") or "").strip().lower())
        if split is None:
            problems.append(f"row {lineno}: unknown split {row.get('split')!r}")
            continue
        transcript = (row.get("transcript_path") or "").strip()
        if not transcript:
            problems.append(f"row {lineno}: missing transcript_path")
            continue
        samples.append(
            Sample(
                sample_id=sample_id,
                label=label,
                split=split,
                transcript_path=_resolve(base, transcript),
                alignment_path=_resolve_optional(base, row.get("alignment_path")),
                asr_path=_resolve_optional(base, row.get("asr_path")),
            )
        )
    if problems:
        raise ManifestError(f"{path}: " + "; ".join(problems))
    n_train = sum(1 for s in samples if s.split is Split.TRAIN)
    log.info("%s: %d samples (%d train, %d test)", path, len(samples), n_train, len(samples) - n_train)
    return samples


def _resolve(base: Path, value: str) -> Path:
    p = Path(value)
    return p if p.is_absolute() else base / p


def _resolve_optional(base: Path, value: str | None) -> Path | None:
    value = (value or "").strip()
    return _resolve(base, value) if value else None


@dataclass(frozen=True)
class FoldAssignment:
    k: int
    seed: int
    assignment: dict[str, int]

    def fold_of(self, sample_id: str) -> int:
        return self.assignment[sample_id]

    def to_json(self) -> str:
        payload = {"k": self.k, "seed": self.seed, "assignment": dict(sorted(self.assignment.items()))}
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "FoldAssignment":
        payload = json.loads(text)
        return cls(k=int(payload["k"]), seed=int(payload["seed"]), assignment=dict(payload["assignment"]))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "FoldAssignment":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def make_folds(samples: Sequence[Sample], k: int, seed: int) -> FoldAssignment:
    """Deterministic label-stratified k-fold assignment over training samples.

    Each class is shuffled with the seeded RNG and dealt round-robin; the
    dealing offset advances between classes so overall fold sizes differ
    by at most one, as do per-fold class counts.
    """
    if k < 2:
        raise FoldError(f"need at least 2 folds, got {k}")
    if k > len(samples):
        raise FoldError(f"cannot split {len(samples)} samples into {k} folds")
    non_train = sorted(s.sample_id for s in samples if s.split is not Split.TRAIN)
    if non_train:
        raise FoldError(f"folds cover the training split only; got non-train samples: {', '.join(non_train)}")

    rng = random.Random(seed)
    by_label: dict[Label, list[str]] = {}
    for sample in samples:
        by_label.setdefault(sample.label, []).append(sample.sample_id)

    assignment: dict[str, int] = {}
    offset = 0
    for label in sorted(by_label, key=lambda l: l.value):
        ids = sorted(by_label[label])
        rng.shuffle(ids)
        for i, sample_id in enumerate(ids):
            assignment[sample_id] = (offset + i) % k
        offset = (offset + len(ids)) % k
    return FoldAssignment(k=k, seed=seed, assignment=dict(sorted(assignment.items())))
