"""Prediction record JSONL files, one line per (run, epoch, sample)."""

from __future__ import annotations

import glob
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

RECORD_FIELDS = (
    "run_id",
    "paradigm",
    "backend",
    "position",
    "seed",
    "fold",
    "epoch",
    "sample_id",
    "p_ad",
    "pred",
)


@dataclass(frozen=True)
class PredictionRecord:
    run_id: str
    paradigm: str
    backend: str
    position: str | None
    seed: int
    fold: int | None
    epoch: int
    sample_id: str
    p_ad: float
    pred: str

    def to_json_line(self) -> str:
        payload = {field: getattr(self, field) for field in RECORD_FIELDS}
        return json.dumps(payload)

    @classmethod
    def from_dict(cls, payload: dict) -> "PredictionRecord":
        return cls(**{field: payload[field] for field in RECORD_FIELDS})


def write_records_jsonl(path: str | Path, records: Iterable[PredictionRecord]) -> None:
    """Write records atomically (temp file + rename) so partial runs never persist."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    with tmp.open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(record.to_json_line() + "\n")
    os.replace(tmp, path)


def read_records_jsonl(path: str | Path) -> list[PredictionRecord]:
    records = []
    with Path(path).open(encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                records.append(PredictionRecord.from_dict(json.loads(line)))
    return records


def load_record_glob(pattern: str) -> list[PredictionRecord]:
    records: list[PredictionRecord] = []
    for path in sorted(glob.glob(pattern, recursive=True)):
        records.extend(read_records_jsonl(path))
    return records
