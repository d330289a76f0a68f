"""Experiment sweep: cross-product scheduling, resumable record files, reports.

Every run is identified by a stable hash of (paradigm, backend, position,
seed, fold, variant) and writes records/<variant>/<run_id>.jsonl; reruns
skip any run whose file already exists, so an interrupted sweep resumes
without duplicating work and a completed sweep is a no-op.
"""

from __future__ import annotations

import hashlib
import logging
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .configio import load_key_values, split_list
from .corpus import FoldAssignment, Label, Split, load_manifest, make_folds
from .ensemble import FusionScheme
from .errors import ConfigError
from .evaluate import evaluate_records
from .modeling.inputs import MASK_PLACEHOLDER, Paradigm, PromptPosition, PromptSpec, DEFAULT_TEMPLATE
from .modeling.pretrained import PretrainedBackend
from .modeling.toy import BagOfTokensBackend
from .modeling.train import LabeledDoc, TrainConfig, default_batch_size, train_run
from .prepare import VARIANTS, prepare_variant_dir, required_paths
from .records import load_record_glob, write_records_jsonl
from .reporting import Report, VariantCell, render_report

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepSpec:
    paradigms: tuple[Paradigm, ...]
    backends: tuple[str, ...]
    positions: tuple[PromptPosition, ...]
    seeds: tuple[int, ...]
    variants: tuple[str, ...]
    epochs: int = 20
    learning_rate: float = 1e-5
    weight_decay: float = 0.01
    max_len: int = 512
    cv_folds: int = 10
    template: str = DEFAULT_TEMPLATE
    tft_batch_size: int = 4
    pbft_batch_size: int = 1

    def __post_init__(self) -> None:
        if not self.paradigms or not self.backends or not self.seeds or not self.variants:
            raise ConfigError("sweep needs at least one paradigm, backend, seed, and variant")
        if Paradigm.PBFT in self.paradigms and not self.positions:
            raise ConfigError("PBFT sweeps need at least one prompt position")
        if len(set(self.seeds)) != len(self.seeds):
            raise ConfigError("seed list contains duplicates")
        unknown = [v for v in self.variants if v not in VARIANTS]
        if unknown:
            raise ConfigError(f"unknown variants: {', '.join(unknown)}")

    @classmethod
    def from_file(cls, path: str | Path) -> "SweepSpec":
        raw = load_key_values(path)
        try:
            return cls(
                paradigms=tuple(Paradigm(p) for p in split_list(raw.get("paradigms", "tft,pbft"))),
                backends=tuple(split_list(raw.get("backends", "toy"))),
                positions=tuple(PromptPosition(p) for p in split_list(raw.get("positions", "before,after"))),
                seeds=tuple(int(s) for s in split_list(raw.get("seeds", ",".join(str(i) for i in range(15))))),
                variants=tuple(split_list(raw.get("variants", "subjects-only"))),
                epochs=int(raw.get("epochs", "20")),
                learning_rate=float(raw.get("lr", "1e-5")),
                weight_decay=float(raw.get("weight_decay", "0.01")),
                max_len=int(raw.get("max_len", "512")),
                cv_folds=int(raw.get("cv_folds", "10")),
                template=raw.get("template", DEFAULT_TEMPLATE),
                tft_batch_size=int(raw.get("tft_batch_size", "4")),
                pbft_batch_size=int(raw.get("pbft_batch_size", "1")),
            )
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from exc


@dataclass(frozen=True)
class RunKey:
    paradigm: Paradigm
    backend: str
    position: PromptPosition | None
    seed: int
    fold: int | None
    variant: str

    @property
    def run_id(self) -> str:
        parts = (
            self.paradigm.value,
            self.backend,
            self.position.value if self.position else "-",
            str(self.seed),
            str(self.fold) if self.fold is not None else "-",
            self.variant,
        )
        return hashlib.sha1("|".join(parts).encode()).hexdigest()[:12]


@dataclass(frozen=True)
class SweepResult:
    records_dir: Path
    summary_csv: Path
    table_txt: Path
    cells: tuple[VariantCell, ...] = field(repr=False, default=())
    report: Report | None = field(repr=False, default=None)


def sweep_run_keys(spec: SweepSpec, has_test: bool) -> list[RunKey]:
    """The full cross-product of runs a sweep executes."""
    folds: list[int | None] = list(range(spec.cv_folds))
    if has_test:
        folds.append(None)
    keys = []
    for variant in spec.variants:
        for paradigm in spec.paradigms:
            positions = list(spec.positions) if paradigm is Paradigm.PBFT else [None]
            for backend in spec.backends:
                for position in positions:
                    for seed in spec.seeds:
                        for fold in folds:
                            keys.append(RunKey(paradigm, backend, position, seed, fold, variant))
    return keys


def make_backend(name: str, paradigm: Paradigm, vocab_texts: Sequence[str], seed: int):
    """Backend factory: names starting with "toy" build the deterministic
    bag-of-tokens model (the name salts its initialization); anything else
    is treated as a pre-trained checkpoint name."""
    if name.startswith("toy"):
        salt = zlib.crc32(name.encode())
        return BagOfTokensBackend(vocab_texts, seed=(seed * 1000003 + salt) & 0xFFFFFFFF, name=name)
    return PretrainedBackend(name, paradigm)


def _train_config(spec: SweepSpec, key: RunKey) -> TrainConfig:
    batch = spec.tft_batch_size if key.paradigm is Paradigm.TFT else spec.pbft_batch_size
    if batch <= 0:
        batch = default_batch_size(key.paradigm)
    return TrainConfig(
        epochs=spec.epochs,
        learning_rate=spec.learning_rate,
        weight_decay=spec.weight_decay,
        batch_size=batch,
        max_len=spec.max_len,
        seed=key.seed,
    )


def _execute_run(args: tuple) -> str:
    spec, key, texts, labels, fold_assignment, out_path = args
    samples_train = sorted(sid for sid, split in labels["split"].items() if split == Split.TRAIN.value)
    samples_test = sorted(sid for sid, split in labels["split"].items() if split == Split.TEST.value)

    def doc(sample_id: str) -> LabeledDoc:
        return LabeledDoc(sample_id=sample_id, text=texts[sample_id], label=Label(labels["label"][sample_id]))

    if key.fold is None:
        train_ids = samples_train
        eval_ids = samples_test
    else:
        train_ids = [sid for sid in samples_train if fold_assignment[sid] != key.fold]
        eval_ids = [sid for sid in samples_train if fold_assignment[sid] == key.fold]

    vocab_texts = [texts[sid] for sid in sorted(texts)]
    if key.paradigm is Paradigm.PBFT:
        prompt = PromptSpec(position=key.position, template=spec.template)
        vocab_texts = vocab_texts + [spec.template.replace(MASK_PLACEHOLDER, " "), "alzheimer healthy"]
    else:
        prompt = None
    backend = make_backend(key.backend, key.paradigm, vocab_texts, seed=key.seed)

    records = train_run(
        _train_config(spec, key),
        key.paradigm,
        backend,
        [doc(sid) for sid in train_ids],
        [doc(sid) for sid in eval_ids],
        prompt=prompt,
        run_id=key.run_id,
        fold=key.fold,
    )
    write_records_jsonl(out_path, records)
    return key.run_id


def run_sweep(
    spec: SweepSpec,
    manifest_path: str | Path,
    workdir: str | Path,
    folds_file: str | Path | None = None,
    jobs: int = 1,
    scheme: FusionScheme = FusionScheme.COMBINED,
) -> SweepResult:
    """Prepare inputs, execute all missing runs, evaluate, and render reports."""
    workdir = Path(workdir)
    samples = load_manifest(manifest_path)
    train_samples = [s for s in samples if s.split is Split.TRAIN]
    has_test = any(s.split is Split.TEST for s in samples)

    missing = []
    for variant in spec.variants:
        for sample in samples:
            missing += [str(p) for p in required_paths(sample, variant) if not p.exists()]
    if missing:
        raise ConfigError("missing input files: " + ", ".join(sorted(set(missing))))

    texts_by_variant: dict[str, dict[str, str]] = {}
    for variant in spec.variants:
        paths = prepare_variant_dir(samples, variant, workdir / "prepared" / variant)
        texts_by_variant[variant] = {
            sid: path.read_text(encoding="utf-8").strip() for sid, path in paths.items()
        }

    if folds_file is not None:
        fixed = FoldAssignment.load(folds_file)
        folds_by_seed = {seed: fixed.assignment for seed in spec.seeds}
    else:
        folds_by_seed = {
            seed: make_folds(train_samples, spec.cv_folds, seed).assignment for seed in spec.seeds
        }

    labels = {
        "label": {s.sample_id: s.label.value for s in samples},
        "split": {s.sample_id: s.split.value for s in samples},
    }
    records_dir = workdir / "records"
    pending = []
    keys = sweep_run_keys(spec, has_test)
    for key in keys:
        out_path = records_dir / key.variant / f"{key.run_id}.jsonl"
        if out_path.exists():
            continue
        pending.append((spec, key, texts_by_variant[key.variant], labels, folds_by_seed[key.seed], out_path))
    log.info("sweep: %d runs total, %d to execute", len(keys), len(pending))

    if jobs > 1 and pending:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for run_id in pool.map(_execute_run, pending):
                log.info("finished run %s", run_id)
    else:
        for args in pending:
            log.info("finished run %s", _execute_run(args))

    cells: list[VariantCell] = []
    for variant in spec.variants:
        records = load_record_glob(str(records_dir / variant / "*.jsonl"))
        for cell in evaluate_records(records, samples, scheme=scheme):
            cells.append(VariantCell(variant=variant, cell=cell))

    report = render_report(cells, list(spec.variants))
    for warning in report.warnings:
        log.warning("%s", warning)
    report_dir = workdir / "report"
    report_dir.mkdir(parents=True, exist_ok=True)
    table_txt = report_dir / "table.txt"
    summary_csv = report_dir / "summary.csv"
    table_txt.write_text(report.table, encoding="utf-8")
    summary_csv.write_text(report.csv_text, encoding="utf-8")
    return SweepResult(
        records_dir=records_dir,
        summary_csv=summary_csv,
        table_txt=table_txt,
        cells=tuple(cells),
        report=report,
    )
