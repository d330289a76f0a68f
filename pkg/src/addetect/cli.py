"""Command-line entry point orchestrating the full experiment pipeline.

Subcommands: normalize, pause-encode, wer, folds, train, evaluate,
report, sweep.  See README.md for file formats and a worked example.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from .chat import NormalizedTranscript, SpeakerFilter, extract_transcript, read_chat_file
from .configio import load_key_values
from .corpus import FoldAssignment, Split, load_manifest, make_folds
from .ensemble import FusionScheme
from .errors import ConfigError, PipelineError
from .evaluate import cells_from_csv, cells_to_csv, evaluate_records
from .modeling.inputs import DEFAULT_TEMPLATE, Paradigm, PromptPosition, PromptSpec
from .modeling.train import LabeledDoc, TrainConfig, default_batch_size, train_run
from .pauses import encode_pauses, read_alignment_file
from .prepare import load_prepared_texts, reference_tokens, variant_text
from .records import load_record_glob, write_records_jsonl
from .reporting import VariantCell, render_report
from .sweep import SweepSpec, make_backend, run_sweep
from .wer import GROUPS, group_wer, normalize_for_wer

log = logging.getLogger(__name__)


def cmd_normalize(args: argparse.Namespace) -> int:
    speakers = SpeakerFilter.PARTICIPANT_ONLY if args.speakers == "par" else SpeakerFilter.PARTICIPANT_AND_INTERVIEWER
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    count = 0
    for path in sorted(Path(args.in_dir).glob("*.cha")):
        doc = read_chat_file(path)
        transcript = extract_transcript(doc, speakers)
        (out_dir / f"{path.stem}.txt").write_text(transcript.text() + "\n", encoding="utf-8")
        count += 1
    log.info("normalized %d transcripts into %s", count, out_dir)
    return 0


def cmd_pause_encode(args: argparse.Namespace) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    count = 0
    for path in sorted(Path(args.transcripts).glob("*.txt")):
        alignment_path = Path(args.alignments) / f"{path.stem}.{'ctm' if args.format == 'ctm' else 'tsv'}"
        if not alignment_path.exists():
            raise ConfigError(f"no alignment file for {path.stem}: {alignment_path}")
        words = path.read_text(encoding="utf-8").split()
        transcript = NormalizedTranscript(
            sample_id=path.stem, words=tuple(words), speaker_filter=SpeakerFilter.PARTICIPANT_ONLY
        )
        track = read_alignment_file(alignment_path, fmt=args.format)
        encoded = encode_pauses(transcript, track)
        (out_dir / f"{path.stem}.txt").write_text(encoded.text() + "\n", encoding="utf-8")
        count += 1
    log.info("pause-encoded %d transcripts into %s", count, out_dir)
    return 0


def cmd_wer(args: argparse.Namespace) -> int:
    samples = load_manifest(args.manifest)
    speakers = SpeakerFilter.PARTICIPANT_ONLY if args.speakers == "par" else SpeakerFilter.PARTICIPANT_AND_INTERVIEWER
    references = {s.sample_id: reference_tokens(s, speakers) for s in samples}
    hypotheses = {}
    for sample in samples:
        path = Path(args.hyp_dir) / f"{sample.sample_id}.txt"
        if path.exists():
            hypotheses[sample.sample_id] = normalize_for_wer(
                path.read_text(encoding="utf-8"), keep_intraword_punct=args.keep_intraword_punct
            )
    report = group_wer(samples, references, hypotheses, weighting=args.weighting)
    with open(args.report, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["group", "n", "mean_wer_pct"])
        for group in GROUPS:
            writer.writerow([group, report.counts[group], f"{report.mean_wer_pct[group]:.2f}"])
    for group in GROUPS:
        print(f"{group:12s} n={report.counts[group]:<4d} mean WER {report.mean_wer_pct[group]:.2f}%")
    return 0


def cmd_folds(args: argparse.Namespace) -> int:
    samples = [s for s in load_manifest(args.manifest) if s.split is Split.TRAIN]
    assignment = make_folds(samples, args.k, args.seed)
    assignment.save(args.out)
    log.info("wrote %d-fold assignment for %d samples to %s", args.k, len(samples), args.out)
    return 0


def _train_config_from_file(raw: dict[str, str]) -> tuple[TrainConfig, Paradigm, PromptSpec | None, str, int | None]:
    try:
        paradigm = Paradigm(raw.get("paradigm", "tft"))
        position = PromptPosition(raw["position"]) if "position" in raw else None
        prompt = None
        if paradigm is Paradigm.PBFT:
            if position is None:
                raise ConfigError("PBFT config needs a position (before|after)")
            prompt = PromptSpec(position=position, template=raw.get("template", DEFAULT_TEMPLATE))
        config = TrainConfig(
            epochs=int(raw.get("epochs", "20")),
            learning_rate=float(raw.get("lr", "1e-5")),
            weight_decay=float(raw.get("weight_decay", "0.01")),
            batch_size=int(raw.get("batch_size", str(default_batch_size(paradigm)))),
            max_len=int(raw.get("max_len", "512")),
            seed=int(raw.get("seed", "0")),
        )
        fold = int(raw["fold"]) if "fold" in raw else None
        return config, paradigm, prompt, raw.get("backend", "toy"), fold
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad train config: {exc}") from exc


def cmd_train(args: argparse.Namespace) -> int:
    raw = load_key_values(args.config)
    config, paradigm, prompt, backend_name, fold = _train_config_from_file(raw)
    variant = raw.get("variant", "subjects-only")
    samples = load_manifest(args.manifest)
    if args.prepared:
        texts = load_prepared_texts(samples, args.prepared)
    else:
        texts = {s.sample_id: variant_text(s, variant) for s in samples}

    train_ids = sorted(s.sample_id for s in samples if s.split is Split.TRAIN)
    test_ids = sorted(s.sample_id for s in samples if s.split is Split.TEST)
    if fold is not None:
        if not args.folds:
            raise ConfigError("config sets fold=N, so --folds FILE is required")
        assignment = FoldAssignment.load(args.folds).assignment
        eval_ids = [sid for sid in train_ids if assignment[sid] == fold]
        train_ids = [sid for sid in train_ids if assignment[sid] != fold]
    else:
        eval_ids = test_ids
        if not eval_ids:
            raise ConfigError("manifest has no test samples; set fold=N to evaluate out-of-fold")

    labels = {s.sample_id: s.label for s in samples}
    vocab_texts = [texts[sid] for sid in sorted(texts)]
    if prompt is not None:
        vocab_texts += [prompt.template.replace("[MASK]", " "), "alzheimer healthy"]
    backend = make_backend(backend_name, paradigm, vocab_texts, seed=config.seed)

    docs = lambda ids: [LabeledDoc(sid, texts[sid], labels[sid]) for sid in ids]
    records = train_run(
        config,
        paradigm,
        backend,
        docs(train_ids),
        docs(eval_ids),
        prompt=prompt,
        run_id=raw.get("run_id", "manual"),
        fold=fold,
    )
    write_records_jsonl(args.out_records, records)
    log.info("wrote records to %s", args.out_records)
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    records = load_record_glob(args.records)
    if not records:
        raise ConfigError(f"no records matched {args.records!r}")
    samples = load_manifest(args.manifest)
    cells = evaluate_records(records, samples, scheme=FusionScheme(args.scheme))
    Path(args.out).write_text(cells_to_csv(cells), encoding="utf-8")
    for cell in cells:
        s = cell.summary
        print(
            f"{cell.system:40s} {cell.split:4s} mean {s.mean_acc:6.2f}  std {s.std_acc:5.2f}"
            f"  max {s.max_acc:6.2f}  (n={s.n_runs})"
        )
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    cells: list[VariantCell] = []
    variants: list[str] = []
    for spec in args.summary:
        if "=" not in spec:
            raise ConfigError(f"--summary takes VARIANT=FILE, got {spec!r}")
        variant, _, path = spec.partition("=")
        variants.append(variant)
        for cell in cells_from_csv(Path(path).read_text(encoding="utf-8")):
            cells.append(VariantCell(variant=variant, cell=cell))
    report = render_report(cells, variants)
    for warning in report.warnings:
        log.warning("%s", warning)
    Path(args.out_table).write_text(report.table, encoding="utf-8")
    Path(args.out_csv).write_text(report.csv_text, encoding="utf-8")
    print(report.table, end="")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    spec = SweepSpec.from_file(args.config)
    result = run_sweep(
        spec,
        args.manifest,
        args.workdir,
        folds_file=args.folds,
        jobs=args.jobs,
    )
    print(result.report.table, end="")
    print(f"records: {result.records_dir}")
    print(f"summary: {result.summary_csv}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="addetect", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", help="normalize .cha files to plain-text word streams")
    p.add_argument("--in", dest="in_dir", required=True, help="directory of .cha files")
    p.add_argument("--out", required=True, help="output directory for .txt files")
    p.add_argument("--speakers", choices=("par", "all"), default="par")
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("pause-encode", help="interleave pause marks from alignments")
    p.add_argument("--transcripts", required=True, help="directory of normalized .txt transcripts")
    p.add_argument("--alignments", required=True, help="directory of alignment files (same stems)")
    p.add_argument("--out", required=True)
    p.add_argument("--format", choices=("tsv", "ctm"), default="tsv")
    p.set_defaults(func=cmd_pause_encode)

    p = sub.add_parser("wer", help="score hypothesis transcripts against manual references")
    p.add_argument("--manifest", required=True)
    p.add_argument("--hyp-dir", dest="hyp_dir", required=True, help="directory of <sample_id>.txt hypotheses")
    p.add_argument("--report", required=True, help="output CSV (group, n, mean_wer_pct)")
    p.add_argument("--speakers", choices=("par", "all"), default="all", help="speakers in the reference")
    p.add_argument("--keep-intraword-punct", action="store_true", help="keep apostrophes/hyphens inside words")
    p.add_argument("--weighting", choices=("sample", "token"), default="sample")
    p.set_defaults(func=cmd_wer)

    p = sub.add_parser("folds", help="write a stratified cross-validation fold assignment")
    p.add_argument("--manifest", required=True)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_folds)

    p = sub.add_parser("train", help="run one fine-tuning configuration")
    p.add_argument("--config", required=True, help="key=value run config")
    p.add_argument("--manifest", required=True)
    p.add_argument("--folds", help="fold assignment JSON (required when config sets fold=N)")
    p.add_argument("--out-records", dest="out_records", required=True)
    p.add_argument("--prepared", help="directory of prepared <sample_id>.txt inputs")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="aggregate prediction records into accuracy summaries")
    p.add_argument("--records", required=True, help="glob of record JSONL files")
    p.add_argument("--manifest", required=True)
    p.add_argument("--scheme", choices=[s.value for s in FusionScheme], default="combined")
    p.add_argument("--out", required=True, help="summary CSV path")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="render evaluate summaries as a table with a CSV twin")
    p.add_argument("--summary", action="append", required=True, metavar="VARIANT=FILE")
    p.add_argument("--out-table", dest="out_table", required=True)
    p.add_argument("--out-csv", dest="out_csv", required=True)
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("sweep", help="run the full experiment cross-product and report")
    p.add_argument("--config", required=True, help="key=value sweep config")
    p.add_argument("--manifest", required=True)
    p.add_argument("--workdir", required=True)
    p.add_argument("--folds", help="fixed fold assignment JSON (default: per-seed folds)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
