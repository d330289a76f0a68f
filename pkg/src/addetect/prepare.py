"""Build per-sample model-input texts for each transcript variant."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

from .chat import SpeakerFilter, extract_transcript, read_chat_file
from .corpus import Sample
from .errors import ConfigError
from .pauses import encode_pauses, read_alignment_file
from .wer import normalize_for_wer

VARIANTS = ("subjects-only", "subjects+pauses", "subjects+interviewer", "asr")


def required_paths(sample: Sample, variant: str) -> list[Path]:
    paths = [sample.transcript_path]
    if variant == "subjects+pauses":
        if sample.alignment_path is None:
            raise ConfigError(f"{sample.sample_id}: variant {variant!r} needs an alignment_path")
        paths.append(sample.alignment_path)
    if variant == "asr":
        if sample.asr_path is None:
            raise ConfigError(f"{sample.sample_id}: variant {variant!r} needs an asr_path")
        paths.append(sample.asr_path)
    return paths


def variant_text(sample: Sample, variant: str, alignment_format: str = "tsv") -> str:
    """The space-joined token stream a model sees for this sample and variant."""
    if variant not in VARIANTS:
        raise ConfigError(f"unknown variant {variant!r}; expected one of {', '.join(VARIANTS)}")
    if variant == "asr":
        text = sample.asr_path.read_text(encoding="utf-8")
        return " ".join(normalize_for_wer(text))
    doc = read_chat_file(sample.transcript_path)
    if variant == "subjects+interviewer":
        return extract_transcript(doc, SpeakerFilter.PARTICIPANT_AND_INTERVIEWER).text()
    transcript = extract_transcript(doc, SpeakerFilter.PARTICIPANT_ONLY)
    if variant == "subjects-only":
        return transcript.text()
    track = read_alignment_file(sample.alignment_path, fmt=alignment_format)
    return encode_pauses(transcript, track).text()


def prepare_variant_dir(
    samples: Sequence[Sample],
    variant: str,
    out_dir: str | Path,
    alignment_format: str = "tsv",
) -> dict[str, Path]:
    """Materialize variant texts as <sample_id>.txt files; existing files are kept."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = {}
    for sample in sorted(samples, key=lambda s: s.sample_id):
        path = out_dir / f"{sample.sample_id}.txt"
        if not path.exists():
            path.write_text(variant_text(sample, variant, alignment_format) + "\n", encoding="utf-8")
        paths[sample.sample_id] = path
    return paths


def load_prepared_texts(samples: Sequence[Sample], prepared_dir: str | Path) -> dict[str, str]:
    texts = {}
    for sample in samples:
        path = Path(prepared_dir) / f"{sample.sample_id}.txt"
        if not path.exists():
            raise ConfigError(f"prepared text missing for sample {sample.sample_id}: {path}")
        texts[sample.sample_id] = path.read_text(encoding="utf-8").strip()
    return texts


def reference_tokens(sample: Sample, speakers: SpeakerFilter = SpeakerFilter.PARTICIPANT_AND_INTERVIEWER) -> list[str]:
    """Manual-transcript reference for WER scoring."""
    doc = read_chat_file(sample.transcript_path)
    return list(extract_transcript(doc, speakers).words)
