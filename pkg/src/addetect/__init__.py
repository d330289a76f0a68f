"""Transcript-based Alzheimer's detection pipeline.

CHAT normalization, alignment-derived pause encoding, classifier and
prompt fine-tuning over pluggable encoder backends, WER scoring, and
seed/epoch/model majority-voting evaluation.
"""

from .chat import (
    NormalizedTranscript,
    Speaker,
    SpeakerFilter,
    TranscriptDoc,
    Utterance,
    extract_transcript,
    normalize_tokens,
    parse_chat,
    read_chat_file,
)
from .corpus import FoldAssignment, Label, Sample, Split, load_manifest, make_folds
from .ensemble import (
    FusionScheme,
    MetricsSummary,
    VoteGroup,
    VotedPrediction,
    accuracy,
    fuse_systems,
    summarize,
    vote,
)
from .pauses import (
    AlignedToken,
    PauseBin,
    PauseEncodedTranscript,
    bin_pause,
    encode_pauses,
    load_alignment,
    trim_and_merge,
)
from .records import PredictionRecord, read_records_jsonl, write_records_jsonl
from .wer import GroupWerReport, WerResult, group_wer, normalize_for_wer, wer

__version__ = "0.1.0"
