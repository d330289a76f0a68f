"""Forced-alignment ingestion and punctuation pause encoding.

Inter-word silences from a forced aligner (token ``SIL``) are binned by
duration and written into the participant word stream as standalone
marks: "," under 0.5 s, "." from 0.5 s to 2 s inclusive, "..." above 2 s.
Interviewer tokens and boundary silences are removed first, so the marks
carry pause information only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .chat import DEFAULT_SPEAKER_ROLES, NormalizedTranscript, Speaker
from .errors import AlignmentError, AlignmentMismatchError

SILENCE_TOKEN = "SIL"


class PauseBin(enum.IntEnum):
    SHORT = 1
    MEDIUM = 2
    LONG = 3

    @property
    def mark(self) -> str:
        return _MARKS[self]


_MARKS = {PauseBin.SHORT: ",", PauseBin.MEDIUM: ".", PauseBin.LONG: "..."}
PAUSE_MARKS = frozenset(_MARKS.values())


@dataclass(frozen=True)
class AlignedToken:
    token: str
    start: float
    end: float
    speaker: Speaker

    @property
    def is_silence(self) -> bool:
        return self.token == SILENCE_TOKEN

    @property
    def duration(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class PauseEncodedTranscript:
    sample_id: str
    items: tuple[str, ...]

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(item for item in self.items if item not in PAUSE_MARKS)

    def text(self) -> str:
        return " ".join(self.items)


def load_alignment(
    text: str,
    fmt: str = "tsv",
    roles: dict[str, Speaker] | None = None,
) -> list[AlignedToken]:
    """Parse an alignment file body into a validated token list.

    TSV rows are ``token  start_sec  end_sec  speaker``; CTM rows are
    ``recording  speaker  start_sec  duration  token``.  Speaker codes
    follow the transcript convention (PAR/INV).  Raises AlignmentError
    naming the offending line for negative times, end < start, unsorted
    starts, or overlapping intervals.
    """
    if roles is None:
        roles = DEFAULT_SPEAKER_ROLES
    if fmt not in ("tsv", "ctm"):
        raise AlignmentError(f"unknown alignment format {fmt!r}")
    tokens: list[AlignedToken] = []
    prev: AlignedToken | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split()
        if fmt == "tsv":
            if len(fields) != 4:
                raise AlignmentError(f"line {lineno}: expected 4 fields, got {len(fields)}")
            word, start_s, end_s, code = fields
        else:
            if len(fields) < 5:
                raise AlignmentError(f"line {lineno}: expected at least 5 CTM fields, got {len(fields)}")
            _, code, start_s, dur_s, word = fields[:5]
        try:
            start = float(start_s)
            second = float(end_s if fmt == "tsv" else dur_s)
        except ValueError:
            raise AlignmentError(f"line {lineno}: unparseable time field") from None
        end = second if fmt == "tsv" else start + second
        if start < 0 or end < 0:
            raise AlignmentError(f"line {lineno}: negative time")
        if end < start:
            raise AlignmentError(f"line {lineno}: end {end} precedes start {start}")
        if code not in roles:
            raise AlignmentError(f"line {lineno}: unknown speaker code {code!r}")
        token = AlignedToken(token=word, start=start, end=end, speaker=roles[code])
        if prev is not None:
            if token.start < prev.start:
                raise AlignmentError(f"line {lineno}: tokens not sorted by start time")
            if token.start < prev.end:
                raise AlignmentError(f"line {lineno}: interval overlaps previous token")
        tokens.append(token)
        prev = token
    return tokens


def read_alignment_file(
    path: str | Path,
    fmt: str = "tsv",
    roles: dict[str, Speaker] | None = None,
) -> list[AlignedToken]:
    return load_alignment(Path(path).read_text(encoding="utf-8"), fmt=fmt, roles=roles)


def trim_and_merge(track: Sequence[AlignedToken]) -> list[AlignedToken]:
    """Drop interviewer tokens, merge adjacent silences, trim boundary silences.

    Adjacent silences merge into one spanning their union, so a silence
    interrupted by (removed) interviewer speech keeps its full extent.
    Zero-length silences are discarded.  The result starts and ends with
    a word; a track with no participant words raises AlignmentError.
    """
    merged: list[AlignedToken] = []
    for token in track:
        if token.speaker is not Speaker.PARTICIPANT:
            continue
        if token.is_silence and merged and merged[-1].is_silence:
            prev = merged[-1]
            merged[-1] = AlignedToken(SILENCE_TOKEN, prev.start, max(prev.end, token.end), prev.speaker)
        else:
            merged.append(token)
    merged = [t for t in merged if not (t.is_silence and t.duration <= 0)]
    while merged and merged[0].is_silence:
        merged.pop(0)
    while merged and merged[-1].is_silence:
        merged.pop()
    if not merged:
        raise AlignmentError("no speech content")
    return merged


def bin_pause(duration: float) -> PauseBin:
    """Bin a positive pause duration; 0.5 s and 2.0 s both fall in MEDIUM."""
    if duration <= 0:
        raise AlignmentError(f"non-positive pause duration {duration}")
    if duration < 0.5:
        return PauseBin.SHORT
    if duration <= 2.0:
        return PauseBin.MEDIUM
    return PauseBin.LONG


def encode_pauses(
    transcript: NormalizedTranscript,
    track: Sequence[AlignedToken],
) -> PauseEncodedTranscript:
    """Interleave pause marks from `track` into the transcript words.

    The trimmed track's word sequence must equal transcript.words
    case-insensitively; the first divergence raises
    AlignmentMismatchError with its index.
    """
    trimmed = trim_and_merge(track)
    track_words = [t.token for t in trimmed if not t.is_silence]
    expected = list(transcript.words)
    for index in range(max(len(track_words), len(expected))):
        got = track_words[index] if index < len(track_words) else None
        want = expected[index] if index < len(expected) else None
        if got is None or want is None or got.lower() != want.lower():
            raise AlignmentMismatchError(
                f"{transcript.sample_id}: alignment diverges from transcript at word {index}"
                f" (alignment={got!r}, transcript={want!r})",
                index=index,
            )

    items: list[str] = []
    cursor = 0
    for token in trimmed:
        if token.is_silence:
            items.append(bin_pause(token.duration).mark)
        else:
            items.append(expected[cursor])
            cursor += 1
    return PauseEncodedTranscript(sample_id=transcript.sample_id, items=tuple(items))
