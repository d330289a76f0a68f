"""CHAT (.cha) transcript parsing and speech-faithful normalization.

A CHAT file interleaves metadata tiers (``@...``), dependency tiers
(``%...``) and speaker tiers (``*PAR:``, ``*INV:``).  Only the speaker
tiers carry spoken content.  Normalization strips transcription
annotations so the surviving token stream is what the speaker actually
produced:

* behavioural noise codes such as ``&=laughs`` are deleted outright;
* the annotation symbols ``&``, ``@``, ``(.)``, ``(..)``, ``(...)``,
  ``<``, ``>``, ``/`` and the unintelligible-speech marker ``xxx`` are
  deleted (words enclosed in angle brackets are kept);
* ``word [x n]`` repetition codes expand to n copies of the word;
* any other bracketed code is dropped and counted per file;
* remaining punctuation is stripped and the tokens lowercased.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import ChatParseError, NormalizationError
from .textnorm import clean_word

log = logging.getLogger(__name__)


class Speaker(Enum):
    PARTICIPANT = "participant"
    INTERVIEWER = "interviewer"


class SpeakerFilter(Enum):
    PARTICIPANT_ONLY = "par"
    PARTICIPANT_AND_INTERVIEWER = "all"

    @property
    def speakers(self) -> frozenset[Speaker]:
        if self is SpeakerFilter.PARTICIPANT_ONLY:
            return frozenset({Speaker.PARTICIPANT})
        return frozenset({Speaker.PARTICIPANT, Speaker.INTERVIEWER})


DEFAULT_SPEAKER_ROLES = {"PAR": Speaker.PARTICIPANT, "INV": Speaker.INTERVIEWER}


@dataclass(frozen=True)
class Utterance:
    speaker: Speaker
    raw_text: str
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class TranscriptDoc:
    sample_id: str
    utterances: tuple[Utterance, ...]
    unknown_code_count: int = 0


@dataclass(frozen=True)
class NormalizedTranscript:
    sample_id: str
    words: tuple[str, ...]
    speaker_filter: SpeakerFilter

    def text(self) -> str:
        return " ".join(self.words)


# media timestamps: NAK-delimited bullets or bare 4520_7840 spans
_TIMESTAMP = re.compile(r"\x15[^\x15]*\x15|(?<!\S)\d+_\d+(?!\S)")
_NOISE = re.compile(r"&=\S+")
_PAREN_PAUSE = re.compile(r"\(\.{1,3}\)")
_SYMBOLS = str.maketrans("", "", "&@<>/")
_XXX = re.compile(r"\bxxx\b", re.IGNORECASE)
# bracketed spans as single units, otherwise maximal non-space runs
_UNIT = re.compile(r"\[[^\]]*\]|\S+")
_REPEAT_CODE = re.compile(r"^\[\s*x\s+([^\]]*?)\s*\]$", re.IGNORECASE)
_TIER = re.compile(r"^\*([^:\s*]+):(.*)$")


def normalize_tokens(raw_text: str) -> list[str]:
    """Normalize one utterance's tier content to a clean token list."""
    tokens, _ = normalize_tokens_with_stats(raw_text)
    return tokens


def normalize_tokens_with_stats(raw_text: str) -> tuple[list[str], int]:
    """Like normalize_tokens, also returning the number of dropped bracketed codes."""
    text = _TIMESTAMP.sub(" ", raw_text)
    text = _NOISE.sub(" ", text)
    text = _PAREN_PAUSE.sub(" ", text)
    text = text.translate(_SYMBOLS)
    text = _XXX.sub(" ", text)

    staged: list[str] = []
    dropped = 0
    prev_word: str | None = None
    for unit in _UNIT.findall(text):
        if unit.startswith("[") and unit.endswith("]"):
            repeat = _REPEAT_CODE.match(unit)
            if repeat is not None:
                count = _parse_repeat_count(repeat.group(1), unit)
                if prev_word is not None:
                    staged.extend([prev_word] * (count - 1))
                else:
                    dropped += 1
            elif unit.strip("[] \t"):
                dropped += 1
            # husks like "[]" left by symbol removal are ignored silently
            prev_word = None
        else:
            staged.append(unit)
            prev_word = unit

    words = []
    for token in staged:
        word = clean_word(token)
        if word and word != "xxx":
            words.append(word)
    return words, dropped


def _parse_repeat_count(content: str, fragment: str) -> int:
    try:
        count = int(content)
    except ValueError:
        raise NormalizationError(f"non-integer repetition count in {fragment!r}") from None
    if count <= 0:
        raise NormalizationError(f"non-positive repetition count in {fragment!r}")
    return count


def parse_chat(
    raw_file: str,
    sample_id: str = "",
    roles: dict[str, Speaker] | None = None,
) -> TranscriptDoc:
    """Parse CHAT text into one Utterance per speaker tier.

    Metadata (``@``) and dependency (``%``) tiers are skipped; tab- or
    space-indented lines continue the preceding tier.  Raises
    ChatParseError naming the line for malformed markers or speaker codes
    outside `roles` (default PAR/INV).
    """
    if roles is None:
        roles = DEFAULT_SPEAKER_ROLES
    entries: list[tuple[Speaker, list[str]]] = []
    in_speaker_tier = False
    for lineno, line in enumerate(raw_file.lstrip("﻿").splitlines(), start=1):
        if not line.strip():
            in_speaker_tier = False
            continue
        first = line[0]
        if first in "@%":
            in_speaker_tier = False
            continue
        if first == "*":
            tier = _TIER.match(line)
            if tier is None:
                raise ChatParseError(f"line {lineno}: malformed speaker marker {line!r}")
            code = tier.group(1)
            if code not in roles:
                raise ChatParseError(f"line {lineno}: unknown speaker code {code!r}")
            entries.append((roles[code], [tier.group(2).strip()]))
            in_speaker_tier = True
            continue
        if first in " \t":
            if in_speaker_tier and entries:
                entries[-1][1].append(line.strip())
            continue
        raise ChatParseError(f"line {lineno}: unexpected content outside any tier {line!r}")

    unknown_codes = 0
    utterances = []
    for speaker, parts in entries:
        raw_text = " ".join(part for part in parts if part)
        tokens, dropped = normalize_tokens_with_stats(raw_text)
        unknown_codes += dropped
        utterances.append(Utterance(speaker=speaker, raw_text=raw_text, tokens=tuple(tokens)))
    if unknown_codes:
        log.warning("%s: dropped %d unrecognized bracketed codes", sample_id or "<chat>", unknown_codes)
    return TranscriptDoc(sample_id=sample_id, utterances=tuple(utterances), unknown_code_count=unknown_codes)


def read_chat_file(path: str | Path, roles: dict[str, Speaker] | None = None) -> TranscriptDoc:
    """Read and parse a .cha file; undecodable bytes are replaced with a warning."""
    path = Path(path)
    data = path.read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        text = data.decode("utf-8", errors="replace")
        log.warning("%s: undecodable bytes replaced during UTF-8 decoding", path)
    return parse_chat(text, sample_id=path.stem, roles=roles)


def extract_transcript(doc: TranscriptDoc, speaker_filter: SpeakerFilter) -> NormalizedTranscript:
    """Concatenate normalized tokens of the utterances matching `speaker_filter`."""
    wanted = speaker_filter.speakers
    words: list[str] = []
    for utterance in doc.utterances:
        if utterance.speaker in wanted:
            words.extend(utterance.tokens)
    return NormalizedTranscript(sample_id=doc.sample_id, words=tuple(words), speaker_filter=speaker_filter)
