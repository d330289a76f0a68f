import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from golden_cases import NORMALIZATION_GOLDEN

from addetect.chat import (
    Speaker,
    SpeakerFilter,
    extract_transcript,
    normalize_tokens,
    normalize_tokens_with_stats,
    parse_chat,
    read_chat_file,
)
from addetect.errors import ChatParseError, NormalizationError

FORBIDDEN_CHARS = set("&@<>/()[]")


# ---------------------------------------------------------------- parsing


def test_parse_two_speakers():
    doc = parse_chat("*PAR:\tthe boy is falling .\n*INV:\tmhm .\n")
    assert len(doc.utterances) == 2
    assert [u.speaker for u in doc.utterances] == [Speaker.PARTICIPANT, Speaker.INTERVIEWER]
    assert doc.utterances[0].raw_text == "the boy is falling ."


def test_parse_metadata_only():
    doc = parse_chat("@Begin\n@Languages:\teng\n@End\n")
    assert doc.utterances == ()


def test_parse_dependency_tier_ignored():
    doc = parse_chat("*PAR:\tthe boy .\n%mor:\tdet|the n|boy .\n*PAR:\tfalls .\n")
    assert len(doc.utterances) == 2
    assert doc.utterances[1].tokens == ("falls",)


def test_parse_continuation_lines():
    doc = parse_chat("*PAR:\tthe boy\n\tis falling .\n")
    assert doc.utterances[0].tokens == ("the", "boy", "is", "falling")


def test_parse_malformed_marker_names_line():
    with pytest.raises(ChatParseError, match="line 2"):
        parse_chat("@Begin\n*PAR the boy .\n")


def test_parse_unknown_speaker_code():
    with pytest.raises(ChatParseError, match="XYZ"):
        parse_chat("*XYZ:\thello .\n")


def test_parse_bom_and_crlf():
    doc = parse_chat("﻿@UTF8\r\n*PAR:\tokay .\r\n")
    assert doc.utterances[0].tokens == ("okay",)


def test_read_chat_file_replaces_undecodable_bytes(tmp_path):
    path = tmp_path / "bad.cha"
    path.write_bytes(b"*PAR:\tthe b\xffoy falls .\n")
    doc = read_chat_file(path)
    assert doc.sample_id == "bad"
    assert doc.utterances[0].tokens[0] == "the"


# ---------------------------------------------------------- normalization


@pytest.mark.parametrize("raw,expected", NORMALIZATION_GOLDEN)
def test_normalize_golden(raw, expected):
    assert normalize_tokens(raw) == expected


def test_normalize_repeat_error_non_integer():
    with pytest.raises(NormalizationError, match=r"\[x 2\.5\]"):
        normalize_tokens("well [x 2.5] okay")


@pytest.mark.parametrize("raw", ["no [x 0]", "no [x -1]"])
def test_normalize_repeat_error_non_positive(raw):
    with pytest.raises(NormalizationError):
        normalize_tokens(raw)


def test_unknown_codes_counted():
    tokens, dropped = normalize_tokens_with_stats("the dog [: cat] [* s:r] barks")
    assert tokens == ["the", "dog", "barks"]
    assert dropped == 2


def test_timestamp_bullets_removed():
    assert normalize_tokens("the boy \x154520_7840\x15 falls 100_200") == ["the", "boy", "falls"]


# ------------------------------------------------------------ properties

words_st = st.lists(
    st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=8).filter(lambda w: w != "xxx"),
    min_size=1,
    max_size=12,
)


@given(st.text(max_size=200))
@settings(max_examples=300)
def test_normalize_idempotent(raw):
    once = normalize_tokens(raw)
    assert normalize_tokens(" ".join(once)) == once


@given(st.text(max_size=200))
@settings(max_examples=300)
def test_normalize_no_forbidden_symbols(raw):
    for token in normalize_tokens(raw):
        assert token != "xxx"
        assert not FORBIDDEN_CHARS & set(token)
        assert token and not token.isspace()


@given(words_st, st.integers(min_value=1, max_value=6), st.data())
def test_expansion_arithmetic(words, n, data):
    index = data.draw(st.integers(min_value=0, max_value=len(words) - 1))
    plain = " ".join(words)
    expanded = " ".join(words[: index + 1]) + f" [x {n}] " + " ".join(words[index + 1 :])
    assert len(normalize_tokens(expanded)) == len(normalize_tokens(plain)) + n - 1


@given(words_st, st.data())
def test_order_preserved_under_annotations(words, data):
    annotations = st.sampled_from(["&=laughs", "(.)", "(..)", "(...)", "xxx", "[//]", "[: target]", "&-"])
    pieces = []
    for word in words:
        if data.draw(st.booleans()):
            pieces.append(data.draw(annotations))
        pieces.append(word)
    if data.draw(st.booleans()):
        pieces.append(data.draw(annotations))
    assert normalize_tokens(" ".join(pieces)) == words


# ------------------------------------------------------------ extraction


def _doc():
    return parse_chat("*PAR:\tthe boy .\n*INV:\tmhm .\n*PAR:\tfalls .\n")


def test_extract_participant_only():
    transcript = extract_transcript(_doc(), SpeakerFilter.PARTICIPANT_ONLY)
    assert transcript.words == ("the", "boy", "falls")
    assert transcript.speaker_filter is SpeakerFilter.PARTICIPANT_ONLY


def test_extract_both_speakers():
    transcript = extract_transcript(_doc(), SpeakerFilter.PARTICIPANT_AND_INTERVIEWER)
    assert transcript.words == ("the", "boy", "mhm", "falls")


def test_extract_empty_filter_result():
    doc = parse_chat("*INV:\tmhm .\n")
    assert extract_transcript(doc, SpeakerFilter.PARTICIPANT_ONLY).words == ()
