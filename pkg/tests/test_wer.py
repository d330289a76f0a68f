import math
import random
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from addetect.corpus import Label, Sample, Split
from addetect.errors import CoverageError
from addetect.wer import group_wer, normalize_for_wer, wer


def oracle_distance(a, b):
    """Independent recursive edit distance (unit costs)."""
    a, b = tuple(a), tuple(b)

    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(
            d(i - 1, j - 1) + (a[i - 1] != b[j - 1]),
            d(i - 1, j) + 1,
            d(i, j - 1) + 1,
        )

    return d(len(a), len(b))


# --------------------------------------------------------- normalization


def test_normalize_basic():
    assert normalize_for_wer("The Boy, falls.") == ["the", "boy", "falls"]


def test_normalize_empty():
    assert normalize_for_wer("") == []


def test_normalize_apostrophe_deleted():
    assert normalize_for_wer("it's") == ["its"]


def test_normalize_keep_intraword_punct():
    assert normalize_for_wer("it's well-known", keep_intraword_punct=True) == ["it's", "well-known"]


# ------------------------------------------------------------------- wer


def test_wer_identity():
    result = wer(["the", "cat", "sat"], ["the", "cat", "sat"])
    assert result.wer == 0
    assert (result.substitutions, result.deletions, result.insertions) == (0, 0, 0)


def test_wer_single_deletion():
    result = wer(["the", "cat", "sat"], ["the", "cat"])
    assert result.deletions == 1
    assert result.wer == pytest.approx(1 / 3)


def test_wer_can_exceed_one():
    result = wer(["a"], ["b", "c"])
    assert result.substitutions == 1 and result.insertions == 1
    assert result.wer == pytest.approx(2.0)


def test_wer_empty_reference_rejected():
    with pytest.raises(ValueError):
        wer([], ["a"])


def test_wer_matches_oracle_on_random_pairs():
    rng = random.Random(0)
    alphabet = "abcde"
    for _ in range(1000):
        ref = [rng.choice(alphabet) for _ in range(rng.randint(1, 12))]
        hyp = [rng.choice(alphabet) for _ in range(rng.randint(0, 12))]
        result = wer(ref, hyp)
        assert result.errors == oracle_distance(ref, hyp)
        assert result.substitutions + result.deletions <= len(ref)


tokens_st = st.lists(st.sampled_from("abcde"), min_size=1, max_size=12)


@given(tokens_st)
def test_wer_zero_on_self(tokens):
    assert wer(tokens, tokens).wer == 0


@given(tokens_st, st.lists(st.sampled_from("abcde"), max_size=12), st.sampled_from("abcde"))
def test_wer_appending_hypothesis_word_changes_errors_by_at_most_one(ref, hyp, extra):
    before = wer(ref, hyp).errors
    after = wer(ref, hyp + [extra]).errors
    assert abs(after - before) <= 1


def test_wer_tie_break_prefers_substitution():
    # one edit, resolvable as substitution or delete+insert elsewhere
    result = wer(["a", "b"], ["a", "c"])
    assert (result.substitutions, result.deletions, result.insertions) == (1, 0, 0)


# ------------------------------------------------------------- group wer


def _sample(sample_id, label, split):
    return Sample(
        sample_id=sample_id,
        label=label,
        split=split,
        transcript_path=Path(f"{sample_id}.cha"),
    )


def test_group_wer_means():
    samples = [
        _sample("s1", Label.NON_AD, Split.TRAIN),
        _sample("s2", Label.NON_AD, Split.TRAIN),
    ]
    references = {"s1": ["a"] * 5, "s2": ["a"] * 5}
    hypotheses = {"s1": ["a", "a", "a", "a", "b"], "s2": ["a", "a", "a", "b", "b"]}
    report = group_wer(samples, references, hypotheses)
    assert report.per_sample["s1"] == pytest.approx(0.2)
    assert report.per_sample["s2"] == pytest.approx(0.4)
    assert report.mean_wer_pct["Healthy"] == pytest.approx(30.0)
    assert report.mean_wer_pct["All"] == pytest.approx(30.0)
    assert math.isnan(report.mean_wer_pct["TestSet"])
    assert report.counts == {"All": 2, "Healthy": 2, "Alzheimer": 0, "TrainingSet": 2, "TestSet": 0}


def test_group_wer_single_perfect_sample():
    samples = [_sample("s1", Label.AD, Split.TEST)]
    report = group_wer(samples, {"s1": ["x", "y"]}, {"s1": ["x", "y"]})
    for group in ("All", "Alzheimer", "TestSet"):
        assert report.mean_wer_pct[group] == 0.0


def test_group_wer_missing_hypothesis_lists_ids():
    samples = [_sample("s1", Label.AD, Split.TEST), _sample("s2", Label.AD, Split.TEST)]
    with pytest.raises(CoverageError, match="s2"):
        group_wer(samples, {"s1": ["a"], "s2": ["a"]}, {"s1": ["a"]})


def test_group_wer_all_mean_is_weighted_combination():
    rng = random.Random(1)
    samples, references, hypotheses = [], {}, {}
    for i in range(9):
        split = Split.TRAIN if i < 5 else Split.TEST
        sid = f"s{i}"
        samples.append(_sample(sid, Label.AD if i % 2 else Label.NON_AD, split))
        references[sid] = [rng.choice("abc") for _ in range(rng.randint(2, 8))]
        hypotheses[sid] = [rng.choice("abc") for _ in range(rng.randint(1, 8))]
    report = group_wer(samples, references, hypotheses)
    n_train, n_test = report.counts["TrainingSet"], report.counts["TestSet"]
    combined = (
        n_train * report.mean_wer_pct["TrainingSet"] + n_test * report.mean_wer_pct["TestSet"]
    ) / (n_train + n_test)
    assert report.mean_wer_pct["All"] == pytest.approx(combined)


def test_group_wer_token_weighting():
    samples = [_sample("s1", Label.AD, Split.TRAIN), _sample("s2", Label.AD, Split.TRAIN)]
    references = {"s1": ["a"], "s2": ["a"] * 9}
    hypotheses = {"s1": ["b"], "s2": ["a"] * 9}
    by_sample = group_wer(samples, references, hypotheses, weighting="sample")
    by_token = group_wer(samples, references, hypotheses, weighting="token")
    assert by_sample.mean_wer_pct["All"] == pytest.approx(50.0)
    assert by_token.mean_wer_pct["All"] == pytest.approx(10.0)
