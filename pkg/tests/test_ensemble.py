import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from addetect.corpus import Label
from addetect.ensemble import (
    FusionScheme,
    VoteGroup,
    VotedPrediction,
    accuracy,
    fuse_systems,
    summarize,
    vote,
)
from addetect.errors import CoverageError
from addetect.reporting import format_pct


def vp(pred, p_ad, sample_id="s"):
    return VotedPrediction(sample_id=sample_id, p_ad=p_ad, pred=pred)


# -------------------------------------------------------------------- vote


def test_vote_strict_majority():
    group = VoteGroup((vp("AD", 0.9), vp("AD", 0.8), vp("NonAD", 0.1)))
    assert vote(group).pred == "AD"


def test_vote_tie_uses_mean_probability():
    result = vote(VoteGroup((vp("AD", 0.9), vp("NonAD", 0.4))))
    assert result.pred == "AD"
    assert result.p_ad == pytest.approx(0.65)
    assert vote(VoteGroup((vp("AD", 0.6), vp("NonAD", 0.1)))).pred == "NonAD"


def test_vote_exact_tie_prefers_ad():
    assert vote(VoteGroup((vp("AD", 0.7), vp("NonAD", 0.3)))).pred == "AD"


def test_vote_single_record_identity():
    assert vote(VoteGroup((vp("NonAD", 0.2),))).pred == "NonAD"


def test_vote_rejects_mixed_samples():
    with pytest.raises(CoverageError):
        vote(VoteGroup((vp("AD", 0.9, "a"), vp("AD", 0.9, "b"))))


def test_vote_rejects_empty():
    with pytest.raises(CoverageError):
        vote(VoteGroup(()))


votes_st = st.lists(
    st.tuples(st.sampled_from(["AD", "NonAD"]), st.floats(min_value=0.0, max_value=1.0)),
    min_size=1,
    max_size=9,
)


@given(votes_st, st.randoms(use_true_random=False))
@settings(max_examples=300)
def test_vote_permutation_invariant(items, rng):
    group = [vp(pred, p) for pred, p in items]
    shuffled = group.copy()
    rng.shuffle(shuffled)
    assert vote(VoteGroup(tuple(group))) == vote(VoteGroup(tuple(shuffled)))


@given(votes_st)
def test_vote_duplication_stable(items):
    group = tuple(vp(pred, p) for pred, p in items)
    assert vote(VoteGroup(group)).pred == vote(VoteGroup(group + group)).pred


@given(st.sampled_from(["AD", "NonAD"]), st.lists(st.floats(min_value=0.0, max_value=1.0), min_size=1, max_size=9))
def test_vote_unanimity(label, probs):
    group = tuple(vp(label, p) for p in probs)
    assert vote(VoteGroup(group)).pred == label


@given(votes_st)
def test_vote_tie_deterministic(items):
    group = tuple(vp(pred, p) for pred, p in items)
    assert vote(VoteGroup(group)) == vote(VoteGroup(group))


# ------------------------------------------------------------ fuse systems


def system(labels_probs):
    return {sid: vp(pred, p, sid) for sid, (pred, p) in labels_probs.items()}


def test_fuse_unanimous_systems():
    a = system({"s1": ("AD", 0.9), "s2": ("NonAD", 0.2)})
    b = system({"s1": ("AD", 0.8), "s2": ("NonAD", 0.3)})
    fused = fuse_systems([a, b], FusionScheme.CROSS_MODEL)
    assert {sid: f.pred for sid, f in fused.items()} == {"s1": "AD", "s2": "NonAD"}


def test_fuse_tie_rule():
    a = system({"s1": ("AD", 0.8), "s2": ("AD", 0.8)})
    b = system({"s1": ("NonAD", 0.3), "s2": ("NonAD", 0.3)})
    fused = fuse_systems([a, b], FusionScheme.CROSS_MODEL)
    assert all(f.pred == "AD" for f in fused.values())  # means 0.55


def test_fuse_three_system_majorities():
    rng = random.Random(3)
    sample_ids = [f"s{i}" for i in range(5)]
    systems = []
    for _ in range(3):
        labels = {sid: (rng.choice(["AD", "NonAD"]), rng.random()) for sid in sample_ids}
        systems.append(system(labels))
    fused = fuse_systems(systems, FusionScheme.CROSS_MODEL)
    for sid in sample_ids:
        votes = [s[sid].pred for s in systems]
        expected = "AD" if votes.count("AD") >= 2 else "NonAD"
        assert fused[sid].pred == expected


def test_fuse_coverage_mismatch():
    a = system({"s1": ("AD", 0.9)})
    b = system({"s1": ("AD", 0.9), "s2": ("AD", 0.9)})
    with pytest.raises(CoverageError, match="s2"):
        fuse_systems([a, b], FusionScheme.CROSS_MODEL)


# --------------------------------------------------------------- accuracy


def test_accuracy_all_correct():
    gold = {"a": Label.AD, "b": Label.NON_AD}
    assert accuracy({"a": "AD", "b": "NonAD"}, gold) == 100.0


def test_accuracy_none_correct():
    gold = {"a": Label.AD, "b": Label.AD}
    assert accuracy({"a": "NonAD", "b": "NonAD"}, gold) == 0.0


def test_accuracy_rounding_46_of_48():
    gold = {f"s{i}": Label.AD for i in range(48)}
    labels = {f"s{i}": ("AD" if i < 46 else "NonAD") for i in range(48)}
    value = accuracy(labels, gold)
    assert value == pytest.approx(95.8333333, abs=1e-6)
    assert format_pct(value) == "95.8"


def test_accuracy_missing_sample():
    with pytest.raises(CoverageError, match="b"):
        accuracy({"a": "AD"}, {"a": Label.AD, "b": Label.AD})


@given(st.dictionaries(st.text(min_size=1, max_size=4), st.sampled_from(list(Label)), min_size=1, max_size=20))
def test_accuracy_perfect_predictions(gold):
    labels = {sid: label.value for sid, label in gold.items()}
    assert accuracy(labels, gold) == 100.0


# -------------------------------------------------------------- summarize


def test_summarize_constant():
    summary = summarize([80.0, 80.0, 80.0])
    assert (summary.mean_acc, summary.std_acc, summary.max_acc, summary.n_runs) == (80.0, 0.0, 80.0, 3)


def test_summarize_sample_std():
    summary = summarize([70.0, 90.0])
    assert summary.mean_acc == pytest.approx(80.0)
    assert summary.std_acc == pytest.approx(14.1421356, abs=1e-6)
    assert summary.max_acc == 90.0


def test_summarize_single_value():
    summary = summarize([85.0])
    assert (summary.mean_acc, summary.std_acc, summary.max_acc) == (85.0, 0.0, 85.0)


def test_summarize_empty_rejected():
    with pytest.raises(CoverageError):
        summarize([])


@given(st.lists(st.floats(min_value=0, max_value=100), min_size=1, max_size=15), st.randoms(use_true_random=False))
def test_summarize_permutation_invariant(values, rng):
    shuffled = values.copy()
    rng.shuffle(shuffled)
    assert summarize(values) == summarize(shuffled)


# -------------------------------------------------------------- formatting


@pytest.mark.parametrize(
    "value,expected",
    [(95.8333, "95.8"), (87.85, "87.9"), (82.25, "82.3"), (80.0, "80.0"), (0.04, "0.0"), (99.96, "100.0")],
)
def test_format_pct_half_up(value, expected):
    assert format_pct(value) == expected
