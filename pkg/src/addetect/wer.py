"""Word error rate against manual references, with per-group aggregation.

Both sides are normalized the same way before scoring: lowercased, all
punctuation deleted (apostrophes and hyphens included unless explicitly
kept), whitespace-tokenized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .corpus import Label, Sample, Split
from .errors import CoverageError
from .textnorm import clean_words

GROUPS = ("All", "Healthy", "Alzheimer", "TrainingSet", "TestSet")


@dataclass(frozen=True)
class WerResult:
    substitutions: int
    deletions: int
    insertions: int
    reference_length: int

    @property
    def errors(self) -> int:
        return self.substitutions + self.deletions + self.insertions

    @property
    def wer(self) -> float:
        return self.errors / self.reference_length


@dataclass(frozen=True)
class GroupWerReport:
    mean_wer_pct: dict[str, float]
    counts: dict[str, int]
    per_sample: dict[str, float]


def normalize_for_wer(text: str, keep_intraword_punct: bool = False) -> list[str]:
    """Lowercase, strip punctuation, whitespace-tokenize.

    `keep_intraword_punct` preserves apostrophes and hyphens ("it's"
    stays one token instead of becoming "its").
    """
    return clean_words(text, keep="'-" if keep_intraword_punct else "")


def wer(reference: Sequence[str], hypothesis: Sequence[str]) -> WerResult:
    """Minimal word-level edit distance with unit costs.

    Counts come from one optimal alignment; ties during backtracking
    prefer substitution over deletion over insertion, so the
    decomposition is deterministic.  An empty reference is an error (the
    rate is undefined).
    """
    if not reference:
        raise ValueError("WER is undefined for an empty reference")
    n, m = len(reference), len(hypothesis)
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        dp[i][0] = i
    for j in range(m + 1):
        dp[0][j] = j
    for i in range(1, n + 1):
        ref_word = reference[i - 1]
        row = dp[i]
        above = dp[i - 1]
        for j in range(1, m + 1):
            if ref_word == hypothesis[j - 1]:
                row[j] = above[j - 1]
            else:
                row[j] = 1 + min(above[j - 1], above[j], row[j - 1])

    subs = dels = ins = 0
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0 and reference[i - 1] == hypothesis[j - 1] and dp[i][j] == dp[i - 1][j - 1]:
            i -= 1
            j -= 1
        elif i > 0 and j > 0 and dp[i][j] == dp[i - 1][j - 1] + 1:
            subs += 1
            i -= 1
            j -= 1
        elif i > 0 and dp[i][j] == dp[i - 1][j] + 1:
            dels += 1
            i -= 1
        else:
            ins += 1
            j -= 1
    return WerResult(substitutions=subs, deletions=dels, insertions=ins, reference_length=n)


def _sample_groups(sample: Sample) -> tuple[str, str, str]:
    label_group = "Alzheimer" if sample.label is Label.AD else "Healthy"
    split_group = "TrainingSet" if sample.split is Split.TRAIN else "TestSet"
    return ("All", label_group, split_group)


def group_wer(
    samples: Sequence[Sample],
    references: Mapping[str, Sequence[str]],
    hypotheses: Mapping[str, Sequence[str]],
    weighting: str = "sample",
) -> GroupWerReport:
    """Per-sample WER, then per-group means as percentages.

    `weighting="sample"` is the unweighted mean of per-sample rates;
    `weighting="token"` pools edit and reference counts across the group.
    Every sample needs both a reference and a hypothesis.
    """
    if weighting not in ("sample", "token"):
        raise ValueError(f"unknown weighting {weighting!r}")
    missing = sorted(s.sample_id for s in samples if s.sample_id not in hypotheses)
    if missing:
        raise CoverageError(f"missing hypotheses for samples: {', '.join(missing)}")
    missing = sorted(s.sample_id for s in samples if s.sample_id not in references)
    if missing:
        raise CoverageError(f"missing references for samples: {', '.join(missing)}")

    per_sample: dict[str, float] = {}
    group_rates: dict[str, list[float]] = {g: [] for g in GROUPS}
    group_errors: dict[str, int] = {g: 0 for g in GROUPS}
    group_ref_len: dict[str, int] = {g: 0 for g in GROUPS}
    for sample in samples:
        result = wer(list(references[sample.sample_id]), list(hypotheses[sample.sample_id]))
        per_sample[sample.sample_id] = result.wer
        for group in _sample_groups(sample):
            group_rates[group].append(result.wer)
            group_errors[group] += result.errors
            group_ref_len[group] += result.reference_length

    means: dict[str, float] = {}
    counts: dict[str, int] = {}
    for group in GROUPS:
        rates = group_rates[group]
        counts[group] = len(rates)
        if not rates:
            means[group] = math.nan
        elif weighting == "sample":
            means[group] = 100.0 * math.fsum(sorted(rates)) / len(rates)
        else:
            means[group] = 100.0 * group_errors[group] / group_ref_len[group]
    return GroupWerReport(mean_wer_pct=means, counts=counts, per_sample=per_sample)
