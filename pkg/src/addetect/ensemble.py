"""Majority voting, system fusion, and accuracy summaries over seeds.

Votes are permutation-invariant by construction: probabilities are summed
in sorted order, so reordering constituents can never flip a tie.  An even
vote falls back to the mean probability, with AD chosen on an exact 0.5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Protocol, Sequence

from .corpus import Label
from .errors import CoverageError


class FusionScheme(Enum):
    LAST_EPOCHS = "last-epochs"
    CROSS_POSITION = "cross-position"
    CROSS_MODEL = "cross-model"
    COMBINED = "combined"


class Prediction(Protocol):
    sample_id: str
    p_ad: float
    pred: str


@dataclass(frozen=True)
class VotedPrediction:
    sample_id: str
    p_ad: float
    pred: str


@dataclass(frozen=True)
class VoteGroup:
    items: tuple
    scheme: FusionScheme = FusionScheme.LAST_EPOCHS


@dataclass(frozen=True)
class MetricsSummary:
    mean_acc: float
    std_acc: float
    max_acc: float
    n_runs: int


def vote(group: VoteGroup) -> VotedPrediction:
    """Majority label over the group; ties resolve to AD iff mean p_ad >= 0.5."""
    if not group.items:
        raise CoverageError("cannot vote over an empty group")
    sample_ids = {item.sample_id for item in group.items}
    if len(sample_ids) != 1:
        raise CoverageError(f"vote group mixes sample ids: {sorted(sample_ids)}")
    n = len(group.items)
    fused_p = math.fsum(sorted(item.p_ad for item in group.items)) / n
    ad_votes = sum(1 for item in group.items if item.pred == Label.AD.value)
    if ad_votes * 2 > n:
        label = Label.AD
    elif ad_votes * 2 < n:
        label = Label.NON_AD
    else:
        label = Label.AD if fused_p >= 0.5 else Label.NON_AD
    return VotedPrediction(sample_id=next(iter(sample_ids)), p_ad=fused_p, pred=label.value)


def fuse_systems(
    systems: Sequence[Mapping[str, VotedPrediction]],
    scheme: FusionScheme,
) -> dict[str, VotedPrediction]:
    """Per-sample vote across systems' voted outputs; all systems must cover the same samples."""
    if not systems:
        raise CoverageError("no systems to fuse")
    reference = set(systems[0])
    for index, system in enumerate(systems[1:], start=1):
        diff = reference.symmetric_difference(system)
        if diff:
            raise CoverageError(f"system {index} coverage mismatch on samples: {sorted(diff)}")
    fused = {}
    for sample_id in sorted(reference):
        fused[sample_id] = vote(VoteGroup(tuple(system[sample_id] for system in systems), scheme))
    return fused


def accuracy(labels: Mapping[str, str], gold: Mapping[str, Label]) -> float:
    """Fraction of gold samples predicted correctly, as a percentage."""
    missing = sorted(set(gold) - set(labels))
    if missing:
        raise CoverageError(f"missing predictions for samples: {', '.join(missing)}")
    correct = sum(1 for sample_id, label in gold.items() if labels[sample_id] == label.value)
    return 100.0 * correct / len(gold)


def summarize(accuracies: Sequence[float]) -> MetricsSummary:
    """Mean, sample standard deviation (n-1), and maximum of per-run accuracies."""
    if not accuracies:
        raise CoverageError("cannot summarize an empty accuracy list")
    values = sorted(float(a) for a in accuracies)
    n = len(values)
    mean = math.fsum(values) / n
    if n > 1:
        std = math.sqrt(math.fsum(sorted((v - mean) ** 2 for v in values)) / (n - 1))
    else:
        std = 0.0
    return MetricsSummary(mean_acc=mean, std_acc=std, max_acc=values[-1], n_runs=n)
