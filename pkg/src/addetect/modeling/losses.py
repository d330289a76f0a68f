"""Two-way softmax losses for the classification and masked-word heads.

Both losses reduce to a pair of logits: the two class scores for TFT, the
two label-word scores at the mask position for PBFT.  Closed forms keep
them stable: loss = softplus(-(s_gold - s_other)), p = sigmoid(delta).
"""

from __future__ import annotations

import math

import numpy as np

from ..corpus import Label
from ..errors import NumericError
from .inputs import PromptSpec, verbalize


def _softplus(x: float) -> float:
    if x > 0:
        return x + math.log1p(math.exp(-x))
    return math.log1p(math.exp(x))


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise NumericError(f"non-finite score {v!r}")


def pair_probabilities(score_ad: float, score_other: float) -> tuple[float, float]:
    """Softmax over the two scores, returned as (p_ad, p_other)."""
    _check_finite(score_ad, score_other)
    p_ad = _sigmoid(score_ad - score_other)
    p_other = _sigmoid(score_other - score_ad)
    return p_ad, p_other


def _pair_loss(score_ad: float, score_other: float, gold: Label) -> tuple[float, float, float, float]:
    """Returns (loss, p_ad, d_loss/d_score_ad, d_loss/d_score_other)."""
    _check_finite(score_ad, score_other)
    delta = score_ad - score_other
    p_ad = _sigmoid(delta)
    if gold is Label.AD:
        loss = _softplus(-delta)
        grad_ad = p_ad - 1.0
    else:
        loss = _softplus(delta)
        grad_ad = p_ad
    return loss, p_ad, grad_ad, -grad_ad


def pbft_loss(
    mask_scores: np.ndarray,
    gold: Label,
    spec: PromptSpec,
    backend,
) -> tuple[float, float]:
    """Cross entropy over the two label-word scores at the mask position."""
    loss, p_ad, _ = pbft_loss_grad(mask_scores, gold, spec, backend)
    return loss, p_ad


def pbft_loss_grad(
    mask_scores: np.ndarray,
    gold: Label,
    spec: PromptSpec,
    backend,
) -> tuple[float, float, dict[int, float]]:
    """As pbft_loss, additionally returning gradients keyed by token id."""
    ad_id = verbalize(Label.AD, backend, spec)
    other_id = verbalize(Label.NON_AD, backend, spec)
    scores = np.asarray(mask_scores, dtype=float)
    if scores.ndim != 1 or len(scores) <= max(ad_id, other_id):
        raise NumericError("mask scores do not cover both label-word ids")
    loss, p_ad, g_ad, g_other = _pair_loss(float(scores[ad_id]), float(scores[other_id]), gold)
    return loss, p_ad, {ad_id: g_ad, other_id: g_other}


def tft_loss(class_scores: np.ndarray, gold: Label) -> tuple[float, float]:
    """Softmax cross entropy over the two class scores (index 0 = AD)."""
    loss, p_ad, _ = tft_loss_grad(class_scores, gold)
    return loss, p_ad


def tft_loss_grad(class_scores: np.ndarray, gold: Label) -> tuple[float, float, np.ndarray]:
    scores = np.asarray(class_scores, dtype=float)
    if scores.shape != (2,):
        raise NumericError(f"expected 2 class scores, got shape {scores.shape}")
    loss, p_ad, g_ad, g_other = _pair_loss(float(scores[0]), float(scores[1]), gold)
    return loss, p_ad, np.array([g_ad, g_other])
