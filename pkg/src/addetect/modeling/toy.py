"""Deterministic bag-of-tokens encoder for desk-scale experiments.

Linear scorers over token counts stand in for a transformer encoder: the
masked-word head and the sequence-classification head are independent
weight matrices trained with AdamW.  Gradients arrive from the loss layer
as d(loss)/d(scores) and are pushed into the parameters analytically, so
every run is bit-reproducible from (vocabulary texts, seed).
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from ..errors import BackendError
from .inputs import ModelInput

CLS_TOKEN = "[CLS]"
SEP_TOKEN = "[SEP]"
MASK_TOKEN = "[MASK]"
UNK_TOKEN = "[UNK]"
_SPECIALS = (CLS_TOKEN, SEP_TOKEN, MASK_TOKEN, UNK_TOKEN)


class AdamW:
    """Adam with decoupled weight decay over a dict of named parameters."""

    def __init__(
        self,
        params: dict[str, np.ndarray],
        lr: float,
        weight_decay: float = 0.0,
        betas: tuple[float, float] = (0.9, 0.999),
        eps: float = 1e-8,
    ):
        self.params = params
        self.lr = lr
        self.weight_decay = weight_decay
        self.beta1, self.beta2 = betas
        self.eps = eps
        self.t = 0
        self._m = {k: np.zeros_like(v) for k, v in params.items()}
        self._v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, grads: Mapping[str, np.ndarray]) -> None:
        self.t += 1
        bc1 = 1.0 - self.beta1**self.t
        bc2 = 1.0 - self.beta2**self.t
        for name, p in self.params.items():
            g = grads[name]
            m = self._m[name]
            v = self._v[name]
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            update = (m / bc1) / (np.sqrt(v / bc2) + self.eps)
            p -= self.lr * update
            if self.weight_decay:
                p -= self.lr * self.weight_decay * p


class BagOfTokensBackend:
    """Trainable whitespace-tokenizing backend with linear MLM/CLS heads."""

    def __init__(self, vocab_texts: Iterable[str], seed: int = 0, init_scale: float = 0.01, name: str = "toy"):
        self.name = name
        words = sorted({w for text in vocab_texts for w in text.lower().split()})
        self._vocab = list(_SPECIALS) + [w for w in words if w not in _SPECIALS]
        self._ids = {w: i for i, w in enumerate(self._vocab)}
        v = len(self._vocab)
        rng = np.random.default_rng(seed)
        self._params = {
            "w_mlm": rng.normal(0.0, init_scale, (v, v)),
            "b_mlm": np.zeros(v),
            "w_cls": rng.normal(0.0, init_scale, (2, v)),
            "b_cls": np.zeros(2),
        }
        self._grads = {k: np.zeros_like(p) for k, p in self._params.items()}
        self._optimizer: AdamW | None = None

    # -- vocabulary ----------------------------------------------------
    @property
    def vocab_size(self) -> int:
        return len(self._vocab)

    @property
    def cls_id(self) -> int:
        return self._ids[CLS_TOKEN]

    @property
    def sep_id(self) -> int:
        return self._ids[SEP_TOKEN]

    @property
    def mask_id(self) -> int:
        return self._ids[MASK_TOKEN]

    @property
    def unk_id(self) -> int:
        return self._ids[UNK_TOKEN]

    def tokenize(self, text: str) -> list[int]:
        return [self._ids.get(w, self.unk_id) for w in text.lower().split()]

    def tokenize_words(self, words: Sequence[str]) -> list[list[int]]:
        return [[self._ids.get(w.lower(), self.unk_id)] for w in words]

    # -- forward -------------------------------------------------------
    def _counts(self, inp: ModelInput) -> np.ndarray:
        return np.bincount(np.asarray(inp.token_ids), minlength=self.vocab_size).astype(float)

    def mlm_logits(self, inp: ModelInput) -> np.ndarray:
        scores = self._params["w_mlm"] @ self._counts(inp) + self._params["b_mlm"]
        return np.broadcast_to(scores, (len(inp), self.vocab_size))

    def cls_logits(self, inp: ModelInput) -> np.ndarray:
        return self._params["w_cls"] @ self._counts(inp) + self._params["b_cls"]

    # -- training ------------------------------------------------------
    def configure_optimizer(self, lr: float, weight_decay: float) -> None:
        self._optimizer = AdamW(self._params, lr=lr, weight_decay=weight_decay)

    def backward_mlm(self, inp: ModelInput, position: int, grad_by_id: Mapping[int, float]) -> None:
        counts = self._counts(inp)
        for token_id, g in grad_by_id.items():
            self._grads["w_mlm"][token_id] += g * counts
            self._grads["b_mlm"][token_id] += g

    def backward_cls(self, inp: ModelInput, grad: np.ndarray) -> None:
        counts = self._counts(inp)
        self._grads["w_cls"] += np.outer(grad, counts)
        self._grads["b_cls"] += grad

    def step(self) -> None:
        if self._optimizer is None:
            raise BackendError("optimizer not configured; call configure_optimizer first")
        self._optimizer.step(self._grads)
        for g in self._grads.values():
            g.fill(0.0)

    def parameter_count(self) -> int:
        return sum(p.size for p in self._params.values())
