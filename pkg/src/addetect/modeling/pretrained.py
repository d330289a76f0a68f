"""Adapter exposing pre-trained masked-LM encoders through the backend interface.

Needs the optional `pretrained` extra (torch + transformers) plus locally
available checkpoints; downloads honour the ADDETECT_CHECKPOINT_CACHE
environment variable.  The adapter keeps the live autograd graph of each
forward pass so the loss layer's d(loss)/d(scores) can be pushed back
through torch, mirroring the deterministic backend's interface.
"""

from __future__ import annotations

import os
from typing import Mapping, Sequence

import numpy as np

from ..errors import BackendError
from .inputs import ModelInput, Paradigm

CHECKPOINT_CACHE_ENV = "ADDETECT_CHECKPOINT_CACHE"


class PretrainedBackend:
    def __init__(self, checkpoint: str, paradigm: Paradigm, device: str = "cpu"):
        try:
            import torch
            import transformers
        except ImportError as exc:
            raise BackendError(
                f"backend {checkpoint!r} needs the 'pretrained' extra (pip install addetect[pretrained])"
            ) from exc
        self._torch = torch
        self.name = checkpoint
        self.paradigm = paradigm
        self.device = device
        cache_dir = os.environ.get(CHECKPOINT_CACHE_ENV) or None
        try:
            self._tokenizer = transformers.AutoTokenizer.from_pretrained(checkpoint, cache_dir=cache_dir)
            if paradigm is Paradigm.PBFT:
                self._model = transformers.AutoModelForMaskedLM.from_pretrained(checkpoint, cache_dir=cache_dir)
            else:
                self._model = transformers.AutoModelForSequenceClassification.from_pretrained(
                    checkpoint, cache_dir=cache_dir, num_labels=2
                )
        except OSError as exc:
            raise BackendError(f"cannot load checkpoint {checkpoint!r}: {exc}") from exc
        self._model.to(device)
        self._model.train()
        self._optimizer = None
        self._pending: dict[int, object] = {}

    # -- vocabulary ----------------------------------------------------
    @property
    def vocab_size(self) -> int:
        return len(self._tokenizer)

    @property
    def cls_id(self) -> int | None:
        return self._tokenizer.cls_token_id

    @property
    def sep_id(self) -> int | None:
        return self._tokenizer.sep_token_id

    @property
    def mask_id(self) -> int | None:
        return self._tokenizer.mask_token_id

    @property
    def unk_id(self) -> int | None:
        return self._tokenizer.unk_token_id

    def tokenize(self, text: str) -> list[int]:
        return self._tokenizer.encode(text, add_special_tokens=False)

    def tokenize_words(self, words: Sequence[str]) -> list[list[int]]:
        # leading space keeps byte-level BPE vocabularies (RoBERTa) on their
        # mid-sentence word forms
        return [self._tokenizer.encode(" " + w, add_special_tokens=False) for w in words]

    # -- forward -------------------------------------------------------
    def _forward(self, inp: ModelInput):
        torch = self._torch
        ids = torch.tensor([list(inp.token_ids)], dtype=torch.long, device=self.device)
        return self._model(input_ids=ids).logits

    def mlm_logits(self, inp: ModelInput) -> np.ndarray:
        logits = self._forward(inp)[0]
        self._pending[id(inp)] = logits
        return logits.detach().cpu().numpy()

    def cls_logits(self, inp: ModelInput) -> np.ndarray:
        logits = self._forward(inp)[0]
        self._pending[id(inp)] = logits
        return logits.detach().cpu().numpy()

    # -- training ------------------------------------------------------
    def configure_optimizer(self, lr: float, weight_decay: float) -> None:
        self._optimizer = self._torch.optim.AdamW(self._model.parameters(), lr=lr, weight_decay=weight_decay)

    def _pop_pending(self, inp: ModelInput):
        logits = self._pending.pop(id(inp), None)
        if logits is None:
            raise BackendError("backward called without a matching forward pass")
        return logits

    def backward_mlm(self, inp: ModelInput, position: int, grad_by_id: Mapping[int, float]) -> None:
        torch = self._torch
        logits = self._pop_pending(inp)
        grad = torch.zeros_like(logits)
        for token_id, g in grad_by_id.items():
            grad[position, token_id] = g
        logits.backward(grad)

    def backward_cls(self, inp: ModelInput, grad: np.ndarray) -> None:
        torch = self._torch
        logits = self._pop_pending(inp)
        logits.backward(torch.tensor(grad, dtype=logits.dtype, device=self.device))

    def step(self) -> None:
        if self._optimizer is None:
            raise BackendError("optimizer not configured; call configure_optimizer first")
        self._optimizer.step()
        self._optimizer.zero_grad()
        self._pending.clear()

    def parameter_count(self) -> int:
        return sum(p.numel() for p in self._model.parameters())
