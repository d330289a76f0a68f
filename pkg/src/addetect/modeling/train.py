"""Single-run training loop emitting per-epoch prediction records.

A run is fully deterministic given (config, seed, backend initial state,
data): the epoch shuffles come from one seeded RNG, batches are processed
in order, and one optimizer step is applied per batch.  After every epoch
each evaluation sample yields one PredictionRecord.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from typing import Iterator, Sequence

from ..corpus import Label
from ..errors import ConfigError, NumericError, TrainingDivergedError
from ..records import PredictionRecord
from .inputs import ModelInput, Paradigm, PromptSpec, build_input_pbft, build_input_tft
from .losses import pbft_loss_grad, tft_loss_grad


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 20
    learning_rate: float = 1e-5
    weight_decay: float = 0.01
    batch_size: int = 4
    max_len: int = 512
    seed: int = 0

    def __post_init__(self) -> None:
        if self.epochs < 0 or self.learning_rate <= 0 or self.batch_size <= 0 or self.max_len <= 2:
            raise ConfigError(f"invalid training configuration: {self}")


def default_batch_size(paradigm: Paradigm) -> int:
    return 4 if paradigm is Paradigm.TFT else 1


def default_config(paradigm: Paradigm, **overrides) -> TrainConfig:
    config = TrainConfig(batch_size=default_batch_size(paradigm))
    return replace(config, **overrides) if overrides else config


@dataclass(frozen=True)
class LabeledDoc:
    sample_id: str
    text: str
    label: Label


def _chunks(items: list[int], size: int) -> Iterator[list[int]]:
    for i in range(0, len(items), size):
        yield items[i : i + size]


def train_run(
    config: TrainConfig,
    paradigm: Paradigm,
    backend,
    train_docs: Sequence[LabeledDoc],
    eval_docs: Sequence[LabeledDoc],
    prompt: PromptSpec | None = None,
    run_id: str = "",
    fold: int | None = None,
) -> Iterator[PredictionRecord]:
    """Train for config.epochs and yield one record per eval doc per epoch.

    With epochs=0 the untrained model is evaluated once (epoch 0).  A
    non-finite loss aborts with TrainingDivergedError naming the epoch
    and batch.
    """
    if not train_docs or not eval_docs:
        raise ConfigError("train and eval document sets must be non-empty")
    if paradigm is Paradigm.PBFT and prompt is None:
        raise ConfigError("PBFT requires a prompt spec")

    def build(doc: LabeledDoc) -> ModelInput:
        words = doc.text.split()
        if paradigm is Paradigm.TFT:
            return build_input_tft(words, backend, max_len=config.max_len)
        return build_input_pbft(words, prompt, backend, max_len=config.max_len)

    train_inputs = [build(doc) for doc in train_docs]
    eval_inputs = [build(doc) for doc in eval_docs]
    position = prompt.position.value if (paradigm is Paradigm.PBFT and prompt) else None

    def forward_p_ad(inp: ModelInput, gold: Label) -> tuple[float, float, object]:
        if paradigm is Paradigm.TFT:
            loss, p_ad, grad = tft_loss_grad(backend.cls_logits(inp), gold)
        else:
            scores = backend.mlm_logits(inp)[inp.mask_index]
            loss, p_ad, grad = pbft_loss_grad(scores, gold, prompt, backend)
        return loss, p_ad, grad

    def emit(epoch: int) -> Iterator[PredictionRecord]:
        for doc, inp in zip(eval_docs, eval_inputs):
            _, p_ad, _ = forward_p_ad(inp, doc.label)
            yield PredictionRecord(
                run_id=run_id,
                paradigm=paradigm.value,
                backend=backend.name,
                position=position,
                seed=config.seed,
                fold=fold,
                epoch=epoch,
                sample_id=doc.sample_id,
                p_ad=float(p_ad),
                pred=(Label.AD if p_ad >= 0.5 else Label.NON_AD).value,
            )

    if config.epochs == 0:
        yield from emit(0)
        return

    backend.configure_optimizer(config.learning_rate, config.weight_decay)
    rng = random.Random(config.seed)
    order = list(range(len(train_docs)))
    for epoch in range(1, config.epochs + 1):
        rng.shuffle(order)
        for batch_index, batch in enumerate(_chunks(order, config.batch_size)):
            scale = 1.0 / len(batch)
            for i in batch:
                doc, inp = train_docs[i], train_inputs[i]
                try:
                    loss, _, grad = forward_p_ad(inp, doc.label)
                except NumericError as exc:
                    raise TrainingDivergedError(
                        f"non-finite loss at epoch {epoch}, batch {batch_index} (run {run_id or '<anon>'}): {exc}"
                    ) from exc
                if not math.isfinite(loss):
                    raise TrainingDivergedError(
                        f"non-finite loss at epoch {epoch}, batch {batch_index} (run {run_id or '<anon>'})"
                    )
                if paradigm is Paradigm.TFT:
                    backend.backward_cls(inp, grad * scale)
                else:
                    backend.backward_mlm(inp, inp.mask_index, {t: g * scale for t, g in grad.items()})
            backend.step()
        yield from emit(epoch)
