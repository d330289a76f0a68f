from .inputs import (
    MASK_PLACEHOLDER,
    ModelInput,
    Paradigm,
    PromptPosition,
    PromptSpec,
    build_input_pbft,
    build_input_tft,
    verbalize,
)
from .losses import pair_probabilities, pbft_loss, pbft_loss_grad, tft_loss, tft_loss_grad
from .toy import AdamW, BagOfTokensBackend
from .train import LabeledDoc, TrainConfig, default_config, train_run

__all__ = [
    "MASK_PLACEHOLDER",
    "ModelInput",
    "Paradigm",
    "PromptPosition",
    "PromptSpec",
    "build_input_pbft",
    "build_input_tft",
    "verbalize",
    "pair_probabilities",
    "pbft_loss",
    "pbft_loss_grad",
    "tft_loss",
    "tft_loss_grad",
    "AdamW",
    "BagOfTokensBackend",
    "LabeledDoc",
    "TrainConfig",
    "default_config",
    "train_run",
]
