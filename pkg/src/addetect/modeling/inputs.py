"""Model input construction for both fine-tuning paradigms.

TFT wraps the transcript in [CLS]/[SEP]; PBFT additionally concatenates a
prompt template containing exactly one mask placeholder, either before or
after the transcript.  Truncation never touches the template or the mask.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from ..corpus import Label
from ..errors import BackendError, ConfigError

MASK_PLACEHOLDER = "[MASK]"
DEFAULT_TEMPLATE = "The diagnosis result is [MASK]"
DEFAULT_VERBALIZER = {Label.AD: "alzheimer", Label.NON_AD: "healthy"}


class Paradigm(Enum):
    TFT = "tft"
    PBFT = "pbft"


class PromptPosition(Enum):
    BEFORE = "before"
    AFTER = "after"


@dataclass(frozen=True)
class PromptSpec:
    position: PromptPosition
    template: str = DEFAULT_TEMPLATE
    verbalizer: dict[Label, str] = field(default_factory=lambda: dict(DEFAULT_VERBALIZER))

    def __post_init__(self) -> None:
        if self.template.count(MASK_PLACEHOLDER) != 1:
            raise ConfigError(
                f"template must contain exactly one {MASK_PLACEHOLDER!r} placeholder: {self.template!r}"
            )
        if set(self.verbalizer) != {Label.AD, Label.NON_AD}:
            raise ConfigError("verbalizer must map both labels")

    def split_template(self) -> tuple[str, str]:
        prefix, suffix = self.template.split(MASK_PLACEHOLDER)
        return prefix.strip(), suffix.strip()


@dataclass(frozen=True)
class ModelInput:
    token_ids: tuple[int, ...]
    paradigm: Paradigm
    mask_index: int | None = None

    def __len__(self) -> int:
        return len(self.token_ids)


def _require_special_tokens(backend) -> None:
    if backend.cls_id is None or backend.sep_id is None:
        raise ConfigError(f"backend {backend.name!r} lacks CLS/SEP equivalents")


def build_input_tft(words: Sequence[str], backend, max_len: int = 512) -> ModelInput:
    """[CLS] + tokenized transcript + [SEP], token-truncated to `max_len`."""
    if not words:
        raise ConfigError("empty transcript")
    _require_special_tokens(backend)
    ids = backend.tokenize(" ".join(words))
    ids = ids[: max_len - 2]
    return ModelInput(token_ids=(backend.cls_id, *ids, backend.sep_id), paradigm=Paradigm.TFT)


def build_input_pbft(
    words: Sequence[str],
    spec: PromptSpec,
    backend,
    max_len: int = 512,
) -> ModelInput:
    """Template plus transcript (order set by spec.position), wrapped in [CLS]/[SEP].

    When the sequence exceeds `max_len`, whole transcript words are
    dropped from the transcript's end; the template and its mask are
    always retained in full.
    """
    if not words:
        raise ConfigError("empty transcript")
    _require_special_tokens(backend)
    if backend.mask_id is None:
        raise ConfigError(f"backend {backend.name!r} lacks a mask token")

    prefix_text, suffix_text = spec.split_template()
    prefix_ids = backend.tokenize(prefix_text) if prefix_text else []
    suffix_ids = backend.tokenize(suffix_text) if suffix_text else []
    template_len = len(prefix_ids) + 1 + len(suffix_ids)
    budget = max_len - 2 - template_len
    if budget < 0:
        raise ConfigError(f"template alone exceeds max_len={max_len}")

    transcript_ids: list[int] = []
    for pieces in backend.tokenize_words(list(words)):
        if len(transcript_ids) + len(pieces) > budget:
            break
        transcript_ids.extend(pieces)

    if spec.position is PromptPosition.BEFORE:
        body = [*prefix_ids, backend.mask_id, *suffix_ids, *transcript_ids]
        mask_index = 1 + len(prefix_ids)
    else:
        body = [*transcript_ids, *prefix_ids, backend.mask_id, *suffix_ids]
        mask_index = 1 + len(transcript_ids) + len(prefix_ids)
    return ModelInput(
        token_ids=(backend.cls_id, *body, backend.sep_id),
        paradigm=Paradigm.PBFT,
        mask_index=mask_index,
    )


def verbalize(label: Label, backend, spec: PromptSpec) -> int:
    """Resolve a label word to its single vocabulary id in the backend."""
    word = spec.verbalizer[label]
    pieces = backend.tokenize_words([word])[0]
    if len(pieces) != 1 or (backend.unk_id is not None and pieces[0] == backend.unk_id):
        raise BackendError(
            f"label word {word!r} is not a single token in backend {backend.name!r};"
            " supply single-token label words for this backend"
        )
    return pieces[0]
