"""Generate a small separable picture-description corpus with alignments.

Positive documents carry many long hesitations (every one gets at least
eight pauses above 2 s) and repeated fillers; controls never pause longer
than 2 s.  After pause encoding the count of "..." marks therefore
separates the classes with a structural margin, so a linear model over
token counts can always fit the training folds.

The generator writes real pipeline inputs: CHAT files with noise codes,
comment-style pauses, repetition codes and interviewer turns, alignment
TSVs that match the normalized participant words exactly, and a manifest.
"""

from __future__ import annotations

import csv
import random
from pathlib import Path

from .corpus import Label

_VOCAB = (
    "the boy girl mother cookie jar stool water sink plate window curtain "
    "falls takes reaches washes dries overflows looks stands outside garden "
    "dishes little and then she he is on while trying"
).split()
_FILLERS = ("um", "uh", "er")
_NOISES = ("&=laughs", "&=coughs", "&=sighs")
_INV_WORDS = ("mhm", "okay")

MIN_LONG_PAUSES = 8


def generate_corpus(root: str | Path, n_per_class: int = 20, seed: int = 0) -> Path:
    """Write cha/, align/ and manifest.csv under `root`; returns the manifest path."""
    root = Path(root)
    (root / "cha").mkdir(parents=True, exist_ok=True)
    (root / "align").mkdir(parents=True, exist_ok=True)
    rng = random.Random(seed)
    rows = []
    for label, prefix in ((Label.AD, "ad"), (Label.NON_AD, "hc")):
        for i in range(n_per_class):
            sample_id = f"{prefix}{i:02d}"
            cha_text, align_text = _render_doc(rng, ad=label is Label.AD)
            (root / "cha" / f"{sample_id}.cha").write_text(cha_text, encoding="utf-8")
            (root / "align" / f"{sample_id}.tsv").write_text(align_text, encoding="utf-8")
            rows.append([sample_id, label.value, "train", f"cha/{sample_id}.cha", f"align/{sample_id}.tsv", ""])
    manifest = root / "manifest.csv"
    with manifest.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["sample_id", "label", "split", "transcript_path", "alignment_path", "asr_path"])
        writer.writerows(rows)
    return manifest


def _utterance(rng: random.Random, ad: bool) -> tuple[list[str], list[str]]:
    """One participant utterance as (cha display tokens, spoken words)."""
    n_words = rng.randint(6, 10)
    display: list[str] = []
    words: list[str] = []
    while len(words) < n_words:
        filler_rate = 0.25 if ad else 0.04
        word = rng.choice(_FILLERS) if rng.random() < filler_rate else rng.choice(_VOCAB)
        if ad and word in _FILLERS and rng.random() < 0.15:
            reps = rng.randint(2, 3)
            words.extend([word] * reps)
            display.append(f"{word} [x {reps}]")
        else:
            words.append(word)
            display.append(word)
        if rng.random() < 0.08:
            display.append(rng.choice(_NOISES))
        if rng.random() < 0.06:
            display.append(rng.choice(["(.)", "(..)"]))
    return display, words


def _gap(rng: random.Random, ad: bool) -> float:
    """A silence duration for one inter-word slot (0.0 means no silence row)."""
    r = rng.random()
    if ad:
        if r < 0.20:
            return rng.uniform(2.2, 3.8)
        if r < 0.40:
            return rng.uniform(0.6, 1.8)
        if r < 0.70:
            return rng.uniform(0.12, 0.45)
        return 0.0
    if r < 0.05:
        return rng.uniform(0.6, 1.2)
    if r < 0.50:
        return rng.uniform(0.12, 0.45)
    return 0.0


def _render_doc(rng: random.Random, ad: bool) -> tuple[str, str]:
    utterances = [_utterance(rng, ad) for _ in range(rng.randint(5, 7))]

    # slots[i] sits between words[i] and words[i+1]:
    # ("sil", dur) | ("inv", pre, word, post) | ("none",)
    words: list[str] = []
    slots: list[tuple] = []
    inv_turns: dict[int, str] = {}  # utterance index -> interviewer word
    long_slots = 0
    for index, (_, utt_words) in enumerate(utterances):
        if index > 0:
            if rng.random() < 0.35:
                inv_word = rng.choice(_INV_WORDS)
                inv_turns[index] = inv_word
                # the union of the two silences around the turn decides the bin
                if ad:
                    pre, post = rng.uniform(0.9, 1.3), rng.uniform(0.9, 1.3)
                    long_slots += 1
                else:
                    pre, post = rng.uniform(0.2, 0.4), rng.uniform(0.2, 0.4)
                slots.append(("inv", pre, inv_word, post))
            else:
                dur = _gap(rng, ad)
                long_slots += dur > 2.0
                slots.append(("sil", dur) if dur > 0 else ("none",))
        for i in range(len(utt_words)):
            words.append(utt_words[i])
            if i < len(utt_words) - 1:
                dur = _gap(rng, ad)
                long_slots += dur > 2.0
                slots.append(("sil", dur) if dur > 0 else ("none",))

    if ad:
        upgradable = [i for i, s in enumerate(slots) if s[0] != "inv" and not (s[0] == "sil" and s[1] > 2.0)]
        rng.shuffle(upgradable)
        while long_slots < MIN_LONG_PAUSES:
            slots[upgradable.pop()] = ("sil", rng.uniform(2.2, 3.8))
            long_slots += 1
    assert (long_slots >= MIN_LONG_PAUSES) if ad else (long_slots == 0)

    align_lines = []
    t = 0.0

    def emit(token: str, duration: float, code: str) -> None:
        nonlocal t
        align_lines.append(f"{token}\t{t:.3f}\t{t + duration:.3f}\t{code}")
        t += duration

    emit("SIL", rng.uniform(0.2, 0.6), "PAR")
    for i, word in enumerate(words):
        emit(word, rng.uniform(0.25, 0.45), "PAR")
        if i < len(slots):
            slot = slots[i]
            if slot[0] == "sil":
                emit("SIL", slot[1], "PAR")
            elif slot[0] == "inv":
                _, pre, inv_word, post = slot
                emit("SIL", pre, "PAR")
                emit(inv_word, 0.25, "INV")
                emit("SIL", post, "PAR")
    emit("SIL", rng.uniform(0.3, 0.8), "PAR")

    cha_lines = ["@Begin", "@Languages:\teng", "@Participants:\tPAR Participant, INV Investigator"]
    for index, (display, _) in enumerate(utterances):
        if index in inv_turns:
            cha_lines.append(f"*INV:\t{inv_turns[index]} .")
        cha_lines.append("*PAR:\t" + " ".join(display) + " .")
        if rng.random() < 0.2:
            cha_lines.append("%mor:\tskipped dependency tier")
    cha_lines.append("@End")
    return "\n".join(cha_lines) + "\n", "\n".join(align_lines) + "\n"
