"""Lowercasing and punctuation stripping shared by transcript cleaning and WER scoring.

Punctuation is deleted in place, never replaced by a space: "it's" -> "its".
"""


def clean_word(token: str, keep: str = "") -> str:
    """Lowercase one token and delete every non-alphanumeric character not in `keep`."""
    lowered = token.lower()
    return "".join(ch for ch in lowered if ch.isalnum() or ch in keep)


def clean_words(text: str, keep: str = "") -> list[str]:
    """Whitespace-tokenize `text` and clean each token, dropping tokens that vanish."""
    words = []
    for token in text.split():
        word = clean_word(token, keep)
        if word:
            words.append(word)
    return words
