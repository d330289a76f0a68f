"""25 hand-constructed CHAT utterances with hand-applied expected token lists.

Covers every cleaning rule: behavioural noise codes, each removed symbol,
repetition-code expansion, unintelligible-speech markers, unknown bracketed
codes, punctuation stripping, and lowercasing.
"""

NORMALIZATION_GOLDEN = [
    # behavioural noise codes
    ("the boy &=laughs is taking cookies .", ["the", "boy", "is", "taking", "cookies"]),
    ("&=coughs well &=clears:throat then", ["well", "then"]),
    # each listed symbol
    ("&uh the dog", ["uh", "the", "dog"]),
    ("sand@wich on the counter", ["sandwich", "on", "the", "counter"]),
    ("the (.) boy", ["the", "boy"]),
    ("the (..) boy", ["the", "boy"]),
    ("the (...) boy", ["the", "boy"]),
    ("<the whole time> water runs", ["the", "whole", "time", "water", "runs"]),
    ("going/falling over", ["goingfalling", "over"]),
    ("xxx we see", ["we", "see"]),
    ("she xxx said xxx", ["she", "said"]),
    # repetition codes
    ("well [x 3] okay", ["well", "well", "well", "okay"]),
    ("the boy [x 2] falls", ["the", "boy", "boy", "falls"]),
    ("no [x 4]", ["no", "no", "no", "no"]),
    ("<i think> [x 2] so", ["i", "think", "think", "so"]),
    # unknown bracketed codes dropped
    ("the dog [: cat] barks", ["the", "dog", "barks"]),
    ("runs [* s:r] away", ["runs", "away"]),
    ("she fell [//] jumped down", ["she", "fell", "jumped", "down"]),
    ("the [/] the stool", ["the", "the", "stool"]),
    # punctuation stripping and lowercasing
    ("The Boy, falls!", ["the", "boy", "falls"]),
    ("it's the mother's jar .", ["its", "the", "mothers", "jar"]),
    ("Okay ‡ so +//.", ["okay", "so"]),
    # combinations and degenerate inputs
    ("&=laughs <um> (..) xxx", ["um"]),
    ("", []),
    ("+< (...) .", []),
]

assert len(NORMALIZATION_GOLDEN) == 25
