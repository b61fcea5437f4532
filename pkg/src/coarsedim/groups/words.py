"""Generator words: parsing and formatting.

A word is a tuple of letters ``(label, exp)`` with ``exp`` in ``{1, -1}``.
Text form joins letters with single spaces and writes inverses as
``label^-1``; ``x^3`` and ``x^-2`` are accepted on input and expanded.
The empty word prints as ``e``.
"""

import re

from ..errors import InputError

_POWER = re.compile(r"^(.*?)\^(-?\d+)$")


def inverse_word(word):
    return tuple((label, -exp) for label, exp in reversed(word))


def power_word(word, k):
    if k >= 0:
        return tuple(word) * k
    return inverse_word(word) * (-k)


def _split_token(token, labels):
    # greedy longest-match split for tokens like "aab" when labels are single letters
    out = []
    ordered = sorted(labels, key=len, reverse=True)
    i = 0
    while i < len(token):
        for lab in ordered:
            if token.startswith(lab, i):
                out.append(lab)
                i += len(lab)
                break
        else:
            raise InputError(f"cannot parse {token!r}: no generator matches at offset {i}")
    return out


def parse_word(text, labels):
    """Parse ``text`` into a word over ``labels``."""
    labels = set(labels)
    text = text.strip()
    if text in ("", "1") or (text == "e" and "e" not in labels):
        return ()
    word = []
    for token in re.split(r"[\s*.]+", text):
        if not token:
            continue
        m = _POWER.match(token)
        if m:
            base, k = m.group(1), int(m.group(2))
        else:
            base, k = token, 1
        if base in labels:
            parts = [base]
        else:
            parts = _split_token(base, labels)
        sub = tuple((p, 1) for p in parts)
        word.extend(power_word(sub, k))
    return tuple(word)


def format_word(word):
    if not word:
        return "e"
    return " ".join(label if exp == 1 else f"{label}^-1" for label, exp in word)
