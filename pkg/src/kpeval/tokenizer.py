"""Whitespace-and-punctuation tokenizer shared by every module."""

import re

_ABBREV = re.compile(r"^(?:[^\W\d_]\.)+[^\W\d_]$")


def is_punct(token: str) -> bool:
    return not any(ch.isalnum() for ch in token)


def _split_chunk(chunk: str) -> list[str]:
    out = []
    word = []
    n = len(chunk)
    for i, ch in enumerate(chunk):
        if ch.isalnum():
            word.append(ch)
            continue
        if ch in "-." and word and i + 1 < n and chunk[i + 1].isalnum():
            word.append(ch)
            continue
        if ch == "." and word and _ABBREV.match("".join(word)):
            # "e.g." keeps its final period
            word.append(ch)
            continue
        if word:
            out.append("".join(word))
            word = []
        out.append(ch)
    if word:
        out.append("".join(word))
    return out


def tokenize(text: str) -> list[str]:
    """Split on whitespace, then detach punctuation into one-character tokens.

    Hyphens and periods between two alphanumerics stay inside the word, as does
    the final period of a dotted abbreviation like ``e.g.``.
    """
    tokens = []
    for chunk in text.split():
        tokens.extend(_split_chunk(chunk))
    return tokens
