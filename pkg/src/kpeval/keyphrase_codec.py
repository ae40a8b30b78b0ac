"""Keyphrase strings <-> keyphrase lists, plus stemmed canonical forms.

A keyphrase string joins phrases with commas or semicolons.  Parsing is
forgiving: runs of separators collapse, punctuation-only tokens inside a
segment are dropped, and segments left empty disappear.
"""

from __future__ import annotations

import re
from typing import Iterable

from .porter import stem as porter_stem
from .tokenizer import is_punct, tokenize

SEPARATORS = ",;"
_SPLIT = re.compile(r"[,;]")

__all__ = ["SEPARATORS", "NormalizedKeyphraseSet", "join", "normalize", "normalize_phrase", "parse", "porter_stem"]


def _tokens(segment: str) -> list[str]:
    return [t for t in tokenize(segment) if not is_punct(t)]


def parse(s: str) -> list[str]:
    """Split a keyphrase string into surface phrases (space-joined tokens).

    >>> parse("health care,,,,immune system; human -; metabolism, immunity,,,,")
    ['health care', 'immune system', 'human', 'metabolism', 'immunity']
    """
    phrases = []
    for segment in _SPLIT.split(s):
        toks = _tokens(segment)
        if toks:
            phrases.append(" ".join(toks))
    return phrases


def join(phrases: Iterable[str]) -> str:
    return ", ".join(phrases)


def normalize_phrase(phrase: str) -> str:
    return " ".join(porter_stem(t) for t in phrase.lower().split())


class NormalizedKeyphraseSet(tuple):
    """Ordered, duplicate-free canonical phrases.

    Porter stemming is not idempotent on every word (``agreed -> agre -> agr``),
    so canonical phrases are never restemmed: normalizing an instance of this
    class returns it unchanged.
    """

    __slots__ = ()

    def __repr__(self):
        return f"NormalizedKeyphraseSet({list(self)!r})"


def normalize(phrases: Iterable[str]) -> NormalizedKeyphraseSet:
    if isinstance(phrases, NormalizedKeyphraseSet):
        return phrases
    seen = set()
    out = []
    for p in phrases:
        canon = normalize_phrase(p)
        if canon and canon not in seen:
            seen.add(canon)
            out.append(canon)
    return NormalizedKeyphraseSet(out)
