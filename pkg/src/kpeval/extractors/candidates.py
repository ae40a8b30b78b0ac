from __future__ import annotations

from dataclasses import dataclass, field

from ..porter import stem
from ..tokenizer import is_punct
from .config import ExtractorConfig, default_stopwords

SENTENCE_END = frozenset(".!?")


@dataclass
class CandidatePhrase:
    tokens: tuple[str, ...]
    stems: tuple[str, ...]
    occurrences: list[tuple[int, int]] = field(default_factory=list)  # [start, end) token spans
    score: float = 0.0

    @property
    def surface(self) -> str:
        return " ".join(self.tokens)

    @property
    def first_occurrence(self) -> int:
        return self.occurrences[0][0]

    @property
    def frequency(self) -> int:
        return len(self.occurrences)


def document_tokens(title_tokens: list[str], abstract_tokens: list[str]) -> list[str]:
    """Title and abstract as one token stream; a period keeps them in separate sentences."""
    if title_tokens and abstract_tokens:
        return list(title_tokens) + ["."] + list(abstract_tokens)
    return list(title_tokens) + list(abstract_tokens)


def chunk_runs(tokens: list[str], stopwords: frozenset[str]) -> list[tuple[int, int]]:
    """Maximal [start, end) runs of tokens that are neither stopwords nor punctuation."""
    runs = []
    start = None
    for i, tok in enumerate(tokens):
        ok = not is_punct(tok) and tok.lower() not in stopwords
        if ok and start is None:
            start = i
        elif not ok and start is not None:
            runs.append((start, i))
            start = None
    if start is not None:
        runs.append((start, len(tokens)))
    return runs


def extract_candidates(
    doc_tokens: list[str],
    config: ExtractorConfig = ExtractorConfig(),
    stopwords: frozenset[str] | None = None,
) -> list[CandidatePhrase]:
    """All sub-spans (length <= max_phrase_len) of stopword/punctuation-delimited runs.

    Identical surfaces are merged; the result is ordered by first occurrence,
    then length.
    """
    stopwords = default_stopwords() if stopwords is None else stopwords
    found: dict[tuple[str, ...], CandidatePhrase] = {}
    for start, end in chunk_runs(doc_tokens, stopwords):
        for i in range(start, end):
            for n in range(1, min(config.max_phrase_len, end - i) + 1):
                toks = tuple(t.lower() for t in doc_tokens[i : i + n])
                cand = found.get(toks)
                if cand is None:
                    cand = found[toks] = CandidatePhrase(toks, tuple(stem(t) for t in toks))
                cand.occurrences.append((i, i + n))
    out = list(found.values())
    for c in out:
        c.occurrences.sort()
    out.sort(key=lambda c: (c.first_occurrence, len(c.tokens)))
    return out


def sentence_ids(tokens: list[str]) -> list[int]:
    """Sentence index of every token; terminal punctuation belongs to its sentence."""
    ids = []
    sid = 0
    for tok in tokens:
        ids.append(sid)
        if tok in SENTENCE_END:
            sid += 1
    return ids
