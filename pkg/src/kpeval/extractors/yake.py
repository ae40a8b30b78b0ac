"""Statistical keyphrase scorer combining casing, position, frequency,
relatedness and sentence-spread features of individual terms (lower score is
better), YAKE-style."""

from __future__ import annotations

import math
import statistics
from collections import defaultdict
from dataclasses import dataclass

from ..keyphrase_codec import normalize_phrase
from ..porter import stem
from ..tokenizer import is_punct, tokenize
from .candidates import CandidatePhrase, document_tokens, extract_candidates, sentence_ids
from .config import ExtractorConfig, default_stopwords


@dataclass
class TermStats:
    term: str
    frequency: int
    first_position: int
    casing_count: int
    left_right_dispersion: float
    sentence_spread: float
    median_sentence: float = 0.0
    relatedness: float = 1.0
    casing: float = 0.0
    position: float = 0.0
    freq_norm: float = 0.0
    score: float = 0.0


def term_score(casing: float, position: float, freq_norm: float, relatedness: float, spread: float) -> float:
    return relatedness * position / (casing + freq_norm / relatedness + spread / relatedness)


def _chunk_ids(tokens: list[str]) -> list[int]:
    ids, cid = [], 0
    for tok in tokens:
        if is_punct(tok):
            cid += 1
        ids.append(cid)
    return ids


def term_statistics(
    tokens: list[str],
    cased_tokens: list[str] | None = None,
    window: int = 1,
    stopwords: frozenset[str] | None = None,
) -> dict[str, TermStats]:
    """Per-stem feature table for a lowercased document."""
    stopwords = default_stopwords() if stopwords is None else stopwords
    cased = cased_tokens if cased_tokens is not None else tokens
    sids = sentence_ids(tokens)
    chunks = _chunk_ids(tokens)
    n_sentences = len({s for s, t in zip(sids, tokens) if not is_punct(t)}) or 1

    tf = defaultdict(int)
    first = {}
    casing = defaultdict(int)
    acronym = defaultdict(int)
    sentences = defaultdict(list)
    left = defaultdict(lambda: defaultdict(int))
    right = defaultdict(lambda: defaultdict(int))
    is_stop = {}

    recent: list[tuple[int, str]] = []  # (chunk id, stem) of previous words
    prev_sid = None
    for i, tok in enumerate(tokens):
        if is_punct(tok):
            continue
        term = stem(tok.lower())
        tf[term] += 1
        first.setdefault(term, i)
        is_stop.setdefault(term, tok.lower() in stopwords)
        sentences[term].append(sids[i])

        sentence_start = sids[i] != prev_sid
        prev_sid = sids[i]
        c = cased[i]
        if len(c) > 1 and c.isupper():
            acronym[term] += 1
        elif c[:1].isupper() and not sentence_start:
            casing[term] += 1

        for cid, other in recent[-window:]:
            if cid == chunks[i]:
                left[term][other] += 1
                right[other][term] += 1
        recent.append((chunks[i], term))

    if not tf:
        return {}
    valid = [f for t, f in tf.items() if not is_stop[t]] or list(tf.values())
    mean_tf = statistics.fmean(valid)
    std_tf = statistics.pstdev(valid)
    max_tf = max(valid)

    out = {}
    for term, freq in tf.items():
        wl = len(left[term]) / sum(left[term].values()) if left[term] else 0.0
        wr = len(right[term]) / sum(right[term].values()) if right[term] else 0.0
        rel = 1 + (wl + wr) * freq / max_tf
        med = statistics.median(sentences[term])
        pos = math.log(math.log(3 + med))
        cas = max(casing[term], acronym[term]) / (1 + math.log(freq))
        fnorm = freq / (mean_tf + std_tf)
        spread = len(set(sentences[term])) / n_sentences
        out[term] = TermStats(
            term=term,
            frequency=freq,
            first_position=first[term],
            casing_count=max(casing[term], acronym[term]),
            left_right_dispersion=(wl + wr) / 2,
            sentence_spread=spread,
            median_sentence=med,
            relatedness=rel,
            casing=cas,
            position=pos,
            freq_norm=fnorm,
            score=term_score(cas, pos, fnorm, rel, spread),
        )
    return out


def candidate_score(cand: CandidatePhrase, stats: dict[str, TermStats]) -> float:
    scores = [stats[s].score for s in cand.stems]
    return math.prod(scores) / (cand.frequency * (1 + math.fsum(scores)))


def _aligned_cased(doc: list[str], title_tokens, abstract_tokens, original_cased_text: str | None):
    if original_cased_text is None:
        return None
    cased = tokenize(original_cased_text)
    plain = list(title_tokens) + list(abstract_tokens)
    if [t.lower() for t in cased] != [t.lower() for t in plain]:
        return None
    if len(doc) == len(plain) + 1:
        cased = cased[: len(title_tokens)] + ["."] + cased[len(title_tokens) :]
    return cased


def rank_candidates(
    title_tokens: list[str],
    abstract_tokens: list[str],
    original_cased_text: str | None = None,
    config: ExtractorConfig = ExtractorConfig(),
    stopwords: frozenset[str] | None = None,
) -> list[CandidatePhrase]:
    """Scored candidates, best first, without deduplication or truncation."""
    doc = [t.lower() for t in document_tokens(title_tokens, abstract_tokens)]
    cased = _aligned_cased(doc, title_tokens, abstract_tokens, original_cased_text)
    cands = extract_candidates(doc, config, stopwords)
    if not cands:
        return []
    stats = term_statistics(doc, cased, config.cooccurrence_window, stopwords)
    for c in cands:
        c.score = candidate_score(c, stats)
    cands.sort(key=lambda c: (c.score, c.first_occurrence, c.surface))
    return cands


def yake_extract(
    title_tokens: list[str],
    abstract_tokens: list[str],
    original_cased_text: str | None = None,
    config: ExtractorConfig = ExtractorConfig(),
    stopwords: frozenset[str] | None = None,
) -> list[str]:
    """Return up to ``config.n_keyphrases`` phrases, best first.

    ``original_cased_text`` (title and abstract before lowercasing) feeds the
    casing feature when it tokenizes to the same sequence as the inputs;
    otherwise casing contributes nothing.
    """
    out = []
    seen = set()
    for c in rank_candidates(title_tokens, abstract_tokens, original_cased_text, config, stopwords):
        key = normalize_phrase(c.surface)
        if key in seen:
            continue
        seen.add(key)
        out.append(c.surface)
        if len(out) == config.n_keyphrases:
            break
    return out
