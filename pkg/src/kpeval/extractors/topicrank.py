"""Topic-clustering graph ranker (TopicRank-style).

Candidates are grouped into topics by average-linkage agglomerative
clustering on stem-set Jaccard similarity, topics are ranked on a complete
graph weighted by inverse offset distances, and each top topic contributes
one representative candidate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..keyphrase_codec import normalize_phrase
from .candidates import CandidatePhrase, document_tokens, extract_candidates
from .config import ExtractorConfig


@dataclass
class TopicCluster:
    members: list[CandidatePhrase]
    rank_score: float = 0.0

    @property
    def first_occurrence(self) -> int:
        return min(m.first_occurrence for m in self.members)


def jaccard_matrix(candidates: list[CandidatePhrase]) -> np.ndarray:
    vocab = {}
    rows = []
    for c in candidates:
        rows.append([vocab.setdefault(s, len(vocab)) for s in set(c.stems)])
    inc = np.zeros((len(candidates), len(vocab)))
    for i, cols in enumerate(rows):
        inc[i, cols] = 1.0
    inter = inc @ inc.T
    sizes = inc.sum(axis=1)
    union = sizes[:, None] + sizes[None, :] - inter
    return np.divide(inter, union, out=np.zeros_like(inter), where=union > 0)


def agglomerate(sim: np.ndarray, threshold: float) -> list[list[int]]:
    """Average-linkage clustering; stops once no pair averages >= threshold.

    Ties go to the lowest (row, column) pair of surviving cluster slots.
    """
    n = sim.shape[0]
    if n == 0:
        return []
    # summed pairwise similarity between clusters; average = total / (|A| |B|)
    total = sim.astype(float).copy()
    sizes = np.ones(n)
    members = [[i] for i in range(n)]
    alive = np.ones(n, dtype=bool)
    while alive.sum() > 1:
        avg = total / np.outer(sizes, sizes)
        mask = np.triu(np.outer(alive, alive), k=1)
        avg = np.where(mask, avg, -np.inf)
        flat = int(np.argmax(avg))
        i, j = divmod(flat, n)
        if avg[i, j] < threshold:
            break
        total[i, :] += total[j, :]
        total[:, i] += total[:, j]
        sizes[i] += sizes[j]
        members[i].extend(members[j])
        members[j] = []
        alive[j] = False
        total[j, :] = 0.0
        total[:, j] = 0.0
    return [sorted(m) for m in members if m]


def cluster_topics(candidates: list[CandidatePhrase], config: ExtractorConfig = ExtractorConfig()) -> list[TopicCluster]:
    """Partition candidates into topics, ordered by earliest member occurrence."""
    if not candidates:
        return []
    groups = agglomerate(jaccard_matrix(candidates), config.clustering_threshold)
    topics = [TopicCluster([candidates[i] for i in g]) for g in groups]
    topics.sort(key=lambda t: (t.first_occurrence, min(m.surface for m in t.members)))
    return topics


def topic_graph(topics: list[TopicCluster]) -> np.ndarray:
    """Edge weight between two topics: sum of 1/|offset difference| over all
    cross-topic occurrence pairs (first-token offsets, distance at least 1)."""
    offsets = []
    labels = []
    for t, topic in enumerate(topics):
        for cand in topic.members:
            for start, _ in cand.occurrences:
                offsets.append(start)
                labels.append(t)
    pos = np.array(offsets, dtype=float)
    inv = 1.0 / np.maximum(np.abs(pos[:, None] - pos[None, :]), 1.0)
    ind = np.zeros((len(offsets), len(topics)))
    ind[np.arange(len(offsets)), labels] = 1.0
    w = ind.T @ inv @ ind
    np.fill_diagonal(w, 0.0)
    return w


def pagerank(weights: np.ndarray, damping: float = 0.85, tol: float = 1e-6, max_iters: int = 100):
    """Weighted PageRank by power iteration.

    Returns (scores summing to 1, iterations used).  Iteration stops when the
    L1 change drops below ``tol`` or after ``max_iters`` steps.  Nodes without
    outgoing weight spread their mass uniformly.
    """
    n = weights.shape[0]
    if n == 0:
        return np.zeros(0), 0
    out = weights.sum(axis=1)
    dangling = out == 0
    trans = np.divide(weights, out[:, None], out=np.zeros_like(weights, dtype=float), where=~dangling[:, None])
    x = np.full(n, 1.0 / n)
    it = 0
    while it < max_iters:
        it += 1
        nxt = (1 - damping) / n + damping * (trans.T @ x + x[dangling].sum() / n)
        delta = np.abs(nxt - x).sum()
        x = nxt
        if delta < tol:
            break
    return x / x.sum(), it


def _pick(topic: TopicCluster, strategy: str) -> CandidatePhrase:
    # at a shared start offset the longer span wins, approximating maximal chunks
    if strategy == "frequent":
        return min(topic.members, key=lambda c: (-c.frequency, c.first_occurrence, -len(c.tokens), c.surface))
    if strategy == "centroid" and len(topic.members) > 1:
        def centrality(c):
            s = set(c.stems)
            return sum(len(s & set(o.stems)) / len(s | set(o.stems)) for o in topic.members if o is not c)

        return min(topic.members, key=lambda c: (-centrality(c), c.first_occurrence, -len(c.tokens), c.surface))
    return min(topic.members, key=lambda c: (c.first_occurrence, -len(c.tokens), c.surface))


def rank_topics(
    title_tokens: list[str],
    abstract_tokens: list[str],
    config: ExtractorConfig = ExtractorConfig(),
    stopwords: frozenset[str] | None = None,
) -> list[TopicCluster]:
    """Topics with rank_score set, best first (ties: earlier topic)."""
    doc = [t.lower() for t in document_tokens(title_tokens, abstract_tokens)]
    topics = cluster_topics(extract_candidates(doc, config, stopwords), config)
    if not topics:
        return []
    scores, _ = pagerank(topic_graph(topics), config.damping, config.pagerank_tolerance, config.pagerank_max_iters)
    for t, s in zip(topics, scores):
        t.rank_score = float(s)
    order = sorted(range(len(topics)), key=lambda i: (-topics[i].rank_score, i))
    return [topics[i] for i in order]


def topicrank_extract(
    title_tokens: list[str],
    abstract_tokens: list[str],
    config: ExtractorConfig = ExtractorConfig(),
    stopwords: frozenset[str] | None = None,
) -> list[str]:
    out = []
    seen = set()
    for topic in rank_topics(title_tokens, abstract_tokens, config, stopwords):
        surface = _pick(topic, config.selection).surface
        key = normalize_phrase(surface)
        if key in seen:
            continue
        seen.add(key)
        out.append(surface)
        if len(out) == config.n_keyphrases:
            break
    return out
