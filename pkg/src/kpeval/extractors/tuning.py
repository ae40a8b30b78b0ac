from __future__ import annotations

import itertools
import math
from functools import partial
from typing import Iterable

from ..corpus import PaperRecord
from ..metrics import f1_at_k
from .config import ExtractorConfig
from .yake import yake_extract
from .topicrank import topicrank_extract

METHODS = ("yake", "topicrank")

DEFAULT_GRIDS = {
    "yake": {"max_phrase_len": [1, 2, 3], "cooccurrence_window": [1, 2]},
    "topicrank": {"max_phrase_len": [1, 2, 3], "clustering_threshold": [0.25, 0.5]},
}


def extract(method: str, record: PaperRecord, config: ExtractorConfig, stopwords=None, cased_text: str | None = None) -> list[str]:
    if method == "yake":
        return yake_extract(record.title_tokens, record.abstract_tokens, cased_text, config, stopwords)
    if method == "topicrank":
        return topicrank_extract(record.title_tokens, record.abstract_tokens, config, stopwords)
    raise ValueError(f"unknown method {method!r}")


def expand_grid(grid) -> list[dict]:
    """A dict of value lists becomes its Cartesian product (key order kept);
    a list of dicts is taken as-is."""
    if isinstance(grid, dict):
        if not grid:
            raise ValueError("empty grid")
        keys = list(grid)
        points = [dict(zip(keys, values)) for values in itertools.product(*(grid[k] for k in keys))]
    else:
        points = [dict(p) for p in grid]
    if not points:
        raise ValueError("empty grid")
    return points


def validation_f1(method: str, records: list[PaperRecord], config: ExtractorConfig, k: int, stopwords=None) -> float:
    scores = []
    for rec in records:
        gold = rec.keyphrases
        if not gold:
            continue
        scores.append(f1_at_k(extract(method, rec, config, stopwords), gold, k).f1)
    if not scores:
        raise ValueError("validation set has no scorable records")
    return math.fsum(scores) / len(scores)


def tune(
    method: str,
    validation: Iterable[PaperRecord],
    grid,
    k: int = 5,
    base: ExtractorConfig | None = None,
    stopwords=None,
    mapper=map,
):
    """Pick the grid point with the best macro F1@k on ``validation``.

    Returns (best config, scoreboard of (overrides, F1) rows in grid order).
    Ties keep the earlier grid point.  ``mapper`` evaluates the grid points
    and must preserve order (e.g. a process-pool map).
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    records = list(validation)
    if not records:
        raise ValueError("empty validation set")
    points = expand_grid(grid)
    base = base or ExtractorConfig(n_keyphrases=k)
    configs = [base.with_overrides(p) for p in points]
    scores = list(mapper(partial(validation_f1, method, records, k=k, stopwords=stopwords), configs))
    board = list(zip(points, scores))
    best = 0
    for i, score in enumerate(scores):
        if score > scores[best]:
            best = i
    return configs[best], board
