from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace

from ..corpus import load_word_list, read_word_list

SELECTION_STRATEGIES = ("first", "frequent", "centroid")


@dataclass(frozen=True)
class ExtractorConfig:
    max_phrase_len: int = 3
    cooccurrence_window: int = 1
    clustering_threshold: float = 0.25
    damping: float = 0.85
    pagerank_tolerance: float = 1e-6
    pagerank_max_iters: int = 100
    n_keyphrases: int = 10
    # how a topic picks its representative candidate
    selection: str = "first"

    def __post_init__(self):
        for name in ("max_phrase_len", "cooccurrence_window", "pagerank_max_iters", "n_keyphrases"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if not 0 < self.clustering_threshold <= 1:
            raise ValueError("clustering_threshold must be in (0, 1]")
        if not 0 < self.damping < 1:
            raise ValueError("damping must be in (0, 1)")
        if self.pagerank_tolerance <= 0:
            raise ValueError("pagerank_tolerance must be > 0")
        if self.selection not in SELECTION_STRATEGIES:
            raise ValueError(f"selection must be one of {SELECTION_STRATEGIES}")

    def with_overrides(self, overrides: dict) -> "ExtractorConfig":
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ValueError(f"unknown config field(s): {', '.join(sorted(unknown))}")
        return replace(self, **overrides)

    def to_dict(self) -> dict:
        return asdict(self)


_DEFAULT_STOPWORDS: frozenset[str] | None = None


def default_stopwords() -> frozenset[str]:
    global _DEFAULT_STOPWORDS
    if _DEFAULT_STOPWORDS is None:
        _DEFAULT_STOPWORDS = load_word_list("stopwords_en.txt")
    return _DEFAULT_STOPWORDS


def load_stopwords(path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return read_word_list(fh)
