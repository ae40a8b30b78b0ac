from .candidates import CandidatePhrase, document_tokens, extract_candidates
from .config import SELECTION_STRATEGIES, ExtractorConfig, default_stopwords, load_stopwords
from .topicrank import TopicCluster, cluster_topics, pagerank, rank_topics, topic_graph, topicrank_extract
from .tuning import DEFAULT_GRIDS, METHODS, expand_grid, extract, tune
from .yake import TermStats, term_score, term_statistics, yake_extract

__all__ = [
    "CandidatePhrase",
    "DEFAULT_GRIDS",
    "ExtractorConfig",
    "METHODS",
    "SELECTION_STRATEGIES",
    "TermStats",
    "TopicCluster",
    "cluster_topics",
    "default_stopwords",
    "document_tokens",
    "expand_grid",
    "extract",
    "extract_candidates",
    "load_stopwords",
    "pagerank",
    "rank_topics",
    "term_score",
    "term_statistics",
    "topic_graph",
    "topicrank_extract",
    "tune",
    "yake_extract",
]
