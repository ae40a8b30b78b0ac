"""Corpus ingestion: tokenization, language and length filtering, model-text
normalization, vocabulary building and corpus statistics."""

from __future__ import annotations

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Iterator

from . import keyphrase_codec
from .tokenizer import is_punct, tokenize

log = logging.getLogger(__name__)

SPLITS = ("train", "val", "test")
DEFAULT_ENGLISH_THRESHOLD = 0.15


class EmptyCorpusError(ValueError):
    def __init__(self):
        super().__init__("empty_corpus")


@dataclass
class RawRecord:
    title: str = ""
    abstract: str = ""
    keywords: list[str] = field(default_factory=list)

    @classmethod
    def from_dict(cls, obj: dict) -> "RawRecord":
        kw = obj.get("keywords", "")
        if isinstance(kw, str):
            kw = keyphrase_codec.parse(kw)
        elif not isinstance(kw, list) or not all(isinstance(x, str) for x in kw):
            raise ValueError("keywords must be a string or a list of strings")
        title, abstract = obj.get("title", ""), obj.get("abstract", "")
        if not isinstance(title, str) or not isinstance(abstract, str):
            raise ValueError("title and abstract must be strings")
        return cls(title=title, abstract=abstract, keywords=list(kw))


@dataclass
class PaperRecord:
    title_tokens: list[str]
    abstract_tokens: list[str]
    keyphrase_string: str
    split: str = "train"

    @property
    def keyphrases(self) -> list[str]:
        return keyphrase_codec.parse(self.keyphrase_string)

    def to_dict(self) -> dict:
        return {
            "title": " ".join(self.title_tokens),
            "abstract": " ".join(self.abstract_tokens),
            "keywords": self.keyphrase_string,
            "split": self.split,
        }

    @classmethod
    def from_dict(cls, obj: dict, split: str | None = None) -> "PaperRecord":
        kw = obj.get("keywords", "")
        if isinstance(kw, list):
            kw = keyphrase_codec.join(kw)
        if not all(isinstance(obj.get(f, ""), str) for f in ("title", "abstract")) or not isinstance(kw, str):
            raise ValueError("title, abstract and keywords must be strings")
        return cls(
            title_tokens=tokenize(obj.get("title", "")),
            abstract_tokens=tokenize(obj.get("abstract", "")),
            keyphrase_string=kw,
            split=split or obj.get("split", "train"),
        )


@dataclass(frozen=True)
class FilterThresholds:
    min_abstract_tokens: int = 20
    min_title_tokens: int = 2
    min_keyword_tokens: int = 2

    def __post_init__(self):
        if min(self.min_abstract_tokens, self.min_title_tokens, self.min_keyword_tokens) < 1:
            raise ValueError("thresholds must be >= 1")

    @classmethod
    def for_split(cls, split: str) -> "FilterThresholds":
        if split not in SPLITS:
            raise ValueError(f"unknown split {split!r}")
        return TEST_THRESHOLDS if split == "test" else TRAIN_THRESHOLDS


TRAIN_THRESHOLDS = FilterThresholds(20, 2, 2)
TEST_THRESHOLDS = FilterThresholds(27, 3, 2)


@dataclass(frozen=True)
class ModelTextLimits:
    max_source_tokens: int = 270
    max_target_tokens: int = 21
    vocab_cap: int = 90_000

    def __post_init__(self):
        if min(self.max_source_tokens, self.max_target_tokens, self.vocab_cap) <= 0:
            raise ValueError("limits must be > 0")


@dataclass(frozen=True)
class CorpusStats:
    record_count: int
    total_keyphrases: int
    total_title_tokens: int
    total_abstract_tokens: int

    @property
    def avg_keyphrases_per_record(self) -> float:
        return self.total_keyphrases / self.record_count

    @property
    def avg_title_tokens(self) -> float:
        return self.total_title_tokens / self.record_count

    @property
    def avg_abstract_tokens(self) -> float:
        return self.total_abstract_tokens / self.record_count

    def merge(self, other: "CorpusStats") -> "CorpusStats":
        return CorpusStats(
            self.record_count + other.record_count,
            self.total_keyphrases + other.total_keyphrases,
            self.total_title_tokens + other.total_title_tokens,
            self.total_abstract_tokens + other.total_abstract_tokens,
        )

    def rows(self) -> list[tuple[str, str]]:
        """Table-1 style (label, value) rows."""
        return [
            ("Records", str(self.record_count)),
            ("Keyphrases", str(self.total_keyphrases)),
            ("Title tokens", str(self.total_title_tokens)),
            ("Abstract tokens", str(self.total_abstract_tokens)),
            ("Av. Keyphrase", f"{self.avg_keyphrases_per_record:.4f}"),
            ("Av. Title", f"{self.avg_title_tokens:.4f}"),
            ("Av. Abstract", f"{self.avg_abstract_tokens:.4f}"),
        ]


# ---------------------------------------------------------------- filtering


def load_word_list(name: str) -> frozenset[str]:
    text = resources.files("kpeval").joinpath("data", name).read_text(encoding="utf-8")
    return read_word_list(text.splitlines())


def read_word_list(lines: Iterable[str]) -> frozenset[str]:
    words = (ln.strip().lower() for ln in lines)
    return frozenset(w for w in words if w and not w.startswith("#"))


_FUNCTION_WORDS: frozenset[str] | None = None


def function_words() -> frozenset[str]:
    global _FUNCTION_WORDS
    if _FUNCTION_WORDS is None:
        _FUNCTION_WORDS = load_word_list("function_words_en.txt")
    return _FUNCTION_WORDS


def english_ratio(text: str) -> float:
    words = [t.lower() for t in tokenize(text) if not is_punct(t)]
    if not words:
        return 0.0
    fw = function_words()
    return sum(w in fw for w in words) / len(words)


def detect_english(record: RawRecord, threshold: float = DEFAULT_ENGLISH_THRESHOLD) -> bool:
    return english_ratio(record.abstract) >= threshold


def keyword_token_count(keywords: list[str]) -> int:
    # counted across the whole keyword string, separators excluded
    return sum(len(p.split()) for p in keyphrase_codec.parse(keyphrase_codec.join(keywords)))


def rejection_reason(
    raw: RawRecord,
    thresholds: FilterThresholds,
    english_threshold: float = DEFAULT_ENGLISH_THRESHOLD,
) -> str | None:
    """Return why ``raw`` would be dropped, or None if it passes."""
    if len(tokenize(raw.abstract)) < thresholds.min_abstract_tokens:
        return "abstract_too_short"
    if len(tokenize(raw.title)) < thresholds.min_title_tokens:
        return "title_too_short"
    if keyword_token_count(raw.keywords) < thresholds.min_keyword_tokens:
        return "keywords_too_short"
    if not detect_english(raw, english_threshold):
        return "not_english"
    return None


def clean_and_filter(
    raw: RawRecord,
    thresholds: FilterThresholds,
    english_threshold: float = DEFAULT_ENGLISH_THRESHOLD,
    split: str = "train",
) -> PaperRecord | None:
    reason = rejection_reason(raw, thresholds, english_threshold)
    if reason is not None:
        log.debug("rejected record (%s): %.60r", reason, raw.title)
        return None
    return PaperRecord(
        title_tokens=tokenize(raw.title.lower()),
        abstract_tokens=tokenize(raw.abstract.lower()),
        keyphrase_string=keyphrase_codec.join(keyphrase_codec.parse(keyphrase_codec.join(raw.keywords))),
        split=split,
    )


# ---------------------------------------------------------------- model text

_DIGIT = re.compile(r"\d")


def mask_digits(token: str) -> str:
    return _DIGIT.sub("#", token)


def normalize_for_model(record: PaperRecord, limits: ModelTextLimits = ModelTextLimits()):
    """Return (source tokens, target tokens) with digits masked and lengths capped."""
    source = (record.title_tokens + record.abstract_tokens)[: limits.max_source_tokens]
    target = tokenize(record.keyphrase_string)[: limits.max_target_tokens]
    return [mask_digits(t) for t in source], [mask_digits(t) for t in target]


def count_tokens(examples: Iterable[tuple[list[str], list[str]]]) -> Counter:
    counts: Counter = Counter()
    for source, target in examples:
        counts.update(source)
        counts.update(target)
    return counts


def vocab_from_counts(counts: Counter, cap: int) -> dict[str, int]:
    if cap <= 0:
        raise ValueError("cap must be > 0")
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))[:cap]
    return {tok: rank for rank, (tok, _) in enumerate(ranked)}


def build_vocab(examples: Iterable[tuple[list[str], list[str]]], cap: int) -> dict[str, int]:
    """Map the ``cap`` most frequent tokens to their rank (ties: lexicographic)."""
    return vocab_from_counts(count_tokens(examples), cap)


# ---------------------------------------------------------------- statistics


def record_stats(record: PaperRecord) -> CorpusStats:
    return CorpusStats(1, len(record.keyphrases), len(record.title_tokens), len(record.abstract_tokens))


def compute_stats(records: Iterable[PaperRecord]) -> CorpusStats:
    total = None
    for rec in records:
        s = record_stats(rec)
        total = s if total is None else total.merge(s)
    if total is None:
        raise EmptyCorpusError()
    return total


# ---------------------------------------------------------------- file i/o


def iter_jsonl(path) -> Iterator[tuple[int, dict | None, str | None]]:
    """Yield (line number, object, error) for each non-blank line of ``path``."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                yield lineno, None, f"invalid JSON: {exc.msg}"
                continue
            if not isinstance(obj, dict):
                yield lineno, None, "line is not an object"
                continue
            yield lineno, obj, None


def dump_jsonl_line(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True) + "\n"
