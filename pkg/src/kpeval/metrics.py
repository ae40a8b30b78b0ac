"""Keyphrase evaluation: stemmed full-match F1@k, ROUGE-1/ROUGE-L F1,
overlap-coefficient partial match and macro/micro aggregation."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

from . import keyphrase_codec

DEFAULT_CUTOFFS = (5, 7)


class NoDocumentsError(ValueError):
    def __init__(self):
        super().__init__("no_documents")


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r > 0 else 0.0


@dataclass(frozen=True)
class MatchReport:
    precision: float
    recall: float
    f1: float
    matched: int
    predicted_used: int
    gold_count: int
    credit: float = 0.0  # summed match credit; equals matched for full match

    @classmethod
    def from_credit(cls, credit: float, matched: int, used: int, gold: int, denom: int | None = None):
        denom = used if denom is None else denom
        p = credit / denom if denom else 0.0
        r = credit / gold if gold else 0.0
        return cls(p, r, _f1(p, r), matched, used, gold, credit)


@dataclass(frozen=True)
class RougeScore:
    precision: float
    recall: float
    f1: float
    overlap: int = 0
    pred_len: int = 0
    gold_len: int = 0
    both_empty: bool = False


def _check_k(k: int):
    if k < 1:
        raise ValueError("k must be >= 1")


def f1_at_k(predicted: Sequence[str], gold: Sequence[str], k: int, strict_k: bool = False) -> MatchReport:
    """Full-match precision/recall/F1 of the top ``k`` predictions.

    Both sides are stemmed and deduplicated first, so duplicates never pad the
    cut.  Precision divides by the number of predictions actually used unless
    ``strict_k`` is set.
    """
    _check_k(k)
    gold_n = keyphrase_codec.normalize(gold)
    if not gold_n:
        raise ValueError("gold keyphrase list is empty")
    used = keyphrase_codec.normalize(predicted)[:k]
    matched = len(set(used) & set(gold_n))
    return MatchReport.from_credit(matched, matched, len(used), len(gold_n), k if strict_k else None)


def overlap_coefficient(a: set, b: set) -> float:
    if not a or not b:
        return 0.0
    return len(a & b) / min(len(a), len(b))


def overlap_partial_f1_at_k(predicted: Sequence[str], gold: Sequence[str], k: int, strict_k: bool = False) -> MatchReport:
    """Partial-match F1@k with token-set overlap coefficients as credit.

    Exact canonical matches are paired first; every remaining prediction, in
    rank order, then takes the unmatched gold phrase with the highest overlap
    coefficient (ties: earlier gold phrase).
    """
    _check_k(k)
    gold_n = keyphrase_codec.normalize(gold)
    if not gold_n:
        raise ValueError("gold keyphrase list is empty")
    used = keyphrase_codec.normalize(predicted)[:k]

    gold_index = {g: i for i, g in enumerate(gold_n)}
    taken = [False] * len(gold_n)
    credits = [0.0] * len(used)
    for i, p in enumerate(used):
        j = gold_index.get(p)
        if j is not None:
            taken[j] = True
            credits[i] = 1.0

    gold_sets = [set(g.split()) for g in gold_n]
    for i, p in enumerate(used):
        if credits[i]:
            continue
        ps = set(p.split())
        best_j, best = -1, 0.0
        for j, gs in enumerate(gold_sets):
            if taken[j]:
                continue
            c = overlap_coefficient(ps, gs)
            if c > best:
                best_j, best = j, c
        if best_j >= 0:
            taken[best_j] = True
            credits[i] = best

    matched = sum(1 for c in credits if c > 0)
    return MatchReport.from_credit(math.fsum(credits), matched, len(used), len(gold_n), k if strict_k else None)


def rouge_tokens(keyphrase_string: str) -> list[str]:
    """Lowercased word tokens of a keyphrase string, separators removed."""
    return [t for p in keyphrase_codec.parse(keyphrase_string.lower()) for t in p.split()]


def _rouge(overlap: int, n_pred: int, n_gold: int) -> RougeScore:
    if n_pred == 0 and n_gold == 0:
        return RougeScore(1.0, 1.0, 1.0, 0, 0, 0, both_empty=True)
    if n_pred == 0 or n_gold == 0:
        return RougeScore(0.0, 0.0, 0.0, 0, n_pred, n_gold)
    p, r = overlap / n_pred, overlap / n_gold
    return RougeScore(p, r, _f1(p, r), overlap, n_pred, n_gold)


def rouge1_f1(pred_tokens: Sequence[str], gold_tokens: Sequence[str]) -> RougeScore:
    overlap = sum((Counter(pred_tokens) & Counter(gold_tokens)).values())
    return _rouge(overlap, len(pred_tokens), len(gold_tokens))


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, 1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rougel_f1(pred_tokens: Sequence[str], gold_tokens: Sequence[str]) -> RougeScore:
    return _rouge(lcs_length(pred_tokens, gold_tokens), len(pred_tokens), len(gold_tokens))


# ---------------------------------------------------------------- aggregation


@dataclass
class DocumentScores:
    f1: dict[int, MatchReport]
    rouge1: RougeScore
    rougel: RougeScore
    partial: dict[int, MatchReport] = field(default_factory=dict)


def score_document(
    predicted: str,
    gold: str,
    cutoffs: Iterable[int] = DEFAULT_CUTOFFS,
    strict_k: bool = False,
    partial: bool = False,
) -> DocumentScores:
    """Score one prediction keyphrase string against one gold string."""
    pred_list = keyphrase_codec.parse(predicted)
    gold_list = keyphrase_codec.parse(gold)
    f1 = {k: f1_at_k(pred_list, gold_list, k, strict_k) for k in cutoffs}
    part = {k: overlap_partial_f1_at_k(pred_list, gold_list, k, strict_k) for k in cutoffs} if partial else {}
    pt, gt = rouge_tokens(predicted), rouge_tokens(gold)
    return DocumentScores(f1, rouge1_f1(pt, gt), rougel_f1(pt, gt), part)


@dataclass
class EvalReport:
    method: str
    f1_at: dict[int, float]
    rouge1_f1: float
    rougel_f1: float
    document_count: int
    partial_f1_at: dict[int, float] = field(default_factory=dict)
    averaging: str = "macro"
    skipped_empty_gold: int = 0
    empty_predictions: int = 0
    rouge_both_empty: int = 0
    absent_gold_fraction: float | None = None

    @property
    def f1_at_5(self) -> float:
        return self.f1_at[5]

    @property
    def f1_at_7(self) -> float:
        return self.f1_at[7]

    def columns(self) -> list[tuple[str, float]]:
        cols = [(f"F1@{k}", v) for k, v in sorted(self.f1_at.items())]
        cols += [("R1F1", self.rouge1_f1), ("RLF1", self.rougel_f1)]
        cols += [(f"pF1@{k}", v) for k, v in sorted(self.partial_f1_at.items())]
        return cols

    def to_tsv(self, header: bool = True) -> str:
        """Table-row shape, scores as percentages with two decimals."""
        cols = self.columns()
        lines = []
        if header:
            lines.append("\t".join(["method"] + [name for name, _ in cols]))
        lines.append("\t".join([self.method] + [f"{100 * v:.2f}" for _, v in cols]))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["f1_at"] = {str(k): v for k, v in sorted(self.f1_at.items())}
        d["partial_f1_at"] = {str(k): v for k, v in sorted(self.partial_f1_at.items())}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _mean(values: list[float]) -> float:
    # fsum is exactly rounded, hence independent of summation order
    return math.fsum(values) / len(values)


def _as_scores(d) -> DocumentScores:
    if isinstance(d, DocumentScores):
        return d
    at5, at7, r1, rl = d
    return DocumentScores({5: at5, 7: at7}, r1, rl)


def macro_aggregate(per_document: Iterable, method: str = "method") -> EvalReport:
    """Mean of per-document F1 values.

    Items are DocumentScores or (F1@5 report, F1@7 report, ROUGE-1, ROUGE-L)
    tuples.
    """
    docs = [_as_scores(d) for d in per_document]
    if not docs:
        raise NoDocumentsError()
    cutoffs = sorted(docs[0].f1)
    pcutoffs = sorted(docs[0].partial)
    return EvalReport(
        method=method,
        f1_at={k: _mean([d.f1[k].f1 for d in docs]) for k in cutoffs},
        rouge1_f1=_mean([d.rouge1.f1 for d in docs]),
        rougel_f1=_mean([d.rougel.f1 for d in docs]),
        document_count=len(docs),
        partial_f1_at={k: _mean([d.partial[k].f1 for d in docs]) for k in pcutoffs},
        rouge_both_empty=sum(d.rouge1.both_empty for d in docs),
    )


def _micro_match(reports: list[MatchReport], strict_k: bool, k: int) -> float:
    credit = math.fsum(r.credit for r in reports)
    used = sum(k if strict_k else r.predicted_used for r in reports)
    gold = sum(r.gold_count for r in reports)
    p = credit / used if used else 0.0
    r = credit / gold if gold else 0.0
    return _f1(p, r)


def _micro_rouge(scores: list[RougeScore]) -> float:
    if all(s.both_empty for s in scores):
        return 1.0
    overlap = sum(s.overlap for s in scores)
    npred = sum(s.pred_len for s in scores)
    ngold = sum(s.gold_len for s in scores)
    return _rouge(overlap, npred, ngold).f1


def micro_aggregate(per_document: Iterable, method: str = "method", strict_k: bool = False) -> EvalReport:
    """Pool counts over all documents before computing P/R/F1."""
    docs = [_as_scores(d) for d in per_document]
    if not docs:
        raise NoDocumentsError()
    cutoffs = sorted(docs[0].f1)
    pcutoffs = sorted(docs[0].partial)
    return EvalReport(
        method=method,
        f1_at={k: _micro_match([d.f1[k] for d in docs], strict_k, k) for k in cutoffs},
        rouge1_f1=_micro_rouge([d.rouge1 for d in docs]),
        rougel_f1=_micro_rouge([d.rougel for d in docs]),
        document_count=len(docs),
        partial_f1_at={k: _micro_match([d.partial[k] for d in docs], strict_k, k) for k in pcutoffs},
        averaging="micro",
        rouge_both_empty=sum(d.rouge1.both_empty for d in docs),
    )
