"""Command-line harness: preprocess, stats, extract, score, tune.

Every command writes a ``<output>.manifest.json`` beside its output recording
the inputs (with content digests) and the effective configuration.  Outputs
carry no timestamps, so identical inputs give byte-identical files whatever
the ``--jobs`` setting.

Exit codes: 0 success, 1 hard input error, 2 partial failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from functools import partial
from pathlib import Path

from . import __version__, corpus, keyphrase_codec, metrics
from .extractors import DEFAULT_GRIDS, METHODS, ExtractorConfig, default_stopwords, extract, load_stopwords, tune
from .porter import stem

log = logging.getLogger("kpeval")

EXIT_OK, EXIT_ERROR, EXIT_PARTIAL = 0, 1, 2


class InputError(Exception):
    pass


# ---------------------------------------------------------------- helpers


def pmap(func, items, jobs: int = 1, chunksize: int = 16) -> list:
    """Order-preserving map, optionally across worker processes."""
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [func(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(func, items, chunksize=chunksize))


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            h.update(block)
    return h.hexdigest()


def write_manifest(output, command: str, inputs: list, config: dict):
    manifest = {
        "tool": "kpeval",
        "version": __version__,
        "command": command,
        "inputs": [{"path": str(p), "sha256": file_digest(p)} for p in inputs],
        "config": config,
        "deterministic": True,
    }
    Path(f"{output}.manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def read_lines(path) -> list[str]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"{path} is not valid UTF-8") from exc
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [ln.rstrip("\r") for ln in lines]


def read_corpus(path, strict: bool = True) -> list[dict | None]:
    """Parse a line-delimited corpus; malformed lines raise unless ``strict`` is off,
    in which case they come back as None."""
    out = []
    for lineno, line in enumerate(read_lines(path), 1):
        try:
            obj = json.loads(line)
            if not isinstance(obj, dict):
                raise ValueError("not an object")
        except ValueError as exc:
            if strict:
                raise InputError(f"{path}:{lineno}: malformed record ({exc})") from exc
            log.warning("%s:%d: malformed record (%s)", path, lineno, exc)
            obj = None
        out.append(obj)
    return out


def to_record(obj: dict, where: str = "") -> corpus.PaperRecord:
    try:
        return corpus.PaperRecord.from_dict(obj)
    except ValueError as exc:
        raise InputError(f"{where}malformed record ({exc})") from exc


def cased_text(obj: dict) -> str:
    return f"{obj.get('title', '')} {obj.get('abstract', '')}"


def parse_value(text: str):
    try:
        return json.loads(text)
    except ValueError:
        return text


def build_config(args, n: int | None = None) -> ExtractorConfig:
    cfg = ExtractorConfig()
    if getattr(args, "config", None):
        cfg = cfg.with_overrides(json.loads(Path(args.config).read_text(encoding="utf-8")))
    overrides = {}
    for item in getattr(args, "set", None) or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"--set expects key=value, got {item!r}")
        overrides[key] = parse_value(value)
    if n is not None:
        overrides["n_keyphrases"] = n
    try:
        return cfg.with_overrides(overrides)
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def stopwords_from(args) -> frozenset[str]:
    if getattr(args, "stopwords", None):
        return load_stopwords(args.stopwords)
    return default_stopwords()


# ---------------------------------------------------------------- preprocess


def _preprocess_line(item, thresholds, english_threshold, split):
    lineno, line = item
    try:
        obj = json.loads(line)
        if not isinstance(obj, dict):
            raise ValueError("not an object")
        raw = corpus.RawRecord.from_dict(obj)
    except ValueError as exc:
        return lineno, "malformed", str(exc)
    reason = corpus.rejection_reason(raw, thresholds, english_threshold)
    if reason:
        return lineno, "rejected", reason
    rec = corpus.clean_and_filter(raw, thresholds, english_threshold, split)
    return lineno, "kept", corpus.dump_jsonl_line(rec.to_dict())


def cmd_preprocess(args) -> int:
    lines = [(i, ln) for i, ln in enumerate(read_lines(args.input), 1) if ln.strip()]
    thresholds = corpus.FilterThresholds.for_split(args.split)
    work = partial(_preprocess_line, thresholds=thresholds, english_threshold=args.english_threshold, split=args.split)
    results = pmap(work, lines, args.jobs)

    kept, rejected, malformed = [], [], []
    for lineno, kind, payload in results:
        if kind == "kept":
            kept.append(payload)
        elif kind == "rejected":
            rejected.append({"line": lineno, "reason": payload})
        else:
            malformed.append({"line": lineno, "error": payload})
            log.error("%s:%d: %s", args.input, lineno, payload)

    Path(args.output).write_text("".join(kept), encoding="utf-8")
    log_obj = {
        "kept": len(kept),
        "rejected_counts": dict(sorted(Counter(r["reason"] for r in rejected).items())),
        "rejected": rejected,
        "malformed": malformed,
    }
    Path(f"{args.output}.rejections.json").write_text(json.dumps(log_obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    write_manifest(
        args.output,
        "preprocess",
        [args.input],
        {"split": args.split, "thresholds": asdict(thresholds), "english_threshold": args.english_threshold},
    )
    print(f"kept {len(kept)}, rejected {len(rejected)}, malformed {len(malformed)}")
    for reason, count in log_obj["rejected_counts"].items():
        print(f"  {reason}\t{count}")
    if not lines:
        log.error("%s: empty input", args.input)
        return EXIT_ERROR
    return EXIT_PARTIAL if malformed else EXIT_OK


# ---------------------------------------------------------------- stats


def cmd_stats(args) -> int:
    objs = read_corpus(args.corpus)
    records = [to_record(o, f"{args.corpus}:{i}: ") for i, o in enumerate(objs, 1)]
    try:
        stats = corpus.compute_stats(records)
    except corpus.EmptyCorpusError:
        raise InputError(f"{args.corpus}: empty_corpus")
    table = "".join(f"{label}\t{value}\n" for label, value in stats.rows())
    sys.stdout.write(table)
    if args.output:
        Path(args.output).write_text(table, encoding="utf-8")
        write_manifest(args.output, "stats", [args.corpus], {})
    return EXIT_OK


# ---------------------------------------------------------------- extract


def _extract_one(obj, method, config, stopwords):
    rec = corpus.PaperRecord.from_dict(obj)
    return keyphrase_codec.join(extract(method, rec, config, stopwords, cased_text(obj)))


def cmd_extract(args) -> int:
    if args.method not in METHODS:
        raise InputError(f"unknown method {args.method!r}")
    config = build_config(args, args.n)
    objs = read_corpus(args.corpus)
    for i, o in enumerate(objs, 1):
        to_record(o, f"{args.corpus}:{i}: ")
    work = partial(_extract_one, method=args.method, config=config, stopwords=stopwords_from(args))
    preds = pmap(work, objs, args.jobs)
    Path(args.output).write_text("".join(p + "\n" for p in preds), encoding="utf-8")
    inputs = [args.corpus] + ([args.stopwords] if args.stopwords else [])
    write_manifest(args.output, "extract", inputs, {"method": args.method, "extractor": config.to_dict()})
    return EXIT_OK


# ---------------------------------------------------------------- score


def absent_gold_fraction(records: list[corpus.PaperRecord]) -> float | None:
    """Share of gold phrases whose stem sequence never occurs in title+abstract."""
    absent = total = 0
    for rec in records:
        doc = " " + " ".join(stem(t.lower()) for t in rec.title_tokens + rec.abstract_tokens) + " "
        for phrase in keyphrase_codec.normalize(rec.keyphrases):
            total += 1
            absent += f" {phrase} " not in doc
    return absent / total if total else None


def _score_one(pair, cutoffs, strict_k, partial_match):
    pred, gold = pair
    return metrics.score_document(pred, gold, cutoffs, strict_k, partial_match)


def cmd_score(args) -> int:
    preds = read_lines(args.pred)
    golds = read_corpus(args.gold)
    if len(preds) != len(golds):
        raise InputError(f"line count mismatch: {len(preds)} predictions vs {len(golds)} gold records")
    records = [to_record(o, f"{args.gold}:{i}: ") for i, o in enumerate(golds, 1)]
    cutoffs = tuple(sorted(set(args.k or metrics.DEFAULT_CUTOFFS)))
    if min(cutoffs) < 1:
        raise InputError("--k must be >= 1")

    pairs, scored_records = [], []
    skipped = empty_preds = 0
    for pred, rec in zip(preds, records):
        if not keyphrase_codec.normalize(rec.keyphrases):
            skipped += 1
            continue
        if not keyphrase_codec.parse(pred):
            empty_preds += 1
        pairs.append((pred, rec.keyphrase_string))
        scored_records.append(rec)
    if not pairs:
        raise InputError("no documents with non-empty gold keyphrases")

    work = partial(_score_one, cutoffs=cutoffs, strict_k=args.strict_k, partial_match=args.partial)
    docs = pmap(work, pairs, args.jobs)
    if args.micro:
        report = metrics.micro_aggregate(docs, args.method, args.strict_k)
    else:
        report = metrics.macro_aggregate(docs, args.method)
    report.skipped_empty_gold = skipped
    report.empty_predictions = empty_preds
    report.absent_gold_fraction = absent_gold_fraction(scored_records)

    tsv = report.to_tsv()
    sys.stdout.write(tsv)
    if args.output:
        Path(f"{args.output}.tsv").write_text(tsv, encoding="utf-8")
        Path(f"{args.output}.json").write_text(report.to_json(), encoding="utf-8")
        write_manifest(
            args.output,
            "score",
            [args.pred, args.gold],
            {"method": args.method, "k": list(cutoffs), "strict_k": args.strict_k, "partial": args.partial, "micro": args.micro},
        )
    return EXIT_OK


# ---------------------------------------------------------------- tune


def cmd_tune(args) -> int:
    if args.method not in METHODS:
        raise InputError(f"unknown method {args.method!r}")
    if args.grid:
        try:
            grid = json.loads(Path(args.grid).read_text(encoding="utf-8"))
        except (OSError, ValueError) as exc:
            raise InputError(f"cannot read grid {args.grid}: {exc}") from exc
    else:
        grid = DEFAULT_GRIDS[args.method]
    if not grid:
        raise InputError("empty grid")
    records = [to_record(o, f"{args.corpus}:{i}: ") for i, o in enumerate(read_corpus(args.corpus), 1)]
    if not records:
        raise InputError("empty validation set")
    base = build_config(args, args.k)
    try:
        best, board = tune(
            args.method, records, grid, args.k, base, stopwords_from(args), partial(pmap, jobs=args.jobs, chunksize=1)
        )
    except ValueError as exc:
        raise InputError(str(exc)) from exc

    rows = ["rank\tF1@{}\tparams\n".format(args.k)]
    for i, (params, score) in enumerate(board):
        rows.append(f"{i}\t{score:.6f}\t{json.dumps(params, sort_keys=True)}\n")
    scoreboard = "".join(rows)
    best_json = json.dumps(best.to_dict(), indent=2, sort_keys=True) + "\n"
    sys.stdout.write(scoreboard)
    sys.stdout.write(best_json)
    if args.output:
        Path(f"{args.output}.config.json").write_text(best_json, encoding="utf-8")
        Path(f"{args.output}.scoreboard.tsv").write_text(scoreboard, encoding="utf-8")
        inputs = [args.corpus] + [p for p in (args.grid, args.stopwords) if p]
        write_manifest(args.output, "tune", inputs, {"method": args.method, "k": args.k, "grid": grid, "base": base.to_dict()})
    return EXIT_OK


# ---------------------------------------------------------------- hulth import


def cmd_convert_hulth(args) -> int:
    from .datasets import read_hulth_dir

    records = read_hulth_dir(args.directory, args.gold)
    if not records:
        raise InputError(f"no .abstr files under {args.directory}")
    Path(args.output).write_text("".join(corpus.dump_jsonl_line(r) for r in records), encoding="utf-8")
    write_manifest(args.output, "convert-hulth", [], {"directory": str(args.directory), "gold": args.gold})
    return EXIT_OK


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kpeval", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def jobs(sp):
        sp.add_argument("--jobs", type=int, default=1, help="worker processes (output is identical for any value)")

    def extractor_opts(sp):
        sp.add_argument("--config", help="JSON file of extractor settings")
        sp.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one extractor setting")
        sp.add_argument("--stopwords", help="stopword list, one token per line")

    sp = sub.add_parser("preprocess", help="filter and tokenize a raw corpus")
    sp.add_argument("input")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--split", choices=corpus.SPLITS, required=True)
    sp.add_argument("--english-threshold", type=float, default=corpus.DEFAULT_ENGLISH_THRESHOLD)
    jobs(sp)
    sp.set_defaults(func=cmd_preprocess)

    sp = sub.add_parser("stats", help="corpus statistics")
    sp.add_argument("corpus")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("extract", help="run an unsupervised extractor over a corpus")
    sp.add_argument("corpus")
    sp.add_argument("--method", required=True)
    sp.add_argument("--n", type=int, default=10)
    sp.add_argument("-o", "--output", required=True)
    extractor_opts(sp)
    jobs(sp)
    sp.set_defaults(func=cmd_extract)

    sp = sub.add_parser("score", help="score a predictions file against a gold corpus")
    sp.add_argument("--pred", required=True)
    sp.add_argument("--gold", required=True)
    sp.add_argument("--k", type=int, action="append")
    sp.add_argument("--strict-k", action="store_true", help="divide precision by k, not by predictions used")
    sp.add_argument("--partial", action="store_true", help="add overlap-coefficient partial-match F1@k")
    sp.add_argument("--micro", action="store_true", help="micro instead of macro averaging")
    sp.add_argument("--method", default="method", help="row label in the report")
    sp.add_argument("-o", "--output", help="report path prefix (.tsv/.json/.manifest.json)")
    jobs(sp)
    sp.set_defaults(func=cmd_score)

    sp = sub.add_parser("tune", help="grid-search extractor settings on a validation corpus")
    sp.add_argument("corpus")
    sp.add_argument("--method", required=True)
    sp.add_argument("--grid", help="JSON grid: object of value lists or list of objects")
    sp.add_argument("--k", type=int, default=5)
    sp.add_argument("-o", "--output", help="output prefix (.config.json/.scoreboard.tsv)")
    extractor_opts(sp)
    jobs(sp)
    sp.set_defaults(func=cmd_tune)

    sp = sub.add_parser("convert-hulth", help="turn a Hulth (Inspec) split directory into a raw corpus")
    sp.add_argument("directory")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--gold", choices=("uncontr", "contr", "both"), default="uncontr")
    sp.set_defaults(func=cmd_convert_hulth)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
