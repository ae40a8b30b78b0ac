"""Reader for the Hulth (Inspec) abstract collection.

A split directory holds ``<id>.abstr`` files (first line the title, the
remaining tab-indented lines the abstract) next to ``<id>.uncontr`` and
``<id>.contr`` files of semicolon-separated keyphrases.
"""

from __future__ import annotations

import re
from pathlib import Path

from .keyphrase_codec import join, parse


def _doc_key(path: Path):
    stem = path.stem
    return (0, int(stem), "") if stem.isdigit() else (1, 0, stem)


def _read(path: Path) -> str:
    return path.read_text(encoding="utf-8", errors="replace")


def read_hulth_document(abstr: Path, gold: str = "uncontr") -> dict:
    lines = [ln.strip() for ln in _read(abstr).splitlines()]
    lines = [ln for ln in lines if ln]
    title = lines[0] if lines else ""
    abstract = " ".join(lines[1:])
    kinds = ("uncontr", "contr") if gold == "both" else (gold,)
    phrases = []
    for kind in kinds:
        f = abstr.with_suffix("." + kind)
        if f.exists():
            phrases.extend(parse(re.sub(r"\s+", " ", _read(f))))
    return {"id": abstr.stem, "title": title, "abstract": abstract, "keywords": join(phrases)}


def read_hulth_dir(directory, gold: str = "uncontr") -> list[dict]:
    files = sorted(Path(directory).glob("*.abstr"), key=_doc_key)
    return [read_hulth_document(f, gold) for f in files]
