import time

import pytest

from kpeval.porter import stem


def load_pairs(data_dir):
    words = (data_dir / "porter_voc.txt").read_text().split()
    stems = (data_dir / "porter_output.txt").read_text().split()
    assert len(words) == len(stems)
    return list(zip(words, stems))


def test_reference_vocabulary(data_dir):
    pairs = load_pairs(data_dir)
    assert len(pairs) > 23000
    stem.cache_clear()
    t0 = time.perf_counter()
    bad = [(w, s, stem(w)) for w, s in pairs if stem(w) != s]
    elapsed = time.perf_counter() - t0
    assert bad == []
    assert elapsed < 5.0


@pytest.mark.parametrize(
    "word, expected",
    [
        ("caresses", "caress"),
        ("sky", "sky"),
        ("segmentation", "segment"),
        ("networks", "network"),
        ("graphing", "graph"),
        ("images", "imag"),
        ("a", "a"),
        ("", ""),
    ],
)
def test_examples(word, expected):
    assert stem(word) == expected


def test_lowercases():
    assert stem("Networks") == "network"
