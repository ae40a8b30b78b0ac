import json
import subprocess
import sys

import pytest

from kpeval.cli import main
from kpeval.keyphrase_codec import parse


def run(*argv):
    return main([str(a) for a in argv])


def test_preprocess_fixture(data_dir, tmp_path, capsys):
    out = tmp_path / "proc.jsonl"
    assert run("preprocess", data_dir / "raw_20.jsonl", "-o", out, "--split", "test") == 0
    assert len(out.read_text().splitlines()) == 16
    log = json.loads((tmp_path / "proc.jsonl.rejections.json").read_text())
    assert log["kept"] == 16
    assert [r["line"] for r in log["rejected"]] == [3, 8, 12, 18]
    assert log["rejected_counts"] == {
        "abstract_too_short": 1,
        "keywords_too_short": 1,
        "not_english": 1,
        "title_too_short": 1,
    }
    assert "kept 16, rejected 4" in capsys.readouterr().out
    manifest = json.loads((tmp_path / "proc.jsonl.manifest.json").read_text())
    assert manifest["config"]["thresholds"] == {"min_abstract_tokens": 27, "min_keyword_tokens": 2, "min_title_tokens": 3}
    assert len(manifest["inputs"][0]["sha256"]) == 64


def test_preprocess_split_thresholds(data_dir, tmp_path):
    # train thresholds (20, 2, 2) are looser, so at least as much survives
    test_out, train_out = tmp_path / "t.jsonl", tmp_path / "tr.jsonl"
    run("preprocess", data_dir / "raw_20.jsonl", "-o", test_out, "--split", "test")
    run("preprocess", data_dir / "raw_20.jsonl", "-o", train_out, "--split", "train")
    assert len(train_out.read_text().splitlines()) >= len(test_out.read_text().splitlines())
    for line in test_out.read_text().splitlines():
        rec = json.loads(line)
        assert len(rec["abstract"].split()) >= 27 and len(rec["title"].split()) >= 3
        assert rec["split"] == "test"


def test_preprocess_empty_and_malformed(tmp_path):
    empty = tmp_path / "empty.jsonl"
    empty.write_text("")
    assert run("preprocess", empty, "-o", tmp_path / "o.jsonl", "--split", "train") == 1
    assert (tmp_path / "o.jsonl").read_text() == ""

    bad = tmp_path / "bad.jsonl"
    good = {"title": "graph ranking for topic models", "abstract": "we rank the topics of a graph " * 5, "keywords": "graph ranking, topic models"}
    bad.write_text(json.dumps(good) + "\n{not json\n" + json.dumps({"title": 1}) + "\n")
    assert run("preprocess", bad, "-o", tmp_path / "b.jsonl", "--split", "train") == 2
    log = json.loads((tmp_path / "b.jsonl.rejections.json").read_text())
    assert log["kept"] == 1 and [m["line"] for m in log["malformed"]] == [2, 3]


def test_stats_fixture(data_dir, capsys):
    assert run("stats", data_dir / "stats_3.jsonl") == 0
    rows = dict(line.split("\t") for line in capsys.readouterr().out.splitlines())
    assert rows["Records"] == "3"
    assert rows["Keyphrases"] == "7"
    assert rows["Title tokens"] == "9"
    assert rows["Abstract tokens"] == "20"
    assert float(rows["Av. Keyphrase"]) == pytest.approx(7 / 3, abs=1e-4)
    assert float(rows["Av. Title"]) == 3.0


def test_stats_single_record(data_dir, tmp_path, capsys):
    one = tmp_path / "one.jsonl"
    one.write_text((data_dir / "stats_3.jsonl").read_text().splitlines()[0] + "\n")
    run("stats", one)
    rows = dict(line.split("\t") for line in capsys.readouterr().out.splitlines())
    assert float(rows["Av. Title"]) == float(rows["Title tokens"])
    assert float(rows["Av. Abstract"]) == float(rows["Abstract tokens"])


def test_stats_empty(tmp_path):
    empty = tmp_path / "e.jsonl"
    empty.write_text("")
    assert run("stats", empty) == 1


@pytest.mark.parametrize("method", ["yake", "topicrank"])
def test_extract_contract_and_prefix(data_dir, tmp_path, method):
    corpus = data_dir / "corpus_20.jsonl"
    a, b, c = tmp_path / "a.txt", tmp_path / "b.txt", tmp_path / "c.txt"
    assert run("extract", corpus, "--method", method, "--n", 7, "-o", a) == 0
    assert run("extract", corpus, "--method", method, "--n", 7, "-o", b) == 0
    assert a.read_bytes() == b.read_bytes()
    run("extract", corpus, "--method", method, "--n", 5, "-o", c)
    sevens = a.read_text().splitlines()
    fives = c.read_text().splitlines()
    assert len(sevens) == 20
    for s7, s5 in zip(sevens, fives):
        p7, p5 = parse(s7), parse(s5)
        assert 0 < len(p7) <= 7
        assert p7[: len(p5)] == p5


def test_extract_overrides(data_dir, tmp_path):
    out = tmp_path / "o.txt"
    assert run("extract", data_dir / "corpus_20.jsonl", "--method", "yake", "--set", "max_phrase_len=1", "-o", out) == 0
    assert all(len(p.split()) == 1 for line in out.read_text().splitlines() for p in parse(line))
    assert run("extract", data_dir / "corpus_20.jsonl", "--method", "yake", "--set", "bogus=1", "-o", out) == 1
    assert run("extract", data_dir / "corpus_20.jsonl", "--method", "nope", "-o", out) == 1


def _gold_lines(path):
    return [json.loads(line)["keywords"] for line in path.read_text().splitlines()]


def test_score_identical(data_dir, tmp_path):
    gold = data_dir / "corpus_20.jsonl"
    pred = tmp_path / "p.txt"
    pred.write_text("".join(k + "\n" for k in _gold_lines(gold)))
    assert run("score", "--pred", pred, "--gold", gold, "-o", tmp_path / "r") == 0
    rep = json.loads((tmp_path / "r.json").read_text())
    assert (rep["f1_at"]["5"], rep["f1_at"]["7"], rep["rouge1_f1"], rep["rougel_f1"]) == (1.0, 1.0, 1.0, 1.0)


def test_score_all_empty(data_dir, tmp_path):
    gold = data_dir / "corpus_20.jsonl"
    pred = tmp_path / "p.txt"
    pred.write_text("\n" * 20)
    assert run("score", "--pred", pred, "--gold", gold, "-o", tmp_path / "r") == 0
    rep = json.loads((tmp_path / "r.json").read_text())
    assert (rep["f1_at"]["5"], rep["f1_at"]["7"], rep["rouge1_f1"], rep["rougel_f1"]) == (0.0, 0.0, 0.0, 0.0)
    assert rep["empty_predictions"] == 20


def test_score_line_mismatch(data_dir, tmp_path):
    pred = tmp_path / "p.txt"
    pred.write_text("a\nb\n")
    assert run("score", "--pred", pred, "--gold", data_dir / "corpus_20.jsonl") == 1


def test_score_sample(data_dir, capsys):
    assert run("score", "--pred", data_dir / "sample_pred_10.txt", "--gold", data_dir / "sample_gold_10.jsonl", "--method", "sample") == 0
    header, row = capsys.readouterr().out.splitlines()
    assert header.split("\t")[:5] == ["method", "F1@5", "F1@7", "R1F1", "RLF1"]
    assert row.split("\t") == ["sample", "50.55", "48.28", "59.53", "47.78"]


def test_score_partial_and_micro(data_dir, tmp_path):
    args = ["score", "--pred", data_dir / "sample_pred_10.txt", "--gold", data_dir / "sample_gold_10.jsonl"]
    assert run(*args, "--partial", "-o", tmp_path / "p") == 0
    rep = json.loads((tmp_path / "p.json").read_text())
    assert rep["partial_f1_at"]["5"] >= rep["f1_at"]["5"]
    assert run(*args, "--micro", "--k", 3, "-o", tmp_path / "m") == 0
    rep = json.loads((tmp_path / "m.json").read_text())
    assert rep["averaging"] == "micro" and "3" in rep["f1_at"]


def _grid(tmp_path, grid):
    g = tmp_path / "grid.json"
    g.write_text(json.dumps(grid))
    return g


def test_tune_bigram_fixture(data_dir, tmp_path):
    grid = _grid(tmp_path, [{"max_phrase_len": 1}, {"max_phrase_len": 3}])
    assert run("tune", data_dir / "bigram_val.jsonl", "--method", "yake", "--grid", grid, "-o", tmp_path / "t") == 0
    assert json.loads((tmp_path / "t.config.json").read_text())["max_phrase_len"] == 3
    assert len((tmp_path / "t.scoreboard.tsv").read_text().splitlines()) == 3


def test_tune_single_point_and_tie(data_dir, tmp_path):
    grid = _grid(tmp_path, [{"max_phrase_len": 2}])
    run("tune", data_dir / "bigram_val.jsonl", "--method", "topicrank", "--grid", grid, "-o", tmp_path / "s")
    assert json.loads((tmp_path / "s.config.json").read_text())["max_phrase_len"] == 2
    assert len((tmp_path / "s.scoreboard.tsv").read_text().splitlines()) == 2

    grid = _grid(tmp_path, [{"damping": 0.5}, {"damping": 0.9}])
    run("tune", data_dir / "bigram_val.jsonl", "--method", "yake", "--grid", grid, "-o", tmp_path / "t")
    assert json.loads((tmp_path / "t.config.json").read_text())["damping"] == 0.5
    rows = [r.split("\t") for r in (tmp_path / "t.scoreboard.tsv").read_text().splitlines()[1:]]
    assert rows[0][1] == rows[1][1]


def test_tune_empty_grid(data_dir, tmp_path):
    assert run("tune", data_dir / "bigram_val.jsonl", "--method", "yake", "--grid", _grid(tmp_path, [])) == 1
    assert run("tune", data_dir / "bigram_val.jsonl", "--method", "yake", "--grid", _grid(tmp_path, {})) == 1


def test_module_entry_point(data_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "kpeval", "stats", str(data_dir / "stats_3.jsonl")], capture_output=True, text=True
    )
    assert proc.returncode == 0 and proc.stdout.startswith("Records\t3")


def test_convert_hulth(tmp_path):
    d = tmp_path / "Test"
    d.mkdir()
    (d / "10.abstr").write_text("Second title\n\tsecond abstract text\n")
    (d / "2.abstr").write_text("Graph ranking\n\tWe rank graphs.\n\tIt works.\n")
    (d / "2.uncontr").write_text("graph ranking; ranking\n\tgraphs")
    (d / "2.contr").write_text("graphs")
    out = tmp_path / "h.jsonl"
    assert run("convert-hulth", d, "-o", out) == 0
    recs = [json.loads(line) for line in out.read_text().splitlines()]
    assert [r["id"] for r in recs] == ["2", "10"]
    assert recs[0]["title"] == "Graph ranking"
    assert recs[0]["abstract"] == "We rank graphs. It works."
    assert recs[0]["keywords"] == "graph ranking, ranking graphs"
    assert recs[1]["keywords"] == ""
    assert run("convert-hulth", d, "-o", out, "--gold", "both") == 0
    assert json.loads(out.read_text().splitlines()[0])["keywords"] == "graph ranking, ranking graphs, graphs"
    assert run("convert-hulth", tmp_path / "nothing", "-o", out) == 1
