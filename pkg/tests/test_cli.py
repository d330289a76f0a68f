import csv
import json

import pytest

from addetect.cli import main
from addetect.records import read_records_jsonl
from addetect.synthetic import generate_corpus


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("clicorpus")
    return generate_corpus(root, n_per_class=3, seed=2)


def test_normalize_command(tmp_path, corpus):
    out = tmp_path / "norm"
    assert main(["normalize", "--in", str(corpus.parent / "cha"), "--out", str(out), "--speakers", "par"]) == 0
    files = sorted(out.glob("*.txt"))
    assert len(files) == 6
    words = files[0].read_text().split()
    assert words and all(w.isalnum() for w in words)


def test_normalize_all_speakers_includes_interviewer(tmp_path, corpus):
    par_dir, all_dir = tmp_path / "par", tmp_path / "all"
    main(["normalize", "--in", str(corpus.parent / "cha"), "--out", str(par_dir), "--speakers", "par"])
    main(["normalize", "--in", str(corpus.parent / "cha"), "--out", str(all_dir), "--speakers", "all"])
    par_total = sum(len(p.read_text().split()) for p in par_dir.glob("*.txt"))
    all_total = sum(len(p.read_text().split()) for p in all_dir.glob("*.txt"))
    assert all_total >= par_total


def test_pause_encode_command(tmp_path, corpus):
    norm = tmp_path / "norm"
    out = tmp_path / "paused"
    main(["normalize", "--in", str(corpus.parent / "cha"), "--out", str(norm), "--speakers", "par"])
    assert (
        main(
            [
                "pause-encode",
                "--transcripts",
                str(norm),
                "--alignments",
                str(corpus.parent / "align"),
                "--out",
                str(out),
            ]
        )
        == 0
    )
    encoded = (out / "ad00.txt").read_text().split()
    plain = (norm / "ad00.txt").read_text().split()
    assert [w for w in encoded if w not in (",", ".", "...")] == plain
    assert encoded.count("...") >= 8


def test_wer_command(tmp_path, corpus):
    hyp_dir = tmp_path / "hyp"
    hyp_dir.mkdir()
    # echo the references back: WER 0 everywhere
    norm = tmp_path / "norm"
    main(["normalize", "--in", str(corpus.parent / "cha"), "--out", str(norm), "--speakers", "all"])
    for path in norm.glob("*.txt"):
        (hyp_dir / path.name).write_text(path.read_text(), encoding="utf-8")
    report = tmp_path / "wer.csv"
    assert main(["wer", "--manifest", str(corpus), "--hyp-dir", str(hyp_dir), "--report", str(report)]) == 0
    rows = list(csv.DictReader(report.open()))
    assert [row["group"] for row in rows] == ["All", "Healthy", "Alzheimer", "TrainingSet", "TestSet"]
    assert float(rows[0]["mean_wer_pct"]) == 0.0
    assert rows[0]["n"] == "6"


def test_wer_command_missing_hypothesis(tmp_path, corpus, capsys):
    hyp_dir = tmp_path / "hyp_missing"
    hyp_dir.mkdir()
    code = main(["wer", "--manifest", str(corpus), "--hyp-dir", str(hyp_dir), "--report", str(tmp_path / "w.csv")])
    assert code == 2
    assert "missing hypotheses" in capsys.readouterr().err


def test_folds_command(tmp_path, corpus):
    out = tmp_path / "folds.json"
    assert main(["folds", "--manifest", str(corpus), "--k", "3", "--seed", "5", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["k"] == 3
    assert sorted(payload["assignment"]) == sorted(f"{p}{i:02d}" for p in ("ad", "hc") for i in range(3))


def test_train_command(tmp_path, corpus):
    folds = tmp_path / "folds.json"
    main(["folds", "--manifest", str(corpus), "--k", "2", "--seed", "0", "--out", str(folds)])
    config = tmp_path / "run.cfg"
    config.write_text(
        "paradigm=pbft\nbackend=toy\nposition=before\nepochs=2\nlr=0.05\nseed=0\nfold=0\nvariant=subjects+pauses\n",
        encoding="utf-8",
    )
    out = tmp_path / "records.jsonl"
    code = main(
        ["train", "--config", str(config), "--manifest", str(corpus), "--folds", str(folds), "--out-records", str(out)]
    )
    assert code == 0
    records = read_records_jsonl(out)
    assert {r.epoch for r in records} == {1, 2}
    assert all(r.position == "before" and r.fold == 0 for r in records)


def test_train_command_requires_folds_when_fold_set(tmp_path, corpus, capsys):
    config = tmp_path / "run.cfg"
    config.write_text("paradigm=tft\nbackend=toy\nepochs=1\nfold=0\n", encoding="utf-8")
    code = main(["train", "--config", str(config), "--manifest", str(corpus), "--out-records", str(tmp_path / "r.jsonl")])
    assert code == 2
    assert "--folds" in capsys.readouterr().err


def test_sweep_evaluate_report_commands(tmp_path, corpus):
    sweep_cfg = tmp_path / "sweep.cfg"
    sweep_cfg.write_text(
        "paradigms=pbft\nbackends=toy\npositions=before,after\nseeds=0\n"
        "variants=subjects+pauses\nepochs=3\nlr=0.05\ncv_folds=2\n",
        encoding="utf-8",
    )
    work = tmp_path / "work"
    assert main(["sweep", "--config", str(sweep_cfg), "--manifest", str(corpus), "--workdir", str(work)]) == 0
    assert (work / "report" / "table.txt").exists()

    summary = tmp_path / "summary.csv"
    records_glob = str(work / "records" / "subjects+pauses" / "*.jsonl")
    assert main(["evaluate", "--records", records_glob, "--manifest", str(corpus), "--out", str(summary)]) == 0
    rows = list(csv.DictReader(summary.open()))
    assert {row["split"] for row in rows} == {"cv"}
    assert {row["position_scheme"] for row in rows} == {"before", "after", "before+after"}

    table = tmp_path / "table.txt"
    twin = tmp_path / "table.csv"
    code = main(
        ["report", "--summary", f"subjects+pauses={summary}", "--out-table", str(table), "--out-csv", str(twin)]
    )
    assert code == 0
    assert table.read_text().splitlines()[0].startswith("sys")
    assert len(twin.read_text().splitlines()) == 4  # header + 3 systems
