import csv
import hashlib
import json
import subprocess
import sys

import pytest

from scholarcomm import datasets
from scholarcomm.cli import main
from scholarcomm.metrics import REPORT_HEADER

RECORDS, MANIFEST = (str(p) for p in datasets.paths("sample"))
SYNTH_RECORDS, SYNTH_MANIFEST = (str(p) for p in datasets.paths("synthetic"))


def run(*argv):
    return main([str(a) for a in argv])


def digest(root):
    return {str(p.relative_to(root)): hashlib.sha256(p.read_bytes()).hexdigest()
            for p in sorted(root.rglob("*")) if p.is_file()}


def test_sweep_sample_writes_eight_rows(tmp_path):
    out = tmp_path / "sweep"
    assert run("sweep", "--records", RECORDS, "--manifest", MANIFEST, "--out-dir", out) == 0
    with open(out / "report.csv", newline="") as fh:
        rows = list(csv.reader(fh))
    assert tuple(rows[0]) == REPORT_HEADER
    assert len(rows) == 9
    assert {(r[0], r[1]) for r in rows[1:]} == {(m, str(p)) for m in ("semantic", "kway")
                                                for p in (85, 90, 95, 98)}
    for cell in ("semantic_p85", "kway_p98"):
        for name in ("sc.tsv", "partition.tsv", "predictions.tsv"):
            assert (out / cell / name).is_file()


def test_sweep_rerun_identical(tmp_path):
    for name in ("a", "b"):
        assert run("sweep", "--records", RECORDS, "--manifest", MANIFEST, "--out-dir", tmp_path / name) == 0
    assert digest(tmp_path / "a") == digest(tmp_path / "b")


def test_missing_records_path(tmp_path, capsys):
    missing = tmp_path / "nope.jsonl"
    assert run("sweep", "--records", missing, "--manifest", MANIFEST, "--out-dir", tmp_path) == 2
    assert str(missing) in capsys.readouterr().err


def test_bad_flag_is_config_error(capsys):
    assert run("sweep", "--no-such-flag") == 2


def test_ingest_failure_exit_code(tmp_path):
    bad = tmp_path / "latin1.jsonl"
    bad.write_bytes(b'{"title": "caf\xe9"}\n')
    assert run("ingest", "--records", bad) == 3


def test_ingest_strict_and_triples(tmp_path, capsys):
    mixed = tmp_path / "mixed.jsonl"
    mixed.write_bytes(open(RECORDS, "rb").read() + b"{broken\n")
    assert run("ingest", "--records", mixed) == 0
    assert "diagnostics=1" in capsys.readouterr().out
    assert run("ingest", "--records", mixed, "--strict") == 3
    triples = tmp_path / "triples.tsv"
    assert run("ingest", "--records", RECORDS, "--triples", triples) == 0
    lines = triples.read_text().splitlines()
    assert lines == sorted(lines) and all(len(line.split("\t")) == 3 for line in lines)


def test_stage_by_stage_matches_sweep(tmp_path):
    sweep_dir = tmp_path / "sweep"
    assert run("sweep", "--records", RECORDS, "--manifest", MANIFEST, "--out-dir", sweep_dir,
               "--methods", "semantic", "--percentiles", "90") == 0
    sc, part, preds, report = (tmp_path / n for n in ("sc.tsv", "partition.tsv", "pred.tsv", "report.csv"))
    assert run("similarity", "--records", RECORDS, "--manifest", MANIFEST, "--method", "simr",
               "--percentile", 90, "--out", sc) == 0
    assert sc.read_bytes() == (sweep_dir / "semantic_p90" / "sc.tsv").read_bytes()
    assert run("partition", "--in", sc, "--records", RECORDS, "--method", "semantic", "--out", part) == 0
    assert part.read_bytes() == (sweep_dir / "semantic_p90" / "partition.tsv").read_bytes()
    assert run("predict", "--records", RECORDS, "--in", sc, "--partition", part, "--out", preds) == 0
    assert preds.read_bytes() == (sweep_dir / "semantic_p90" / "predictions.tsv").read_bytes()
    assert run("evaluate", "--in", sc, "--partition", part, "--label", "semantic",
               "--percentile", 90, "--out", report) == 0
    assert run("evaluate", "--in", sc, "--partition", part, "--label", "semantic",
               "--percentile", 90, "--out", report) == 0
    rows = report.read_text().splitlines()
    assert len(rows) == 3
    assert rows[1] == (sweep_dir / "report.csv").read_text().splitlines()[1]


def test_kway_needs_k(tmp_path):
    sc = tmp_path / "sc.tsv"
    sc.write_text("a\tb\t0.5\n")
    assert run("partition", "--in", sc, "--method", "kway") == 2
    assert run("partition", "--in", sc, "--method", "kway", "--k", 5) == 4


def test_config_file_and_flag_precedence(tmp_path):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"records": RECORDS, "manifest": MANIFEST, "percentiles": [85, 98],
                                  "methods": ["semantic"], "out-dir": str(tmp_path / "from_config")}))
    assert run("sweep", "--config", config) == 0
    assert len((tmp_path / "from_config" / "report.csv").read_text().splitlines()) == 3
    assert run("sweep", "--config", config, "--percentiles", "90", "--out-dir", tmp_path / "flag") == 0
    assert (tmp_path / "flag" / "report.csv").read_text().splitlines()[1].startswith("semantic,90,")


@pytest.mark.parametrize("content", ["{not json", json.dumps({"bogus_option": 1}), "[1]"])
def test_bad_config(tmp_path, content):
    config = tmp_path / "config.json"
    config.write_text(content)
    assert run("sweep", "--config", config) == 2


def test_percentile_out_of_range(tmp_path):
    assert run("sweep", "--records", RECORDS, "--manifest", MANIFEST, "--out-dir", tmp_path,
               "--percentiles", "100") == 2


def test_holdout_row(tmp_path, capsys):
    assert run("holdout", "--records", SYNTH_RECORDS, "--manifest", SYNTH_MANIFEST,
               "--cutoff", 2016, "--k", 10) == 0
    header, row = capsys.readouterr().out.splitlines()
    assert header.startswith("k,precision_at_k,recall_at_k,random_baseline")
    assert row.split(",")[0] == "10"


def test_holdout_degenerate_cutoff():
    assert run("holdout", "--records", SYNTH_RECORDS, "--cutoff", 2030) == 4


def test_sweep_with_cutoff_writes_holdout(tmp_path):
    out = tmp_path / "h"
    assert run("sweep", "--records", SYNTH_RECORDS, "--manifest", SYNTH_MANIFEST, "--out-dir", out,
               "--similarity", "path", "--max-len", 4, "--percentiles", 95, "--cutoff-year", 2016) == 0
    assert (out / "holdout.csv").read_text().startswith("method,percentile,k,")


def test_venue_sweep(tmp_path):
    out = tmp_path / "venues"
    assert run("sweep", "--records", SYNTH_RECORDS, "--out-dir", out, "--similarity", "simc") == 0
    assert (out / "kway_p85" / "predictions.tsv").read_text() == ""


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "scholarcomm", "ingest", "--records", RECORDS],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("records=50 ")
