"""Benchmark runner: csv/png artifacts, oracle cross-check, determinism."""

import csv
import json

import pytest

from x3sat.reports import format_table, run_bench

SPEC = {
    "rows": [
        {"name": "tiny", "count": 6, "n": 8, "m": 10, "seed": 500,
         "neg_prob": 0.25},
        {"name": "caps", "count": 4, "n": 12, "m": 7, "seed": 900,
         "neg_prob": 0.1, "cap": 3},
    ]
}


def _write_spec(tmp_path):
    p = tmp_path / "spec.json"
    p.write_text(json.dumps(SPEC))
    return p


def test_bench_artifacts(tmp_path):
    out = tmp_path / "out"
    summaries = run_bench(_write_spec(tmp_path), out)
    assert [s["row"] for s in summaries] == ["tiny", "caps"]
    for s in summaries:
        assert 0.0 <= s["sat_fraction"] <= 1.0
        assert s["bound_ok"] == 1
    for name in ("summary.csv", "instances.csv", "nodes_hist.png",
                 "rate_scatter.png"):
        assert (out / name).stat().st_size > 0
    with (out / "instances.csv").open() as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 10
    assert rows[0]["row"] == "tiny" and rows[0]["seed"] == "500"
    # floats are written with fixed precision
    assert "." in rows[0]["rate"] and len(rows[0]["rate"].split(".")[1]) == 6


def test_bench_is_byte_deterministic(tmp_path):
    spec = _write_spec(tmp_path)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    run_bench(spec, out1)
    run_bench(spec, out2)
    for name in ("summary.csv", "instances.csv", "nodes_hist.png",
                 "rate_scatter.png"):
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


def test_bench_rejects_empty_spec(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"rows": []}))
    with pytest.raises(ValueError):
        run_bench(p, tmp_path / "out")


def test_format_table_alignment():
    table = format_table([
        {"row": "tiny", "count": 6, "n": 8, "m": 10, "sat_fraction": 0.5,
         "mean_nodes": 1.25, "max_nodes": 3, "max_rate": 0.09,
         "bound_ok": 1},
    ])
    lines = table.splitlines()
    assert len(lines) == 2
    assert lines[0].split() == ["row", "count", "n", "m", "sat_fraction",
                                "mean_nodes", "max_nodes", "max_rate",
                                "bound_ok"]
    assert "0.5000" in lines[1]
