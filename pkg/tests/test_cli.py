from __future__ import annotations

import json

import pytest

from patchbench.cli import main


def _write_dataset(path, n=40, language="java"):
    records = [
        {
            "id": f"i{k}",
            "language": language,
            "buggy": f"int v{k} = {k} - 1 ;",
            "fixed": f"int v{k} = {k} + 1 ;",
        }
        for k in range(n)
    ]
    path.write_text("\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8")
    return records


def test_ingest_converts_adapter_schema(tmp_path, capsys):
    raw = tmp_path / "raw.jsonl"
    raw.write_text(
        json.dumps(
            {
                "bugHash": "h1",
                "sourceBeforeFix": "x = 0;",
                "sourceAfterFix": "x = 1;",
                "bugType": "CHANGE_NUMERAL",
            }
        )
        + "\n"
    )
    out = tmp_path / "canon.jsonl"
    assert main(["ingest", "--input", str(raw), "--schema", "manysstubs4j", "--out-file", str(out)]) == 0
    record = json.loads(out.read_text().splitlines()[0])
    assert record["language"] == "java"
    assert record["knowledge"]["bug_type"] == "CHANGE_NUMERAL"


def test_split_writes_manifests(tmp_path):
    ds = tmp_path / "d.jsonl"
    _write_dataset(ds, 100)
    out = tmp_path / "splits"
    assert main(["split", "--dataset", str(ds), "--seed-list", "1,2", "--out", str(out)]) == 0
    manifest = json.loads((out / "split_seed_1.json").read_text())
    assert len(manifest["val"]) == 10 and len(manifest["test"]) == 10


def test_sample_shots_with_reserved_test(tmp_path):
    ds = tmp_path / "d.jsonl"
    _write_dataset(ds, 600)
    out = tmp_path / "samples"
    code = main(
        [
            "sample", "--dataset", str(ds), "--mode", "shots", "--shots", "16",
            "--reserve-test", "500", "--seed-list", "1,2,3", "--out", str(out),
        ]
    )
    assert code == 0
    for seed in (1, 2, 3):
        payload = json.loads((out / f"sample_seed_{seed}.json").read_text())
        assert len(payload["ids"]) == 16
        assert not set(payload["ids"]) & set(payload["reserved_test"])


def test_templates_list_and_render(capsys):
    assert main(["templates", "list", "--set", "bp"]) == 0
    listed = capsys.readouterr().out
    assert listed.count("\n") == 21
    assert "hbp3" in listed
    assert main(["templates", "render", "--id", "hbp3"]) == 0
    assert "Fix bug in [X] [mask]" in capsys.readouterr().out


def test_templates_render_warns_for_generative_internal_mask(capsys):
    assert main(["templates", "render", "--id", "hbp1", "--style", "generative"]) == 0
    assert "warning" in capsys.readouterr().out


def test_compile_emits_wire_json(tmp_path, capsys):
    ds = tmp_path / "d.jsonl"
    _write_dataset(ds, 3)
    assert main(["compile", "--template", "sbp2_initialized", "--dataset", str(ds), "--id", "i1"]) == 0
    wire = json.loads(capsys.readouterr().out.strip())
    assert wire["instance_id"] == "i1"
    assert {seg["t"] for seg in wire["segments"]} == {"lit", "soft", "mask"}


def test_evaluate_pairs_file(tmp_path, capsys):
    pairs = tmp_path / "pairs.jsonl"
    rows = [
        {"id": "a", "language": "java", "prediction": "x = 1;", "reference": "x = 1;"},
        {"id": "b", "language": "java", "prediction": "x=1;", "reference": "x = 1;"},
        {"id": "c", "language": "java", "prediction": "y = 2;", "reference": "x = 1;"},
    ]
    pairs.write_text("\n".join(json.dumps(r) for r in rows) + "\n")
    out = tmp_path / "eval"
    assert main(["evaluate", "--pairs", str(pairs), "--mode", "count", "--out", str(out)]) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert summary["em"] == 1.0 and summary["sc"] == 2.0
    reports = [json.loads(line) for line in (out / "reports.jsonl").read_text().splitlines()]
    assert len(reports) == 3


def test_run_and_report_round_trip(tmp_path, capsys):
    ds = tmp_path / "d.jsonl"
    _write_dataset(ds, 60)
    cfg = tmp_path / "exp.cfg"
    cfg.write_text(
        f"dataset = {ds}\nout = {tmp_path / 'out'}\nlanguage = java\n"
        f"templates = hbp2\nbackend = stub:copy\nseeds = 1,2\nlabel = copy-run\n"
    )
    assert main(["run", "--config", str(cfg)]) == 0
    result_file = tmp_path / "out" / "result.json"
    assert result_file.exists()
    assert main(["report", "--results", str(result_file), "--layout", "tableVI"]) == 0
    assert "| copy-run |" in capsys.readouterr().out


def test_compare_against_baseline(tmp_path, capsys):
    ds = tmp_path / "d.jsonl"
    records = _write_dataset(ds, 60)
    table = {r["id"]: r["fixed"] for r in records[:30]}
    tf = tmp_path / "table.json"
    tf.write_text(json.dumps(table))
    base_cfg = tmp_path / "base.cfg"
    base_cfg.write_text(
        f"dataset = {ds}\nout = {tmp_path / 'base'}\nlanguage = java\ntemplates = hbp2\n"
        f"backend = stub:copy\nseeds = 1\nlabel = baseline\n"
    )
    oracle_cfg = tmp_path / "oracle.cfg"
    oracle_cfg.write_text(
        f"dataset = {ds}\nout = {tmp_path / 'oracle'}\nlanguage = java\ntemplates = hbp2\n"
        f"backend = stub:table={tf}\nseeds = 1\nlabel = treated\n"
    )
    assert main(["run", "--config", str(base_cfg)]) == 0
    assert main(["run", "--config", str(oracle_cfg)]) == 0
    code = main(
        [
            "compare",
            "--results", str(tmp_path / "base" / "result.json"), str(tmp_path / "oracle" / "result.json"),
            "--baseline", "baseline",
        ]
    )
    assert code == 0
    text = capsys.readouterr().out
    assert "0 -> " in text  # copy baseline has EM 0


def test_errors_are_reported_not_raised(tmp_path, capsys):
    assert main(["ingest", "--input", str(tmp_path / "missing.jsonl"), "--out-file", "x"]) == 1
    assert "error:" in capsys.readouterr().err
