"""Acceptance suite: one test per criterion, each printing a PASS line.

Every tolerance is pinned here; nothing is deferred to calibration.
Runtime budgets are asserted with wall clocks.
"""

from __future__ import annotations

import json
import random
import time
from pathlib import Path

import pytest

from patchbench.backend import GenerationParams, stub_backend
from patchbench.corpus import (
    RepairInstance,
    SamplingPlan,
    sample_fraction,
    sample_shots,
    split_dataset,
)
from patchbench.corpus.sampling import seeded_shuffle
from patchbench.harness import ExperimentSpec, run_experiment
from patchbench.metrics import CodeBleuConfig, aggregate, codebleu, codebleu_components, evaluate_pair
from patchbench.template import (
    builtin_templates,
    get_builtin,
    instantiate,
    render_table_form,
)

from oracles import generate_program

DATA = Path(__file__).parent / "data"

TABLE_BASIC_HARD = [
    "[X] [mask] is fixed program",
    "[X] fixed program is [mask]",
    "Fix bug in [X] [mask]",
    "Fix [X] fixed program is [mask]",
    "Fix [X] [mask] is fixed program",
    "[X] is buggy program [mask] is fixed program",
    "Fix [X] is buggy program [mask] is fixed program",
]
TABLE_BASIC_SOFT = [
    "[X] [mask] [SOFT] * 3",
    "[X] [SOFT] * 3 [mask]",
    "[SOFT] * 3 [X] [mask]",
    "[SOFT] [X] [SOFT] * 3 [mask]",
    "[SOFT] [X] [mask] [SOFT] * 3",
    "[X] [SOFT] * 3 [mask] [SOFT] * 3",
    "[SOFT] [X] [SOFT] * 3 [mask] [SOFT] * 3",
]


def _report(name: str) -> None:
    print(f"ACCEPTANCE PASS: {name}")


def test_template_golden_suite():
    start = time.monotonic()
    templates = builtin_templates("bp", "infilling")
    assert len(templates) == 21
    by_id = {t.id: t for t in templates}
    for i in range(1, 8):
        assert render_table_form(by_id[f"hbp{i}"]) == TABLE_BASIC_HARD[i - 1]
        assert render_table_form(by_id[f"sbp{i}_initialized"]) == TABLE_BASIC_SOFT[i - 1]
        assert render_table_form(by_id[f"sbp{i}_random"]) == TABLE_BASIC_SOFT[i - 1]
        assert all(s.init is not None for s in by_id[f"sbp{i}_initialized"].soft_slots())
        assert all(s.init is None for s in by_id[f"sbp{i}_random"].soft_slots())

    infill = render_table_form(get_builtin("kp_bug_type_hard", "infilling"))
    generative = render_table_form(get_builtin("kp_bug_type_hard", "generative"))
    assert infill.endswith("[mask] is the fixed version")
    assert generative.endswith("the fixed version is [mask]")
    for t in builtin_templates("kp", "infilling"):
        assert not t.mask_is_final()
    for t in builtin_templates("kp", "generative"):
        assert t.mask_is_final()

    elapsed = time.monotonic() - start
    assert elapsed < 1.0, f"template golden suite took {elapsed:.2f}s"
    _report(f"template golden suite ({elapsed * 1000:.0f} ms)")


def test_naive_copy_signature():
    start = time.monotonic()
    instances = [
        RepairInstance(r["id"], r["language"], r["buggy"], r["fixed"])
        for r in (json.loads(line) for line in (DATA / "naive_copy_corpus.jsonl").read_text().splitlines())
    ]
    assert len(instances) == 30
    assert {i.language for i in instances} == {"java", "python", "javascript", "c"}

    backend = stub_backend("copy")
    template = get_builtin("hbp2")
    prompts = [instantiate(template, inst) for inst in instances]
    results = backend.generate(prompts, GenerationParams())
    reports = [
        evaluate_pair(inst.id, res.text or "", inst.fixed_code, inst.language)
        for inst, res in zip(instances, results)
    ]
    summary = aggregate(reports, "count")
    assert summary["em"] == 0.0  # exact
    assert summary["sc"] == 0.0  # exact
    mean_codebleu = summary["codebleu"] / 100.0
    assert mean_codebleu >= 0.5, mean_codebleu

    elapsed = time.monotonic() - start
    assert elapsed < 10.0, f"naive-copy signature took {elapsed:.2f}s"
    _report(
        f"naive-copy signature: EM 0 / SC 0 / mean CodeBLEU {mean_codebleu:.4f} ({elapsed:.2f} s)"
    )


def test_metric_oracle_equivalence():
    start = time.monotonic()
    golden = json.loads((DATA / "metric_golden.json").read_text())
    config = CodeBleuConfig(
        weights=tuple(golden["config"]["weights"]),
        max_order=golden["config"]["max_order"],
        keyword_weight=golden["config"]["keyword_weight"],
        epsilon=golden["config"]["epsilon"],
        min_subtree_height=golden["config"]["min_subtree_height"],
        tokenizer=golden["config"]["tokenizer"],
    )
    pairs = golden["pairs"]
    per_lang = {}
    for entry in pairs:
        per_lang.setdefault(entry["language"], 0)
        per_lang[entry["language"]] += 1
    assert per_lang == {"java": 20, "python": 20, "javascript": 20, "c": 20}
    worst = 0.0
    for entry in pairs:
        comps, _ = codebleu_components(
            entry["prediction"], entry["reference"], entry["language"], config
        )
        for key, expected in entry["components"].items():
            delta = abs(comps[key] - expected)
            worst = max(worst, delta)
            assert delta <= 0.01, f"{entry['id']}/{key}: {comps[key]} vs golden {expected}"

    rng = random.Random(424242)
    langs = ("java", "python", "javascript", "c")
    for k in range(200):
        lang = langs[k % 4]
        code = generate_program(lang, rng)
        assert codebleu(code, code, lang) == pytest.approx(1.0, abs=1e-9)

    elapsed = time.monotonic() - start
    assert elapsed < 30.0, f"metric oracle equivalence took {elapsed:.2f}s"
    _report(
        f"metric oracle equivalence: 80 golden pairs (max component delta {worst:.2e}), "
        f"200 identity programs ({elapsed:.2f} s)"
    )


def test_em_sc_ordering():
    start = time.monotonic()
    rng = random.Random(77)
    langs = ("java", "python", "javascript", "c")
    checked = 0
    for k in range(500):
        lang = langs[k % 4]
        ref = generate_program(lang, rng)
        roll = rng.random()
        if roll < 0.35:
            pred = ref
        elif roll < 0.55:
            pred = ref.replace("+", "-", 1) if "+" in ref else ref + " "
        elif roll < 0.75:
            pred = generate_program(lang, rng)
        else:
            pred = ref.replace(" ", "  ", 1)
        report = evaluate_pair(f"p{k}", pred, ref, lang)
        if report.em:
            assert report.sc, f"{lang}: em without sc on {pred!r}"
            assert report.codebleu == pytest.approx(1.0, abs=1e-9)
        checked += 1
    assert checked == 500

    whitespace_variants = {
        "java": ("int x=1;", "int x = 1;"),
        "python": ("x=1", "x = 1"),
        "javascript": ("let v=2;", "let v = 2;"),
        "c": ("y=0;", "y = 0;"),
    }
    for lang, (pred, ref) in whitespace_variants.items():
        report = evaluate_pair("w", pred, ref, lang)
        assert report.sc and not report.em, f"{lang} variant must show SC without EM"

    elapsed = time.monotonic() - start
    _report(f"EM/SC ordering: 500 randomized pairs + 4 constructed SC>EM pairs ({elapsed:.2f} s)")


def test_sampler_splitter_determinism():
    start = time.monotonic()
    ids_653 = [f"i{k}" for k in range(653)]
    split = split_dataset(ids_653, seed=1)
    assert (len(split.train), len(split.val), len(split.test)) == (523, 65, 65)

    ids_1000 = [f"x{k}" for k in range(1000)]
    seen = []
    for seed in (1, 2, 3):
        a = split_dataset(ids_1000, seed)
        b = split_dataset(ids_1000, seed)
        assert a == b  # bit-identical across runs
        fa = sample_fraction(ids_1000, 0.01, seed)
        fb = sample_fraction(ids_1000, 0.01, seed)
        assert fa == fb
        sa = sample_shots(ids_1000, 32, seed)
        sb = sample_shots(ids_1000, 32, seed)
        assert sa == sb
        seen.append((tuple(a.train), tuple(fa), tuple(sa)))
    assert len(set(seen)) == 3  # different across seeds {1,2,3}

    reserved = set(seeded_shuffle(ids_1000, 1)[:500])
    for k in (1, 8, 16, 32):
        draw = sample_shots(ids_1000, k, seed=1, reserved=reserved)
        assert len(draw) == k
        assert not set(draw) & reserved

    elapsed = time.monotonic() - start
    assert elapsed < 5.0, f"sampler determinism took {elapsed:.2f}s"
    _report(f"sampler/splitter determinism ({elapsed:.2f} s)")


def test_pipeline_determinism(tmp_path):
    start = time.monotonic()
    records = [
        {
            "id": f"i{k}",
            "language": "java",
            "buggy": f"int v{k} = {k} - 1 ;",
            "fixed": f"int v{k} = {k} + 1 ;",
        }
        for k in range(960)
    ]
    ds = tmp_path / "ds.jsonl"
    ds.write_text("\n".join(json.dumps(r) for r in records) + "\n", encoding="utf-8")

    split = split_dataset([r["id"] for r in records], seed=7)
    assert len(split.test) == 96
    by_id = {r["id"]: r for r in records}
    table = {i: by_id[i]["fixed"] for i in split.test[:55]}
    table_file = tmp_path / "table.json"
    table_file.write_text(json.dumps(table), encoding="utf-8")

    def spec(out: str) -> ExperimentSpec:
        return ExperimentSpec(
            dataset_path=str(ds),
            out_dir=str(tmp_path / out),
            language="java",
            template_ids=("hbp2",),
            backend=f"stub:table={table_file}",
            plan=SamplingPlan(mode="fraction", fraction=1.0, seeds=(7,)),
            metric_mode="rate",
        )

    result = run_experiment(spec("run1"))
    assert result.per_seed["7"]["count"] == 96
    assert round(result.per_seed["7"]["em"], 2) == 57.29
    run_experiment(spec("run2"))
    first = (tmp_path / "run1" / "result.json").read_bytes()
    second = (tmp_path / "run2" / "result.json").read_bytes()
    assert first == second  # byte-identical on repeat

    elapsed = time.monotonic() - start
    assert elapsed < 10.0, f"pipeline determinism took {elapsed:.2f}s"
    _report(f"pipeline determinism: EM 57.29 on 96-instance test, byte-stable ({elapsed:.2f} s)")
