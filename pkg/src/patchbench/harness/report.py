"""Report emission in the familiar table layouts.

tableVI: methods x (EM, SC, CodeBLEU). tableVII: one EM row per basic
prompt template. tableIX: (EM, CodeBLEU) pairs per shot count. All
numbers are printed with two decimals and rows are emitted in a
deterministic order.
"""

from __future__ import annotations

import csv
import io
import json

from .experiment import ExperimentResult

LAYOUTS = ("tableVI", "tableVII", "tableIX", "csv", "json")


class LayoutError(ValueError):
    pass


def emit_report(results: list[ExperimentResult], layout: str) -> str:
    if not results:
        raise LayoutError("no results to report")
    if layout == "tableVI":
        return _table_vi(results)
    if layout == "tableVII":
        return _table_vii(results)
    if layout == "tableIX":
        return _table_ix(results)
    if layout == "csv":
        return _csv(results)
    if layout == "json":
        return json.dumps([r.to_dict() for r in results], sort_keys=True, indent=2) + "\n"
    raise LayoutError(f"unknown layout {layout!r}; known: {', '.join(LAYOUTS)}")


def write_report(results: list[ExperimentResult], layout: str, path) -> None:
    from pathlib import Path

    Path(path).write_text(emit_report(results, layout), encoding="utf-8")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _table_vi(results: list[ExperimentResult]) -> str:
    lines = ["| Method | EM | SC | CodeBLEU |", "| --- | --- | --- | --- |"]
    for r in sorted(results, key=lambda r: r.label):
        cs = r.cross_seed
        lines.append(
            f"| {r.label} | {_fmt(cs.get('em', 0.0))} | {_fmt(cs.get('sc', 0.0))} | {_fmt(cs.get('codebleu', 0.0))} |"
        )
    return "\n".join(lines) + "\n"


def _table_vii(results: list[ExperimentResult]) -> str:
    lines = ["| Basic Prompt Template | EM |", "| --- | --- |"]
    for r in sorted(results, key=lambda r: r.label):
        lines.append(f"| {r.label} | {_fmt(r.cross_seed.get('em', 0.0))} |")
    return "\n".join(lines) + "\n"


def _table_ix(results: list[ExperimentResult]) -> str:
    if any(r.plan_mode != "shots" for r in results):
        raise LayoutError("tableIX needs shots-mode results")
    ordered = sorted(results, key=lambda r: r.shot_count)
    header = "| Metric | " + " | ".join(f"{r.shot_count} shot" for r in ordered) + " |"
    sep = "| --- |" + " --- |" * len(ordered)
    em_row = "| EM | " + " | ".join(_fmt(r.cross_seed.get("em", 0.0)) for r in ordered) + " |"
    cb_row = "| CodeBLEU | " + " | ".join(_fmt(r.cross_seed.get("codebleu", 0.0)) for r in ordered) + " |"
    return "\n".join([header, sep, em_row, cb_row]) + "\n"


def _csv(results: list[ExperimentResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", "seed", "em", "sc", "codebleu"])
    for r in sorted(results, key=lambda r: r.label):
        for seed in sorted(r.per_seed, key=int):
            s = r.per_seed[seed]
            writer.writerow([r.label, seed, _fmt(s["em"]), _fmt(s["sc"]), _fmt(s["codebleu"])])
        cs = r.cross_seed
        writer.writerow(
            [r.label, "mean", _fmt(cs.get("em", 0.0)), _fmt(cs.get("sc", 0.0)), _fmt(cs.get("codebleu", 0.0))]
        )
    return buf.getvalue()
