"""Relative-improvement comparison between experiment runs."""

from __future__ import annotations

from dataclasses import dataclass

from .experiment import ExperimentResult


class ComparisonError(ValueError):
    pass


@dataclass
class ComparisonRow:
    label: str
    em: float
    improvement: float | None  # percent over baseline; None when baseline EM is 0
    display: str

    def to_dict(self) -> dict:
        return {"label": self.label, "em": self.em, "improvement": self.improvement, "display": self.display}


def compare_runs(results: list[ExperimentResult], baseline_label: str) -> list[ComparisonRow]:
    """EM-relative improvement of every run over the named baseline.

    Runs must share a test manifest; a zero-EM baseline is reported as
    "0 -> X" instead of a percentage.
    """
    if not results:
        raise ComparisonError("nothing to compare")
    by_label = {r.label: r for r in results}
    if baseline_label not in by_label:
        raise ComparisonError(f"baseline {baseline_label!r} not among results")
    digests = {r.test_manifest_digest for r in results}
    if len(digests) > 1:
        raise ComparisonError("runs were evaluated on different test manifests")
    baseline = by_label[baseline_label]
    base_em = baseline.cross_seed.get("em", 0.0)

    rows = []
    for r in results:
        em = r.cross_seed.get("em", 0.0)
        if r.label == baseline_label:
            rows.append(ComparisonRow(r.label, em, 0.0, "baseline"))
        elif base_em == 0:
            rows.append(ComparisonRow(r.label, em, None, f"0 -> {em:.2f}"))
        else:
            pct = (em - base_em) / base_em * 100.0
            rows.append(ComparisonRow(r.label, em, pct, f"{pct:+.2f}%"))
    return rows
