"""Roll per-instance metric reports up into the numbers the tables show."""

from __future__ import annotations

from .codebleu import MetricReport


class AggregationError(ValueError):
    pass


def aggregate(
    reports: list[MetricReport],
    mode: str = "rate",
    seed_labels: list[int] | None = None,
) -> dict:
    """Summarize reports.

    rate mode: EM% / SC% / mean CodeBLEU x100. count mode: raw EM / SC
    counts and mean CodeBLEU x100. With seed labels (one per report)
    the summary also carries per-seed values and their cross-seed mean.
    """
    if not reports:
        raise AggregationError("cannot aggregate an empty report list")
    if mode not in ("rate", "count"):
        raise AggregationError(f"unknown aggregation mode: {mode!r}")
    if seed_labels is not None and len(seed_labels) != len(reports):
        raise AggregationError("seed_labels must align one-to-one with reports")

    summary = _summarize(reports, mode)
    summary["mode"] = mode
    if seed_labels is not None:
        per_seed: dict[int, dict] = {}
        for seed in sorted(set(seed_labels)):
            group = [r for r, s in zip(reports, seed_labels) if s == seed]
            per_seed[seed] = _summarize(group, mode)
        summary["per_seed"] = {str(k): v for k, v in per_seed.items()}
        n = len(per_seed)
        summary["cross_seed"] = {
            key: sum(v[key] for v in per_seed.values()) / n
            for key in ("em", "sc", "codebleu")
        }
    return summary


def _summarize(reports: list[MetricReport], mode: str) -> dict:
    n = len(reports)
    em = sum(1 for r in reports if r.em)
    sc = sum(1 for r in reports if r.sc)
    mean_cb = 100.0 * sum(r.codebleu for r in reports) / n
    if mode == "rate":
        return {"count": n, "em": 100.0 * em / n, "sc": 100.0 * sc / n, "codebleu": mean_cb}
    return {"count": n, "em": float(em), "sc": float(sc), "codebleu": mean_cb}
