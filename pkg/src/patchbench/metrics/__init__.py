from .aggregate import AggregationError, aggregate
from .bleu import bleu_score, load_keywords
from .codebleu import (
    CodeBleuConfig,
    MetricReport,
    codebleu,
    codebleu_components,
    evaluate_pair,
    exact_match,
    normalize_text,
    syntactic_match,
)

__all__ = [
    "AggregationError",
    "CodeBleuConfig",
    "MetricReport",
    "aggregate",
    "bleu_score",
    "codebleu",
    "codebleu_components",
    "evaluate_pair",
    "exact_match",
    "load_keywords",
    "normalize_text",
    "syntactic_match",
]
