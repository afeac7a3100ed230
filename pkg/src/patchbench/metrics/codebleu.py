"""The three repair metrics: exact match, syntactic match, CodeBLEU.

CodeBLEU is the weighted sum of four [0,1] components: plain n-gram
BLEU, keyword-weighted n-gram BLEU, AST subtree match, and data-flow
edge match. Every function here is pure; evaluating instances in
parallel is safe.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ..codeparse import extract_dataflow, lex_tokens, parse, subtree_signatures, trees_equal
from .bleu import bleu_score, load_keywords


@dataclass(frozen=True)
class CodeBleuConfig:
    weights: tuple[float, float, float, float] = (0.25, 0.25, 0.25, 0.25)
    max_order: int = 4
    keyword_weight: float = 5.0
    epsilon: float = 1e-9
    min_subtree_height: int = 2
    tokenizer: str = "lexer"  # "lexer" | "whitespace" (compatibility mode)

    def __post_init__(self) -> None:
        if any(w < 0 for w in self.weights):
            raise ValueError("component weights must be non-negative")
        if abs(sum(self.weights) - 1.0) > 1e-9:
            raise ValueError(f"component weights must sum to 1, got {sum(self.weights)}")
        if self.max_order < 1:
            raise ValueError("max n-gram order must be >= 1")
        if self.tokenizer not in ("lexer", "whitespace"):
            raise ValueError(f"unknown tokenizer mode: {self.tokenizer!r}")


@dataclass
class MetricReport:
    instance_id: str
    em: bool
    sc: bool
    codebleu: float
    components: dict[str, float] = field(default_factory=dict)
    parse_fallback: bool = False

    def to_dict(self) -> dict:
        return {
            "id": self.instance_id,
            "em": self.em,
            "sc": self.sc,
            "codebleu": self.codebleu,
            "components": dict(self.components),
            "parse_fallback": self.parse_fallback,
        }


def normalize_text(text: str) -> str:
    """Line endings to LF, outer whitespace trimmed; internal whitespace kept."""
    return text.replace("\r\n", "\n").replace("\r", "\n").strip()


def exact_match(prediction: str, reference: str) -> bool:
    return normalize_text(prediction) == normalize_text(reference)


def syntactic_match(prediction: str, reference: str, language: str) -> tuple[bool, bool]:
    """Returns (matched, parse_fallback).

    Falls back to exact match when either side parses with errors.
    """
    pred_tree = parse(prediction, language)
    ref_tree = parse(reference, language)
    if pred_tree.has_errors or ref_tree.has_errors:
        return exact_match(prediction, reference), True
    return trees_equal(pred_tree, ref_tree), False


def _tokens(text: str, language: str, config: CodeBleuConfig) -> list[str]:
    if config.tokenizer == "whitespace":
        return text.split()
    return lex_tokens(text, language)


def codebleu_components(
    prediction: str, reference: str, language: str, config: CodeBleuConfig | None = None
) -> tuple[dict[str, float], bool]:
    """Returns ({ngram, weighted_ngram, ast_match, dataflow_match}, parse_fallback)."""
    config = config or CodeBleuConfig()
    cand = _tokens(prediction, language, config)
    ref = _tokens(reference, language, config)
    if not cand:
        return {"ngram": 0.0, "weighted_ngram": 0.0, "ast_match": 0.0, "dataflow_match": 0.0}, False

    ngram = bleu_score(cand, ref, config.max_order, config.epsilon)
    weighted = bleu_score(
        cand, ref, config.max_order, config.epsilon,
        keywords=load_keywords(language), keyword_weight=config.keyword_weight,
    )

    pred_tree = parse(prediction, language)
    ref_tree = parse(reference, language)
    fallback = pred_tree.has_errors or ref_tree.has_errors
    if fallback:
        ast, dfg = _token_stream_fallback(cand, ref)
    else:
        cand_sigs = subtree_signatures(pred_tree, config.min_subtree_height)
        ref_sigs = subtree_signatures(ref_tree, config.min_subtree_height)
        if sum(cand_sigs.values()) == 0:
            ast = 1.0 if trees_equal(pred_tree, ref_tree) else 0.0
        else:
            matched = sum((cand_sigs & ref_sigs).values())
            ast = matched / sum(cand_sigs.values())
        ref_edges = extract_dataflow(ref_tree, language).edge_signatures()
        if sum(ref_edges.values()) == 0:
            dfg = 1.0
        else:
            cand_edges = extract_dataflow(pred_tree, language).edge_signatures()
            dfg = sum((ref_edges & cand_edges).values()) / sum(ref_edges.values())

    comps = {"ngram": ngram, "weighted_ngram": weighted, "ast_match": ast, "dataflow_match": dfg}
    return comps, fallback


def _token_stream_fallback(cand: list[str], ref: list[str]) -> tuple[float, float]:
    # syntactic terms degrade to clipped unigram precision when a side is unparseable
    if cand == ref:
        return 1.0, 1.0
    cc, rc = Counter(cand), Counter(ref)
    matched = sum(min(n, rc[t]) for t, n in cc.items())
    precision = matched / sum(cc.values()) if cand else 0.0
    return precision, precision


def codebleu(
    prediction: str, reference: str, language: str, config: CodeBleuConfig | None = None
) -> float:
    config = config or CodeBleuConfig()
    comps, _ = codebleu_components(prediction, reference, language, config)
    return combine(comps, config)


def combine(components: dict[str, float], config: CodeBleuConfig) -> float:
    a, b, g, d = config.weights
    return (
        a * components["ngram"]
        + b * components["weighted_ngram"]
        + g * components["ast_match"]
        + d * components["dataflow_match"]
    )


def evaluate_pair(
    instance_id: str,
    prediction: str,
    reference: str,
    language: str,
    config: CodeBleuConfig | None = None,
) -> MetricReport:
    config = config or CodeBleuConfig()
    em = exact_match(prediction, reference)
    sc, sc_fallback = syntactic_match(prediction, reference, language)
    comps, cb_fallback = codebleu_components(prediction, reference, language, config)
    return MetricReport(
        instance_id=instance_id,
        em=em,
        sc=sc,
        codebleu=combine(comps, config),
        components=comps,
        parse_fallback=sc_fallback or cb_fallback,
    )
