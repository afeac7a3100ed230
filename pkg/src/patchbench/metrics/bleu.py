"""Smoothed n-gram precision scores over code token streams.

Zero precisions are substituted with a fixed epsilon before the log
(frozen by calibration; see CodeBleuConfig). Orders with no n-grams on
either side are skipped and the geometric-mean weights renormalized, so
identical short fragments still score 1.0.
"""

from __future__ import annotations

import math
from collections import Counter
from importlib import resources


def ngram_counts(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def modified_precision(candidate: list[str], reference: list[str], n: int) -> tuple[float, float]:
    cand = ngram_counts(candidate, n)
    ref = ngram_counts(reference, n)
    clipped = sum(min(count, ref[g]) for g, count in cand.items())
    return float(clipped), float(sum(cand.values()))


def weighted_unigram_precision(
    candidate: list[str], reference: list[str], keywords: frozenset[str], keyword_weight: float
) -> tuple[float, float]:
    cand = Counter(candidate)
    ref = Counter(reference)
    num = den = 0.0
    for tok, count in cand.items():
        w = keyword_weight if tok in keywords else 1.0
        num += w * min(count, ref[tok])
        den += w * count
    return num, den


def brevity_penalty(cand_len: int, ref_len: int) -> float:
    if cand_len == 0:
        return 0.0
    if cand_len > ref_len:
        return 1.0
    return math.exp(1.0 - ref_len / cand_len)


def bleu_score(
    candidate: list[str],
    reference: list[str],
    max_order: int = 4,
    epsilon: float = 1e-9,
    keywords: frozenset[str] | None = None,
    keyword_weight: float = 1.0,
) -> float:
    """Sentence-level BLEU with brevity penalty.

    When ``keywords`` is given, the unigram precision up-weights keyword
    tokens by ``keyword_weight``; higher orders are unweighted (matching
    the cited metric's reference calibration).
    """
    if not candidate or not reference:
        return 0.0
    log_sum = 0.0
    orders = 0
    for n in range(1, max_order + 1):
        if len(candidate) < n or len(reference) < n:
            break
        if n == 1 and keywords is not None:
            num, den = weighted_unigram_precision(candidate, reference, keywords, keyword_weight)
        else:
            num, den = modified_precision(candidate, reference, n)
        if den == 0:
            break
        p = num / den
        log_sum += math.log(p if p > 0 else epsilon)
        orders += 1
    if orders == 0:
        return 0.0
    geo_mean = math.exp(log_sum / orders)
    return brevity_penalty(len(candidate), len(reference)) * geo_mean


def load_keywords(language: str) -> frozenset[str]:
    data = resources.files("patchbench.metrics").joinpath(f"keywords/{language}.txt").read_text()
    return frozenset(w for w in data.split() if w)
