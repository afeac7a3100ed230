#!/usr/bin/env python3
"""Freeze golden test data.

Computes metric component values for a fixed pair set with the
test-side oracle implementations (tests/oracles.py) and writes them to
tests/data/metric_golden.json; curates the 30-pair naive-copy corpus
and writes tests/data/naive_copy_corpus.jsonl after checking the
corpus-level constraints (every pair structurally different, copy
baseline CodeBLEU high). Run from the repository root:

    python tools/make_goldens.py
"""

from __future__ import annotations

import json
import random
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from patchbench.codeparse import lex_tokens, parse, trees_equal
from patchbench.metrics import CodeBleuConfig, codebleu_components, evaluate_pair, exact_match
from patchbench.metrics.bleu import load_keywords

from oracles import generate_program, oracle_ast_match, oracle_bleu, oracle_dataflow_match, perturb_whitespace

CONFIG = CodeBleuConfig()

HAND_PAIRS: dict[str, list[tuple[str, str]]] = {
    "java": [
        ("int total = a + b;", "int total = a + b;"),
        ("int total=a+b;", "int total = a + b;"),
        ("return a - b;", "return a + b;"),
        ("if (x > 0) { y = x; }", "if (x >= 0) { y = x; }"),
        ("for (int i = 0; i < n; i++) { sum += i; }", "for (int i = 1; i < n; i++) { sum += i; }"),
        ("String s = value.toString();", "String s = String.valueOf(value);"),
        ("list.add(item);", "list.add(item); count++;"),
        ("x = compute(a, b);", "x = compute(b, a);"),
        ("return (a + b) * c;", "return a + b * c;"),
        ("int y = f(x); // adjust", "int y = f(x);"),
    ],
    "python": [
        ("total = a + b", "total = a + b"),
        ("total=a+b", "total = a + b"),
        ("return a - b", "return a + b"),
        ("if x > 0:\n    y = x\n", "if x >= 0:\n    y = x\n"),
        ("for i in range(n):\n    s += i\n", "for i in range(1, n):\n    s += i\n"),
        ("value = items[0]", "value = items[-1]"),
        ("print(msg)", "print(msg)\nlog(msg)"),
        ("x = compute(a, b)", "x = compute(b, a)"),
        ("z = (a + b) * c", "z = a + b * c"),
        ("y = f(x)  # adjust", "y = f(x)"),
    ],
    "javascript": [
        ("let total = a + b;", "let total = a + b;"),
        ("let total=a+b;", "let total = a + b;"),
        ("return a - b;", "return a + b;"),
        ("if (x > 0) { y = x; }", "if (x >= 0) { y = x; }"),
        ("for (let i = 0; i < n; i++) { s += i; }", "for (let i = 1; i < n; i++) { s += i; }"),
        ("const v = items[0];", "const v = items[items.length - 1];"),
        ("emit(msg);", "emit(msg); count += 1;"),
        ("x = compute(a, b);", "x = compute(b, a);"),
        ("return (a + b) * c;", "return a + b * c;"),
        ("let y = f(x); // adjust", "let y = f(x);"),
    ],
    "c": [
        ("int total = a + b;", "int total = a + b;"),
        ("int total=a+b;", "int total = a + b;"),
        ("return a - b;", "return a + b;"),
        ("if (x > 0) { y = x; }", "if (x >= 0) { y = x; }"),
        ("for (i = 0; i < n; i++) { s += i; }", "for (i = 1; i < n; i++) { s += i; }"),
        ("char *p = buf;", "char *p = buf + 1;"),
        ("process(msg);", "process(msg); count++;"),
        ("x = compute(a, b);", "x = compute(b, a);"),
        ("return (a + b) * c;", "return a + b * c;"),
        ("int y = f(x); /* adjust */", "int y = f(x);"),
    ],
}


def build_pairs(language: str) -> list[tuple[str, str]]:
    pairs = list(HAND_PAIRS[language])
    rng = random.Random(2024 + hash(language) % 1000)
    while len(pairs) < 20:
        ref = generate_program(language, rng)
        roll = rng.random()
        if roll < 0.3:
            pred = ref
        elif roll < 0.6:
            pred = perturb_whitespace(ref, language, rng)
        else:
            pred = ref.replace("+", "-", 1) if "+" in ref else ref.replace("1", "2", 1)
        pairs.append((pred, ref))
    return pairs[:20]


def oracle_components(pred: str, ref: str, language: str) -> dict[str, float]:
    cand = lex_tokens(pred, language)
    refs = lex_tokens(ref, language)
    if not cand:
        return {"ngram": 0.0, "weighted_ngram": 0.0, "ast_match": 0.0, "dataflow_match": 0.0}
    return {
        "ngram": oracle_bleu(cand, refs, CONFIG.max_order, CONFIG.epsilon),
        "weighted_ngram": oracle_bleu(
            cand, refs, CONFIG.max_order, CONFIG.epsilon,
            keywords=load_keywords(language), kappa=CONFIG.keyword_weight,
        ),
        "ast_match": oracle_ast_match(pred, ref, language, CONFIG.min_subtree_height),
        "dataflow_match": oracle_dataflow_match(pred, ref, language),
    }


def make_metric_golden() -> None:
    entries = []
    for language, pairs in ((lang, build_pairs(lang)) for lang in HAND_PAIRS):
        for i, (pred, ref) in enumerate(pairs):
            assert not parse(pred, language).has_errors, (language, pred)
            assert not parse(ref, language).has_errors, (language, ref)
            comps = oracle_components(pred, ref, language)
            entries.append(
                {
                    "id": f"{language}-{i:02d}",
                    "language": language,
                    "prediction": pred,
                    "reference": ref,
                    "components": {k: round(v, 10) for k, v in comps.items()},
                }
            )
    golden = {
        "config": {
            "weights": list(CONFIG.weights),
            "max_order": CONFIG.max_order,
            "keyword_weight": CONFIG.keyword_weight,
            "epsilon": CONFIG.epsilon,
            "min_subtree_height": CONFIG.min_subtree_height,
            "tokenizer": CONFIG.tokenizer,
        },
        "pairs": entries,
    }
    out = ROOT / "tests" / "data" / "metric_golden.json"
    out.write_text(json.dumps(golden, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {len(entries)} golden pairs to {out}")


NAIVE_COPY: list[tuple[str, str, str]] = [
    # (language, buggy, fixed): multi-line single-hunk style fixes
    ("java", "public int area(int w, int h) {\n    int result = w + h;\n    return result;\n}", "public int area(int w, int h) {\n    int result = w * h;\n    return result;\n}"),
    ("java", "int mid = (lo + hi) / 2;\nif (arr[mid] < key) {\n    lo = mid;\n}\nreturn lo;", "int mid = (lo + hi) / 2;\nif (arr[mid] < key) {\n    lo = mid + 1;\n}\nreturn lo;"),
    ("java", "for (int i = 0; i <= n; i++) {\n    total += values[i];\n    count++;\n}", "for (int i = 0; i < n; i++) {\n    total += values[i];\n    count++;\n}"),
    ("java", "if (name == null) {\n    return name.trim();\n}\nreturn name;", "if (name == null) {\n    return \"\";\n}\nreturn name.trim();"),
    ("java", "int balance = getBalance();\nbalance = balance - amount;\nsave(balance);\nreturn balance;", "int balance = getBalance();\nbalance = balance - amount;\nif (balance < 0) {\n    throw new IllegalStateException();\n}\nsave(balance);\nreturn balance;"),
    ("java", "String key = entry.getKey();\nmap.put(key, entry);\nreturn map.size();", "String key = entry.getKey();\nmap.put(key, entry.getValue());\nreturn map.size();"),
    ("java", "while (it.hasNext()) {\n    Object v = it.next();\n    process(v);\n    it.next();\n}", "while (it.hasNext()) {\n    Object v = it.next();\n    process(v);\n}"),
    ("java", "int[] copy = new int[n];\nfor (int i = 1; i < n; i++) {\n    copy[i] = src[i];\n}\nreturn copy;", "int[] copy = new int[n];\nfor (int i = 0; i < n; i++) {\n    copy[i] = src[i];\n}\nreturn copy;"),
    ("python", "def mean(xs):\n    total = sum(xs)\n    return total / (len(xs) - 1)\n", "def mean(xs):\n    total = sum(xs)\n    return total / len(xs)\n"),
    ("python", "def last(items):\n    if not items:\n        return None\n    return items[0]\n", "def last(items):\n    if not items:\n        return None\n    return items[-1]\n"),
    ("python", "count = 0\nfor line in lines:\n    if line.strip():\n        count = 1\nreturn count\n", "count = 0\nfor line in lines:\n    if line.strip():\n        count += 1\nreturn count\n"),
    ("python", "value = cache.get(key)\nif value is None:\n    value = compute(key)\nreturn value\n", "value = cache.get(key)\nif value is None:\n    value = compute(key)\n    cache[key] = value\nreturn value\n"),
    ("python", "def clamp(x, lo, hi):\n    if x < lo:\n        return lo\n    if x > hi:\n        return lo\n    return x\n", "def clamp(x, lo, hi):\n    if x < lo:\n        return lo\n    if x > hi:\n        return hi\n    return x\n"),
    ("python", "total = 0\nfor i in range(1, n):\n    total += i * i\nprint(total)\n", "total = 0\nfor i in range(1, n + 1):\n    total += i * i\nprint(total)\n"),
    ("python", "def is_even(n):\n    return n % 2 == 1\n", "def is_even(n):\n    return n % 2 == 0\n"),
    ("javascript", "function sum(items) {\n    let total = 0;\n    for (let i = 0; i <= items.length; i++) {\n        total += items[i];\n    }\n    return total;\n}", "function sum(items) {\n    let total = 0;\n    for (let i = 0; i < items.length; i++) {\n        total += items[i];\n    }\n    return total;\n}"),
    ("javascript", "const parts = value.split(',');\nconst first = parts[1];\nreturn first.trim();", "const parts = value.split(',');\nconst first = parts[0];\nreturn first.trim();"),
    ("javascript", "if (user == null) {\n    render(user.name);\n}\nreturn user;", "if (user == null) {\n    return null;\n}\nrender(user.name);\nreturn user;"),
    ("javascript", "let retries = 0;\nwhile (retries < 3) {\n    attempt();\n}\nreturn retries;", "let retries = 0;\nwhile (retries < 3) {\n    attempt();\n    retries += 1;\n}\nreturn retries;"),
    ("javascript", "const found = list.find(x => x.id = id);\nreturn found;", "const found = list.find(x => x.id === id);\nreturn found;"),
    ("javascript", "function area(w, h) {\n    const result = w + h;\n    return result;\n}", "function area(w, h) {\n    const result = w * h;\n    return result;\n}"),
    ("javascript", "let cfg = load();\ncfg.debug = true;\nsave();\nreturn cfg;", "let cfg = load();\ncfg.debug = true;\nsave(cfg);\nreturn cfg;"),
    ("c", "int sum = 0;\nfor (i = 0; i <= n; i++) {\n    sum += arr[i];\n}\nreturn sum;", "int sum = 0;\nfor (i = 0; i < n; i++) {\n    sum += arr[i];\n}\nreturn sum;"),
    ("c", "char *buf = malloc(len);\nstrcpy(buf, src);\nreturn buf;", "char *buf = malloc(len + 1);\nstrcpy(buf, src);\nreturn buf;"),
    ("c", "if (ptr = NULL) {\n    return -1;\n}\nreturn ptr->value;", "if (ptr == NULL) {\n    return -1;\n}\nreturn ptr->value;"),
    ("c", "int fd = open(path, flags);\nread(fd, buf, n);\nreturn fd;", "int fd = open(path, flags);\nif (fd < 0) {\n    return -1;\n}\nread(fd, buf, n);\nreturn fd;"),
    ("c", "count = count + skip;\nwhile (count > 0) {\n    consume();\n}\nreturn count;", "count = count + skip;\nwhile (count > 0) {\n    consume();\n    count--;\n}\nreturn count;"),
    ("c", "int area = w + h;\nprintf(\"%d\", area);\nreturn area;", "int area = w * h;\nprintf(\"%d\", area);\nreturn area;"),
    ("python", "def find(items, key):\n    for it in items:\n        if it == key:\n            return it\n    return items\n", "def find(items, key):\n    for it in items:\n        if it == key:\n            return it\n    return None\n"),
    ("java", "long elapsed = end - start;\nreturn elapsed / 1000;", "long elapsed = end - start;\nreturn elapsed / 1000.0;"),
]


def make_naive_copy_corpus() -> None:
    assert len(NAIVE_COPY) == 30, len(NAIVE_COPY)
    records = []
    scores = []
    for i, (language, buggy, fixed) in enumerate(NAIVE_COPY):
        assert not exact_match(buggy, fixed), (language, buggy)
        tb, tf = parse(buggy, language), parse(fixed, language)
        assert not tb.has_errors, (language, buggy)
        assert not tf.has_errors, (language, fixed)
        assert not trees_equal(tb, tf), f"structurally equal: {language} {buggy!r}"
        report = evaluate_pair(f"nc-{i:02d}", buggy, fixed, language, CONFIG)
        assert not report.em and not report.sc
        scores.append(report.codebleu)
        records.append(
            {"id": f"nc-{i:02d}", "language": language, "buggy": buggy, "fixed": fixed}
        )
    mean = sum(scores) / len(scores)
    print(f"naive-copy mean CodeBLEU: {mean:.4f} (min {min(scores):.4f})")
    assert mean >= 0.5, mean
    out = ROOT / "tests" / "data" / "naive_copy_corpus.jsonl"
    with out.open("w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")
    print(f"wrote {len(records)} pairs to {out}")


if __name__ == "__main__":
    make_metric_golden()
    make_naive_copy_corpus()
