"""Multi-language fragment parsing for repair metrics.

Supports java, python, javascript, and c. ``parse`` never raises on bad
code: problems surface as ``is_error`` nodes and ``tree.has_errors``.
All entry points are pure functions over immutable inputs, so they are
safe to call concurrently from any number of threads.

Snippet mode (the default) first parses the fragment bare; if that
leaves errors it retries with a documented wrapper (a synthetic class /
function shell for the C-family languages, a dedent pass for python)
and keeps whichever parse has fewer problems. Wrapper nodes are marked
synthetic and excluded from equivalence, signatures, and dataflow.
"""

from __future__ import annotations

import textwrap

from . import clex
from .analysis import DataFlowGraph, DataFlowNode, extract_dataflow, subtree_signatures, trees_equal
from .cparse import parse_cfamily
from .pyparse import lex_python, parse_python
from .tree import Node, SyntaxTree, to_sexpr

LANGUAGES = ("java", "python", "javascript", "c")

_WRAPPERS = {
    "java": ("class __Snippet__ { void __snippet__() { ", " } }"),
    "c": ("void __snippet__() { ", " }"),
    "javascript": ("function __snippet__() { ", " }"),
}


class UnsupportedLanguageError(ValueError):
    pass


def parse(code: str, language: str, snippet: bool = True) -> SyntaxTree:
    if language not in LANGUAGES:
        raise UnsupportedLanguageError(f"unsupported language: {language!r}")
    tree = _bare_parse(code, language)
    if not snippet or not tree.has_errors:
        return tree
    if language == "python":
        dedented = textwrap.dedent(code)
        if dedented != code:
            retry = _bare_parse(dedented, language)
            if not retry.has_errors:
                return retry
        return tree
    prefix, suffix = _WRAPPERS[language]
    wrapped_src = prefix + code + suffix
    try:
        root = parse_cfamily(wrapped_src, language)
    except RecursionError:
        return tree
    wtree = SyntaxTree(root, language, wrapped_src, wrapped=True)
    _mark_synthetic(root, len(prefix), len(prefix) + len(code))
    if _error_count(wtree) < _error_count(tree):
        return wtree
    return tree


def _bare_parse(code: str, language: str) -> SyntaxTree:
    try:
        root = parse_python(code) if language == "python" else parse_cfamily(code, language)
    except RecursionError:
        root = _flat_token_tree(code, language)
    return SyntaxTree(root, language, code)


def _flat_token_tree(code: str, language: str) -> Node:
    # nesting beyond the recursion limit degrades to a flat, flagged token run
    from .tree import interior, leaf

    if language == "python":
        toks, _ = lex_python(code)
        leaves = [
            leaf(t.kind if t.kind in ("identifier", "number", "string", "comment") else t.text,
                 t.text, t.start, t.end)
            for t in toks
            if t.kind not in ("newline", "indent", "dedent")
        ]
    else:
        leaves = [
            leaf(t.kind if t.kind in ("identifier", "number", "string", "char", "comment") else t.text,
                 t.text, t.start, t.end)
            for t in clex.lex(code, language)
        ]
    marker = leaf("depth_limit", "", len(code), len(code), error=True)
    return interior("program", leaves + [marker], error=True)


def _mark_synthetic(node: Node, lo: int, hi: int) -> None:
    if node.is_leaf:
        inside = node.start >= lo and node.end <= hi and not (node.start == node.end == lo)
        node.synthetic = not inside
        return
    for child in node.children:
        _mark_synthetic(child, lo, hi)
    node.synthetic = any(c.synthetic for c in node.children)


def _error_count(tree: SyntaxTree) -> int:
    roots = tree.body() if tree.wrapped else [tree.root]
    n = 0
    for r in roots:
        n += sum(1 for x in r.walk() if x.is_error)
    return n


def lex_tokens(code: str, language: str) -> list[str]:
    """Language-aware token texts with comments dropped; feeds the BLEU terms."""
    if language not in LANGUAGES:
        raise UnsupportedLanguageError(f"unsupported language: {language!r}")
    if language == "python":
        toks, _ = lex_python(code)
        return [t.text for t in toks if t.kind not in ("comment", "newline", "indent", "dedent") and t.text]
    return [t.text for t in clex.lex(code, language) if t.kind != "comment"]


__all__ = [
    "LANGUAGES",
    "DataFlowGraph",
    "DataFlowNode",
    "Node",
    "SyntaxTree",
    "UnsupportedLanguageError",
    "extract_dataflow",
    "lex_tokens",
    "parse",
    "subtree_signatures",
    "to_sexpr",
    "trees_equal",
]
