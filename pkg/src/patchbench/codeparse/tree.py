"""Syntax tree structures shared by all language parsers.

Trees are plain node records: every node carries a kind label, a byte
span into the original source, and either children (interior nodes) or
a token text (leaves). Parsers never raise on bad input; instead they
emit nodes flagged ``is_error`` so callers can decide how to degrade.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Node:
    kind: str
    children: list["Node"] = field(default_factory=list)
    text: str = ""
    start: int = 0
    end: int = 0
    is_error: bool = False
    # synthetic nodes come from snippet-mode wrapping and are excluded
    # from equivalence / signature / dataflow computations
    synthetic: bool = False

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()

    def leaves(self):
        if self.is_leaf:
            yield self
        else:
            for child in self.children:
                yield from child.leaves()

    def __repr__(self) -> str:  # compact, for debugging only
        if self.is_leaf:
            return f"Node({self.kind!r}, {self.text!r})"
        return f"Node({self.kind!r}, {len(self.children)} children)"


@dataclass
class SyntaxTree:
    root: Node
    language: str
    source: str
    wrapped: bool = False

    @property
    def has_errors(self) -> bool:
        return any(n.is_error for n in self.root.walk())

    def body(self) -> list[Node]:
        """Nodes holding user code, with snippet wrapping peeled off."""
        if not self.wrapped:
            return list(self.root.children)
        return _unwrap(self.root)


def _unwrap(root: Node) -> list[Node]:
    # the wrapper marks exactly one non-synthetic region; find the
    # shallowest node whose subtree is entirely user code
    out: list[Node] = []

    def collect(node: Node) -> None:
        for child in node.children:
            if child.synthetic:
                collect(child)
            else:
                out.append(child)

    collect(root)
    return out


def leaf(kind: str, text: str, start: int, end: int, *, error: bool = False) -> Node:
    return Node(kind=kind, text=text, start=start, end=end, is_error=error)


def interior(kind: str, children: list[Node], *, error: bool = False) -> Node:
    start = children[0].start if children else 0
    end = children[-1].end if children else 0
    return Node(kind=kind, children=children, start=start, end=end, is_error=error)


def strip_comments(nodes: list[Node]) -> list[Node]:
    """Deep-copy a forest with comment nodes removed.

    Stripping happens at tree level so string literals that merely look
    like comments are untouched.
    """
    out = []
    for node in nodes:
        if node.kind == "comment":
            continue
        if node.is_leaf:
            out.append(Node(node.kind, [], node.text, node.start, node.end, node.is_error))
        else:
            kept = strip_comments(node.children)
            out.append(Node(node.kind, kept, "", node.start, node.end, node.is_error))
    return out


def to_sexpr(node: Node) -> str:
    """S-expression dump used by golden tests."""
    if node.is_leaf:
        label = node.kind if not node.is_error else f"ERROR:{node.kind}"
        return f"({label} {node.text!r})" if node.text else f"({label})"
    label = node.kind if not node.is_error else f"ERROR:{node.kind}"
    inner = " ".join(to_sexpr(c) for c in node.children)
    return f"({label} {inner})"
