"""Tree equivalence, subtree signatures, and def-use extraction.

All three operate on comment-stripped body forests, so comments and
snippet wrappers never influence results.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .tree import Node, SyntaxTree, strip_comments

# identifier-bearing leaf kinds whose text is abstracted away in signatures
_ABSTRACT_LEAF_KINDS = frozenset({"identifier", "number", "string", "char"})


def trees_equal(a: SyntaxTree, b: SyntaxTree) -> bool:
    """Isomorphism over comment-stripped trees: equal kinds, equal leaf texts.

    Whitespace never participates (it is not a tree node).
    """
    fa = strip_comments(a.body())
    fb = strip_comments(b.body())
    return _forest_equal(fa, fb)


def _forest_equal(fa: list[Node], fb: list[Node]) -> bool:
    if len(fa) != len(fb):
        return False
    for x, y in zip(fa, fb):
        if x.kind != y.kind:
            return False
        if x.is_leaf != y.is_leaf:
            return False
        if x.is_leaf:
            if x.text != y.text:
                return False
        elif not _forest_equal(x.children, y.children):
            return False
    return True


def subtree_signatures(tree: SyntaxTree, min_height: int = 2) -> Counter:
    """Multiset of canonical signatures of all subtrees with height >= min_height.

    Leaf texts are abstracted to their kind, so ``a + b`` and ``x + y``
    share a signature while ``a + b`` and ``a * b`` do not (operator
    leaves carry their text as kind).
    """
    if min_height < 1:
        raise ValueError("min_height must be >= 1")
    sigs: Counter = Counter()
    for node in strip_comments(tree.body()):
        _collect_signatures(node, min_height, sigs)
    return sigs


def _collect_signatures(node: Node, min_height: int, sigs: Counter) -> tuple[int, str]:
    if node.is_leaf:
        sig = node.kind
        if 1 >= min_height:
            sigs[sig] += 1
        return 1, sig
    height = 1
    parts = []
    for child in node.children:
        child_height, child_sig = _collect_signatures(child, min_height, sigs)
        height = max(height, child_height + 1)
        parts.append(child_sig)
    sig = f"({node.kind} {' '.join(parts)})"
    if height >= min_height:
        sigs[sig] += 1
    return height, sig


# ----------------------------------------------------------------------
# dataflow


@dataclass(frozen=True)
class DataFlowNode:
    name: str
    occurrence: int  # per-name occurrence index, textual order
    role: str  # "def" | "use"
    position: int  # byte offset, for determinism


@dataclass
class DataFlowGraph:
    nodes: list[DataFlowNode] = field(default_factory=list)
    edges: list[tuple[int, int]] = field(default_factory=list)  # def idx -> use idx

    def edge_signatures(self) -> Counter:
        """Edges with variable names normalized to appearance order.

        The signature (var_k, def_occurrence, use_occurrence) lets graphs
        from differently-named but structurally identical fragments match.
        """
        order: dict[str, int] = {}
        for node in self.nodes:
            if node.name not in order:
                order[node.name] = len(order)
        sigs: Counter = Counter()
        for d, u in self.edges:
            nd, nu = self.nodes[d], self.nodes[u]
            sigs[(f"v{order[nd.name]}", nd.occurrence, nu.occurrence)] += 1
        return sigs


def extract_dataflow(tree: SyntaxTree, language: str | None = None) -> DataFlowGraph:
    """Def-use edges with nearest-preceding-definition resolution.

    Flow-insensitive: occurrences are swept in textual order, a use
    links to the latest textual definition of the same name. Function
    and attribute names, type names, and import names are not variable
    occurrences.
    """
    lang = language or tree.language
    events: list[tuple[int, str, str]] = []  # (position, name, role)
    walker = _PyDataflow() if lang == "python" else _CDataflow()
    for node in strip_comments(tree.body()):
        walker.walk(node, "use")
    events = walker.events
    events.sort(key=lambda e: e[0])

    graph = DataFlowGraph()
    occ: dict[str, int] = {}
    last_def: dict[str, int] = {}
    for pos, name, role in events:
        k = occ.get(name, 0)
        occ[name] = k + 1
        idx = len(graph.nodes)
        graph.nodes.append(DataFlowNode(name, k, role, pos))
        if role == "def":
            last_def[name] = idx
        elif name in last_def:
            graph.edges.append((last_def[name], idx))
    return graph


class _DataflowBase:
    def __init__(self) -> None:
        self.events: list[tuple[int, str, str]] = []

    def emit(self, node: Node, role: str) -> None:
        self.events.append((node.start, node.text, role))

    def walk_all(self, nodes: list[Node], role: str) -> None:
        for n in nodes:
            self.walk(n, role)

    def walk(self, node: Node, role: str) -> None:  # overridden
        raise NotImplementedError


class _CDataflow(_DataflowBase):
    def walk(self, node: Node, role: str = "use") -> None:
        kind = node.kind
        if node.is_leaf:
            if kind == "identifier":
                self.emit(node, role)
            return
        if kind in ("type", "generic_arguments", "annotation", "import_statement",
                    "package_statement", "directive", "modifier", "goto_statement"):
            return
        if kind == "declarator":
            seen_name = False
            for child in node.children:
                if child.is_leaf and child.kind == "identifier" and not seen_name:
                    self.emit(child, "def")
                    seen_name = True
                else:
                    self.walk(child, "use")
            return
        if kind == "parameter":
            name = None
            for child in node.children:
                if child.is_leaf and child.kind == "identifier":
                    name = child
            if name is not None:
                self.emit(name, "def")
            return
        if kind == "assignment_expression":
            target, op, rest = node.children[0], node.children[1], node.children[2:]
            compound = op.text != "="
            if target.is_leaf and target.kind == "identifier":
                if compound:
                    self.emit(target, "use")
                self.emit(target, "def")
            else:
                self.walk(target, "use")
            self.walk_all(rest, "use")
            return
        if kind == "update_expression":
            for child in node.children:
                if child.is_leaf and child.kind == "identifier":
                    self.emit(child, "use")
                    self.emit(child, "def")
                else:
                    self.walk(child, "use")
            return
        if kind in ("member_expression", "method_reference"):
            self.walk(node.children[0], "use")  # base only; member name is not a variable
            return
        if kind == "call_expression":
            callee = node.children[0]
            if not (callee.is_leaf and callee.kind == "identifier"):
                self.walk(callee, "use")
            self.walk_all(node.children[1:], "use")
            return
        if kind in ("function_definition", "function_declaration", "function_expression"):
            for child in node.children:
                if child.kind in ("parameter_list", "block"):
                    self.walk(child, "use")
            return
        if kind == "catch_clause":
            for child in node.children:
                if child.is_leaf and child.kind == "identifier":
                    self.emit(child, "def")
                else:
                    self.walk(child, "use")
            return
        if kind == "lambda_expression":
            for child in node.children:
                if child.is_leaf and child.kind == "identifier":
                    self.emit(child, "def")
                else:
                    self.walk(child, "use")
            return
        self.walk_all(node.children, "use")


class _PyDataflow(_DataflowBase):
    def walk(self, node: Node, role: str = "use") -> None:
        kind = node.kind
        if node.is_leaf:
            if kind == "identifier":
                self.emit(node, role)
            return
        if kind in ("import_statement", "global_statement", "nonlocal_statement", "decorator"):
            return
        if kind == "assignment":
            *targets_and_ops, value = node.children
            for child in targets_and_ops:
                if child.kind == "=":
                    continue
                self._target(child)
            self.walk(value, "use")
            return
        if kind == "augmented_assignment":
            target = node.children[0]
            if target.is_leaf and target.kind == "identifier":
                self.emit(target, "use")
                self.emit(target, "def")
            else:
                self.walk(target, "use")
            self.walk_all(node.children[2:], "use")
            return
        if kind == "annotated_assignment":
            self._target(node.children[0])
            self.walk_all(node.children[2:], "use")
            return
        if kind == "for_statement":
            state = "target"
            for child in node.children:
                if child.is_leaf and child.kind == "in":
                    state = "iter"
                    continue
                if state == "target":
                    self._target(child)
                    if not child.is_leaf or child.kind == "identifier":
                        state = "after_target"
                else:
                    self.walk(child, "use")
            return
        if kind == "comprehension":
            state = "head"
            for child in node.children:
                if child.is_leaf and child.kind == "for":
                    state = "target"
                    continue
                if child.is_leaf and child.kind == "in":
                    state = "iter"
                    continue
                if child.is_leaf and child.kind == "if":
                    state = "cond"
                    continue
                if state == "target":
                    self._target(child)
                else:
                    self.walk(child, "use")
            return
        if kind == "attribute":
            self.walk(node.children[0], "use")
            return
        if kind == "call_expression":
            callee = node.children[0]
            if not (callee.is_leaf and callee.kind == "identifier"):
                self.walk(callee, "use")
            self.walk_all(node.children[1:], "use")
            return
        if kind == "keyword_argument":
            self.walk(node.children[-1], "use")
            return
        if kind == "parameter":
            named = False
            for child in node.children:
                if child.is_leaf and child.kind == "identifier" and not named:
                    self.emit(child, "def")
                    named = True
                elif not child.is_leaf:
                    self.walk(child, "use")
            return
        if kind in ("function_definition", "class_definition"):
            for child in node.children:
                if child.kind in ("parameter_list", "block", "argument_list"):
                    self.walk(child, "use")
            return
        if kind == "with_statement":
            prev_as = False
            for child in node.children:
                if child.is_leaf and child.kind == "as":
                    prev_as = True
                    continue
                if child.is_leaf:
                    continue
                if prev_as:
                    self._target(child)
                    prev_as = False
                else:
                    self.walk(child, "use")
            return
        if kind == "except_clause":
            prev_as = False
            for child in node.children:
                if child.is_leaf and child.kind == "as":
                    prev_as = True
                    continue
                if child.is_leaf and child.kind == "identifier" and prev_as:
                    self.emit(child, "def")
                    prev_as = False
                    continue
                if not child.is_leaf:
                    self.walk(child, "use")
            return
        if kind == "walrus_expression":
            self._target(node.children[0])
            self.walk_all(node.children[2:], "use")
            return
        self.walk_all(node.children, "use")

    def _target(self, node: Node) -> None:
        if node.is_leaf:
            if node.kind == "identifier":
                self.emit(node, "def")
            return
        if node.kind in ("tuple_expression", "list_literal", "parenthesized_expression", "splat_expression"):
            for child in node.children:
                self._target(child)
            return
        if node.kind in ("index_expression", "attribute"):
            # x[i] = v / x.f = v : base and index are uses, nothing is defined
            self.walk(node, "use")
            return
        self.walk(node, "use")
