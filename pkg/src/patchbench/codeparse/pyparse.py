"""Error-recovering structural parser for python fragments.

Lexing is delegated to the stdlib ``tokenize`` module so string forms,
implicit line joining, and indentation are handled exactly as CPython
does. NEWLINE / INDENT / DEDENT drive block structure but never appear
as tree leaves (whitespace is not a tree node); ``;`` separators do.
"""

from __future__ import annotations

import io
import keyword
import tokenize
from dataclasses import dataclass

from .tree import Node, interior, leaf

_COMPOUND = frozenset("if while for try with def class async match".split())
_SIMPLE_KW = frozenset(
    "return pass break continue raise global nonlocal del assert import from yield lambda".split()
)

_COMPARE_OPS = frozenset("< > <= >= == != in is".split())
_AUG_OPS = frozenset("+= -= *= /= //= %= @= &= |= ^= >>= <<= **=".split())


@dataclass
class PyTok:
    kind: str  # identifier|keyword|number|string|punct|comment|newline|indent|dedent|error
    text: str
    start: int
    end: int


def lex_python(code: str) -> tuple[list[PyTok], bool]:
    offsets = [0]
    for line in code.splitlines(keepends=True):
        offsets.append(offsets[-1] + len(line))

    def abspos(row: int, col: int) -> int:
        if row - 1 >= len(offsets):
            return len(code)
        return min(offsets[row - 1] + col, len(code))

    toks: list[PyTok] = []
    had_error = False
    gen = tokenize.generate_tokens(io.StringIO(code).readline)
    while True:
        try:
            tok = next(gen)
        except StopIteration:
            break
        except (tokenize.TokenError, IndentationError, SyntaxError):
            had_error = True
            break
        ttype, text, (srow, scol), (erow, ecol), _ = tok
        start, end = abspos(srow, scol), abspos(erow, ecol)
        if ttype == tokenize.NAME:
            kind = "keyword" if keyword.iskeyword(text) else "identifier"
            toks.append(PyTok(kind, text, start, end))
        elif ttype == tokenize.NUMBER:
            toks.append(PyTok("number", text, start, end))
        elif ttype == tokenize.STRING:
            toks.append(PyTok("string", text, start, end))
        elif ttype == tokenize.OP:
            toks.append(PyTok("punct", text, start, end))
        elif ttype == tokenize.COMMENT:
            toks.append(PyTok("comment", text, start, end))
        elif ttype == tokenize.NEWLINE:
            toks.append(PyTok("newline", text, start, end))
        elif ttype == tokenize.INDENT:
            toks.append(PyTok("indent", text, start, end))
        elif ttype == tokenize.DEDENT:
            toks.append(PyTok("dedent", text, start, end))
        elif ttype == tokenize.ERRORTOKEN:
            if text.strip():
                toks.append(PyTok("error", text, start, end))
                had_error = True
        # NL / ENDMARKER / ENCODING are dropped
    return toks, had_error


def parse_python(code: str) -> Node:
    toks, had_error = lex_python(code)
    parser = _PyParser(toks)
    root = parser.parse_module()
    if had_error:
        off = len(code)
        root.children.append(leaf("lex_error", "", off, off, error=True))
        root.is_error = True
    return root


class _PyParser:
    def __init__(self, tokens: list[PyTok]):
        self.comments: list[tuple[int, PyTok]] = []
        toks: list[PyTok] = []
        for t in tokens:
            if t.kind == "comment":
                self.comments.append((len(toks), t))
            else:
                toks.append(t)
        self.toks = toks
        self.pos = 0
        self._flushed = 0

    def peek(self, k: int = 0) -> PyTok | None:
        i = self.pos + k
        return self.toks[i] if i < len(self.toks) else None

    def at(self, *texts: str) -> bool:
        t = self.peek()
        return t is not None and t.text in texts and t.kind in ("punct", "keyword")

    def at_kind(self, *kinds: str) -> bool:
        t = self.peek()
        return t is not None and t.kind in kinds

    def eof(self) -> bool:
        return self.pos >= len(self.toks)

    def take(self) -> Node:
        t = self.toks[self.pos]
        self.pos += 1
        if t.kind in ("keyword", "punct"):
            return leaf(t.text, t.text, t.start, t.end)
        if t.kind == "error":
            return leaf("error", t.text, t.start, t.end, error=True)
        return leaf(t.kind, t.text, t.start, t.end)

    def skip_structural(self) -> None:
        while self.at_kind("newline"):
            self.pos += 1

    def expect(self, text: str) -> Node:
        if self.at(text):
            return self.take()
        here = self.peek()
        off = here.start if here else (self.toks[-1].end if self.toks else 0)
        return leaf("missing", "", off, off, error=True)

    def _missing(self) -> Node:
        off = self.toks[-1].end if self.toks else 0
        return leaf("missing", "", off, off, error=True)

    # ------------------------------------------------------------------

    def parse_module(self) -> Node:
        stmts = self.parse_statements(top=True)
        self._flush_comments(stmts, len(self.toks))
        node = interior("program", stmts)
        if not stmts:
            node.start = node.end = 0
        return node

    def parse_statements(self, top: bool = False) -> list[Node]:
        out: list[Node] = []
        while not self.eof():
            t = self.peek()
            if t.kind == "dedent":
                if top:
                    self.pos += 1  # stray dedent at top level
                    continue
                break
            if t.kind == "newline":
                self.pos += 1
                continue
            if t.kind == "indent":
                if top:
                    self.pos += 1  # indented fragment tolerated at top level
                    continue
                break
            self._flush_comments(out, self.pos)
            before = self.pos
            out.extend(self.parse_statement_line())
            if self.pos == before:
                out.append(self._error_take())
        return out

    def _error_take(self) -> Node:
        t = self.toks[self.pos]
        self.pos += 1
        return leaf("error", t.text, t.start, t.end, error=True)

    def _flush_comments(self, into: list[Node], upto: int) -> None:
        while self._flushed < len(self.comments) and self.comments[self._flushed][0] <= upto:
            t = self.comments[self._flushed][1]
            into.append(leaf("comment", t.text, t.start, t.end))
            self._flushed += 1

    def parse_statement_line(self) -> list[Node]:
        t = self.peek()
        if t is None:
            return []
        if t.kind == "keyword" and t.text in _COMPOUND and t.text != "lambda":
            return [self.parse_compound()]
        if t.kind == "punct" and t.text == "@":
            return [self.parse_decorated()]
        # simple statements, possibly ';'-separated on one line
        out = [self.parse_simple_statement()]
        while self.at(";"):
            out.append(self.take())
            if self.at_kind("newline") or self.eof():
                break
            out.append(self.parse_simple_statement())
        if self.at_kind("newline"):
            self.pos += 1
        return out

    def parse_decorated(self) -> Node:
        kids: list[Node] = []
        while self.at("@"):
            dkids = [self.take(), self.parse_postfix()]
            kids.append(interior("decorator", dkids))
            if self.at_kind("newline"):
                self.pos += 1
        if not self.eof() and self.peek().text in ("def", "class", "async"):
            kids.append(self.parse_compound())
        else:
            kids.append(self._missing())
        return interior("decorated_definition", kids)

    # ------------------------------------------------------------------
    # compound statements

    def parse_compound(self) -> Node:
        t = self.peek()
        assert t is not None
        if t.text == "async":
            first = self.take()
            inner = self.parse_compound() if not self.eof() else self._missing()
            inner.children.insert(0, first)
            inner.start = first.start
            return inner
        if t.text == "if":
            kids = [self.take(), self.parse_expression_list(), self.expect(":"), self.parse_suite()]
            while self.at("elif"):
                kids.extend([self.take(), self.parse_expression_list(), self.expect(":"), self.parse_suite()])
            if self.at("else"):
                kids.extend([self.take(), self.expect(":"), self.parse_suite()])
            return interior("if_statement", kids)
        if t.text == "while":
            kids = [self.take(), self.parse_expression_list(), self.expect(":"), self.parse_suite()]
            if self.at("else"):
                kids.extend([self.take(), self.expect(":"), self.parse_suite()])
            return interior("while_statement", kids)
        if t.text == "for":
            kids = [self.take(), self.parse_target_list(), self.expect("in"), self.parse_expression_list(), self.expect(":"), self.parse_suite()]
            if self.at("else"):
                kids.extend([self.take(), self.expect(":"), self.parse_suite()])
            return interior("for_statement", kids)
        if t.text == "try":
            kids = [self.take(), self.expect(":"), self.parse_suite()]
            while self.at("except"):
                ekids = [self.take()]
                if not self.at(":"):
                    ekids.append(self.parse_expression())
                    if self.at("as"):
                        ekids.append(self.take())
                        ekids.append(self.take() if self.at_kind("identifier") else self._missing())
                ekids.append(self.expect(":"))
                ekids.append(self.parse_suite())
                kids.append(interior("except_clause", ekids))
            if self.at("else"):
                kids.extend([self.take(), self.expect(":"), self.parse_suite()])
            if self.at("finally"):
                kids.extend([self.take(), self.expect(":"), self.parse_suite()])
            return interior("try_statement", kids)
        if t.text == "with":
            kids = [self.take()]
            kids.append(self.parse_expression())
            if self.at("as"):
                kids.append(self.take())
                kids.append(self.parse_expression())
            while self.at(","):
                kids.append(self.take())
                kids.append(self.parse_expression())
                if self.at("as"):
                    kids.append(self.take())
                    kids.append(self.parse_expression())
            kids.append(self.expect(":"))
            kids.append(self.parse_suite())
            return interior("with_statement", kids)
        if t.text == "def":
            kids = [self.take()]
            kids.append(self.take() if self.at_kind("identifier") else self._missing())
            kids.append(self.parse_parameter_list())
            if self.at("->"):
                kids.append(self.take())
                kids.append(self.parse_expression())
            kids.append(self.expect(":"))
            kids.append(self.parse_suite())
            return interior("function_definition", kids)
        if t.text == "class":
            kids = [self.take()]
            kids.append(self.take() if self.at_kind("identifier") else self._missing())
            if self.at("("):
                kids.append(self.parse_argument_list())
            kids.append(self.expect(":"))
            kids.append(self.parse_suite())
            return interior("class_definition", kids)
        if t.text == "match":  # parsed loosely: match/case as generic compound
            kids = [self.take(), self.parse_expression_list(), self.expect(":"), self.parse_suite()]
            return interior("match_statement", kids)
        return self._error_take()

    def parse_parameter_list(self) -> Node:
        kids = [self.expect("(")]
        while not self.eof() and not self.at(")"):
            pkids: list[Node] = []
            while self.at("*", "**", "/"):
                pkids.append(self.take())
            if self.at_kind("identifier"):
                pkids.append(self.take())
            if self.at(":"):
                pkids.append(self.take())
                pkids.append(self.parse_ternary())
            if self.at("="):
                pkids.append(self.take())
                pkids.append(self.parse_ternary())
            if not pkids:
                pkids.append(self._error_take())
            kids.append(interior("parameter", pkids))
            if self.at(","):
                kids.append(self.take())
        kids.append(self.expect(")"))
        return interior("parameter_list", kids)

    def parse_suite(self) -> Node:
        if self.at_kind("newline"):
            self.pos += 1
            kids: list[Node] = []
            if self.at_kind("indent"):
                self.pos += 1
                kids.extend(self.parse_statements())
                self._flush_comments(kids, self.pos)
                if self.at_kind("dedent"):
                    self.pos += 1
            else:
                kids.append(self._missing())
            return interior("block", kids) if kids else Node("block", [], is_error=True)
        # inline suite on the same line
        kids = []
        kids.extend(self.parse_statement_line())
        return interior("block", kids) if kids else Node("block", [self._missing()], is_error=True)

    # ------------------------------------------------------------------
    # simple statements

    def parse_simple_statement(self) -> Node:
        t = self.peek()
        assert t is not None
        text = t.text
        if t.kind == "keyword":
            if text == "return":
                kids = [self.take()]
                if not self._at_line_end():
                    kids.append(self.parse_expression_list())
                return interior("return_statement", kids)
            if text in ("pass", "break", "continue"):
                return interior(f"{text}_statement", [self.take()])
            if text == "raise":
                kids = [self.take()]
                if not self._at_line_end():
                    kids.append(self.parse_expression())
                    if self.at("from"):
                        kids.append(self.take())
                        kids.append(self.parse_expression())
                return interior("raise_statement", kids)
            if text in ("global", "nonlocal"):
                kids = [self.take()]
                while self.at_kind("identifier"):
                    kids.append(self.take())
                    if self.at(","):
                        kids.append(self.take())
                return interior(f"{text}_statement", kids)
            if text == "del":
                return interior("delete_statement", [self.take(), self.parse_expression_list()])
            if text == "assert":
                kids = [self.take(), self.parse_expression()]
                if self.at(","):
                    kids.append(self.take())
                    kids.append(self.parse_expression())
                return interior("assert_statement", kids)
            if text in ("import", "from"):
                kids = [self.take()]
                while not self._at_line_end() and not self.at(";"):
                    kids.append(self.take())
                return interior("import_statement", kids)
            if text == "yield":
                return interior("expression_statement", [self.parse_expression()])
        return self.parse_assignment_or_expression()

    def _at_line_end(self) -> bool:
        t = self.peek()
        return t is None or t.kind in ("newline", "dedent") or (t.kind == "punct" and t.text == ";")

    def parse_assignment_or_expression(self) -> Node:
        first = self.parse_expression_list()
        t = self.peek()
        if t is not None and t.kind == "punct" and t.text == "=":
            kids = [first]
            while self.at("="):
                kids.append(self.take())
                kids.append(self.parse_expression_list())
            return interior("assignment", kids)
        if t is not None and t.kind == "punct" and t.text in _AUG_OPS:
            return interior("augmented_assignment", [first, self.take(), self.parse_expression_list()])
        if t is not None and t.kind == "punct" and t.text == ":":
            kids = [first, self.take(), self.parse_ternary()]
            if self.at("="):
                kids.append(self.take())
                kids.append(self.parse_expression_list())
            return interior("annotated_assignment", kids)
        return interior("expression_statement", [first])

    # ------------------------------------------------------------------
    # expressions

    def parse_expression_list(self) -> Node:
        first = self.parse_expression()
        if self.at(","):
            kids = [first]
            while self.at(","):
                kids.append(self.take())
                if self._expr_start():
                    kids.append(self.parse_expression())
            return interior("tuple_expression", kids)
        return first

    def parse_target_list(self) -> Node:
        # assignment / loop targets: `in` and `if` must not be consumed here
        first = self.parse_target_atom()
        if self.at(","):
            kids = [first]
            while self.at(","):
                kids.append(self.take())
                if self._expr_start():
                    kids.append(self.parse_target_atom())
            return interior("tuple_expression", kids)
        return first

    def parse_target_atom(self) -> Node:
        if self.at("*"):
            return interior("splat_expression", [self.take(), self.parse_target_atom()])
        return self.parse_postfix()

    def _expr_start(self) -> bool:
        t = self.peek()
        if t is None or t.kind in ("newline", "dedent", "indent"):
            return False
        if t.kind == "punct" and t.text in (")", "]", "}", ";", ":", "="):
            return False
        if t.kind == "keyword" and t.text in ("in", "if", "else", "for", "as", "from", "import"):
            return False
        return True

    def parse_expression(self) -> Node:
        if self.at("lambda"):
            kids = [self.take()]
            while not self.eof() and not self.at(":") and not self.at_kind("newline"):
                kids.append(self.take())
            kids.append(self.expect(":"))
            kids.append(self.parse_expression())
            return interior("lambda_expression", kids)
        if self.at("yield"):
            kids = [self.take()]
            if self.at("from"):
                kids.append(self.take())
            if self._expr_start():
                kids.append(self.parse_expression())
            return interior("yield_expression", kids)
        if self.at("*", "**"):
            return interior("splat_expression", [self.take(), self.parse_expression()])
        node = self.parse_or()
        if self.at("if"):
            kids = [node, self.take(), self.parse_or()]
            kids.append(self.expect("else"))
            kids.append(self.parse_expression())
            return interior("conditional_expression", kids)
        if self.at(":="):
            return interior("walrus_expression", [node, self.take(), self.parse_expression()])
        return node

    def parse_or(self) -> Node:
        node = self.parse_and()
        while self.at("or"):
            node = interior("boolean_expression", [node, self.take(), self.parse_and()])
        return node

    def parse_and(self) -> Node:
        node = self.parse_not()
        while self.at("and"):
            node = interior("boolean_expression", [node, self.take(), self.parse_not()])
        return node

    def parse_not(self) -> Node:
        if self.at("not"):
            return interior("not_expression", [self.take(), self.parse_not()])
        return self.parse_comparison()

    def parse_comparison(self) -> Node:
        node = self.parse_bitor()
        kids = [node]
        while True:
            t = self.peek()
            if t is None:
                break
            if t.text in _COMPARE_OPS and t.kind in ("punct", "keyword"):
                if t.text == "is":
                    kids.append(self.take())
                    if self.at("not"):
                        kids.append(self.take())
                elif t.text == "in":
                    kids.append(self.take())
                else:
                    kids.append(self.take())
                kids.append(self.parse_bitor())
            elif t.text == "not" and t.kind == "keyword" and (n := self.peek(1)) is not None and n.text == "in":
                kids.append(self.take())
                kids.append(self.take())
                kids.append(self.parse_bitor())
            else:
                break
        if len(kids) == 1:
            return node
        return interior("comparison", kids)

    def _binary_tier(self, ops: tuple[str, ...], next_fn) -> Node:
        node = next_fn()
        while True:
            t = self.peek()
            if t is None or t.kind != "punct" or t.text not in ops:
                break
            node = interior("binary_expression", [node, self.take(), next_fn()])
        return node

    def parse_bitor(self) -> Node:
        return self._binary_tier(("|",), self.parse_bitxor)

    def parse_bitxor(self) -> Node:
        return self._binary_tier(("^",), self.parse_bitand)

    def parse_bitand(self) -> Node:
        return self._binary_tier(("&",), self.parse_shift)

    def parse_shift(self) -> Node:
        return self._binary_tier(("<<", ">>"), self.parse_arith)

    def parse_arith(self) -> Node:
        return self._binary_tier(("+", "-"), self.parse_term)

    def parse_term(self) -> Node:
        return self._binary_tier(("*", "/", "//", "%", "@"), self.parse_unary)

    def parse_unary(self) -> Node:
        if self.at("+", "-", "~"):
            return interior("unary_expression", [self.take(), self.parse_unary()])
        if self.at("await"):
            return interior("await_expression", [self.take(), self.parse_unary()])
        return self.parse_power()

    def parse_power(self) -> Node:
        node = self.parse_postfix()
        if self.at("**"):
            return interior("binary_expression", [node, self.take(), self.parse_unary()])
        return node

    def parse_postfix(self) -> Node:
        node = self.parse_primary()
        while True:
            t = self.peek()
            if t is None or t.kind != "punct":
                break
            if t.text == ".":
                nxt = self.peek(1)
                if nxt is not None and nxt.kind in ("identifier", "keyword"):
                    node = interior("attribute", [node, self.take(), self.take()])
                    continue
                node = interior("attribute", [node, self.take(), self._missing()], error=True)
                continue
            if t.text == "(":
                node = interior("call_expression", [node, self.parse_argument_list()])
                continue
            if t.text == "[":
                kids = [node, self.take()]
                if not self.at("]"):
                    kids.append(self.parse_subscript())
                kids.append(self.expect("]"))
                node = interior("index_expression", kids)
                continue
            break
        return node

    def parse_subscript(self) -> Node:
        kids: list[Node] = []
        while not self.eof() and not self.at("]"):
            if self.at(":"):
                kids.append(self.take())
            elif self.at(","):
                kids.append(self.take())
            else:
                kids.append(self.parse_ternary())
        if len(kids) == 1 and kids[0].kind not in (":",):
            return kids[0]
        return interior("subscript", kids) if kids else self._missing()

    def parse_ternary(self) -> Node:
        return self.parse_expression()

    def parse_argument_list(self) -> Node:
        kids = [self.expect("(")]
        while not self.eof() and not self.at(")"):
            if self.at("*", "**"):
                kids.append(interior("splat_expression", [self.take(), self.parse_ternary()]))
            elif (
                self.at_kind("identifier")
                and (n := self.peek(1)) is not None
                and n.kind == "punct"
                and n.text == "="
            ):
                kids.append(interior("keyword_argument", [self.take(), self.take(), self.parse_ternary()]))
            else:
                arg = self.parse_ternary()
                if self.at("for", "async"):
                    arg = self.parse_comprehension_rest(arg)
                kids.append(arg)
            if self.at(","):
                kids.append(self.take())
            elif not self.at(")"):
                kids.append(self._error_take() if not self.eof() else self._missing())
        kids.append(self.expect(")"))
        return interior("argument_list", kids)

    def parse_comprehension_rest(self, first: Node) -> Node:
        kids = [first]
        while self.at("for", "async", "if"):
            if self.at("async"):
                kids.append(self.take())
                continue
            if self.at("for"):
                kids.append(self.take())
                kids.append(self.parse_target_list())
                kids.append(self.expect("in"))
                kids.append(self.parse_or())
            else:
                kids.append(self.take())
                kids.append(self.parse_or())
        return interior("comprehension", kids)

    def parse_primary(self) -> Node:
        t = self.peek()
        if t is None:
            return self._missing()
        if t.kind in ("number", "identifier"):
            return self.take()
        if t.kind == "string":
            first = self.take()
            if self.at_kind("string"):
                kids = [first]
                while self.at_kind("string"):
                    kids.append(self.take())
                return interior("concatenated_string", kids)
            return first
        if t.kind == "keyword" and t.text in ("True", "False", "None"):
            return self.take()
        if t.kind == "punct" and t.text == "(":
            kids = [self.take()]
            if self.at(")"):
                kids.append(self.take())
                return interior("tuple_expression", kids)
            inner = self.parse_expression()
            if self.at("for", "async"):
                kids.append(self.parse_comprehension_rest(inner))
                kids.append(self.expect(")"))
                return interior("generator_expression", kids)
            if self.at(","):
                kids.append(inner)
                while self.at(","):
                    kids.append(self.take())
                    if not self.at(")"):
                        kids.append(self.parse_expression())
                kids.append(self.expect(")"))
                return interior("tuple_expression", kids)
            kids.append(inner)
            kids.append(self.expect(")"))
            return interior("parenthesized_expression", kids)
        if t.kind == "punct" and t.text == "[":
            kids = [self.take()]
            if not self.at("]"):
                inner = self.parse_expression()
                if self.at("for", "async"):
                    inner = self.parse_comprehension_rest(inner)
                kids.append(inner)
                while self.at(","):
                    kids.append(self.take())
                    if not self.at("]"):
                        kids.append(self.parse_expression())
            kids.append(self.expect("]"))
            return interior("list_literal", kids)
        if t.kind == "punct" and t.text == "{":
            return self.parse_braced()
        if t.kind == "keyword":
            # keyword in expression position: tolerate as leaf
            return self.take()
        return self._error_take()

    def parse_braced(self) -> Node:
        kids = [self.take()]  # '{'
        kind = "set_literal"
        if self.at("}"):
            kids.append(self.take())
            return interior("dict_literal", kids)
        first = self.parse_ternary()
        if self.at(":"):
            kind = "dict_literal"
            pair = interior("pair", [first, self.take(), self.parse_ternary()])
            if self.at("for", "async"):
                pair = self.parse_comprehension_rest(pair)
                kind = "dict_comprehension"
            kids.append(pair)
        else:
            if self.at("for", "async"):
                first = self.parse_comprehension_rest(first)
                kind = "set_comprehension"
            kids.append(first)
        while self.at(","):
            kids.append(self.take())
            if self.at("}"):
                break
            item = self.parse_ternary()
            if self.at(":"):
                item = interior("pair", [item, self.take(), self.parse_ternary()])
            kids.append(item)
        kids.append(self.expect("}"))
        return interior(kind, kids)
