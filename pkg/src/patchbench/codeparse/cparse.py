"""Error-recovering structural parser for java, c, and javascript fragments.

This is a fragment parser: any statement is legal at top level, so bare
hunks like ``return a - b;`` parse without wrapping. It produces a
concrete tree (every consumed token survives as a leaf) with enough
structure for tree equivalence, subtree signatures, and def-use
extraction. On malformed input it emits ``is_error`` nodes and keeps
going; it never raises.

Node kinds are this package's own vocabulary and are pinned by golden
tests; they are not tied to any external grammar.
"""

from __future__ import annotations

from .clex import Token, lex
from .tree import Node, interior, leaf

MODIFIERS = {
    "java": frozenset(
        "public private protected static final abstract native synchronized transient volatile strictfp default sealed".split()
    ),
    "c": frozenset("static extern const volatile inline register auto signed unsigned restrict".split()),
    "javascript": frozenset("static async".split()),
}

PRIMITIVE_TYPES = {
    "java": frozenset("boolean byte char short int long float double void var".split()),
    "c": frozenset("void char short int long float double signed unsigned _Bool struct union enum".split()),
    "javascript": frozenset(),
}

# binary operator tiers, loosest first
_BINARY_TIERS = [
    ("||", "??"),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!=", "===", "!=="),
    ("<", ">", "<=", ">=", "instanceof", "in"),
    ("<<", ">>", ">>>"),
    ("+", "-"),
    ("*", "/", "%"),
    ("**",),
]

_ASSIGN_OPS = frozenset(
    "= += -= *= /= %= &= |= ^= <<= >>= >>>= &&= ||= ??= **=".split()
)

_UNARY_OPS = {
    "java": frozenset("+ - ! ~ ++ --".split()),
    "c": frozenset("+ - ! ~ ++ -- * &".split()),
    "javascript": frozenset("+ - ! ~ ++ -- typeof delete void await".split()),
}


def parse_cfamily(code: str, language: str) -> Node:
    return _Parser(lex(code, language), language).parse_program()


class _Parser:
    def __init__(self, tokens: list[Token], language: str):
        self.comments: list[tuple[int, Token]] = []
        toks: list[Token] = []
        for t in tokens:
            if t.kind == "comment":
                self.comments.append((len(toks), t))
            else:
                toks.append(t)
        self.toks = toks
        self.lang = language
        self.pos = 0
        self._flushed = 0  # comments emitted so far

    # ------------------------------------------------------------------
    # token access

    def peek(self, k: int = 0) -> Token | None:
        i = self.pos + k
        return self.toks[i] if i < len(self.toks) else None

    def at(self, *texts: str) -> bool:
        t = self.peek()
        return t is not None and t.text in texts

    def at_kind(self, *kinds: str) -> bool:
        t = self.peek()
        return t is not None and t.kind in kinds

    def eof(self) -> bool:
        return self.pos >= len(self.toks)

    def take(self) -> Node:
        t = self.toks[self.pos]
        self.pos += 1
        return _leaf_of(t)

    def expect(self, text: str) -> Node:
        if self.at(text):
            return self.take()
        here = self.peek()
        offset = here.start if here else (self.toks[-1].end if self.toks else 0)
        return leaf("missing", "", offset, offset, error=True)

    def error_leaf_here(self) -> Node:
        if self.eof():
            return self._missing()
        t = self.toks[self.pos]
        self.pos += 1
        return leaf(t.kind if t.kind != "error" else "error", t.text, t.start, t.end, error=True)

    # ------------------------------------------------------------------

    def parse_program(self) -> Node:
        stmts = self.parse_statements_until(None)
        self._flush_comments(stmts, len(self.toks))
        node = interior("program", stmts)
        if not stmts:
            node.start = node.end = 0
        return node

    def parse_statements_until(self, closer: str | None) -> list[Node]:
        out: list[Node] = []
        while not self.eof():
            if closer is not None and self.at(closer):
                break
            self._flush_comments(out, self.pos)
            before = self.pos
            out.append(self.parse_statement())
            if self.pos == before:  # guarantee progress on pathological input
                out.append(self.error_leaf_here())
        return out

    def _flush_comments(self, into: list[Node], upto: int) -> None:
        while self._flushed < len(self.comments) and self.comments[self._flushed][0] <= upto:
            t = self.comments[self._flushed][1]
            into.append(leaf("comment", t.text, t.start, t.end))
            self._flushed += 1

    # ------------------------------------------------------------------
    # statements

    def parse_statement(self) -> Node:
        t = self.peek()
        assert t is not None
        text = t.text
        if text == "{":
            return self.parse_block()
        if text == ";":
            return interior("empty_statement", [self.take()])
        if text == "if":
            return self.parse_if()
        if text == "while":
            return self.parse_while()
        if text == "do":
            return self.parse_do()
        if text == "for":
            return self.parse_for()
        if text == "switch":
            return self.parse_switch()
        if text in ("case", "default") and (
            text == "case" or (self.peek(1) is not None and self.peek(1).text == ":")
        ):
            # hunks cut from switch bodies start at a bare label
            return self.parse_case_clause()
        if text == "return":
            return self.parse_simple_valued("return_statement")
        if text == "throw":
            return self.parse_simple_valued("throw_statement")
        if text in ("break", "continue"):
            kids = [self.take()]
            if self.at_kind("identifier"):
                kids.append(self.take())
            kids.append(self.expect(";"))
            return interior(f"{text}_statement", kids)
        if text == "goto":
            kids = [self.take()]
            if self.at_kind("identifier"):
                kids.append(self.take())
            kids.append(self.expect(";"))
            return interior("goto_statement", kids)
        if text == "try":
            return self.parse_try()
        if text == "synchronized" and self.lang == "java" and self.peek(1) and self.peek(1).text == "(":
            kids = [self.take(), self.take(), self.parse_expression(), self.expect(")"), self.parse_block()]
            return interior("synchronized_statement", kids)
        if text in ("import", "package"):
            return self.parse_to_semicolon(f"{text}_statement")
        if text == "export" and self.lang == "javascript":
            kids = [self.take()]
            if not self.eof():
                kids.append(self.parse_statement())
            return interior("export_statement", kids)
        if t.kind == "directive":
            return interior("directive", [self.take()])
        if text == "function" and self.lang == "javascript":
            return self.parse_js_function(statement=True)
        if (
            t.kind == "identifier"
            and (p1 := self.peek(1)) is not None
            and p1.text == ":"
            and not (self.peek(2) and self.peek(2).text == ":")
        ):
            return interior("labeled_statement", [self.take(), self.take(), self.parse_statement() if not self.eof() else leaf("missing", "", t.end, t.end, error=True)])
        return self.parse_declaration_or_expression()

    def parse_block(self) -> Node:
        kids = [self.expect("{")]
        kids.extend(self.parse_statements_until("}"))
        self._flush_comments(kids, self.pos)
        kids.append(self.expect("}"))
        return interior("block", kids)

    def parse_if(self) -> Node:
        kids = [self.take(), self.expect("(")]
        kids.append(self.parse_expression())
        kids.append(self.expect(")"))
        kids.append(self.parse_statement() if not self.eof() else self._missing())
        if self.at("else"):
            kids.append(self.take())
            kids.append(self.parse_statement() if not self.eof() else self._missing())
        return interior("if_statement", kids)

    def parse_while(self) -> Node:
        kids = [self.take(), self.expect("(")]
        kids.append(self.parse_expression())
        kids.append(self.expect(")"))
        if self.at(";"):
            kids.append(self.take())
        else:
            kids.append(self.parse_statement() if not self.eof() else self._missing())
        return interior("while_statement", kids)

    def parse_do(self) -> Node:
        kids = [self.take()]
        kids.append(self.parse_statement() if not self.eof() else self._missing())
        kids.append(self.expect("while"))
        kids.append(self.expect("("))
        kids.append(self.parse_expression())
        kids.append(self.expect(")"))
        kids.append(self.expect(";"))
        return interior("do_statement", kids)

    def parse_for(self) -> Node:
        kids = [self.take(), self.expect("(")]
        # init clause: declaration, expression, or empty
        if self.at(";"):
            kids.append(self.take())
        else:
            init = self.try_declaration(in_for=True) or self.parse_expression()
            kids.append(init)
            if self.at(":", "in", "of") and self.lang != "c":
                # enhanced / for-in / for-of
                kids.append(self.take())
                kids.append(self.parse_expression())
                kids.append(self.expect(")"))
                kids.append(self.parse_statement() if not self.eof() else self._missing())
                return interior("for_statement", kids)
            kids.append(self.expect(";"))
        if not self.at(";"):
            kids.append(self.parse_expression())
        kids.append(self.expect(";"))
        if not self.at(")"):
            kids.append(self.parse_expression())
            while self.at(","):
                kids.append(self.take())
                kids.append(self.parse_expression())
        kids.append(self.expect(")"))
        if self.at(";"):
            kids.append(self.take())
        else:
            kids.append(self.parse_statement() if not self.eof() else self._missing())
        return interior("for_statement", kids)

    def parse_switch(self) -> Node:
        kids = [self.take(), self.expect("(")]
        kids.append(self.parse_expression())
        kids.append(self.expect(")"))
        kids.append(self.expect("{"))
        while not self.eof() and not self.at("}"):
            kids.append(self.parse_case_clause())
        kids.append(self.expect("}"))
        return interior("switch_statement", kids)

    def parse_case_clause(self) -> Node:
        kids: list[Node] = []
        if self.at("case"):
            kids.append(self.take())
            kids.append(self.parse_expression())
        elif self.at("default"):
            kids.append(self.take())
        else:
            return self.error_statement()
        kids.append(self.expect(":"))
        while not self.eof() and not self.at("case", "default", "}"):
            before = self.pos
            kids.append(self.parse_statement())
            if self.pos == before:
                kids.append(self.error_leaf_here())
        return interior("case_clause", kids)

    def parse_try(self) -> Node:
        kids = [self.take()]
        if self.at("("):  # try-with-resources
            kids.append(self.take())
            depth = 1
            while not self.eof() and depth > 0:
                if self.at("("):
                    depth += 1
                elif self.at(")"):
                    depth -= 1
                    if depth == 0:
                        break
                kids.append(self.take())
            kids.append(self.expect(")"))
        kids.append(self.parse_block())
        while self.at("catch"):
            ckids = [self.take()]
            if self.at("("):
                ckids.append(self.take())
                while not self.eof() and not self.at(")"):
                    ckids.append(self.take())
                ckids.append(self.expect(")"))
            ckids.append(self.parse_block())
            kids.append(interior("catch_clause", ckids))
        if self.at("finally"):
            kids.append(interior("finally_clause", [self.take(), self.parse_block()]))
        return interior("try_statement", kids)

    def parse_simple_valued(self, kind: str) -> Node:
        kids = [self.take()]
        if not self.at(";") and not self.eof() and not self.at("}"):
            kids.append(self.parse_expression())
        kids.append(self.expect(";"))
        return interior(kind, kids)

    def parse_to_semicolon(self, kind: str) -> Node:
        kids = [self.take()]
        while not self.eof() and not self.at(";"):
            kids.append(self.take())
        kids.append(self.expect(";"))
        return interior(kind, kids)

    def error_statement(self) -> Node:
        kids = [self.error_leaf_here()]
        while not self.eof() and not self.at(";", "}", "{"):
            kids.append(self.take())
        if self.at(";"):
            kids.append(self.take())
        return interior("error_statement", kids, error=True)

    def _missing(self) -> Node:
        off = self.toks[-1].end if self.toks else 0
        return leaf("missing", "", off, off, error=True)

    # ------------------------------------------------------------------
    # declarations

    def parse_declaration_or_expression(self) -> Node:
        decl = self.try_declaration()
        if decl is not None:
            return decl
        expr = self.parse_expression()
        kids = [expr, self.expect(";")] if not self.eof() or self.at(";") else [expr, self.expect(";")]
        return interior("expression_statement", kids)

    def try_declaration(self, in_for: bool = False) -> Node | None:
        start = self.pos
        mods = self.parse_modifiers()
        t = self.peek()
        if t is None:
            self.pos = start
            return None
        if t.text in ("class", "interface", "enum", "struct", "union") and not (
            self.lang == "c" and t.text in ("struct", "union", "enum") and self._c_type_use()
        ):
            return self.parse_type_declaration(mods)
        if t.text == "function" and self.lang == "javascript":
            node = self.parse_js_function(statement=True)
            if mods:
                node.children[:0] = mods
                node.start = node.children[0].start
            return node
        if self.lang == "javascript":
            if t.text in ("var", "let", "const"):
                return self.parse_var_declaration(mods, in_for)
            self.pos = start
            return None if not mods else None
        ty = self.try_type()
        if ty is None:
            self.pos = start
            return None
        name = self.peek()
        if name is None or name.kind != "identifier":
            # `new Foo()` etc fall back to expression
            self.pos = start
            return None
        p1 = self.peek(1)
        if p1 is not None and p1.text == "(":
            node = self.try_function_rest(mods, ty)
            if node is not None:
                return node
            self.pos = start
            return None
        if p1 is not None and p1.text in ("=", ";", ",", "[", ":") or (in_for and p1 is not None and p1.text in ("in", "of")):
            return self.parse_declarators(mods, ty, in_for)
        if p1 is None and not in_for:
            self.pos = start
            return None
        self.pos = start
        return None

    def _c_type_use(self) -> bool:
        # `struct point p;` is a type use, `struct point { ... }` a definition
        p2 = self.peek(2)
        return p2 is not None and p2.text != "{"

    def parse_modifiers(self) -> list[Node]:
        mods: list[Node] = []
        while True:
            t = self.peek()
            if t is None:
                break
            if t.text == "@" and self.lang == "java":
                akids = [self.take()]
                if self.at_kind("identifier", "keyword"):
                    akids.append(self.take())
                if self.at("("):
                    depth = 0
                    while not self.eof():
                        if self.at("("):
                            depth += 1
                        elif self.at(")"):
                            depth -= 1
                            akids.append(self.take())
                            if depth == 0:
                                break
                            continue
                        akids.append(self.take())
                mods.append(interior("annotation", akids))
                continue
            if t.text in MODIFIERS[self.lang]:
                nxt = self.peek(1)
                # `const` may be part of a C declaration type, keep as modifier anyway
                if self.lang == "c" and t.text in ("signed", "unsigned"):
                    break  # these belong to the type
                if t.text == "synchronized" and nxt is not None and nxt.text == "(":
                    break
                mods.append(Node("modifier", [self.take()], start=t.start, end=t.end))
                continue
            break
        return mods

    def try_type(self) -> Node | None:
        start = self.pos
        t = self.peek()
        if t is None:
            return None
        kids: list[Node] = []
        if self.lang == "c" and t.text in ("struct", "union", "enum"):
            kids.append(self.take())
            if self.at_kind("identifier"):
                kids.append(self.take())
            else:
                self.pos = start
                return None
        elif t.kind == "keyword" and t.text in PRIMITIVE_TYPES[self.lang]:
            kids.append(self.take())
            # `long long int`, `unsigned int` chains
            while self.at_kind("keyword") and self.peek().text in PRIMITIVE_TYPES[self.lang]:
                kids.append(self.take())
        elif t.kind == "identifier":
            kids.append(self.take())
            while self.at(".") and self.peek(1) is not None and self.peek(1).kind == "identifier":
                kids.append(self.take())
                kids.append(self.take())
        else:
            self.pos = start
            return None
        if self.at("<") and self.lang == "java":
            gen = self.try_generic_args()
            if gen is not None:
                kids.append(gen)
        while self.at("[") and self.peek(1) is not None and self.peek(1).text == "]":
            kids.append(self.take())
            kids.append(self.take())
        if self.lang == "c":
            pointer_ok = kids[0].kind != "identifier" or _looks_like_typename(kids[0].text)
            while self.at("*") and pointer_ok:
                kids.append(self.take())
        return interior("type", kids)

    def try_generic_args(self) -> Node | None:
        start = self.pos
        kids = [self.take()]  # '<'
        while True:
            if self.at("?"):
                kids.append(self.take())
                if self.at("extends", "super"):
                    kids.append(self.take())
                    inner = self.try_type()
                    if inner is None:
                        self.pos = start
                        return None
                    kids.append(inner)
            elif self.at(">", ">>", ">>>"):
                pass
            else:
                inner = self.try_type()
                if inner is None:
                    self.pos = start
                    return None
                kids.append(inner)
            if self.at(","):
                kids.append(self.take())
                continue
            if self.at(">"):
                kids.append(self.take())
                return interior("generic_arguments", kids)
            if self.at(">>", ">>>"):
                # split the shift token so nested generics close one level
                t = self.toks[self.pos]
                kids.append(leaf(">", ">", t.start, t.start + 1))
                self.toks[self.pos] = Token("punct", t.text[1:], t.start + 1, t.end)
                return interior("generic_arguments", kids)
            self.pos = start
            return None

    def try_function_rest(self, mods: list[Node], ty: Node) -> Node | None:
        start = self.pos
        name = self.take()
        params = self.try_parameter_list()
        if params is None:
            self.pos = start
            return None
        kids = mods + [ty, name, params]
        if self.at("throws") and self.lang == "java":
            kids.append(self.take())
            while self.at_kind("identifier") or self.at(","):
                kids.append(self.take())
        if self.at("{"):
            kids.append(self.parse_block())
            return interior("function_definition", kids)
        if self.at(";"):
            kids.append(self.take())
            return interior("function_declaration", kids)
        self.pos = start
        return None

    def try_parameter_list(self) -> Node | None:
        if not self.at("("):
            return None
        start = self.pos
        kids = [self.take()]
        while not self.eof() and not self.at(")"):
            pkids: list[Node] = []
            pkids.extend(self.parse_modifiers())
            ty = self.try_type()
            if ty is None:
                if self.at_kind("identifier"):  # untyped (js) or K&R style
                    pkids.append(self.take())
                else:
                    self.pos = start
                    return None
            else:
                pkids.append(ty)
                if self.at("..."):
                    pkids.append(self.take())
                if self.at_kind("identifier"):
                    pkids.append(self.take())
                while self.at("[") and self.peek(1) is not None and self.peek(1).text == "]":
                    pkids.append(self.take())
                    pkids.append(self.take())
            if self.at("="):  # js default value
                pkids.append(self.take())
                pkids.append(self.parse_ternary())
            kids.append(interior("parameter", pkids))
            if self.at(","):
                kids.append(self.take())
            elif not self.at(")"):
                self.pos = start
                return None
        if self.eof():
            self.pos = start
            return None
        kids.append(self.take())  # ')'
        return interior("parameter_list", kids)

    def parse_type_declaration(self, mods: list[Node]) -> Node:
        kids = list(mods)
        kids.append(self.take())  # class/struct/...
        if self.at_kind("identifier"):
            kids.append(self.take())
        if self.at("<"):
            gen = self.try_generic_args()
            if gen is not None:
                kids.append(gen)
        while self.at("extends", "implements", "permits"):
            kids.append(self.take())
            while not self.eof() and not self.at("{", "extends", "implements", "permits"):
                kids.append(self.take())
        if self.at("{"):
            kids.append(self.parse_block())
        if self.at_kind("identifier"):  # `} name;` C struct var
            kids.append(self.take())
        if self.at(";"):
            kids.append(self.take())
        return interior("type_declaration", kids)

    def parse_var_declaration(self, mods: list[Node], in_for: bool = False) -> Node:
        kids = list(mods)
        kids.append(Node("type", [self.take()]))  # var/let/const keyword doubles as type
        while True:
            dkids: list[Node] = []
            if self.at_kind("identifier"):
                dkids.append(self.take())
            else:
                dkids.append(self._missing())
            if self.at("="):
                dkids.append(self.take())
                dkids.append(self.parse_ternary())
            kids.append(interior("declarator", dkids))
            if self.at(","):
                kids.append(self.take())
                continue
            break
        if in_for:  # the for header owns the ';' / 'in' / 'of'
            return interior("local_declaration", kids)
        kids.append(self.expect(";"))
        return interior("local_declaration", kids)

    def parse_declarators(self, mods: list[Node], ty: Node, in_for: bool = False) -> Node:
        kids = list(mods)
        kids.append(ty)
        while True:
            dkids: list[Node] = []
            while self.at("*") and self.lang == "c":
                dkids.append(self.take())
            if self.at_kind("identifier"):
                dkids.append(self.take())
            else:
                dkids.append(self._missing())
            while self.at("["):
                dkids.append(self.take())
                if not self.at("]"):
                    dkids.append(self.parse_expression())
                dkids.append(self.expect("]"))
            if self.at("="):
                dkids.append(self.take())
                dkids.append(self.parse_initializer())
            kids.append(interior("declarator", dkids))
            if self.at(","):
                kids.append(self.take())
                continue
            break
        if in_for and self.at(":", "in", "of"):
            return interior("local_declaration", kids)
        if in_for and self.at(";"):
            return interior("local_declaration", kids)
        kids.append(self.expect(";"))
        return interior("local_declaration", kids)

    def parse_initializer(self) -> Node:
        if self.at("{"):  # brace initializer (C aggregates, java arrays)
            kids = [self.take()]
            while not self.eof() and not self.at("}"):
                if self.at(","):
                    kids.append(self.take())
                    continue
                kids.append(self.parse_initializer())
            kids.append(self.expect("}"))
            return interior("initializer_list", kids)
        return self.parse_ternary()

    # ------------------------------------------------------------------
    # expressions

    def parse_expression(self) -> Node:
        node = self.parse_ternary()
        if self.at_kind("punct") and self.peek().text in _ASSIGN_OPS:
            op = self.take()
            right = self.parse_expression()  # right associative
            return interior("assignment_expression", [node, op, right])
        if self.at(","):
            kids = [node]
            while self.at(","):
                kids.append(self.take())
                kids.append(self.parse_ternary())
            return interior("sequence_expression", kids)
        return node

    def parse_ternary(self) -> Node:
        cond = self.parse_binary(0)
        if self.at("?") :
            kids = [cond, self.take(), self.parse_ternary(), self.expect(":"), self.parse_ternary()]
            return interior("conditional_expression", kids)
        if self.at_kind("punct") and self.peek().text in _ASSIGN_OPS:
            op = self.take()
            right = self.parse_ternary()
            return interior("assignment_expression", [cond, op, right])
        return cond

    def parse_binary(self, min_tier: int = 0) -> Node:
        # iterative precedence climbing keeps frame depth independent of
        # operator mixing, so deeply parenthesized hunks still parse
        return self._binary_rest(self.parse_unary(), min_tier)

    def _binary_rest(self, left: Node, min_tier: int) -> Node:
        while True:
            tier = self._tier_of(self.peek())
            if tier is None or tier < min_tier:
                return left
            op = self.take()
            right = self.parse_unary()
            while True:
                next_tier = self._tier_of(self.peek())
                if next_tier is None or next_tier <= tier:
                    break
                right = self._binary_rest(right, tier + 1)
            left = interior("binary_expression", [left, op, right])

    def _tier_of(self, t: Token | None) -> int | None:
        if t is None:
            return None
        if t.text == "instanceof" and self.lang != "java":
            return None
        if t.text == "in" and self.lang != "javascript":
            return None
        for i, ops in enumerate(_BINARY_TIERS):
            if t.text in ops:
                return i
        return None

    def parse_unary(self) -> Node:
        t = self.peek()
        if t is None:
            return self._missing()
        if t.text in _UNARY_OPS[self.lang]:
            op = self.take()
            kind = "update_expression" if op.kind in ("++", "--") else "unary_expression"
            return interior(kind, [op, self.parse_unary()])
        if t.text == "new" and self.lang in ("java", "javascript"):
            return self.parse_new()
        if t.text == "sizeof" and self.lang == "c":
            return interior("unary_expression", [self.take(), self.parse_unary()])
        return self.parse_postfix()

    def parse_new(self) -> Node:
        kids = [self.take()]
        ty = self.try_type()
        if ty is None:
            kids.append(self._missing())
            return interior("new_expression", kids, error=True)
        kids.append(ty)
        if self.at("["):
            while self.at("["):
                kids.append(self.take())
                if not self.at("]"):
                    kids.append(self.parse_ternary())
                kids.append(self.expect("]"))
            if self.at("{"):
                kids.append(self.parse_initializer())
            return interior("array_creation", kids)
        if self.at("("):
            kids.append(self.parse_argument_list())
        if self.at("{"):  # anonymous class body
            kids.append(self.parse_block())
        return interior("new_expression", kids)

    def parse_postfix(self) -> Node:
        node = self.parse_primary()
        while True:
            t = self.peek()
            if t is None:
                break
            if t.text in (".", "?.") or (t.text == "->" and self.lang == "c"):
                if self.peek(1) is not None and self.peek(1).kind in ("identifier", "keyword"):
                    node = interior("member_expression", [node, self.take(), self.take()])
                    continue
                node = interior("member_expression", [node, self.take(), self._missing()], error=True)
                continue
            if t.text == "::" and self.lang == "java":
                nxt = self.peek(1)
                if nxt is not None and (nxt.kind == "identifier" or nxt.text == "new"):
                    node = interior("method_reference", [node, self.take(), self.take()])
                    continue
                break
            if t.text == "(":
                node = interior("call_expression", [node, self.parse_argument_list()])
                continue
            if t.text == "[":
                kids = [node, self.take()]
                if not self.at("]"):
                    kids.append(self.parse_expression())
                kids.append(self.expect("]"))
                node = interior("index_expression", kids)
                continue
            if t.text in ("++", "--"):
                node = interior("update_expression", [node, self.take()])
                continue
            break
        return node

    def parse_argument_list(self) -> Node:
        kids = [self.expect("(")]
        while not self.eof() and not self.at(")"):
            kids.append(self.parse_ternary())
            if self.at(","):
                kids.append(self.take())
            elif not self.at(")"):
                kids.append(self.error_leaf_here())
        kids.append(self.expect(")"))
        return interior("argument_list", kids)

    def parse_primary(self) -> Node:
        t = self.peek()
        if t is None:
            return self._missing()
        if t.kind in ("number", "string", "char"):
            return self.take()
        if t.text in ("true", "false", "null", "undefined", "this", "super"):
            return self.take()
        if t.kind == "identifier":
            nxt = self.peek(1)
            if nxt is not None and ((nxt.text == "->" and self.lang == "java") or (nxt.text == "=>" and self.lang == "javascript")):
                return self.parse_lambda_body([self.take(), self.take()])
            return self.take()
        if t.text == "(":
            return self.parse_paren_or_lambda_or_cast()
        if t.text == "[" and self.lang == "javascript":
            kids = [self.take()]
            while not self.eof() and not self.at("]"):
                kids.append(self.parse_ternary())
                if self.at(","):
                    kids.append(self.take())
            kids.append(self.expect("]"))
            return interior("array_literal", kids)
        if t.text == "{" and self.lang == "javascript":
            return self.parse_object_literal()
        if t.text == "function" and self.lang == "javascript":
            return self.parse_js_function(statement=False)
        if t.kind == "keyword" and t.text in PRIMITIVE_TYPES[self.lang]:
            # type mention in expression position, e.g. `int.class` or sizeof
            return self.take()
        return self.error_leaf_here()

    def parse_paren_or_lambda_or_cast(self) -> Node:
        start = self.pos
        open_paren = self.take()
        # lambda: ( params ) -> / =>
        if self.lang in ("java", "javascript"):
            depth = 1
            j = self.pos
            while j < len(self.toks) and depth > 0:
                if self.toks[j].text == "(":
                    depth += 1
                elif self.toks[j].text == ")":
                    depth -= 1
                j += 1
            arrow = "->" if self.lang == "java" else "=>"
            if depth == 0 and j < len(self.toks) and self.toks[j].text == arrow:
                kids = [open_paren]
                while self.pos < j - 1:
                    kids.append(self.take())
                kids.append(self.take())  # ')'
                kids.append(self.take())  # arrow
                return self.parse_lambda_body(kids)
        # cast: ( keyword-type ) expr
        if self.lang in ("java", "c"):
            ty = self.try_type()
            if (
                ty is not None
                and self.at(")")
                and ty.children
                and (ty.children[0].kind != "identifier" or len(ty.children) > 1)
            ):
                nxt = self.peek(1)
                if nxt is not None and (nxt.kind in ("identifier", "number", "string", "char") or nxt.text in ("(",) or nxt.text in _UNARY_OPS[self.lang]):
                    kids = [open_paren, ty, self.take()]
                    kids.append(self.parse_unary())
                    return interior("cast_expression", kids)
            self.pos = start + 1  # keep the '(' consumed, reparse content
        inner = self.parse_expression()
        close = self.expect(")")
        return interior("parenthesized_expression", [open_paren, inner, close])

    def parse_lambda_body(self, kids: list[Node]) -> Node:
        if self.at("{"):
            kids.append(self.parse_block())
        else:
            kids.append(self.parse_ternary())
        return interior("lambda_expression", kids)

    def parse_object_literal(self) -> Node:
        kids = [self.take()]  # '{'
        while not self.eof() and not self.at("}"):
            pkids: list[Node] = []
            if self.at_kind("identifier", "string", "number", "keyword"):
                pkids.append(self.take())
            if self.at(":"):
                pkids.append(self.take())
                pkids.append(self.parse_ternary())
            kids.append(interior("pair", pkids) if pkids else self.error_leaf_here())
            if self.at(","):
                kids.append(self.take())
        kids.append(self.expect("}"))
        return interior("object_literal", kids)

    def parse_js_function(self, statement: bool) -> Node:
        kids = [self.take()]  # 'function'
        if self.at_kind("identifier"):
            kids.append(self.take())
        params = self.try_parameter_list()
        kids.append(params if params is not None else self._missing())
        if self.at("{"):
            kids.append(self.parse_block())
        kind = "function_definition" if statement else "function_expression"
        return interior(kind, kids)


def _leaf_of(t: Token) -> Node:
    if t.kind in ("keyword", "punct"):
        return leaf(t.text, t.text, t.start, t.end)
    if t.kind == "error":
        return leaf("error", t.text, t.start, t.end, error=True)
    return leaf(t.kind, t.text, t.start, t.end)


def _looks_like_typename(name: str) -> bool:
    return name.endswith("_t") or name.endswith("_T")
