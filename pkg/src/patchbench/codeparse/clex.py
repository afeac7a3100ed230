"""Shared lexer for the C-family languages (java, c, javascript).

Produces a flat token stream with comments kept as tokens (the parsers
turn them into comment nodes; equivalence strips them later).
Whitespace is consumed and never appears in the stream.
"""

from __future__ import annotations

from dataclasses import dataclass

JAVA_KEYWORDS = frozenset(
    """abstract assert boolean break byte case catch char class const continue
    default do double else enum extends final finally float for goto if
    implements import instanceof int interface long native new package private
    protected public return short static strictfp super switch synchronized
    this throw throws transient try void volatile while var record sealed
    permits yield true false null""".split()
)

C_KEYWORDS = frozenset(
    """auto break case char const continue default do double else enum extern
    float for goto if inline int long register restrict return short signed
    sizeof static struct switch typedef union unsigned void volatile while
    _Bool _Complex _Imaginary""".split()
)

JS_KEYWORDS = frozenset(
    """break case catch class const continue debugger default delete do else
    export extends finally for function if import in instanceof let new of
    return static super switch this throw try typeof var void while with
    yield async await get set true false null undefined""".split()
)

KEYWORDS = {"java": JAVA_KEYWORDS, "c": C_KEYWORDS, "javascript": JS_KEYWORDS}

# longest-match operator tables
_PUNCT3 = (
    ">>>=", "<<=", ">>=", "===", "!==", ">>>", "...", "**=", "&&=", "||=", "??=",
)
_PUNCT2 = (
    "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=", "*=", "/=",
    "%=", "&=", "|=", "^=", "<<", ">>", "->", "=>", "::", "?.", "??", "**",
)

_IDENT_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_IDENT_CONT = _IDENT_START | frozenset("0123456789")
_DIGITS = frozenset("0123456789")


@dataclass
class Token:
    kind: str  # identifier | keyword | number | string | char | comment | punct | error
    text: str
    start: int
    end: int


def lex(code: str, language: str) -> list[Token]:
    keywords = KEYWORDS[language]
    tokens: list[Token] = []
    i, n = 0, len(code)
    while i < n:
        ch = code[i]
        if ch in " \t\r\n\f\v":
            i += 1
            continue
        if ch == "/" and i + 1 < n and code[i + 1] == "/":
            j = code.find("\n", i)
            j = n if j < 0 else j
            tokens.append(Token("comment", code[i:j], i, j))
            i = j
            continue
        if ch == "/" and i + 1 < n and code[i + 1] == "*":
            j = code.find("*/", i + 2)
            if j < 0:
                tokens.append(Token("error", code[i:], i, n))
                break
            tokens.append(Token("comment", code[i : j + 2], i, j + 2))
            i = j + 2
            continue
        if ch == "#" and language == "c":
            # preprocessor directive: keep the whole logical line as one token
            j = i
            while j < n and (code[j] != "\n" or code[j - 1] == "\\"):
                j += 1
            tokens.append(Token("directive", code[i:j], i, j))
            i = j
            continue
        if ch in "\"'`":
            tok = _scan_string(code, i, ch)
            tokens.append(tok)
            i = tok.end
            continue
        if ch in _DIGITS or (ch == "." and i + 1 < n and code[i + 1] in _DIGITS):
            j = i + 1
            while j < n and (code[j] in _IDENT_CONT or code[j] == "." or
                             (code[j] in "+-" and code[j - 1] in "eEpP")):
                j += 1
            tokens.append(Token("number", code[i:j], i, j))
            i = j
            continue
        if ch in _IDENT_START:
            j = i + 1
            while j < n and code[j] in _IDENT_CONT:
                j += 1
            text = code[i:j]
            kind = "keyword" if text in keywords else "identifier"
            tokens.append(Token(kind, text, i, j))
            i = j
            continue
        matched = False
        for table in (_PUNCT3, _PUNCT2):
            for op in table:
                if code.startswith(op, i):
                    tokens.append(Token("punct", op, i, i + len(op)))
                    i += len(op)
                    matched = True
                    break
            if matched:
                break
        if matched:
            continue
        if ch in "+-*/%=<>!&|^~?:;,.(){}[]@\\":
            tokens.append(Token("punct", ch, i, i + 1))
            i += 1
            continue
        tokens.append(Token("error", ch, i, i + 1))
        i += 1
    return tokens


def _scan_string(code: str, i: int, quote: str) -> Token:
    n = len(code)
    j = i + 1
    while j < n:
        c = code[j]
        if c == "\\":
            j += 2
            continue
        if c == quote:
            return Token("char" if quote == "'" else "string", code[i : j + 1], i, j + 1)
        if c == "\n" and quote != "`":
            break
        j += 1
    return Token("error", code[i : min(j, n)], i, min(j, n))
