"""The template text format.

Grammar: ``{X}`` input slot, ``{MASK}`` mask slot, ``{SOFT}`` /
``{SOFT*n}`` / ``{SOFT:"word"}`` soft tokens, ``{K:kindName}`` a
knowledge slot. Everything else, whitespace included, is literal text.
An optional first line ``#kind=<kind> style=<style> id=<id>`` pins the
template kind and model style; otherwise both are inferred.
"""

from __future__ import annotations

import re

from ..corpus.instances import KNOWLEDGE_KINDS
from .model import (
    InputSlot,
    KnowledgeSlot,
    Literal,
    MaskSlot,
    PromptTemplate,
    Segment,
    SoftSlot,
    TemplateError,
    validate_template,
)

_DIRECTIVE = re.compile(r"\{([^{}]*)\}")
_SOFT_REPEAT = re.compile(r"^SOFT\*(\d+)$")
_SOFT_INIT = re.compile(r'^SOFT:"([^"]*)"$')
_HEADER = re.compile(r"^#\s*kind=(\S+)\s+style=(\S+)\s+id=(\S+)\s*$")


class TemplateParseError(TemplateError):
    pass


def parse_template(dsl_text: str) -> PromptTemplate:
    header = None
    body = dsl_text
    if dsl_text.lstrip().startswith("#"):
        first, _, rest = dsl_text.lstrip().partition("\n")
        m = _HEADER.match(first.strip())
        if m is None:
            raise TemplateParseError(f"bad header line: {first.strip()!r}")
        header = m.groups()
        body = rest
    body = body.strip("\n")

    segments: list[Segment] = []
    soft_count = 0
    pos = 0
    for m in _DIRECTIVE.finditer(body):
        if m.start() > pos:
            segments.append(Literal(body[pos : m.start()]))
        token = m.group(1)
        if token == "X":
            segments.append(InputSlot())
        elif token == "MASK":
            segments.append(MaskSlot())
        elif token == "SOFT":
            segments.append(SoftSlot(soft_count))
            soft_count += 1
        elif rep := _SOFT_REPEAT.match(token):
            for _ in range(int(rep.group(1))):
                segments.append(SoftSlot(soft_count))
                soft_count += 1
        elif init := _SOFT_INIT.match(token):
            segments.append(SoftSlot(soft_count, init.group(1)))
            soft_count += 1
        elif token.startswith("K:"):
            kind = token[2:]
            if kind not in KNOWLEDGE_KINDS:
                raise TemplateParseError(
                    f"unknown knowledge kind in {{{token}}}; known: {', '.join(KNOWLEDGE_KINDS)}"
                )
            segments.append(KnowledgeSlot(kind))
        else:
            raise TemplateParseError(f"unrecognized template token {{{token}}}")
        pos = m.end()
    if pos < len(body):
        segments.append(Literal(body[pos:]))

    inputs = sum(isinstance(s, InputSlot) for s in segments)
    masks = sum(isinstance(s, MaskSlot) for s in segments)
    if inputs > 1:
        raise TemplateParseError("duplicate {X} input slot")
    if masks > 1:
        raise TemplateParseError("duplicate {MASK} output slot")
    if inputs == 0:
        raise TemplateParseError("missing {X} input slot")
    if masks == 0:
        raise TemplateParseError("missing {MASK} output slot")

    kind, style, template_id = _resolve_header(header, segments)
    return validate_template(
        PromptTemplate(id=template_id, segments=tuple(segments), kind=kind, model_style=style)
    )


def _resolve_header(
    header: tuple[str, str, str] | None, segments: list[Segment]
) -> tuple[str, str, str]:
    softs = [s for s in segments if isinstance(s, SoftSlot)]
    has_knowledge = any(isinstance(s, KnowledgeSlot) for s in segments)
    if softs and has_knowledge:
        inferred_kind = "kp_soft"
    elif has_knowledge:
        inferred_kind = "kp_hard"
    elif not softs:
        inferred_kind = "hbp"
    elif all(s.init is not None for s in softs):
        inferred_kind = "sbp_initialized"
    elif all(s.init is None for s in softs):
        inferred_kind = "sbp_random"
    else:
        raise TemplateParseError(
            "mixed soft tokens (some with init words, some without); declare the kind in a header"
        )
    inferred_style = "generative" if isinstance(segments[-1], MaskSlot) else "infilling"
    if header is None:
        return inferred_kind, inferred_style, "custom"
    kind, style, template_id = header
    if kind == "sbp_random" and any(s.init is not None for s in softs):
        raise TemplateParseError('sbp_random template must not use {SOFT:"word"} tokens')
    return kind, style, template_id


def parse_template_file(text: str) -> list[PromptTemplate]:
    """Template files: stanzas of a header line plus the DSL line."""
    templates = []
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        if not line:
            i += 1
            continue
        if not line.startswith("#"):
            raise TemplateParseError(f"expected a #kind=... header line, got {line!r}")
        if i + 1 >= len(lines):
            raise TemplateParseError("header line without a template line")
        templates.append(parse_template(lines[i] + "\n" + lines[i + 1]))
        i += 2
    return templates
