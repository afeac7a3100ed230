"""The built-in prompt catalog.

Seven basic prompts, each in a hard variant and two soft variants
(vocabulary-initialized and random), plus knowledge prompts: one hard
and one soft template per knowledge kind and per paired-knowledge
combination, with the mask placed mid-template for infilling models and
last for generative models.
"""

from __future__ import annotations

from .dsl import parse_template
from .model import PromptTemplate, SoftSlot, TemplateError, validate_template

_BP_HARD = (
    "{X} {MASK} is fixed program",
    "{X} fixed program is {MASK}",
    "Fix bug in {X} {MASK}",
    "Fix {X} fixed program is {MASK}",
    "Fix {X} {MASK} is fixed program",
    "{X} is buggy program {MASK} is fixed program",
    "Fix {X} is buggy program {MASK} is fixed program",
)

# soft layout plus the hard words that seed the initialized variant
_BP_SOFT: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("{X} {MASK} {SOFT*3}", ("is", "fixed", "program")),
    ("{X} {SOFT*3} {MASK}", ("fixed", "program", "is")),
    ("{SOFT*3} {X} {MASK}", ("Fix", "bug", "in")),
    ("{SOFT} {X} {SOFT*3} {MASK}", ("Fix", "fixed", "program", "is")),
    ("{SOFT} {X} {MASK} {SOFT*3}", ("Fix", "is", "fixed", "program")),
    ("{X} {SOFT*3} {MASK} {SOFT*3}", ("is", "buggy", "program", "is", "fixed", "program")),
    ("{SOFT} {X} {SOFT*3} {MASK} {SOFT*3}", ("Fix", "is", "buggy", "program", "is", "fixed", "program")),
)

_KP_LEAD = "Please fix a buggy program"
_KP_PHRASES = {
    "bug_type": "the bug type is",
    "repair_action": "by taking repair actions",
    "repair_pattern": "by following repair patterns",
    "buggy_node_ast": "the AST of the buggy node is",
    "error_message": "the error message is",
    "algorithm_tags": "with potential algorithmic techniques",
}
# knowledge pairings offered by the supported dataset families
_KP_PAIRS = (
    ("repair_action", "repair_pattern"),
    ("bug_type", "buggy_node_ast"),
    ("bug_type", "error_message"),
    ("algorithm_tags", "error_message"),
)


def builtin_templates(template_set: str, model_style: str = "infilling") -> list[PromptTemplate]:
    if template_set == "bp":
        return _basic_prompts(model_style)
    if template_set == "kp":
        return _knowledge_prompts(model_style)
    raise TemplateError(f"unknown builtin set {template_set!r}; use 'bp' or 'kp'")


def _basic_prompts(model_style: str) -> list[PromptTemplate]:
    out: list[PromptTemplate] = []
    for i, dsl in enumerate(_BP_HARD, start=1):
        out.append(_with_identity(parse_template(dsl), f"hbp{i}", "hbp", model_style))
    for i, (dsl, inits) in enumerate(_BP_SOFT, start=1):
        base = parse_template(dsl)
        out.append(
            _with_identity(_seed_soft_inits(base, inits), f"sbp{i}_initialized", "sbp_initialized", model_style)
        )
        out.append(_with_identity(base, f"sbp{i}_random", "sbp_random", model_style))
    return out


def _knowledge_prompts(model_style: str) -> list[PromptTemplate]:
    out: list[PromptTemplate] = []
    for kind, phrase in _KP_PHRASES.items():
        body = f"{phrase} {{K:{kind}}}"
        out.extend(_kp_pair_of_variants(f"kp_{kind}", body, model_style))
    for first, second in _KP_PAIRS:
        p1, p2 = _KP_PHRASES[first], _KP_PHRASES[second]
        if p1.startswith("by ") and p2.startswith("by "):
            p2 = p2[3:]
        body = f"{p1} {{K:{first}}} and {p2} {{K:{second}}}"
        out.extend(_kp_pair_of_variants(f"kp_{first}__{second}", body, model_style))
    return out


def _kp_pair_of_variants(stem: str, body: str, model_style: str) -> list[PromptTemplate]:
    if model_style == "infilling":
        dsl = f"{_KP_LEAD} {{X}} {body} {{MASK}} is the fixed version"
    else:
        dsl = f"{_KP_LEAD} {{X}} {body} the fixed version is {{MASK}}"
    hard = _with_identity(parse_template(dsl), f"{stem}_hard", "kp_hard", model_style)
    soft = _with_identity(_soften_literals(hard), f"{stem}_soft", "kp_soft", model_style)
    return [hard, soft]


def _with_identity(t: PromptTemplate, template_id: str, kind: str, model_style: str) -> PromptTemplate:
    return validate_template(
        PromptTemplate(id=template_id, segments=t.segments, kind=kind, model_style=model_style)
    )


def _seed_soft_inits(t: PromptTemplate, inits: tuple[str, ...]) -> PromptTemplate:
    softs = t.soft_slots()
    if len(softs) != len(inits):
        raise TemplateError(f"{t.id}: {len(inits)} init words for {len(softs)} soft tokens")
    it = iter(inits)
    segments = tuple(
        SoftSlot(s.index, next(it)) if isinstance(s, SoftSlot) else s for s in t.segments
    )
    return PromptTemplate(id=t.id, segments=segments, kind="sbp_initialized", model_style=t.model_style)


def _soften_literals(t: PromptTemplate) -> PromptTemplate:
    """Turn every generic word into a soft token seeded with that word,
    keeping the original whitespace as literal segments."""
    import re

    from .model import Literal, Segment

    segments: list[Segment] = []
    index = 0
    for seg in t.segments:
        if not isinstance(seg, Literal):
            segments.append(seg)
            continue
        for chunk in re.split(r"(\s+)", seg.text):
            if not chunk:
                continue
            if chunk.isspace():
                segments.append(Literal(chunk))
            else:
                segments.append(SoftSlot(index, chunk))
                index += 1
    return PromptTemplate(id=t.id, segments=tuple(segments), kind="kp_soft", model_style=t.model_style)


def builtin_catalog(model_style: str = "infilling") -> dict[str, PromptTemplate]:
    catalog = {}
    for t in builtin_templates("bp", model_style) + builtin_templates("kp", model_style):
        catalog[t.id] = t
    return catalog


def get_builtin(template_id: str, model_style: str = "infilling") -> PromptTemplate:
    catalog = builtin_catalog(model_style)
    if template_id not in catalog:
        raise TemplateError(f"unknown builtin template id {template_id!r}")
    return catalog[template_id]
