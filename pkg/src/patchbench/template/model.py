"""Prompt templates and their compiled, per-instance form.

A template is an ordered segment sequence: literal text, one input
slot, one mask slot, optional trainable soft slots, optional knowledge
slots. Compiling against an instance resolves input and knowledge slots
to literal text; soft slots stay symbolic (the tuning worker owns their
embeddings).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from ..corpus.instances import KNOWLEDGE_KINDS

KINDS = ("hbp", "sbp_initialized", "sbp_random", "kp_hard", "kp_soft")
STYLES = ("infilling", "generative")


class TemplateError(ValueError):
    pass


@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class InputSlot:
    pass


@dataclass(frozen=True)
class MaskSlot:
    pass


@dataclass(frozen=True)
class SoftSlot:
    index: int
    init: str | None = None


@dataclass(frozen=True)
class KnowledgeSlot:
    kind: str


Segment = Union[Literal, InputSlot, MaskSlot, SoftSlot, KnowledgeSlot]


@dataclass(frozen=True)
class PromptTemplate:
    id: str
    segments: tuple[Segment, ...]
    kind: str
    model_style: str

    def soft_slots(self) -> list[SoftSlot]:
        return [s for s in self.segments if isinstance(s, SoftSlot)]

    def knowledge_kinds(self) -> list[str]:
        return [s.kind for s in self.segments if isinstance(s, KnowledgeSlot)]

    def mask_is_final(self) -> bool:
        return isinstance(self.segments[-1], MaskSlot)


def validate_template(t: PromptTemplate) -> PromptTemplate:
    if t.kind not in KINDS:
        raise TemplateError(f"{t.id}: unknown template kind {t.kind!r}")
    if t.model_style not in STYLES:
        raise TemplateError(f"{t.id}: unknown model style {t.model_style!r}")
    inputs = sum(isinstance(s, InputSlot) for s in t.segments)
    masks = sum(isinstance(s, MaskSlot) for s in t.segments)
    if inputs != 1:
        raise TemplateError(f"{t.id}: template must have exactly one {{X}}, found {inputs}")
    if masks != 1:
        raise TemplateError(f"{t.id}: template must have exactly one {{MASK}}, found {masks}")
    for seg in t.segments:
        if isinstance(seg, Literal) and not seg.text:
            raise TemplateError(f"{t.id}: empty literal segment")
        if isinstance(seg, KnowledgeSlot) and seg.kind not in KNOWLEDGE_KINDS:
            raise TemplateError(f"{t.id}: unknown knowledge kind {seg.kind!r}")
    softs = t.soft_slots()
    if [s.index for s in softs] != list(range(len(softs))):
        raise TemplateError(f"{t.id}: soft indices must be 0..{len(softs) - 1} in order")
    if t.kind in ("hbp", "kp_hard") and softs:
        raise TemplateError(f"{t.id}: kind {t.kind} does not allow {{SOFT}} tokens")
    if t.kind == "sbp_random" and any(s.init is not None for s in softs):
        raise TemplateError(f"{t.id}: sbp_random soft tokens must not carry an init word")
    if t.kind == "sbp_initialized" and (not softs or any(s.init is None for s in softs)):
        raise TemplateError(f"{t.id}: sbp_initialized requires an init word on every soft token")
    if t.kind == "sbp_random" and not softs:
        raise TemplateError(f"{t.id}: sbp_random requires at least one soft token")
    has_knowledge = bool(t.knowledge_kinds())
    if t.kind.startswith("kp") and not has_knowledge:
        raise TemplateError(f"{t.id}: knowledge prompts need at least one {{K:kind}} slot")
    if not t.kind.startswith("kp") and has_knowledge:
        raise TemplateError(f"{t.id}: basic prompts must not contain {{K:kind}} slots")
    return t


def render_table_form(t: PromptTemplate) -> str:
    """The prose-table notation: [X], [mask], soft runs as `[SOFT] * n`."""
    parts: list[str] = []
    run = 0

    def flush() -> None:
        nonlocal run
        if run == 1:
            parts.append("[SOFT]")
        elif run > 1:
            parts.append(f"[SOFT] * {run}")
        run = 0

    for seg in t.segments:
        if isinstance(seg, SoftSlot):
            run += 1
            continue
        flush()
        if isinstance(seg, Literal):
            parts.append(seg.text)
        elif isinstance(seg, InputSlot):
            parts.append("[X]")
        elif isinstance(seg, MaskSlot):
            parts.append("[mask]")
        elif isinstance(seg, KnowledgeSlot):
            parts.append(f"[{seg.kind}]")
    flush()
    return "".join(parts).strip()


# ----------------------------------------------------------------------
# compiled prompts


@dataclass(frozen=True)
class CompiledPrompt:
    instance_id: str
    segments: tuple[Segment, ...]  # Literal | SoftSlot | MaskSlot only
    soft_table: tuple[tuple[int, str | None], ...]
    mask_position: str  # "final" | "internal"
    truncated: bool = False
    input_index: int = -1  # segment index of the input-slot literal
    knowledge_indices: dict[int, str] = field(default_factory=dict, hash=False, compare=False)

    @property
    def input_text(self) -> str:
        if self.input_index < 0:
            return ""
        seg = self.segments[self.input_index]
        return seg.text if isinstance(seg, Literal) else ""

    def to_wire(self) -> dict:
        segs = []
        for i, seg in enumerate(self.segments):
            if isinstance(seg, Literal):
                entry: dict = {"t": "lit", "text": seg.text}
                if i == self.input_index:
                    entry["src"] = "input"
                elif i in self.knowledge_indices:
                    entry["src"] = "knowledge"
                    entry["kind"] = self.knowledge_indices[i]
                segs.append(entry)
            elif isinstance(seg, SoftSlot):
                entry = {"t": "soft", "i": seg.index}
                if seg.init is not None:
                    entry["init"] = seg.init
                segs.append(entry)
            else:
                segs.append({"t": "mask"})
        return {"instance_id": self.instance_id, "segments": segs, "truncated": self.truncated}

    @classmethod
    def from_wire(cls, payload: dict) -> "CompiledPrompt":
        segments: list[Segment] = []
        soft_table: list[tuple[int, str | None]] = []
        input_index = -1
        knowledge_indices: dict[int, str] = {}
        for i, entry in enumerate(payload["segments"]):
            t = entry["t"]
            if t == "lit":
                segments.append(Literal(entry["text"]))
                if entry.get("src") == "input":
                    input_index = i
                elif entry.get("src") == "knowledge":
                    knowledge_indices[i] = entry.get("kind", "")
            elif t == "soft":
                seg = SoftSlot(entry["i"], entry.get("init"))
                segments.append(seg)
                soft_table.append((seg.index, seg.init))
            elif t == "mask":
                segments.append(MaskSlot())
            else:
                raise TemplateError(f"unknown wire segment type {t!r}")
        mask_position = "final" if segments and isinstance(segments[-1], MaskSlot) else "internal"
        return cls(
            instance_id=payload["instance_id"],
            segments=tuple(segments),
            soft_table=tuple(sorted(soft_table)),
            mask_position=mask_position,
            truncated=bool(payload.get("truncated", False)),
            input_index=input_index,
            knowledge_indices=knowledge_indices,
        )


def render_debug(compiled: CompiledPrompt) -> str:
    """Human-readable single line with [SOFT:i] and [MASK] markers.

    Adjacent markers get one separating space so soft runs stay legible.
    """
    parts = []
    prev_marker = False
    for seg in compiled.segments:
        if isinstance(seg, Literal):
            parts.append(seg.text)
            prev_marker = False
            continue
        marker = f"[SOFT:{seg.index}]" if isinstance(seg, SoftSlot) else "[MASK]"
        if prev_marker:
            parts.append(" ")
        parts.append(marker)
        prev_marker = True
    return "".join(parts)


# ----------------------------------------------------------------------
# template JSON (the /v1/tune wire shape)


def template_to_json(t: PromptTemplate) -> dict:
    segs: list[dict] = []
    for seg in t.segments:
        if isinstance(seg, Literal):
            segs.append({"t": "lit", "text": seg.text})
        elif isinstance(seg, InputSlot):
            segs.append({"t": "input"})
        elif isinstance(seg, MaskSlot):
            segs.append({"t": "mask"})
        elif isinstance(seg, SoftSlot):
            entry = {"t": "soft", "i": seg.index}
            if seg.init is not None:
                entry["init"] = seg.init
            segs.append(entry)
        else:
            segs.append({"t": "knowledge", "kind": seg.kind})
    return {"id": t.id, "kind": t.kind, "model_style": t.model_style, "segments": segs}


def template_from_json(payload: dict) -> PromptTemplate:
    segments: list[Segment] = []
    for entry in payload["segments"]:
        t = entry["t"]
        if t == "lit":
            segments.append(Literal(entry["text"]))
        elif t == "input":
            segments.append(InputSlot())
        elif t == "mask":
            segments.append(MaskSlot())
        elif t == "soft":
            segments.append(SoftSlot(entry["i"], entry.get("init")))
        elif t == "knowledge":
            segments.append(KnowledgeSlot(entry["kind"]))
        else:
            raise TemplateError(f"unknown template segment type {t!r}")
    return validate_template(
        PromptTemplate(
            id=payload["id"],
            segments=tuple(segments),
            kind=payload["kind"],
            model_style=payload["model_style"],
        )
    )
