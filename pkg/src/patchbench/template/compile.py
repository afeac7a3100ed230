"""Template instantiation against repair instances."""

from __future__ import annotations

from ..corpus.instances import RepairInstance
from .model import (
    CompiledPrompt,
    InputSlot,
    KnowledgeSlot,
    Literal,
    MaskSlot,
    PromptTemplate,
    Segment,
    SoftSlot,
    TemplateError,
)

DEFAULT_CHAR_BUDGET = 8192


class InstantiationError(TemplateError):
    pass


def instantiate(
    template: PromptTemplate,
    instance: RepairInstance,
    char_budget: int = DEFAULT_CHAR_BUDGET,
) -> CompiledPrompt:
    """Resolve input and knowledge slots to literal text, byte-identical.

    Knowledge text is inserted verbatim; if the whole prompt exceeds the
    character budget, only the input slot is tail-truncated, and the
    compiled prompt is flagged.
    """
    for kind in template.knowledge_kinds():
        if kind not in instance.knowledge:
            raise InstantiationError(
                f"instance {instance.id!r} has no {kind!r} knowledge required by template {template.id!r}"
            )

    segments: list[Segment] = []
    input_index = -1
    knowledge_indices: dict[int, str] = {}
    for seg in template.segments:
        if isinstance(seg, InputSlot):
            input_index = len(segments)
            segments.append(Literal(instance.buggy_code))
        elif isinstance(seg, KnowledgeSlot):
            knowledge_indices[len(segments)] = seg.kind
            segments.append(Literal(instance.knowledge[seg.kind]))
        elif isinstance(seg, (Literal, SoftSlot, MaskSlot)):
            segments.append(seg)
        else:
            raise InstantiationError(f"unexpected segment {seg!r}")

    truncated = False
    total = sum(len(s.text) for s in segments if isinstance(s, Literal))
    if total > char_budget and input_index >= 0:
        overflow = total - char_budget
        text = segments[input_index].text
        segments[input_index] = Literal(text[: max(0, len(text) - overflow)])
        truncated = True

    soft_table = tuple(sorted((s.index, s.init) for s in template.soft_slots()))
    mask_position = "final" if isinstance(segments[-1], MaskSlot) else "internal"
    return CompiledPrompt(
        instance_id=instance.id,
        segments=tuple(segments),
        soft_table=soft_table,
        mask_position=mask_position,
        truncated=truncated,
        input_index=input_index,
        knowledge_indices=knowledge_indices,
    )


def validate_for_style(template: PromptTemplate, model_style: str) -> list[str]:
    """Warnings only: the mismatches are legal but known to hurt."""
    warnings: list[str] = []
    if model_style == "generative" and not template.mask_is_final():
        warnings.append(
            f"{template.id}: mask is not the last segment; a generative model never "
            "attends to the prompt tokens after it"
        )
    return warnings
