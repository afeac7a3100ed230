from .builtins import builtin_catalog, builtin_templates, get_builtin
from .compile import DEFAULT_CHAR_BUDGET, InstantiationError, instantiate, validate_for_style
from .dsl import TemplateParseError, parse_template, parse_template_file
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
    render_debug,
    render_table_form,
    template_from_json,
    template_to_json,
    validate_template,
)

__all__ = [
    "DEFAULT_CHAR_BUDGET",
    "CompiledPrompt",
    "InputSlot",
    "InstantiationError",
    "KnowledgeSlot",
    "Literal",
    "MaskSlot",
    "PromptTemplate",
    "Segment",
    "SoftSlot",
    "TemplateError",
    "TemplateParseError",
    "builtin_catalog",
    "builtin_templates",
    "get_builtin",
    "instantiate",
    "parse_template",
    "parse_template_file",
    "render_debug",
    "render_table_form",
    "template_from_json",
    "template_to_json",
    "validate_for_style",
    "validate_template",
]
