from __future__ import annotations

import json

import pytest

from patchbench.corpus import RepairInstance
from patchbench.template import (
    CompiledPrompt,
    InputSlot,
    InstantiationError,
    KnowledgeSlot,
    Literal,
    MaskSlot,
    PromptTemplate,
    SoftSlot,
    TemplateError,
    TemplateParseError,
    builtin_templates,
    get_builtin,
    instantiate,
    parse_template,
    parse_template_file,
    render_debug,
    render_table_form,
    template_from_json,
    template_to_json,
    validate_for_style,
    validate_template,
)

BASIC_HARD_FORMS = [
    "[X] [mask] is fixed program",
    "[X] fixed program is [mask]",
    "Fix bug in [X] [mask]",
    "Fix [X] fixed program is [mask]",
    "Fix [X] [mask] is fixed program",
    "[X] is buggy program [mask] is fixed program",
    "Fix [X] is buggy program [mask] is fixed program",
]

BASIC_SOFT_FORMS = [
    "[X] [mask] [SOFT] * 3",
    "[X] [SOFT] * 3 [mask]",
    "[SOFT] * 3 [X] [mask]",
    "[SOFT] [X] [SOFT] * 3 [mask]",
    "[SOFT] [X] [mask] [SOFT] * 3",
    "[X] [SOFT] * 3 [mask] [SOFT] * 3",
    "[SOFT] [X] [SOFT] * 3 [mask] [SOFT] * 3",
]

SOFT_INIT_WORDS = [
    ("is", "fixed", "program"),
    ("fixed", "program", "is"),
    ("Fix", "bug", "in"),
    ("Fix", "fixed", "program", "is"),
    ("Fix", "is", "fixed", "program"),
    ("is", "buggy", "program", "is", "fixed", "program"),
    ("Fix", "is", "buggy", "program", "is", "fixed", "program"),
]


def _instance(**knowledge) -> RepairInstance:
    return RepairInstance("i1", "java", "return a - b ;", "return a + b ;", knowledge)


class TestDsl:
    def test_basic_parse(self):
        t = parse_template("Fix bug in {X} {MASK}")
        assert isinstance(t.segments[0], Literal) and t.segments[0].text == "Fix bug in "
        assert isinstance(t.segments[1], InputSlot)
        assert isinstance(t.segments[2], Literal) and t.segments[2].text == " "
        assert isinstance(t.segments[3], MaskSlot)
        assert t.kind == "hbp"

    def test_soft_repeat_indices(self):
        t = parse_template("{X} {SOFT*3} {MASK}")
        softs = t.soft_slots()
        assert [s.index for s in softs] == [0, 1, 2]
        assert all(s.init is None for s in softs)
        assert t.kind == "sbp_random"

    def test_soft_init_tokens(self):
        t = parse_template('{X} {SOFT:"fixed"} {SOFT:"program"} {SOFT:"is"} {MASK}')
        assert [s.init for s in t.soft_slots()] == ["fixed", "program", "is"]
        assert t.kind == "sbp_initialized"

    def test_knowledge_slot(self):
        t = parse_template("{X} the bug type is {K:bug_type} {MASK}")
        assert t.knowledge_kinds() == ["bug_type"]
        assert t.kind == "kp_hard"

    def test_duplicate_mask_rejected(self):
        with pytest.raises(TemplateParseError, match="MASK"):
            parse_template("{X} {MASK} {MASK}")

    def test_duplicate_input_rejected(self):
        with pytest.raises(TemplateParseError, match="X"):
            parse_template("{X} {X} {MASK}")

    def test_missing_slots_rejected(self):
        with pytest.raises(TemplateParseError):
            parse_template("{X} only input")
        with pytest.raises(TemplateParseError):
            parse_template("only mask {MASK}")

    def test_unknown_token_named(self):
        with pytest.raises(TemplateParseError, match="INPUT"):
            parse_template("{INPUT} {MASK}")

    def test_unknown_knowledge_kind_named(self):
        with pytest.raises(TemplateParseError, match="vibe"):
            parse_template("{X} {K:vibe} {MASK}")

    def test_header_pins_kind_and_style(self):
        t = parse_template("#kind=sbp_random style=infilling id=mine\n{X} {SOFT*2} {MASK}")
        assert (t.id, t.kind, t.model_style) == ("mine", "sbp_random", "infilling")

    def test_header_random_with_init_rejected(self):
        with pytest.raises(TemplateParseError):
            parse_template('#kind=sbp_random style=infilling id=m\n{X} {SOFT:"w"} {MASK}')

    def test_style_inferred_from_mask_position(self):
        assert parse_template("{X} {MASK}").model_style == "generative"
        assert parse_template("{X} {MASK} tail").model_style == "infilling"

    def test_template_file_stanzas(self):
        text = (
            "#kind=hbp style=generative id=one\n{X} fixed is {MASK}\n"
            "#kind=sbp_random style=generative id=two\n{X} {SOFT*3} {MASK}\n"
        )
        templates = parse_template_file(text)
        assert [t.id for t in templates] == ["one", "two"]

    def test_round_trip_through_json(self):
        for t in builtin_templates("bp", "infilling") + builtin_templates("kp", "generative"):
            assert template_from_json(template_to_json(t)) == t


class TestValidation:
    def test_soft_index_gaps_rejected(self):
        bad = PromptTemplate(
            id="bad",
            segments=(InputSlot(), SoftSlot(0), SoftSlot(2), MaskSlot()),
            kind="sbp_random",
            model_style="generative",
        )
        with pytest.raises(TemplateError, match="indices"):
            validate_template(bad)

    def test_hard_kind_with_soft_rejected(self):
        bad = PromptTemplate(
            id="bad",
            segments=(InputSlot(), SoftSlot(0), MaskSlot()),
            kind="hbp",
            model_style="generative",
        )
        with pytest.raises(TemplateError):
            validate_template(bad)

    def test_kp_requires_knowledge_slot(self):
        bad = PromptTemplate(
            id="bad", segments=(InputSlot(), MaskSlot()), kind="kp_hard", model_style="generative"
        )
        with pytest.raises(TemplateError):
            validate_template(bad)

    def test_bp_must_not_carry_knowledge(self):
        bad = PromptTemplate(
            id="bad",
            segments=(InputSlot(), KnowledgeSlot("bug_type"), MaskSlot()),
            kind="hbp",
            model_style="generative",
        )
        with pytest.raises(TemplateError):
            validate_template(bad)


class TestBuiltins:
    def test_bp_set_is_twenty_one(self):
        for style in ("infilling", "generative"):
            templates = builtin_templates("bp", style)
            assert len(templates) == 21
            kinds = {}
            for t in templates:
                kinds.setdefault(t.kind, 0)
                kinds[t.kind] += 1
            assert kinds == {"hbp": 7, "sbp_initialized": 7, "sbp_random": 7}

    def test_hard_forms_are_verbatim(self):
        by_id = {t.id: t for t in builtin_templates("bp", "infilling")}
        for i, expected in enumerate(BASIC_HARD_FORMS, start=1):
            assert render_table_form(by_id[f"hbp{i}"]) == expected

    def test_soft_forms_are_verbatim_for_both_policies(self):
        by_id = {t.id: t for t in builtin_templates("bp", "infilling")}
        for i, expected in enumerate(BASIC_SOFT_FORMS, start=1):
            assert render_table_form(by_id[f"sbp{i}_initialized"]) == expected
            assert render_table_form(by_id[f"sbp{i}_random"]) == expected

    def test_initialized_soft_words_match_hard_tokens(self):
        by_id = {t.id: t for t in builtin_templates("bp", "infilling")}
        for i, words in enumerate(SOFT_INIT_WORDS, start=1):
            t = by_id[f"sbp{i}_initialized"]
            assert tuple(s.init for s in t.soft_slots()) == words
            assert all(s.init is None for s in by_id[f"sbp{i}_random"].soft_slots())

    def test_bp_segments_invariant_under_style(self):
        infill = {t.id: t.segments for t in builtin_templates("bp", "infilling")}
        gen = {t.id: t.segments for t in builtin_templates("bp", "generative")}
        assert infill == gen

    def test_kp_mask_placement_per_style(self):
        for t in builtin_templates("kp", "infilling"):
            assert not t.mask_is_final()
            if t.kind == "kp_hard":
                assert render_table_form(t).endswith("[mask] is the fixed version")
        for t in builtin_templates("kp", "generative"):
            assert t.mask_is_final()
            if t.kind == "kp_hard":
                assert render_table_form(t).endswith("the fixed version is [mask]")

    def test_kp_repair_action_forms(self):
        infill = get_builtin("kp_repair_action_hard", "infilling")
        assert render_table_form(infill) == (
            "Please fix a buggy program [X] by taking repair actions [repair_action] "
            "[mask] is the fixed version"
        )
        gen = get_builtin("kp_repair_action_hard", "generative")
        assert render_table_form(gen) == (
            "Please fix a buggy program [X] by taking repair actions [repair_action] "
            "the fixed version is [mask]"
        )

    def test_kp_soft_variants_seed_from_generic_words(self):
        soft = get_builtin("kp_bug_type_soft", "infilling")
        inits = [s.init for s in soft.soft_slots()]
        assert inits[:5] == ["Please", "fix", "a", "buggy", "program"]
        assert all(init is not None for init in inits)
        assert soft.knowledge_kinds() == ["bug_type"]

    def test_kp_paired_variants_exist_for_each_dataset_pairing(self):
        ids = {t.id for t in builtin_templates("kp", "infilling")}
        for pair in (
            "kp_repair_action__repair_pattern_hard",
            "kp_bug_type__buggy_node_ast_hard",
            "kp_bug_type__error_message_hard",
            "kp_algorithm_tags__error_message_hard",
        ):
            assert pair in ids

    def test_round_trip_parse_of_rendered_builtin(self):
        # DSL-render a builtin, reparse, expect segment-equal templates
        t = get_builtin("hbp3", "infilling")
        dsl = "".join(
            "{X}" if isinstance(s, InputSlot) else "{MASK}" if isinstance(s, MaskSlot) else s.text
            for s in t.segments
        )
        assert parse_template(dsl).segments == t.segments

    def test_unknown_ids_rejected(self):
        with pytest.raises(TemplateError):
            get_builtin("hbp99")
        with pytest.raises(TemplateError):
            builtin_templates("zp")


class TestInstantiate:
    def test_bp3_literal_sequence(self):
        compiled = instantiate(get_builtin("hbp3"), _instance())
        assert render_debug(compiled) == "Fix bug in return a - b ; [MASK]"
        assert compiled.mask_position == "final"
        assert compiled.input_text == "return a - b ;"

    def test_knowledge_inserted_verbatim(self):
        actions = "condBranchAdd exThrowsAdd objInstAdd"
        compiled = instantiate(
            get_builtin("kp_repair_action_hard", "infilling"), _instance(repair_action=actions)
        )
        text = render_debug(compiled)
        assert f"by taking repair actions {actions} [MASK]" in text
        assert compiled.mask_position == "internal"

    def test_missing_knowledge_names_kind_and_instance(self):
        with pytest.raises(InstantiationError, match=r"bug_type.*i1|i1.*bug_type"):
            instantiate(get_builtin("kp_bug_type_hard", "infilling"), _instance())

    def test_substitution_is_byte_identical(self):
        weird = 'return "\\u00e9 \\t{}" ;'
        inst = RepairInstance("i2", "java", weird, "x;", {"bug_type": "<&>\n"})
        compiled = instantiate(get_builtin("kp_bug_type_hard", "infilling"), inst)
        assert compiled.input_text == weird
        lit_texts = [s.text for s in compiled.segments if isinstance(s, Literal)]
        assert "<&>\n" in lit_texts

    def test_soft_table_copied(self):
        compiled = instantiate(get_builtin("sbp2_initialized"), _instance())
        assert compiled.soft_table == ((0, "fixed"), (1, "program"), (2, "is"))
        assert render_debug(compiled) == "return a - b ; [SOFT:0] [SOFT:1] [SOFT:2] [MASK]"

    def test_char_budget_truncates_input_only(self):
        inst = RepairInstance("big", "java", "x" * 9000, "y;")
        compiled = instantiate(get_builtin("hbp2"), inst, char_budget=100)
        assert compiled.truncated
        assert len(compiled.input_text) < 9000
        tail = compiled.segments[-2]
        assert isinstance(tail, Literal) and tail.text == " fixed program is "

    def test_wire_round_trip(self):
        compiled = instantiate(get_builtin("sbp4_initialized"), _instance())
        wire = compiled.to_wire()
        assert set(wire) == {"instance_id", "segments", "truncated"}
        parsed = CompiledPrompt.from_wire(json.loads(json.dumps(wire)))
        assert parsed.instance_id == compiled.instance_id
        assert parsed.soft_table == compiled.soft_table
        assert parsed.mask_position == compiled.mask_position
        assert parsed.input_text == compiled.input_text


class TestStyleValidation:
    def test_generative_with_internal_mask_warns(self):
        warnings = validate_for_style(get_builtin("hbp1"), "generative")
        assert len(warnings) == 1

    def test_generative_with_final_mask_is_clean(self):
        assert validate_for_style(get_builtin("hbp2"), "generative") == []

    def test_infilling_never_warns_about_mask(self):
        for t in builtin_templates("bp", "infilling"):
            assert validate_for_style(t, "infilling") == []
