"""Dataset loading: a canonical JSONL format plus adapter schemas for
the common bug-fix dataset export layouts.

Each adapter is a field map from an export's record keys onto the
canonical instance fields; knowledge fields land on the fixed knowledge
kinds. Raw dataset download and licensing are the caller's business.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .instances import LANGUAGES, RepairInstance, check_unique_ids


class LoadError(ValueError):
    pass


class SchemaError(ValueError):
    pass


@dataclass(frozen=True)
class DatasetSchema:
    name: str
    id_fields: tuple[str, ...]
    buggy_fields: tuple[str, ...]
    fixed_fields: tuple[str, ...]
    language: str | None  # None: read from the record
    knowledge_map: tuple[tuple[str, str], ...] = ()  # (record field, knowledge kind)


SCHEMAS: dict[str, DatasetSchema] = {
    "canonical": DatasetSchema(
        name="canonical",
        id_fields=("id",),
        buggy_fields=("buggy",),
        fixed_fields=("fixed",),
        language=None,
    ),
    "defects4j": DatasetSchema(
        name="defects4j",
        id_fields=("bug_id", "id"),
        buggy_fields=("buggy_code", "buggy"),
        fixed_fields=("fixed_code", "fixed"),
        language="java",
        knowledge_map=(
            ("repair_actions", "repair_action"),
            ("repair_action", "repair_action"),
            ("repair_patterns", "repair_pattern"),
            ("repair_pattern", "repair_pattern"),
        ),
    ),
    "manysstubs4j": DatasetSchema(
        name="manysstubs4j",
        id_fields=("bugHash", "id"),
        buggy_fields=("sourceBeforeFix", "buggy"),
        fixed_fields=("sourceAfterFix", "fixed"),
        language="java",
        knowledge_map=(
            ("bugType", "bug_type"),
            ("buggyNodeAst", "buggy_node_ast"),
            ("bugNodeAst", "buggy_node_ast"),
        ),
    ),
    "tfix": DatasetSchema(
        name="tfix",
        id_fields=("id",),
        buggy_fields=("source_code", "source", "buggy"),
        fixed_fields=("target_code", "target", "fixed"),
        language="javascript",
        knowledge_map=(
            ("rule_id", "bug_type"),
            ("linter_report", "error_message"),
            ("message", "error_message"),
        ),
    ),
    "xcodeeval": DatasetSchema(
        name="xcodeeval",
        id_fields=("src_uid", "id"),
        buggy_fields=("bug_source_code", "buggy"),
        fixed_fields=("fix_source_code", "fixed"),
        language="c",
        knowledge_map=(
            ("tags", "algorithm_tags"),
            ("compilation_error", "error_message"),
            ("err_msg", "error_message"),
        ),
    ),
    "bugsinpy": DatasetSchema(
        name="bugsinpy",
        id_fields=("id", "bug_id"),
        buggy_fields=("buggy", "before", "buggy_code"),
        fixed_fields=("fixed", "after", "fixed_code"),
        language="python",
    ),
    "code_refinement": DatasetSchema(
        name="code_refinement",
        id_fields=("id",),
        buggy_fields=("buggy", "source"),
        fixed_fields=("fixed", "target"),
        language="java",
    ),
}


def load_dataset(path: str | Path, schema: str = "canonical") -> list[RepairInstance]:
    """Read a JSONL export into instances, preserving file order."""
    if schema not in SCHEMAS:
        raise SchemaError(f"unknown dataset schema {schema!r}; known: {sorted(SCHEMAS)}")
    spec = SCHEMAS[schema]
    path = Path(path)
    instances: list[RepairInstance] = []
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise LoadError(f"{path}:{lineno}: malformed JSON record: {exc}") from exc
            try:
                instances.append(_convert(record, spec, lineno))
            except SchemaError:
                raise
            except (KeyError, ValueError) as exc:
                raise LoadError(f"{path}:{lineno}: {exc}") from exc
    check_unique_ids(instances)
    return instances


def _convert(record: dict, spec: DatasetSchema, lineno: int) -> RepairInstance:
    def pick(fields: tuple[str, ...], what: str) -> str:
        for f in fields:
            if f in record and record[f] not in (None, ""):
                return record[f]
        raise ValueError(f"record is missing {what} (looked for {'/'.join(fields)})")

    raw_id = pick(spec.id_fields, "an id")
    buggy = pick(spec.buggy_fields, "buggy code")
    fixed = pick(spec.fixed_fields, "fixed code")
    if spec.language is not None:
        language = spec.language
    else:
        language = record.get("language")
        if language not in LANGUAGES:
            raise SchemaError(f"unknown language tag {language!r} (line {lineno})")
    knowledge: dict[str, str] = {}
    if spec.name == "canonical":
        for kind, text in (record.get("knowledge") or {}).items():
            knowledge[kind] = _as_text(text)
    else:
        for field_name, kind in spec.knowledge_map:
            if field_name in record and record[field_name] not in (None, "", []):
                knowledge.setdefault(kind, _as_text(record[field_name]))
    return RepairInstance(
        id=str(raw_id),
        language=language,
        buggy_code=buggy,
        fixed_code=fixed,
        knowledge=knowledge,
        source_dataset=record.get("dataset", spec.name if spec.name != "canonical" else ""),
    )


def _as_text(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (list, tuple)):
        return " ".join(str(v) for v in value)
    return str(value)


def write_canonical(instances: list[RepairInstance], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for inst in instances:
            fh.write(json.dumps(inst.to_dict(), ensure_ascii=False) + "\n")
