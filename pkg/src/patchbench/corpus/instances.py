"""Repair instances: one single-hunk buggy/fixed pair plus optional
per-instance domain knowledge."""

from __future__ import annotations

from dataclasses import dataclass, field

LANGUAGES = ("java", "python", "javascript", "c")

KNOWLEDGE_KINDS = (
    "repair_action",
    "repair_pattern",
    "bug_type",
    "buggy_node_ast",
    "error_message",
    "algorithm_tags",
)


class InstanceError(ValueError):
    pass


@dataclass(frozen=True)
class RepairInstance:
    id: str
    language: str
    buggy_code: str
    fixed_code: str
    knowledge: dict[str, str] = field(default_factory=dict)
    source_dataset: str = ""

    def __post_init__(self) -> None:
        if self.language not in LANGUAGES:
            raise InstanceError(f"unknown language {self.language!r} for instance {self.id!r}")
        if not self.buggy_code:
            raise InstanceError(f"instance {self.id!r} has empty buggy code")
        if not self.fixed_code:
            raise InstanceError(f"instance {self.id!r} has empty fixed code")
        for kind in self.knowledge:
            if kind not in KNOWLEDGE_KINDS:
                raise InstanceError(f"instance {self.id!r} has unknown knowledge kind {kind!r}")

    def to_dict(self) -> dict:
        out: dict = {
            "id": self.id,
            "language": self.language,
            "buggy": self.buggy_code,
            "fixed": self.fixed_code,
        }
        if self.knowledge:
            out["knowledge"] = dict(self.knowledge)
        if self.source_dataset:
            out["dataset"] = self.source_dataset
        return out

    @classmethod
    def from_dict(cls, record: dict) -> "RepairInstance":
        return cls(
            id=str(record["id"]),
            language=record["language"],
            buggy_code=record["buggy"],
            fixed_code=record["fixed"],
            knowledge=dict(record.get("knowledge") or {}),
            source_dataset=record.get("dataset", ""),
        )


def check_unique_ids(instances: list[RepairInstance]) -> None:
    seen: set[str] = set()
    for inst in instances:
        if inst.id in seen:
            raise InstanceError(f"duplicate instance id {inst.id!r}")
        seen.add(inst.id)
