"""Single-hunk extraction from unified diffs.

Every ``@@`` hunk of a diff becomes one repair instance: the buggy side
is the hunk's context plus removed lines, the fixed side its context
plus added lines. Replacing the buggy segment with the fixed segment in
the pre-fix file reproduces the post-fix file, which is what the tests
check.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .instances import RepairInstance

_HUNK_HEADER = re.compile(r"^@@ -(\d+)(?:,(\d+))? \+(\d+)(?:,(\d+))? @@")


class ExtractionError(ValueError):
    pass


@dataclass
class Hunk:
    old_start: int  # 1-based
    old_lines: list[str]  # context + removed
    new_start: int
    new_lines: list[str]  # context + added


def parse_unified_diff(diff: str) -> list[Hunk]:
    hunks: list[Hunk] = []
    current: Hunk | None = None
    declared: tuple[int, int] | None = None
    for raw in diff.splitlines():
        m = _HUNK_HEADER.match(raw)
        if m:
            if current is not None:
                _check_counts(current, declared)
            current = Hunk(int(m.group(1)), [], int(m.group(3)), [])
            declared = (int(m.group(2) or "1"), int(m.group(4) or "1"))
            hunks.append(current)
            continue
        if current is None:
            continue  # file headers and preamble
        if raw.startswith("---") or raw.startswith("+++"):
            continue
        if raw.startswith("\\"):  # "\ No newline at end of file"
            continue
        if raw.startswith("-"):
            current.old_lines.append(raw[1:])
        elif raw.startswith("+"):
            current.new_lines.append(raw[1:])
        elif raw.startswith(" ") or raw == "":
            current.old_lines.append(raw[1:])
            current.new_lines.append(raw[1:])
        else:
            raise ExtractionError(f"unrecognized diff line: {raw!r}")
    if current is not None:
        _check_counts(current, declared)
    if not hunks:
        raise ExtractionError("no @@ hunks found in diff")
    return hunks


def _check_counts(hunk: Hunk, declared: tuple[int, int] | None) -> None:
    if declared is None:
        return
    if (len(hunk.old_lines), len(hunk.new_lines)) != declared:
        raise ExtractionError(
            f"hunk at -{hunk.old_start} declares {declared} lines, "
            f"has ({len(hunk.old_lines)}, {len(hunk.new_lines)})"
        )


def extract_single_hunk(
    diff: str, before_file: str, language: str, id_prefix: str = "hunk"
) -> list[RepairInstance]:
    """One instance per contiguous hunk; multi-hunk diffs yield several."""
    before_lines = before_file.splitlines()
    instances = []
    for i, hunk in enumerate(parse_unified_diff(diff), start=1):
        lo = hunk.old_start - 1
        window = before_lines[lo : lo + len(hunk.old_lines)]
        if window != hunk.old_lines:
            raise ExtractionError(
                f"hunk {i} does not match the pre-fix file at line {hunk.old_start}"
            )
        instances.append(
            RepairInstance(
                id=f"{id_prefix}{i}",
                language=language,
                buggy_code="\n".join(hunk.old_lines),
                fixed_code="\n".join(hunk.new_lines),
            )
        )
    return instances


def apply_hunks(before_file: str, hunks: list[Hunk]) -> str:
    """Apply parsed hunks to the pre-fix file; the round-trip check."""
    lines = before_file.splitlines()
    for hunk in sorted(hunks, key=lambda h: h.old_start, reverse=True):
        lo = hunk.old_start - 1
        if lines[lo : lo + len(hunk.old_lines)] != hunk.old_lines:
            raise ExtractionError(f"hunk at -{hunk.old_start} does not apply")
        lines[lo : lo + len(hunk.old_lines)] = hunk.new_lines
    trailer = "\n" if before_file.endswith("\n") else ""
    return "\n".join(lines) + trailer
