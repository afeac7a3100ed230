"""Seeded splits and data-scarcity sampling.

All randomness comes from numpy's PCG64 generator, seeded explicitly,
so every split and sample is a pure function of (input order, seed) and
bit-reproducible across platforms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .instances import RepairInstance


class SplitError(ValueError):
    pass


class SamplingError(ValueError):
    pass


def seeded_shuffle(items: list, seed: int) -> list:
    perm = np.random.Generator(np.random.PCG64(seed)).permutation(len(items))
    return [items[i] for i in perm]


@dataclass(frozen=True)
class DatasetSplit:
    train: list[str]
    val: list[str]
    test: list[str]
    seed: int
    source_count: int

    def to_manifest(self) -> dict:
        return {"seed": self.seed, "train": list(self.train), "val": list(self.val), "test": list(self.test)}

    @classmethod
    def from_manifest(cls, manifest: dict) -> "DatasetSplit":
        train, val, test = manifest["train"], manifest["val"], manifest["test"]
        return cls(train=train, val=val, test=test, seed=manifest["seed"],
                   source_count=len(train) + len(val) + len(test))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_manifest(), indent=2) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "DatasetSplit":
        return cls.from_manifest(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass(frozen=True)
class SamplingPlan:
    mode: str  # "fraction" | "shots"
    fraction: float = 1.0
    shot_count: int = 0
    seeds: tuple[int, ...] = (1, 2, 3)
    fixed_test_size: int | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("fraction", "shots"):
            raise SamplingError(f"unknown sampling mode {self.mode!r}")
        if not self.seeds:
            raise SamplingError("seed list must be non-empty")
        if len(set(self.seeds)) != len(self.seeds):
            raise SamplingError("seeds must be pairwise distinct")
        if self.mode == "fraction" and not (0 < self.fraction <= 1):
            raise SamplingError(f"fraction must be in (0, 1], got {self.fraction}")
        if self.mode == "shots" and self.shot_count < 1:
            raise SamplingError("shot count must be a positive integer")


def split_dataset(instances: list[RepairInstance] | list[str], seed: int) -> DatasetSplit:
    """Shuffle, then 8:1:1: val and test each get floor(N/10), train the rest."""
    ids = [inst.id if isinstance(inst, RepairInstance) else inst for inst in instances]
    n = len(ids)
    if n < 10:
        raise SplitError(f"need at least 10 instances to split 8:1:1, got {n}")
    tenth = n // 10
    shuffled = seeded_shuffle(ids, seed)
    return DatasetSplit(
        train=shuffled[2 * tenth :],
        val=shuffled[:tenth],
        test=shuffled[tenth : 2 * tenth],
        seed=seed,
        source_count=n,
    )


def sample_fraction(ids: list[str], fraction: float, seed: int) -> list[str]:
    """Seeded shuffle, take the first max(1, floor(fraction * N)) ids."""
    if not ids:
        raise SamplingError("cannot sample from an empty id list")
    if not (0 < fraction <= 1):
        raise SamplingError(f"fraction must be in (0, 1], got {fraction}")
    k = max(1, int(fraction * len(ids)))
    return seeded_shuffle(ids, seed)[:k]


def sample_shots(
    ids: list[str], k: int, seed: int, reserved: set[str] | frozenset[str] = frozenset()
) -> list[str]:
    """Exactly k seeded draws, never touching reserved (test) ids."""
    pool = [i for i in ids if i not in reserved]
    if k < 1:
        raise SamplingError("shot count must be a positive integer")
    if k > len(pool):
        raise SamplingError(f"asked for {k} shots but only {len(pool)} ids are available")
    return seeded_shuffle(pool, seed)[:k]
