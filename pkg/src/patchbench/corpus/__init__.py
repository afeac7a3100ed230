from .hunks import ExtractionError, Hunk, apply_hunks, extract_single_hunk, parse_unified_diff
from .instances import KNOWLEDGE_KINDS, LANGUAGES, InstanceError, RepairInstance, check_unique_ids
from .sampling import (
    DatasetSplit,
    SamplingError,
    SamplingPlan,
    SplitError,
    sample_fraction,
    sample_shots,
    seeded_shuffle,
    split_dataset,
)
from .schemas import SCHEMAS, DatasetSchema, LoadError, SchemaError, load_dataset, write_canonical

__all__ = [
    "KNOWLEDGE_KINDS",
    "LANGUAGES",
    "SCHEMAS",
    "DatasetSchema",
    "DatasetSplit",
    "ExtractionError",
    "Hunk",
    "InstanceError",
    "LoadError",
    "RepairInstance",
    "SamplingError",
    "SamplingPlan",
    "SchemaError",
    "SplitError",
    "apply_hunks",
    "check_unique_ids",
    "extract_single_hunk",
    "load_dataset",
    "parse_unified_diff",
    "sample_fraction",
    "sample_shots",
    "seeded_shuffle",
    "split_dataset",
    "write_canonical",
]
