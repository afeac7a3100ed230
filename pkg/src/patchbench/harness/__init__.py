from .compare import ComparisonError, ComparisonRow, compare_runs
from .experiment import ExperimentError, ExperimentResult, make_backend, resolve_templates, run_experiment
from .report import LAYOUTS, LayoutError, emit_report, write_report
from .spec import ExperimentSpec, SpecError, load_spec, parse_config_text, spec_from_config, with_overrides

__all__ = [
    "LAYOUTS",
    "ComparisonError",
    "ComparisonRow",
    "ExperimentError",
    "ExperimentResult",
    "ExperimentSpec",
    "LayoutError",
    "SpecError",
    "compare_runs",
    "emit_report",
    "load_spec",
    "make_backend",
    "parse_config_text",
    "resolve_templates",
    "run_experiment",
    "spec_from_config",
    "with_overrides",
    "write_report",
]
