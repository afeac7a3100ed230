"""patchbench: corpus prep, prompt templates, repair metrics, and an
experiment harness for single-hunk automated program repair."""

__version__ = "0.1.0"
