"""Experiment harness: run configuration, CSV/summary output, ROC metrics, comparisons, CLI."""
