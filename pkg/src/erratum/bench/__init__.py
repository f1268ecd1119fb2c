"""Benchmark harness: accuracy over mutant corpora, cost over locator counts."""

from __future__ import annotations

from erratum.bench.harness import (
    BenchConfig,
    BenchReport,
    TrialRow,
    classify,
    clickable_ids,
    ratio_bin,
    run_benchmark,
    select_targets,
    write_metrics_csv,
    write_report_json,
    write_series_csvs,
)
from erratum.bench.timing import TimingConfig, TimingReport, measure_timing, write_timing_csv

__all__ = [
    "BenchConfig",
    "BenchReport",
    "TimingConfig",
    "TimingReport",
    "TrialRow",
    "classify",
    "clickable_ids",
    "measure_timing",
    "ratio_bin",
    "run_benchmark",
    "select_targets",
    "write_metrics_csv",
    "write_report_json",
    "write_series_csvs",
    "write_timing_csv",
]
