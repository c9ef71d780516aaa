"""Readability metrics, Kendall tau-b ranking and LLM-judge prompt utilities."""

from ._core import (
    ConfigError,
    DataError,
    DegenerateInputError,
    ReadbenchError,
    UndefinedCorrelationError,
    UnparseableCompletionError,
    build_prompt,
    count_syllables,
    jaccard,
    kendall_tau_b,
    metric_ids,
    parse_judgment,
    preprocess,
    rank_metrics,
    run_cli,
    score,
    text_stats,
)

__all__ = [
    "ConfigError",
    "DataError",
    "DegenerateInputError",
    "ReadbenchError",
    "UndefinedCorrelationError",
    "UnparseableCompletionError",
    "build_prompt",
    "count_syllables",
    "jaccard",
    "kendall_tau_b",
    "metric_ids",
    "parse_judgment",
    "preprocess",
    "rank_metrics",
    "run_cli",
    "score",
    "text_stats",
]
