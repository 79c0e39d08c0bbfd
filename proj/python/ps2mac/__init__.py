"""Proportional-share scheduling and MAC simulator."""

from ._core import (
    SCENARIOS,
    ValidationError,
    access_table,
    aifsn,
    golden_access_table,
    ifs,
    normalize_percentages,
    prioritized_backoff,
    priority_factors,
    quanta,
    run,
    run_csv,
)

__all__ = [
    "SCENARIOS",
    "ValidationError",
    "access_table",
    "aifsn",
    "golden_access_table",
    "ifs",
    "normalize_percentages",
    "prioritized_backoff",
    "priority_factors",
    "quanta",
    "run",
    "run_csv",
]
