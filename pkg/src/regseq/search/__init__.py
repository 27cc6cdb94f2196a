"""Exhaustive search for the shortest programs computing a Boolean function.

Two engines decide the same question.  Without the ``frontier_memo`` rule a
compiled enumerator visits every candidate of the given length; with it, an
exact count over execution frontiers replaces explicit enumeration.
"""

from .core import (
    DEFAULT_STEP_BUDGET, SCHEMA_VERSION, LengthResult, MinimalityProfile,
    PruneRule, SearchAborted, SearchConstraints, Shard, Witness,
    default_step_budget, exists_program, minimal_length, partition,
    search_length,
)

__all__ = [
    "DEFAULT_STEP_BUDGET", "SCHEMA_VERSION", "LengthResult", "MinimalityProfile",
    "PruneRule", "SearchAborted", "SearchConstraints", "Shard", "Witness",
    "default_step_budget", "exists_program", "minimal_length", "partition",
    "search_length",
]
