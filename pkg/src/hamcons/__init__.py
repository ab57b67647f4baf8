"""Hamilton cycles, paths and perfect matchings under forbidden edge-set constraints."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    CyclicOrdering,
    IntervalPattern,
    PatternStats,
    SetFamily,
    canonicalize,
    count_hf,
    enumerate_cycles,
    in_hf,
    pattern_stats,
)
from .accept import (  # noqa: E402
    PatternSet,
    SearchOutcome,
    cycle_acceptable,
    find_acceptable_cycle,
    find_acceptable_path,
    path_acceptable,
)

__all__ = [
    "CyclicOrdering", "IntervalPattern", "PatternStats", "SetFamily", "canonicalize", "count_hf",
    "enumerate_cycles", "in_hf", "pattern_stats", "PatternSet", "SearchOutcome", "cycle_acceptable",
    "find_acceptable_cycle", "find_acceptable_path", "path_acceptable",
]
