"""
ebss: exponential-binary state-space search (EBTS / EBGS) with reference
baselines and benchmark domains.
"""

from ebss.bounded import BoundedSearchResult, CachedEngine, DFBnBEngine, DijkstraEngine
from ebss.core import (
    INFINITY,
    MAX_COST,
    ExplicitSpace,
    Path,
    SearchOutcome,
    SearchStats,
    Solution,
    StateSpace,
    discretize,
)
from ebss.driver import EBSSS, BoundStatus, BoundTag, EBParams, IterationLog, ebsss_search

__all__ = [
    "BoundStatus",
    "BoundTag",
    "BoundedSearchResult",
    "CachedEngine",
    "DFBnBEngine",
    "DijkstraEngine",
    "EBParams",
    "EBSSS",
    "ExplicitSpace",
    "INFINITY",
    "IterationLog",
    "MAX_COST",
    "Path",
    "SearchOutcome",
    "SearchStats",
    "Solution",
    "StateSpace",
    "discretize",
    "ebsss_search",
]
