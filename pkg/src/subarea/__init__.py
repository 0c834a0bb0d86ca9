"""Capacity-bounded territory clustering by recursive 2-means splitting."""

from .capacity_tree import (
    BranchSummary,
    Capacity,
    ClusterNode,
    TerritoryCluster,
    TreeSettings,
    bt_insert,
    split_node,
    traverse_leaves,
    volume_bisection_fallback,
)
from .ingest import IngestError, IngestResult, Order, parse_orders, partition_oversized
from .kmeans import KMeansConfig, KMeansResult, Projection, lloyd
from .report import ClusterReport, summarize

__version__ = "0.1.0"
