"""Recursive 2-means splitting under a volume cap, and leaf collection.

A node whose order set has more than one member is split in two. Each half
whose total volume fits the cap stays in place as a finished cluster; each
half that does not becomes a child node and is split again. Collecting the
finished halves in pre-order numbers the clusters 1, 2, 3, ...
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .ingest import Order
from .kmeans import KMeansConfig, Projection, lloyd
from .rng import SplitMix64, derive_seed

KMEANS = "kmeans"
VOLUME_BISECTION = "volume_bisection"
NO_SPLIT = "none"


@dataclass(frozen=True)
class BranchSummary:
    members: tuple[Order, ...]
    total_vol: float
    total_weight: float
    centroid: tuple[float, float]

    @property
    def ids(self) -> list[str]:
        return [o.id for o in self.members]


@dataclass
class ClusterNode:
    data: list[Order]
    branch0: BranchSummary | None = None
    branch1: BranchSummary | None = None
    left: ClusterNode | None = None
    right: ClusterNode | None = None
    split_method: str = NO_SPLIT
    path: str = ""

    @property
    def depth(self) -> int:
        return len(self.path)

    @property
    def is_leaf(self) -> bool:
        return self.left is None and self.right is None


@dataclass(frozen=True)
class TerritoryCluster:
    cluster_id: int
    members: tuple[Order, ...]
    total_vol: float
    total_weight: float
    centroid: tuple[float, float]
    over_cap: bool = False


@dataclass(frozen=True)
class Capacity:
    """What a finished cluster must satisfy.

    Volume is always checked. Weight is only checked when ``weight_cap`` is
    set (strict-weight mode).
    """

    vol_cap: float
    weight_cap: float | None = None

    def fits(self, branch: BranchSummary) -> bool:
        if branch.total_vol > self.vol_cap:
            return False
        if self.weight_cap is not None and branch.total_weight > self.weight_cap:
            return False
        return True


@dataclass
class TreeSettings:
    kmeans: KMeansConfig = field(default_factory=KMeansConfig)
    projection: Projection = field(default_factory=Projection)


def _capacity(cap) -> Capacity:
    return cap if isinstance(cap, Capacity) else Capacity(float(cap))


def mean_point(points: Sequence[tuple[float, float]]) -> tuple[float, float]:
    # fsum keeps the centroid independent of member order
    n = len(points)
    return (math.fsum(p[0] for p in points) / n, math.fsum(p[1] for p in points) / n)


def summarize_branch(orders: Sequence[Order], projection: Projection = Projection()) -> BranchSummary:
    return BranchSummary(
        members=tuple(orders),
        total_vol=math.fsum(o.vol_cbm for o in orders),
        total_weight=math.fsum(o.weight_ton for o in orders),
        centroid=mean_point([projection.forward(o.lon, o.lat) for o in orders]),
    )


def split_node(orders: Sequence[Order], cfg: KMeansConfig, projection: Projection = Projection(),
               rng: SplitMix64 | None = None):
    """2-means split of ``orders``.

    Returns ``(branch0, branch1, labels)``. Branch ``j`` holds the orders
    labelled ``j``, in input order. A branch may come back empty; the caller
    handles that.
    """
    if len(orders) < 2:
        raise ValueError("split_node needs at least two orders")
    points = np.array([projection.forward(o.lon, o.lat) for o in orders])
    result = lloyd(points, KMeansConfig(2, cfg.seed, cfg.max_iterations, cfg.rel_tolerance), rng)
    labels = result.labels
    groups = ([o for o, lab in zip(orders, labels) if lab == 0],
              [o for o, lab in zip(orders, labels) if lab == 1])
    b0, b1 = (summarize_branch(g, projection) if g else None for g in groups)
    return b0, b1, labels


def volume_bisection_fallback(orders: Sequence[Order], projection: Projection = Projection()):
    """Split by volume when the points cannot be separated geographically.

    Orders are taken by descending volume (id ascending on ties) and each
    goes to the branch with the smaller running volume; equal volumes go to
    the branch with fewer orders, then to branch 0.
    """
    if len(orders) < 2:
        raise ValueError("fallback needs at least two orders")
    ranked = sorted(orders, key=lambda o: (-o.vol_cbm, o.id))
    totals = [0.0, 0.0]
    picked: list[set[str]] = [set(), set()]
    for o in ranked:
        j = min((0, 1), key=lambda b: (totals[b], len(picked[b]), b))
        totals[j] += o.vol_cbm
        picked[j].add(o.id)
    # keep input order inside each branch
    return tuple(summarize_branch([o for o in orders if o.id in picked[j]], projection) for j in (0, 1))


def _needs_fallback(b0: BranchSummary | None, b1: BranchSummary | None) -> bool:
    if b0 is None or b1 is None:
        return True
    # every point at one spot: k-means can only peel off tie-broken singletons
    return b0.centroid == b1.centroid


def _split(node: ClusterNode, settings: TreeSettings, seed: int) -> None:
    cfg = settings.kmeans
    rng = SplitMix64(derive_seed(seed, node.path))
    b0, b1, _ = split_node(node.data, cfg, settings.projection, rng)
    if _needs_fallback(b0, b1):
        b0, b1 = volume_bisection_fallback(node.data, settings.projection)
        node.split_method = VOLUME_BISECTION
    else:
        node.split_method = KMEANS
    node.branch0, node.branch1 = b0, b1


def bt_insert(orders: Sequence[Order], cap, settings: TreeSettings | None = None) -> ClusterNode:
    """Build the splitting tree for ``orders`` under ``cap``.

    ``cap`` is a volume in m3 or a :class:`Capacity`. A node with a single
    order is never split. Node seeds are derived from the root seed and the
    node's L/R path, so no subtree depends on the order nodes are visited.
    """
    if not orders:
        raise ValueError("bt_insert needs at least one order")
    settings = settings or TreeSettings()
    capacity = _capacity(cap)
    seed = settings.kmeans.seed
    root = ClusterNode(list(orders))
    stack = [root]
    while stack:
        node = stack.pop()
        if len(node.data) <= 1:
            continue
        _split(node, settings, seed)
        if not capacity.fits(node.branch0):
            node.left = ClusterNode(list(node.branch0.members), path=node.path + "L")
        if not capacity.fits(node.branch1):
            node.right = ClusterNode(list(node.branch1.members), path=node.path + "R")
        # right first so left is processed first; purely cosmetic
        for child in (node.right, node.left):
            if child is not None:
                stack.append(child)
    return root


def iter_preorder(root: ClusterNode):
    stack = [root]
    while stack:
        node = stack.pop()
        yield node
        for child in (node.right, node.left):
            if child is not None:
                stack.append(child)


def count_leaf_nodes(root: ClusterNode | None) -> int:
    """The value the recursive traversal returns: nodes without children."""
    if root is None:
        return 0
    return sum(1 for node in iter_preorder(root) if node.is_leaf)


def traverse_leaves(root: ClusterNode, cap, projection: Projection = Projection(),
                    nested: bool = False) -> list[TerritoryCluster]:
    """Number the finished branches in pre-order, starting at 1.

    At each node branch 0 is collected if it fits, then branch 1 if it fits,
    then the left and right subtrees. An unsplit node (one order) is emitted
    whole; if that single order is still over the cap it is flagged
    ``over_cap``.

    ``nested=True`` only checks branch 1 when branch 0 fitted. That literal
    reading loses clusters and exists for comparison only.
    """
    capacity = _capacity(cap)
    clusters: list[TerritoryCluster] = []

    def emit(branch: BranchSummary, over: bool = False):
        clusters.append(TerritoryCluster(len(clusters) + 1, branch.members, branch.total_vol,
                                          branch.total_weight, branch.centroid, over))

    for node in iter_preorder(root):
        if node.branch0 is None:
            whole = summarize_branch(node.data, projection)
            emit(whole, over=not capacity.fits(whole))
            continue
        fit0 = capacity.fits(node.branch0)
        if fit0:
            emit(node.branch0)
        if (fit0 or not nested) and capacity.fits(node.branch1):
            emit(node.branch1)

    if not nested:
        emitted = sum(len(c.members) for c in clusters)
        assert emitted == len(root.data), "traversal lost or duplicated orders"
        assert count_leaf_nodes(root) <= len(clusters) or not root.data
    return clusters


def fallback_count(root: ClusterNode) -> int:
    return sum(1 for node in iter_preorder(root) if node.split_method == VOLUME_BISECTION)


def depth_partitions(root: ClusterNode, projection: Projection = Projection()) -> list[list[tuple[Order, ...]]]:
    """Grouping of the orders after each level of splitting.

    Entry ``d - 1`` is the partition reached once every node at depth < d has
    been split: finished branches keep their group, unfinished ones are
    replaced by their own split at the next level.
    """
    max_depth = max(node.depth for node in iter_preorder(root))
    levels = []
    for d in range(1, max_depth + 2):
        groups: list[tuple[Order, ...]] = []
        for node in iter_preorder(root):
            if node.depth >= d:
                continue
            if node.branch0 is None:
                groups.append(tuple(node.data))
                continue
            for branch, child in ((node.branch0, node.left), (node.branch1, node.right)):
                if child is None or node.depth == d - 1:
                    groups.append(branch.members)
        levels.append(groups)
    return levels
