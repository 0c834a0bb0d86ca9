"""Slow, obviously-correct reference computations used by the tests."""

import itertools
import math


def naive_inertia(points, labels, centroids):
    total = 0.0
    for (x, y), lab in zip(points, labels):
        cx, cy = centroids[lab]
        total += (x - cx) ** 2 + (y - cy) ** 2
    return total


def nearest_centroid(point, centroids):
    best, best_d = None, math.inf
    for j, (cx, cy) in enumerate(centroids):
        d = (point[0] - cx) ** 2 + (point[1] - cy) ** 2
        if d < best_d:
            best, best_d = j, d
    return best


def sse(points):
    if not points:
        return 0.0
    mx = sum(p[0] for p in points) / len(points)
    my = sum(p[1] for p in points) / len(points)
    return sum((p[0] - mx) ** 2 + (p[1] - my) ** 2 for p in points)


def best_two_partition(points):
    """Minimum within-cluster sum of squares over every split into two non-empty groups."""
    n = len(points)
    best, best_split = math.inf, None
    # point 0 always sits in group A so each split is visited once
    for mask in range(0, 1 << (n - 1)):
        a = [points[0]] + [points[i] for i in range(1, n) if not mask >> (i - 1) & 1]
        b = [points[i] for i in range(1, n) if mask >> (i - 1) & 1]
        if not b:
            continue
        cost = sse(a) + sse(b)
        if cost < best:
            best, best_split = cost, mask
    return best, best_split


def greedy_volume_split(vols_ids):
    """Hand rule: largest first, each into the lighter bin."""
    bins = [[], []]
    totals = [0.0, 0.0]
    for vol, oid in sorted(vols_ids, key=lambda t: (-t[0], t[1])):
        j = 0 if (totals[0], len(bins[0])) <= (totals[1], len(bins[1])) else 1
        bins[j].append(oid)
        totals[j] += vol
    return bins


def literal_traverse(node, cap, out):
    """Recursive collection written straight from the pseudocode, with the
    branch checks read as independent statements."""
    if node is None:
        return 0
    if node.branch0 is not None:
        if node.branch0.total_vol <= cap:
            out.append(tuple(o.id for o in node.branch0.members))
        if node.branch1.total_vol <= cap:
            out.append(tuple(o.id for o in node.branch1.members))
    if node.left is None and node.right is None:
        return 1
    return literal_traverse(node.left, cap, out) + literal_traverse(node.right, cap, out)


def all_partitions_ok(groups, universe):
    flat = list(itertools.chain.from_iterable(groups))
    return sorted(flat) == sorted(universe)
