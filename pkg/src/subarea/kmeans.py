"""Seeded Lloyd k-means over 2-D points.

Points are ``(n, 2)`` float arrays. Everything is a pure function of its
inputs; randomness only enters through an explicit :class:`SplitMix64`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rng import SplitMix64

EARTH_RADIUS_M = 6371008.8
METERS_PER_DEGREE = math.pi * EARTH_RADIUS_M / 180.0


@dataclass(frozen=True)
class KMeansConfig:
    k: int = 2
    seed: int = 0
    max_iterations: int = 300
    rel_tolerance: float = 1e-4

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if not self.rel_tolerance >= 0:
            raise ValueError("rel_tolerance must be >= 0")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass
class KMeansResult:
    labels: np.ndarray
    centroids: np.ndarray
    inertia: float
    iterations: int
    converged: bool = True
    inertia_history: list[float] = field(default_factory=list)


@dataclass(frozen=True)
class Projection:
    """Maps (lon, lat) degrees into the space distances are measured in.

    ``degrees`` is the identity. ``equirectangular`` scales longitude by
    cos(lat0), with lat0 the mean latitude of the dataset, and converts both
    axes to meters.
    """

    mode: str = "degrees"
    lat0: float = 0.0

    @classmethod
    def for_points(cls, mode: str, lats) -> "Projection":
        if mode not in ("degrees", "equirectangular"):
            raise ValueError(f"unknown distance mode {mode!r}")
        lats = list(lats)
        lat0 = math.fsum(lats) / len(lats) if lats else 0.0
        return cls(mode, lat0 if mode == "equirectangular" else 0.0)

    def forward(self, lon: float, lat: float) -> tuple[float, float]:
        if self.mode == "degrees":
            return lon, lat
        return (lon * math.cos(math.radians(self.lat0)) * METERS_PER_DEGREE,
                lat * METERS_PER_DEGREE)

    def inverse(self, x: float, y: float) -> tuple[float, float]:
        if self.mode == "degrees":
            return x, y
        return (x / (math.cos(math.radians(self.lat0)) * METERS_PER_DEGREE),
                y / METERS_PER_DEGREE)


def as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float).reshape(-1, 2)
    if not np.all(np.isfinite(arr)):
        raise ValueError("points must be finite")
    return arr


def _sq_dists(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    dx = points[:, 0, None] - centroids[None, :, 0]
    dy = points[:, 1, None] - centroids[None, :, 1]
    return dx * dx + dy * dy


def seed_centroids(points, k: int, rng: SplitMix64) -> np.ndarray:
    """k-means++ seeding.

    The first centre is drawn uniformly; each further one with probability
    proportional to its squared distance to the nearest centre so far. When
    every remaining weight is zero (duplicate points) the draw falls back to
    a uniform pick among points not chosen yet.
    """
    return _seed(as_points(points), k, rng)


def _seed(points: np.ndarray, k: int, rng: SplitMix64) -> np.ndarray:
    n = len(points)
    if k > n:
        raise ValueError(f"cannot seed {k} centroids from {n} points")
    if k < 1:
        raise ValueError("k must be >= 1")
    chosen = [rng.randrange(n)]
    closest = _sq_dists(points, points[chosen[0]][None, :])[:, 0]
    for _ in range(1, k):
        cum = np.cumsum(closest)
        total = float(cum[-1])
        if total > 0.0:
            r = rng.random() * total
            idx = int(np.searchsorted(cum, r, side="right"))
            idx = min(idx, n - 1)
            while closest[idx] == 0.0:
                # r landed exactly on a boundary; step to the next weighted point
                idx = (idx + 1) % n
        else:
            free = [i for i in range(n) if i not in chosen]
            idx = free[rng.randrange(len(free))]
        chosen.append(idx)
        closest = np.minimum(closest, _sq_dists(points, points[idx][None, :])[:, 0])
    return points[chosen].copy()


def _assign(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    return np.argmin(_sq_dists(points, centroids), axis=1)


def _means(points: np.ndarray, labels: np.ndarray, k: int):
    counts = np.bincount(labels, minlength=k)
    with np.errstate(invalid="ignore", divide="ignore"):
        cx = np.bincount(labels, weights=points[:, 0], minlength=k) / counts
        cy = np.bincount(labels, weights=points[:, 1], minlength=k) / counts
    centroids = np.column_stack([cx, cy])
    centroids[counts == 0] = np.nan
    return centroids, counts


def _inertia(points: np.ndarray, labels: np.ndarray, centroids: np.ndarray) -> float:
    diff = points - centroids[labels]
    return float(np.einsum("ij,ij->", diff, diff))


def assign(points, centroids) -> np.ndarray:
    """Nearest-centroid labels; ties go to the lowest centroid index."""
    points = as_points(points)
    centroids = as_points(centroids)
    if len(centroids) == 0:
        raise ValueError("no centroids")
    if len(points) == 0:
        return np.zeros(0, dtype=np.intp)
    return _assign(points, centroids)


def update_centroids(points, labels, k: int) -> tuple[np.ndarray, list[int]]:
    """Per-cluster means plus the list of empty cluster indices.

    Empty clusters get NaN coordinates; the caller decides how to repair them.
    """
    points = as_points(points)
    labels = np.asarray(labels, dtype=np.intp)
    if len(labels) != len(points) or (len(labels) and (labels.min() < 0 or labels.max() >= k)):
        raise ValueError("labels must be one index in [0, k) per point")
    centroids, counts = _means(points, labels, k)
    return centroids, [j for j in range(k) if counts[j] == 0]


def inertia(points, labels, centroids) -> float:
    return _inertia(as_points(points), np.asarray(labels, dtype=np.intp), as_points(centroids))


def _repair_empty(points, labels, centroids, counts, k):
    # Move the point farthest from its current centroid into each empty cluster.
    labels = labels.copy()
    counts = counts.copy()
    d = np.sum((points - centroids[labels]) ** 2, axis=1)
    for j in np.flatnonzero(counts == 0):
        d[counts[labels] <= 1] = -1.0
        i = int(np.argmax(d))
        counts[labels[i]] -= 1
        counts[j] += 1
        labels[i] = j
        d[i] = -1.0
    return labels


def lloyd(points, config: KMeansConfig = KMeansConfig(), rng: SplitMix64 | None = None) -> KMeansResult:
    """Run Lloyd iterations from a k-means++ start.

    Converges once no point is strictly closer to another centroid than to
    its own, at which point the next update would move no centroid (a shift
    of zero, within any ``rel_tolerance``). Otherwise stops after
    ``max_iterations``.
    """
    points = as_points(points)
    n = len(points)
    if n == 0:
        raise ValueError("lloyd needs at least one point")
    k = config.k
    if rng is None:
        rng = SplitMix64(config.seed)
    centroids = _seed(points, k, rng)

    labels = _assign(points, centroids)
    history: list[float] = []
    converged = False
    iterations = 0
    while iterations < config.max_iterations:
        iterations += 1
        counts = np.bincount(labels, minlength=k)
        if not counts.all():
            labels = _repair_empty(points, labels, centroids, counts, k)
        centroids, _ = _means(points, labels, k)
        history.append(_inertia(points, labels, centroids))
        d = _sq_dists(points, centroids)
        new_labels = np.argmin(d, axis=1)
        rows = np.arange(n)
        if not (d[rows, new_labels] < d[rows, labels]).any():
            converged = True
            break
        labels = new_labels

    return KMeansResult(
        labels=labels,
        centroids=centroids,
        inertia=history[-1],
        iterations=iterations,
        converged=converged,
        inertia_history=history,
    )
