"""Cluster summaries and exports (CSV, GeoJSON, SVG)."""

from __future__ import annotations

import csv
import io
import json
import math
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .capacity_tree import TerritoryCluster, mean_point, summarize_branch
from .ingest import ROLES, Order, RowError, format_number, parse_orders, resolve_schema
from .kmeans import Projection
from .plotting import scatter_svg

HISTOGRAM_BINS = 10


@dataclass
class ClusterReport:
    cluster_count: int
    per_cluster: list[dict]
    fleet: dict
    rejected: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return OrderedDict([
            ("cluster_count", self.cluster_count),
            ("per_cluster", self.per_cluster),
            ("fleet", self.fleet),
            ("rejected", self.rejected),
            ("notes", self.notes),
        ])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def utilization_bin(utilization: float) -> int:
    """Bins are [0, 0.1), [0.1, 0.2), ..., [0.9, 1.0]; anything above 1 lands in the last."""
    return max(0, min(int(math.floor(utilization * HISTOGRAM_BINS)), HISTOGRAM_BINS - 1))


def mean_distance_to_centroid(cluster: TerritoryCluster, projection: Projection) -> float:
    cx, cy = cluster.centroid
    dists = [math.hypot(x - cx, y - cy) for x, y in (projection.forward(o.lon, o.lat) for o in cluster.members)]
    return math.fsum(dists) / len(dists) if dists else 0.0


def summarize(
    clusters: Sequence[TerritoryCluster],
    oversized: Sequence[Order],
    cap: float,
    projection: Projection = Projection(),
    fallback_splits: int = 0,
    rejected: Iterable[RowError] = (),
    weight_cap: float | None = None,
    notes: Sequence[str] = (),
) -> ClusterReport:
    """Per-cluster utilization and compactness plus fleet totals.

    Utilization is cluster volume over ``cap``. When ``weight_cap`` is given
    (strict-weight runs) a weight utilization column is added for reference.
    """
    per_cluster = []
    utils = []
    histogram = [0] * HISTOGRAM_BINS
    for c in clusters:
        u = c.total_vol / cap
        utils.append(u)
        histogram[utilization_bin(u)] += 1
        row = OrderedDict([
            ("cluster_id", c.cluster_id),
            ("size", len(c.members)),
            ("total_vol", c.total_vol),
            ("total_weight", c.total_weight),
            ("utilization", u),
            ("mean_member_distance_to_centroid", mean_distance_to_centroid(c, projection)),
        ])
        if weight_cap is not None:
            row["weight_utilization"] = c.total_weight / weight_cap
        if c.over_cap:
            row["over_cap"] = True
        per_cluster.append(row)

    fleet = OrderedDict([
        ("total_vol", math.fsum(c.total_vol for c in clusters)),
        ("mean_utilization", math.fsum(utils) / len(utils) if utils else 0.0),
        ("utilization_histogram", OrderedDict([
            ("bin_width", 1.0 / HISTOGRAM_BINS),
            ("counts", histogram),
        ])),
        ("oversized_count", len(oversized)),
        ("fallback_split_count", fallback_splits),
    ])
    return ClusterReport(
        cluster_count=len(clusters),
        per_cluster=per_cluster,
        fleet=fleet,
        rejected=[OrderedDict([("row", r.row), ("reason", r.reason)]) for r in rejected],
        notes=list(notes),
    )


def export_clusters_csv(clusters: Sequence[TerritoryCluster], schema: dict | None = None,
                        delimiter: str = ",") -> str:
    """One row per order with its ``cluster_id``, sorted by (cluster_id, id)."""
    schema = resolve_schema(schema)
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow([schema[r] for r in ROLES] + ["cluster_id"])
    rows = sorted(((c.cluster_id, o) for c in clusters for o in c.members), key=lambda t: (t[0], t[1].id))
    for cid, o in rows:
        writer.writerow([o.id, format_number(o.vol_cbm), format_number(o.weight_ton),
                         format_number(o.lon), format_number(o.lat), cid])
    return buf.getvalue()


def read_clusters_csv(text: str, projection_mode: str = "degrees", schema: dict | None = None,
                      delimiter: str = ",") -> list[TerritoryCluster]:
    """Rebuild clusters from :func:`export_clusters_csv` output."""
    parsed = parse_orders(text, schema, delimiter)
    if parsed.rejected:
        raise ValueError(f"unreadable cluster rows: {parsed.rejected}")
    reader = csv.DictReader(io.StringIO(text), delimiter=delimiter)
    cids = [int(row["cluster_id"]) for row in reader]
    projection = Projection.for_points(projection_mode, (o.lat for o in parsed.orders))
    grouped: dict[int, list[Order]] = {}
    for cid, order in zip(cids, parsed.orders):
        grouped.setdefault(cid, []).append(order)
    clusters = []
    for cid in sorted(grouped):
        b = summarize_branch(grouped[cid], projection)
        clusters.append(TerritoryCluster(cid, b.members, b.total_vol, b.total_weight, b.centroid))
    return clusters


def export_geojson(clusters: Sequence[TerritoryCluster], projection: Projection = Projection()) -> str:
    features = []
    for c in clusters:
        for o in sorted(c.members, key=lambda o: o.id):
            features.append({
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": [o.lon, o.lat]},
                "properties": {"kind": "member", "id": o.id, "cluster_id": c.cluster_id,
                               "vol_cbm": o.vol_cbm, "weight_ton": o.weight_ton},
            })
        lon, lat = projection.inverse(*c.centroid)
        features.append({
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [lon, lat]},
            "properties": {"kind": "centroid", "cluster_id": c.cluster_id,
                           "total_vol": c.total_vol, "size": len(c.members)},
        })
    return json.dumps({"type": "FeatureCollection", "features": features}, indent=1) + "\n"


def export_svg_plot(clusters: Sequence[TerritoryCluster], oversized: Sequence[Order] = (),
                    projection: Projection = Projection(), title: str | None = None) -> str:
    groups = [(c.cluster_id, [(o.lon, o.lat) for o in c.members]) for c in clusters]
    centroids = [(c.cluster_id, projection.inverse(*c.centroid)) for c in clusters]
    if title is None:
        title = f"{len(clusters)} clusters"
    return scatter_svg(groups, centroids, [(o.lon, o.lat) for o in oversized], title=title)


def export_depth_plots(levels: Sequence[Sequence[Sequence[Order]]], oversized: Sequence[Order] = ()) -> list[str]:
    """One SVG per splitting level; groups are coloured by position at that level."""
    out = []
    for depth, groups in enumerate(levels, start=1):
        colored = [(i, [(o.lon, o.lat) for o in g]) for i, g in enumerate(groups, start=1)]
        centers = [(i, mean_point(pts)) for i, pts in colored if pts]
        out.append(scatter_svg(colored, centers, [(o.lon, o.lat) for o in oversized],
                               title=f"after split level {depth}: {len(groups)} groups"))
    return out
