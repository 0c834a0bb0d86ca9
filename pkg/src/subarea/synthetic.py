"""Random order tables for demos and tests."""

from __future__ import annotations

import csv
import io

import numpy as np

from .ingest import DEFAULT_SCHEMA, ROLES, Order, format_number


def random_orders(seed: int, n: int | None = None, vol_range=(0.05, 1.5), weight_range=(0.01, 1.0),
                  origin=(106.7, -6.3), box_deg=0.5) -> list[Order]:
    """Uniform orders in a ``box_deg`` x ``box_deg`` box; ``n`` defaults to a draw from [50, 2000]."""
    rng = np.random.default_rng(seed)
    if n is None:
        n = int(rng.integers(50, 2001))
    vols = rng.uniform(*vol_range, n)
    weights = rng.uniform(*weight_range, n)
    lons = origin[0] + rng.uniform(0.0, box_deg, n)
    lats = origin[1] + rng.uniform(0.0, box_deg, n)
    return [Order(f"SO{seed:04d}-{i:05d}", float(v), float(w), float(x), float(y))
            for i, (v, w, x, y) in enumerate(zip(vols, weights, lons, lats))]


def orders_csv(orders, schema=None) -> str:
    schema = {**DEFAULT_SCHEMA, **(schema or {})}
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([schema[r] for r in ROLES])
    for o in orders:
        writer.writerow([o.id] + [format_number(v) for v in (o.vol_cbm, o.weight_ton, o.lon, o.lat)])
    return buf.getvalue()
