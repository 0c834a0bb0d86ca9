"""Order table parsing and the oversized-order pre-filter."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, TextIO

DEFAULT_SCHEMA = {
    "id": "origin",
    "vol": "vol_cbm",
    "weight": "weight_ton",
    "lon": "partner_longitude",
    "lat": "partner_latitude",
}

ROLES = tuple(DEFAULT_SCHEMA)


class IngestError(ValueError):
    """Fatal input problem (missing column, duplicate ids)."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class Order:
    id: str
    vol_cbm: float
    weight_ton: float
    lon: float
    lat: float


@dataclass(frozen=True)
class RowError:
    row: int  # 1-based data row index, header excluded
    reason: str


@dataclass
class ParsedOrders:
    orders: list[Order] = field(default_factory=list)
    rejected: list[RowError] = field(default_factory=list)
    rows: int = 0


@dataclass
class IngestResult:
    eligible: list[Order] = field(default_factory=list)
    oversized: list[Order] = field(default_factory=list)
    rejected: list[RowError] = field(default_factory=list)


def resolve_schema(overrides: dict[str, str] | None = None) -> dict[str, str]:
    schema = dict(DEFAULT_SCHEMA)
    for role, column in (overrides or {}).items():
        if role not in schema:
            raise IngestError("bad_schema", f"unknown column role {role!r}")
        if column:
            schema[role] = column
    return schema


def _number(raw: str, label: str) -> float:
    try:
        value = float(raw)
    except (TypeError, ValueError):
        raise ValueError(f"invalid number in {label}") from None
    if not math.isfinite(value):
        raise ValueError(f"non-finite {label}")
    return value


def _row_to_order(row: dict[str, str], schema: dict[str, str]) -> Order:
    oid = (row.get(schema["id"]) or "").strip()
    if not oid:
        raise ValueError("missing id")
    vol = _number(row.get(schema["vol"]), "volume")
    weight = _number(row.get(schema["weight"]), "weight")
    lon = _number(row.get(schema["lon"]), "longitude")
    lat = _number(row.get(schema["lat"]), "latitude")
    if vol < 0:
        raise ValueError("negative volume")
    if weight < 0:
        raise ValueError("negative weight")
    if not -180.0 <= lon <= 180.0:
        raise ValueError("longitude out of range")
    if not -90.0 <= lat <= 90.0:
        raise ValueError("latitude out of range")
    return Order(oid, vol, weight, lon, lat)


def parse_orders(
    source: TextIO | str,
    schema: dict[str, str] | None = None,
    delimiter: str = ",",
) -> ParsedOrders:
    """Read an order table.

    Bad rows (unparseable numbers, coordinates out of range, negative
    quantities) are collected in ``rejected`` with their 1-based data row
    index. A missing required column or a duplicated order id raises
    :class:`IngestError`.
    """
    if isinstance(source, str):
        source = io.StringIO(source)
    schema = resolve_schema(schema)
    reader = csv.DictReader(source, delimiter=delimiter)
    header = reader.fieldnames or []
    missing = [schema[r] for r in ROLES if schema[r] not in header]
    if missing:
        raise IngestError("missing_column", "missing required column(s): " + ", ".join(missing))

    parsed = ParsedOrders()
    for index, row in enumerate(reader, start=1):
        parsed.rows += 1
        try:
            parsed.orders.append(_row_to_order(row, schema))
        except ValueError as exc:
            parsed.rejected.append(RowError(index, str(exc)))

    seen: set[str] = set()
    dupes: list[str] = []
    for order in parsed.orders:
        if order.id in seen and order.id not in dupes:
            dupes.append(order.id)
        seen.add(order.id)
    if dupes:
        raise IngestError("duplicate_id", "duplicate order id(s): " + ", ".join(dupes))
    return parsed


def oversize_reasons(order: Order, vol_cap: float, weight_cap: float) -> list[str]:
    # volume uses >= and weight uses >, on purpose
    reasons = []
    if order.vol_cbm >= vol_cap:
        reasons.append("volume_ge_cap")
    if order.weight_ton > weight_cap:
        reasons.append("weight_gt_cap")
    return reasons


def partition_oversized(
    orders: Iterable[Order],
    vol_cap: float,
    weight_cap: float,
    rejected: list[RowError] | None = None,
) -> IngestResult:
    if vol_cap <= 0 or weight_cap <= 0:
        raise ValueError("capacities must be positive")
    result = IngestResult(rejected=list(rejected or []))
    for order in orders:
        if oversize_reasons(order, vol_cap, weight_cap):
            result.oversized.append(order)
        else:
            result.eligible.append(order)
    return result


def format_number(value: float) -> str:
    """Shortest string that parses back to the same float."""
    return repr(float(value))


def oversized_csv(
    oversized: Iterable[Order],
    vol_cap: float,
    weight_cap: float,
    schema: dict[str, str] | None = None,
    delimiter: str = ",",
) -> str:
    schema = resolve_schema(schema)
    buf = io.StringIO()
    writer = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    writer.writerow([schema[r] for r in ROLES] + ["reason"])
    for o in oversized:
        writer.writerow([
            o.id,
            format_number(o.vol_cbm),
            format_number(o.weight_ton),
            format_number(o.lon),
            format_number(o.lat),
            ";".join(oversize_reasons(o, vol_cap, weight_cap)),
        ])
    return buf.getvalue()
