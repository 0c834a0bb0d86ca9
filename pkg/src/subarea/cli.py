"""Command line entry point: ingest, split, report.

Exit codes: 0 success, 1 fatal configuration or IO error (nothing written),
2 finished but some input rows were rejected.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

from .capacity_tree import Capacity, TreeSettings, bt_insert, depth_partitions, fallback_count, traverse_leaves
from .ingest import DEFAULT_SCHEMA, IngestError, oversized_csv, parse_orders, partition_oversized, resolve_schema
from .kmeans import KMeansConfig, Projection
from .report import export_clusters_csv, export_depth_plots, export_geojson, export_svg_plot, summarize

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_REJECTED_ROWS = 2

BOUNDARY_NOTE = (
    "single orders with volume >= capacity are removed before clustering, "
    "while a cluster whose volume equals the capacity is accepted"
)


class FatalError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    input_path: str
    output_dir: str
    vol_cap: float = 2.8
    weight_cap: float = 2.0
    seed: int = 0
    distance_mode: str = "degrees"
    strict_weight: bool = False
    max_iterations: int = 300
    rel_tolerance: float = 1e-4
    plot: bool = True
    plot_depths: bool = False
    delimiter: str = ","
    schema: dict = field(default_factory=dict)

    def validate(self):
        if not self.input_path or not self.output_dir:
            raise FatalError("bad_config", "input and output paths must be non-empty")
        if not (self.vol_cap > 0 and self.weight_cap > 0):
            raise FatalError("bad_config", "capacities must be positive")
        if self.seed < 0:
            raise FatalError("bad_config", "seed must be non-negative")
        if self.distance_mode not in ("degrees", "equirectangular"):
            raise FatalError("bad_config", f"unknown distance mode {self.distance_mode!r}")
        if self.max_iterations < 1 or self.rel_tolerance < 0:
            raise FatalError("bad_config", "max_iterations must be >= 1 and rel_tolerance >= 0")
        if len(self.delimiter) != 1:
            raise FatalError("bad_config", "delimiter must be a single character")


def build_artifacts(config: RunConfig) -> tuple[dict[str, str], object, int]:
    """Run the whole pipeline in memory. Returns (artifacts, report, rejected row count)."""
    config.validate()
    try:
        schema = resolve_schema(config.schema)
        with open(config.input_path, encoding="utf-8", newline="") as fh:
            parsed = parse_orders(fh, schema, config.delimiter)
    except IngestError as exc:
        raise FatalError(exc.code, str(exc)) from exc
    except (OSError, UnicodeDecodeError) as exc:
        raise FatalError("input_unreadable", f"{config.input_path}: {exc}") from exc

    ingest = partition_oversized(parsed.orders, config.vol_cap, config.weight_cap, parsed.rejected)
    projection = Projection.for_points(config.distance_mode, (o.lat for o in ingest.eligible))
    capacity = Capacity(config.vol_cap, config.weight_cap if config.strict_weight else None)
    settings = TreeSettings(
        KMeansConfig(2, config.seed, config.max_iterations, config.rel_tolerance), projection)

    root = None
    clusters = []
    if ingest.eligible:
        root = bt_insert(ingest.eligible, capacity, settings)
        clusters = traverse_leaves(root, capacity, projection)

    report = summarize(
        clusters, ingest.oversized, config.vol_cap, projection,
        fallback_splits=fallback_count(root) if root else 0,
        rejected=ingest.rejected,
        weight_cap=config.weight_cap if config.strict_weight else None,
        notes=[BOUNDARY_NOTE],
    )

    artifacts = {
        "clusters.csv": export_clusters_csv(clusters, schema, config.delimiter),
        "clusters.geojson": export_geojson(clusters, projection),
        "report.json": report.to_json(),
        "oversized.csv": oversized_csv(ingest.oversized, config.vol_cap, config.weight_cap, schema,
                                       config.delimiter),
    }
    if config.plot:
        artifacts["plot.svg"] = export_svg_plot(
            clusters, ingest.oversized, projection,
            title=f"{len(clusters)} clusters, capacity {config.vol_cap:g} m3")
    if config.plot_depths and root is not None:
        for depth, svg in enumerate(export_depth_plots(depth_partitions(root, projection), ingest.oversized), 1):
            artifacts[f"plot_depth_{depth}.svg"] = svg
    return artifacts, report, len(ingest.rejected)


def write_artifacts(output_dir: str, artifacts: dict[str, str]) -> None:
    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    umask = os.umask(0)
    os.umask(umask)
    staged = []
    try:
        for name, text in artifacts.items():
            fd, tmp = tempfile.mkstemp(prefix=f".{name}.", dir=out)
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            os.chmod(tmp, 0o666 & ~umask)
            staged.append((tmp, out / name))
        for tmp, final in staged:
            os.replace(tmp, final)
    finally:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)


def run(config: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    started = time.perf_counter()
    try:
        artifacts, report, n_rejected = build_artifacts(config)
        try:
            write_artifacts(config.output_dir, artifacts)
        except OSError as exc:
            raise FatalError("output_unwritable", f"{config.output_dir}: {exc}") from exc
    except FatalError as exc:
        print(f"subarea: error: {exc.code}: {exc}".replace("\n", " "), file=stderr)
        return EXIT_FATAL

    elapsed = time.perf_counter() - started
    fleet = report.fleet
    print(f"clusters: {report.cluster_count}", file=stdout)
    print(f"mean utilization: {fleet['mean_utilization']:.4f}", file=stdout)
    print(f"oversized orders: {fleet['oversized_count']}", file=stdout)
    print(f"rejected rows: {n_rejected}", file=stdout)
    print(f"fallback splits: {fleet['fallback_split_count']}", file=stdout)
    print(f"elapsed: {elapsed:.2f}s", file=stdout)
    print(f"output: {config.output_dir}", file=stdout)
    return EXIT_REJECTED_ROWS if n_rejected else EXIT_OK


class _Parser(argparse.ArgumentParser):
    # usage errors are configuration errors: exit 1, one line
    def error(self, message):
        self.exit(EXIT_FATAL, f"subarea: error: bad_arguments: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="subarea", description="Split delivery orders into capacity-bounded sub-areas.")
    p.add_argument("--input", required=True, help="order CSV file")
    p.add_argument("--out-dir", required=True, help="directory for the artifacts")
    p.add_argument("--capacity-cbm", type=float, default=2.8, help="vehicle volume cap in m3 (default 2.8)")
    p.add_argument("--weight-cap-ton", type=float, default=2.0, help="single-order weight cap in tons (default 2.0)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--distance", choices=("degrees", "equirectangular"), default="degrees")
    p.add_argument("--strict-weight", action="store_true",
                   help="also keep each cluster's weight within --weight-cap-ton")
    p.add_argument("--max-iterations", type=int, default=300)
    p.add_argument("--rel-tolerance", type=float, default=1e-4)
    p.add_argument("--plot", action=argparse.BooleanOptionalAction, default=True,
                   help="write plot.svg (default on)")
    p.add_argument("--plot-depths", action="store_true", help="also write one plot per split level")
    p.add_argument("--delimiter", default=",")
    for role, column in DEFAULT_SCHEMA.items():
        p.add_argument(f"--col-{role}", dest=f"col_{role}", default=column,
                       help=f"column holding the order {role} (default {column})")
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        input_path=args.input,
        output_dir=args.out_dir,
        vol_cap=args.capacity_cbm,
        weight_cap=args.weight_cap_ton,
        seed=args.seed,
        distance_mode=args.distance,
        strict_weight=args.strict_weight,
        max_iterations=args.max_iterations,
        rel_tolerance=args.rel_tolerance,
        plot=args.plot,
        plot_depths=args.plot_depths,
        delimiter=args.delimiter,
        schema={role: getattr(args, f"col_{role}") for role in DEFAULT_SCHEMA},
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(config_from_args(args))


if __name__ == "__main__":
    sys.exit(main())
