import csv
import json
import subprocess
import sys

import pytest

from subarea.cli import main
from subarea.synthetic import orders_csv, random_orders

ARTIFACTS = {"clusters.csv", "clusters.geojson", "report.json", "plot.svg", "oversized.csv"}
HEADER = "origin,vol_cbm,weight_ton,partner_longitude,partner_latitude\n"


@pytest.fixture
def orders_file(tmp_path):
    path = tmp_path / "orders.csv"
    path.write_text(orders_csv(random_orders(21, 500)))
    return path


def test_smoke_500_orders(orders_file, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["--input", str(orders_file), "--out-dir", str(out)]) == 0
    assert {p.name for p in out.iterdir()} == ARTIFACTS
    stdout = capsys.readouterr().out
    assert "clusters:" in stdout and "mean utilization:" in stdout and "elapsed:" in stdout
    report = json.loads((out / "report.json").read_text())
    rows = list(csv.DictReader((out / "clusters.csv").open()))
    assert len(rows) == 500
    assert report["cluster_count"] == len({r["cluster_id"] for r in rows})


def test_missing_input(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["--input", str(tmp_path / "nope.csv"), "--out-dir", str(out)]) == 1
    err = capsys.readouterr().err.strip().splitlines()
    assert len(err) == 1 and err[0].startswith("subarea: error: input_unreadable:")
    assert not out.exists()


def test_malformed_rows_exit_2(tmp_path):
    src = tmp_path / "in.csv"
    src.write_text(HEADER + "A,0.5,0.1,106.8,-6.2\nB,oops,0.1,106.8,-6.2\nC,0.5,0.1,106.8,-95\nD,0.4,0.1,106.9,-6.1\n")
    out = tmp_path / "out"
    assert main(["--input", str(src), "--out-dir", str(out)]) == 2
    report = json.loads((out / "report.json").read_text())
    assert [r["row"] for r in report["rejected"]] == [2, 3]
    assert ARTIFACTS <= {p.name for p in out.iterdir()}


def test_missing_column_is_fatal(tmp_path, capsys):
    src = tmp_path / "in.csv"
    src.write_text("origin,vol_cbm\nA,1\n")
    out = tmp_path / "out"
    assert main(["--input", str(src), "--out-dir", str(out)]) == 1
    assert "missing_column" in capsys.readouterr().err
    assert not out.exists()


def test_duplicate_ids_fatal(tmp_path):
    src = tmp_path / "in.csv"
    src.write_text(HEADER + "A,1,0.1,0,0\nA,1,0.1,1,1\n")
    assert main(["--input", str(src), "--out-dir", str(tmp_path / "out")]) == 1
    assert not (tmp_path / "out").exists()


@pytest.mark.parametrize("args", [
    ["--capacity-cbm", "0"],
    ["--weight-cap-ton", "-1"],
    ["--distance", "manhattan"],
    ["--bogus"],
])
def test_bad_arguments_exit_1(orders_file, tmp_path, args):
    with pytest.raises(SystemExit) as exc:
        code = main(["--input", str(orders_file), "--out-dir", str(tmp_path / "o")] + args)
        raise SystemExit(code)
    assert exc.value.code == 1
    assert not (tmp_path / "o").exists()


def test_column_overrides_and_delimiter(tmp_path):
    src = tmp_path / "in.csv"
    src.write_text("sid;v;w;x;y\nA;1;0.1;0;0\nB;1;0.1;1;1\nC;3;0.1;1;1\n")
    out = tmp_path / "out"
    code = main(["--input", str(src), "--out-dir", str(out), "--delimiter", ";",
                 "--col-id", "sid", "--col-vol", "v", "--col-weight", "w", "--col-lon", "x", "--col-lat", "y"])
    assert code == 0
    assert (out / "clusters.csv").read_text().splitlines()[0] == "sid;v;w;x;y;cluster_id"
    assert (out / "oversized.csv").read_text().splitlines()[1].startswith("C;")


def test_plot_flags(orders_file, tmp_path):
    out = tmp_path / "out"
    assert main(["--input", str(orders_file), "--out-dir", str(out), "--no-plot"]) == 0
    assert not (out / "plot.svg").exists()
    out2 = tmp_path / "out2"
    assert main(["--input", str(orders_file), "--out-dir", str(out2), "--plot-depths"]) == 0
    assert (out2 / "plot_depth_1.svg").exists()


def test_strict_weight_and_equirectangular(tmp_path):
    src = tmp_path / "in.csv"
    src.write_text(HEADER + "A,0.1,1.5,0,0\nB,0.1,1.5,0.001,0\nC,0.1,1.5,0.002,0\n")
    out = tmp_path / "out"
    assert main(["--input", str(src), "--out-dir", str(out), "--strict-weight", "--distance", "equirectangular"]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["cluster_count"] == 3
    assert all(c["weight_utilization"] <= 1.0 for c in report["per_cluster"])


def test_overwrites_existing_artifacts(orders_file, tmp_path):
    out = tmp_path / "out"
    out.mkdir()
    (out / "clusters.csv").write_text("stale")
    assert main(["--input", str(orders_file), "--out-dir", str(out)]) == 0
    assert (out / "clusters.csv").read_text().startswith("origin,")
    assert not [p for p in out.iterdir() if p.name.startswith(".")]


def test_module_entry_point(orders_file, tmp_path):
    out = tmp_path / "out"
    proc = subprocess.run([sys.executable, "-m", "subarea", "--input", str(orders_file), "--out-dir", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert ARTIFACTS <= {p.name for p in out.iterdir()}
