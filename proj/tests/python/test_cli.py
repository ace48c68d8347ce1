import json
import os
import subprocess

import pytest

CLI = os.environ.get("NHLATT_CLI", "nhlatt")


def run(*args, cwd):
    return subprocess.run(
        [CLI, *args], cwd=cwd, capture_output=True, text=True, timeout=600
    )


def test_validation_failures_exit_1(tmp_path):
    r = run(
        "scatter", "--L", "4", "--q", "9", "--sigma", "2", "--k", "1.5",
        "--gamma", "1", "--out", "x.csv", cwd=tmp_path,
    )
    assert r.returncode == 1
    assert "q" in r.stderr
    r2 = run("spectrum", "--L", "14", "--out", "y.csv", cwd=tmp_path)
    assert r2.returncode == 1  # missing --q


def test_spectrum_csv_schema_and_pairing(tmp_path):
    r = run(
        "spectrum", "--L", "14", "--q", "7", "--gamma", "2", "--vectors",
        "--out", "spec.csv", cwd=tmp_path,
    )
    assert r.returncode == 0, r.stderr
    lines = (tmp_path / "spec.csv").read_text().splitlines()
    header = lines[0].split(",")
    assert header[:3] == ["index", "re_lambda", "im_lambda"]
    assert header[3] == "occ_1" and header[-1] == "occ_14"
    assert len(lines) == 15

    values = [
        complex(float(l.split(",")[1]), float(l.split(",")[2]))
        for l in lines[1:]
    ]
    distinct = []
    for v in values:
        if not any(abs(v - w) < 1e-6 for w in distinct):
            distinct.append(v)
    assert len(distinct) == 7  # every eigenvalue appears twice

    # sidecar meta carries the full config echo
    meta = json.loads((tmp_path / "spec.csv.meta.json").read_text())
    assert meta["command"] == "spectrum"
    assert meta["L"] == 14 and meta["q"] == 7 and meta["gamma"] == 2.0


def test_byte_identical_reruns(tmp_path):
    args = [
        "scatter", "--L", "120", "--q", "60", "--j0", "30", "--sigma", "10",
        "--k-pi", "0.5", "--gamma", "2", "--tol", "1e-6", "--format", "json",
    ]
    r1 = run(*args, "--out", "a.json", cwd=tmp_path)
    r2 = run(*args, "--out", "b.json", cwd=tmp_path)
    assert r1.returncode == 0, r1.stderr
    assert r2.returncode == 0, r2.stderr
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()

    doc = json.loads((tmp_path / "a.json").read_text())
    assert doc["columns"] == [
        "gamma", "k", "R", "T", "A", "t_obs", "norm_final", "absorbed_integral",
    ]
    assert doc["meta"]["k"] == pytest.approx(1.5707963267948966)
    row = doc["rows"][0]
    assert row[2] + row[3] + row[4] == pytest.approx(1.0)


def test_config_file_overrides_flags(tmp_path):
    (tmp_path / "cfg.json").write_text(json.dumps({"gamma-max": 8.0}))
    r = run(
        "continuum", "--k-pi", "0.5", "--gamma-min", "0", "--gamma-max", "4",
        "--points", "5", "--config", "cfg.json", "--format", "json",
        "--out", "c.json", cwd=tmp_path,
    )
    assert r.returncode == 0, r.stderr
    doc = json.loads((tmp_path / "c.json").read_text())
    assert doc["meta"]["gamma_max"] == 8.0
    assert doc["rows"][-1][0] == 8.0


def test_ep_locate_and_classify(tmp_path):
    r = run(
        "ep-locate", "--L", "8", "--q", "4", "--gamma-min", "2.0",
        "--gamma-max", "3.0", "--out", "ep.csv", cwd=tmp_path,
    )
    assert r.returncode == 0, r.stderr
    lines = (tmp_path / "ep.csv").read_text().splitlines()
    gamma_c = float(lines[1].split(",")[0])
    assert 2.0 < gamma_c < 3.0
    assert lines[1].split(",")[3] == "single-extra-EP"

    r2 = run("classify-ep", "--L", "7", "--out", "cls.csv", cwd=tmp_path)
    assert r2.returncode == 0, r2.stderr
    row = (tmp_path / "cls.csv").read_text().splitlines()[1].split(",")
    assert row[3] == "third-order-EP"


def test_occupancy_dump(tmp_path):
    r = run(
        "scatter", "--L", "80", "--q", "40", "--j0", "20", "--sigma", "6",
        "--k-pi", "0.5", "--gamma", "1", "--tol", "1e-6",
        "--occupancy-out", "occ.csv", "--stride", "50",
        "--out", "s.csv", cwd=tmp_path,
    )
    assert r.returncode == 0, r.stderr
    lines = (tmp_path / "occ.csv").read_text().splitlines()
    assert lines[0] == "t,j,occupancy"
    assert len(lines) > 80  # at least one full frame
