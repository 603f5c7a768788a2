from __future__ import annotations

import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from alcove_mcf import alcove_of, preset
from alcove_mcf.cli import main
from alcove_mcf.rootdata import dumps

SVG = "{http://www.w3.org/2000/svg}"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog")
    rows = out.strip().splitlines()
    assert code == 0 and len(rows) == 6
    sp = next(r for r in rows if r.startswith("sp-isotropy"))
    assert "rank n-1" in sp
    assert "rank p" in next(r for r in rows if r.startswith("sopq-hermann"))


def test_flow_outputs(capsys, tmp_path):
    out_json, svg, csv_path = tmp_path / "f.json", tmp_path / "f.svg", tmp_path / "f.csv"
    code, out, _ = run(capsys, "flow", "--preset", "sp-isotropy", "--n", "3",
                       "--start", "1.15,0,-1.15", "--out", str(out_json), "--svg", str(svg),
                       "--csv", str(csv_path), "--seed", "7")
    assert code == 0 and "WallHit" in out
    doc = json.loads(out_json.read_text())
    assert doc["status"] == "WallHit" and doc["seed"] == 7
    assert doc["stratum"]["walls"][0]["root_label"] == "b13"
    assert abs(doc["hit_time"] - 0.0688099) < 1e-6
    root = ET.parse(svg).getroot()
    paths = root.findall(f"{SVG}path")
    walls = [p for p in paths if p.get("class") == "wall"]
    trajs = [p for p in paths if p.get("class") == "trajectory"]
    assert len(walls) == len(alcove_of(preset("sp-isotropy", n=3)).facet_groups) == 3
    assert len(trajs) == 1
    raw = csv_path.read_bytes()
    assert b"\r\n" not in raw and raw.startswith(b"t,x1,x2,x3\n")


def test_flow_fixed_point(capsys, tmp_path):
    out_json = tmp_path / "f.json"
    code, out, _ = run(capsys, "flow", "--preset", "sp-isotropy", "--n", "3",
                       "--start", "1.0471975511965976,0,-1.0471975511965976", "--out", str(out_json))
    assert code == 0 and json.loads(out_json.read_text())["status"] == "FixedPoint"


def test_flow_outside(capsys):
    code, _, err = run(capsys, "flow", "--preset", "sp-isotropy", "--n", "3", "--start", "3,0,-3")
    assert code == 2 and "start point not in alcove interior" in err


@pytest.mark.parametrize("argv", [
    ["flow", "--preset", "sp-isotropy", "--n", "3"],
    ["flow", "--preset", "sp-isotropy", "--n", "3", "--start", "1,2"],
    ["flow", "--preset", "sp-isotropy", "--n", "3", "--start", "a,b,c"],
    ["minimal", "--preset", "supq-isotropy", "--p", "3", "--q", "2"],
    ["minimal"],
    ["minimal", "--preset", "sp-isotropy", "--custom", "x.json"],
    ["minimal", "--custom", "/nonexistent/file.json"],
    ["strata", "--preset", "sp-isotropy", "--n", "3", "--dim", "5"],
    ["identity-check", "--theta", "7.0"],
])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err.startswith("error:")


def test_numerical_failure_code(capsys):
    code, _, err = run(capsys, "singularity", "--preset", "sp-isotropy", "--n", "3",
                       "--start", "1.0471975511965976,0,-1.0471975511965976")
    assert code == 3 and "fixed point" in err


def test_minimal_supp(capsys, tmp_path):
    out_json = tmp_path / "m.json"
    code, out, _ = run(capsys, "minimal", "--preset", "supp-isotropy", "--p", "2",
                       "--out", str(out_json))
    assert code == 0 and out.startswith("(1.1780972451, 0.392699081699)")
    assert len(json.loads(out_json.read_text())["zeros"]) == 1


def test_strata_minimal(capsys):
    code, out, _ = run(capsys, "strata", "--preset", "sp-isotropy", "--n", "3", "--dim", "1",
                       "--minimal")
    assert code == 0
    mins = [line for line in out.splitlines() if "minimal" in line]
    assert len(mins) == 3
    assert "(0.523598775598, 0.523598775598, -1.0471975512)" in out
    assert "(1.0471975512, -0.523598775598, -0.523598775598)" in out
    assert "(1.57079632679, " in out


def test_singularity(capsys, tmp_path):
    out_json = tmp_path / "s.json"
    code, out, _ = run(capsys, "singularity", "--preset", "so2n-on-su2n", "--n", "3",
                       "--start", "0.65,0,-0.65", "--out", str(out_json))
    assert code == 0
    doc = json.loads(out_json.read_text())
    assert doc["predicted_limit"] == 0.25 and abs(doc["estimated_limit"] - 0.25) < 1e-6


def test_basin_svg(capsys, tmp_path):
    svg, csv_path = tmp_path / "b.svg", tmp_path / "b.csv"
    code, out, _ = run(capsys, "basin", "--preset", "so2p-hermann", "--p", "2", "--grid", "8",
                       "--svg", str(svg), "--csv", str(csv_path))
    assert code == 0
    root = ET.parse(svg).getroot()
    seeds = root.findall(f"{SVG}circle")
    assert len(seeds) == len(csv_path.read_text().splitlines()) - 1
    assert all(line.split(",")[2] == "WallHit"
               for line in csv_path.read_text().splitlines()[1:])


def test_identity_check(capsys, tmp_path):
    out_json = tmp_path / "i.json"
    code, out, _ = run(capsys, "identity-check", "--theta", "1.5707963", "--terms", "100000",
                       "--out", str(out_json))
    assert code == 0
    row = json.loads(out_json.read_text())["rows"][0]
    assert abs(row["closed"] - 1.0) < 1e-7
    assert row["partial_error"] < 1e-4 and row["corrected_error"] < 1e-9


def test_custom_file(capsys, tmp_path):
    path = tmp_path / "c.json"
    path.write_text(dumps(preset("sp-isotropy", n=3)))
    code, out, _ = run(capsys, "minimal", "--custom", str(path))
    assert code == 0 and out.startswith("(1.0471975512, ")


def test_reports_deterministic(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        main(["flow", "--preset", "supq-isotropy", "--p", "2", "--q", "5", "--start", "1.0,0.3",
              "--out", str(p)])
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "alcove_mcf.cli", "catalog"], capture_output=True,
                         text=True, check=True)
    assert len(out.stdout.strip().splitlines()) == 6
