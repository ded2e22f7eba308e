import csv
import io
import json
import math
import subprocess
import sys

import pytest

from tmqft.cli import CORRELATOR_COLUMNS, LIMIT_COLUMNS, RSET_COLUMNS, main
from tmqft.correlators import hadamard_closed, pj_closed
from tmqft.geometry import WarpConfig


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_correlator_closed_row(capsys):
    code, out, _ = _run(capsys, "correlator", "--A", "2.718281828", "--L", "1", "--pair", "2,1;3,1.5",
                        "--chart", "null", "--form", "closed")
    assert code == 0
    assert out.splitlines()[0] == ",".join(CORRELATOR_COLUMNS)
    (row,) = _rows(out)
    cfg = WarpConfig(2.718281828, 1.0)
    cp, cm = hadamard_closed((2, 1), (3, 1.5), cfg).value, pj_closed((2, 1), (3, 1.5), cfg).value
    assert float(row["ReCp"]) == cp.real
    assert float(row["ImCm"]) == cm.imag
    assert float(row["ReW"]) == pytest.approx(0.5 * cp.real)
    assert row["status"] == "ok"


def test_correlator_singular_and_series(capsys):
    code, out, _ = _run(capsys, "correlator", "--A", "2.718281828", "--pair", "2,1;3,1",
                        "--pair=-1,3;3,1.5")
    assert code == 0
    light, general = _rows(out)
    assert light["status"] == "lightcone" and math.isnan(float(light["ReCp"]))
    assert general["status"] == "ok" and math.isfinite(float(general["ReCp"]))


def test_correlator_ty_chart_json(capsys):
    code, out, _ = _run(capsys, "correlator", "--delta", "0.01", "--pair", "0.2,0.3;0,0", "--chart", "ty",
                        "--format", "json")
    assert code == 0
    (row,) = json.loads(out)
    assert list(row) == CORRELATOR_COLUMNS
    assert row["chart"] == "ty" and row["status"] == "ok"


def test_correlator_domain_row_exit_1(capsys):
    code, out, _ = _run(capsys, "correlator", "--A", "2", "--pair", "2,-1;3,1", "--form", "closed")
    assert code == 1
    (row,) = _rows(out)
    assert row["status"].startswith("error:")


def test_limit_scan_rows(capsys):
    code, out, _ = _run(capsys, "limit-scan", "--delta-log", "1e-3:1e-1:9", "--pair-ty", "0,0;0,0.25", "--L", "1")
    assert code == 0
    rows = _rows(out)
    assert out.splitlines()[0] == ",".join(LIMIT_COLUMNS)
    assert len(rows) == 9
    assert float(rows[0]["delta"]) == pytest.approx(1e-3)
    assert all(r["status"] == "ok" for r in rows)
    assert float(rows[0]["cminus"]) < 5e-3


def test_rset_row(capsys):
    code, out, _ = _run(capsys, "rset", "--delta", "0.01", "--L", "1", "--chart", "z")
    assert code == 0
    assert out.splitlines()[0] == ",".join(RSET_COLUMNS)
    (row,) = _rows(out)
    assert float(row["T_mm"]) == pytest.approx(0.01 / (4 * math.pi) - math.pi / 12, abs=1e-4)
    assert float(row["T_pm"]) == pytest.approx(1.32629e-6, rel=2e-2)
    assert float(row["delta"]) == 0.01


def test_rset_zeta_default_point_and_horizon(capsys):
    code, out, _ = _run(capsys, "rset", "--A", "2", "--chart", "zeta", "--point", "1,1", "--point", "0,1")
    assert code == 1
    ok, bad = _rows(out)
    assert ok["status"] == "ok" and bad["status"].startswith("error:")
    code, out, _ = _run(capsys, "rset", "--A", "2", "--chart", "zeta")
    (row,) = _rows(out)
    assert code == 0 and float(row["x1"]) == pytest.approx(1 / math.log(2))


def test_usage_errors(capsys):
    assert _run(capsys, "correlator", "--A", "2", "--delta", "1", "--pair", "1,1;2,2")[0] == 2
    assert _run(capsys, "correlator", "--pair", "1,1;2,2")[0] == 2
    assert _run(capsys, "correlator", "--A", "2", "--pair", "1,1")[0] == 2
    assert _run(capsys, "correlator", "--A", "0.5", "--pair", "1,1;2,2")[0] == 2
    assert _run(capsys, "limit-scan", "--delta-log", "0:1:3", "--pair-ty", "0,0;0,1")[0] == 2
    assert _run(capsys, "rset", "--A", "2", "--format", "xml")[0] == 2
    assert _run(capsys, "frobnicate")[0] == 2
    code, _, err = _run(capsys, "correlator", "--A", "2", "--pair", "a,b;c,d")
    assert code == 2 and "error" in err


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# warp\ndelta = 0.01\nL=1\n\nchart=z\n")
    code, out, _ = _run(capsys, "--config", str(cfg), "rset")
    assert code == 0
    direct = _run(capsys, "rset", "--delta", "0.01", "--L", "1", "--chart", "z")[1]
    assert out == direct
    bad = tmp_path / "bad.cfg"
    bad.write_text("delta 0.01\n")
    assert _run(capsys, "--config", str(bad), "rset")[0] == 2
    assert _run(capsys, "--config", str(tmp_path / "missing.cfg"), "rset")[0] == 2


def test_output_file_and_determinism(tmp_path):
    argv = ["limit-scan", "--delta-log", "1e-3:1e-1:5", "--pair-ty", "0.2,0.3;0,0", "--pair-ty", "0,0;0,0.25"]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(argv + ["--output", str(a)]) == 0
    assert main(argv + ["--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    # a fresh interpreter gives the same bytes
    c = tmp_path / "c.csv"
    subprocess.run([sys.executable, "-m", "tmqft.cli"] + argv + ["--output", str(c)], check=True)
    assert c.read_bytes() == a.read_bytes()


def test_seventeen_digit_format(capsys):
    out = _run(capsys, "rset", "--delta", "0.01")[1]
    (row,) = _rows(out)
    assert row["delta"] == "%.17g" % 0.01 == "0.01"
    assert len(row["T_mm"].lstrip("-").replace(".", "").lstrip("0")) == 17


def test_verify_single_suite(capsys):
    code, out, _ = _run(capsys, "verify", "boundary")
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] and rep["suites"][0]["passed"]


def test_verify_correlators_single_warp(tmp_path):
    path = tmp_path / "v.json"
    assert main(["verify", "correlators", "--A", "5", "--output", str(path)]) == 0
    rep = json.loads(path.read_text())
    assert rep["passed"]
