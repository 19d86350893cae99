import csv
import io
import json

import pytest

from k3nl.cli import run


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_theta_json_scalar_prefix():
    code, out, _ = call("theta", "--l", "4", "--json")
    assert code == 0
    obj = json.loads(out)
    assert obj["scalar"][:3] == [["0", "-1"], ["1", "108"], ["9/8", "320"]]
    assert obj["coefficients"] == ["-1", "-5/4", "-16/21"]


def test_theta_family_two():
    code, out, _ = call("theta", "--l", "6", "--family", "2", "--format", "json", "--trunc", "6")
    assert code == 0
    assert json.loads(out)["coefficients"] == ["-1", "-17/8", "-22/7", "-18/5"]


def test_s_check_prints_float():
    code, out, _ = call("theta", "--l", "2", "--s-check")
    assert code == 0
    line = out.strip().splitlines()[-1]
    assert line.startswith("S-transformation residual") and float(line.split()[-1]) < 1e-6


def test_picrank():
    assert call("picrank", "--l", "6")[1] == "4\n"
    code, out, _ = call("picrank", "--sweep", "8", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["l", "rank", "value"]
    assert [r[1] for r in rows[1:]] == ["2", "3", "4", "4"]


def test_nl_csv_columns():
    code, out, _ = call("nl", "quartic", "--dmax", "2", "--format", "csv")
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["h", "d", "disc", "coset", "value"]
    assert rows[1] == ["0", "1", "9", "1", "320"]
    assert ["0", "2", "12", "2", "5016"] in rows


def test_gw_json():
    code, out, _ = call("gw", "--dmax", "3", "--json")
    obj = json.loads(out)
    assert [r["bps"] for r in obj["rows"]] == ["640", "10032", "288384"]
    assert obj["rows"][2]["gw"] == "7787008/27"


def test_bps_and_predict():
    code, out, _ = call("bps", "kkv", "--gmax", "2", "--hmax", "2", "--json")
    r = {(e["g"], e["h"]): e["value"] for e in json.loads(out)["r"]}
    assert r[(1, 2)] == -54 and r[(2, 2)] == 3
    code, out, _ = call("predict", "--genus", "0", "--dmax", "3", "--family", "doubled", "--json")
    assert [row["value"] for row in json.loads(out)["rows"]] == ["640", "10032", "288384"]


def test_lattice_mu():
    code, out, _ = call("lattice", "mu", "--l", "4", "--h", "-1", "--d", "4", "--gram", "4,0,0,-2", "--json")
    obj = json.loads(out)
    assert obj["mu"] == 2 and obj["refined"] == {"1": 2}


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nformat = csv\nfamily = l8-quadrics\nscalar_q_order = 12\n")
    code, out, _ = call("nl", "--config", str(cfg), "--dmax", "1")
    assert out.splitlines()[:2] == ["h,d,disc,coset,value", "0,1,17,1,128"]
    code, out, _ = call("nl", "--config", str(cfg), "--dmax", "1", "--format", "json")
    assert json.loads(out)["family"] == "l8-quadrics"


@pytest.mark.parametrize("argv", [
    ("bogus",),
    ("theta", "--l", "5"),
    ("picrank",),
    ("lattice", "mu", "--l", "4", "--h", "0", "--d", "1", "--gram", "1,2"),
])
def test_usage_errors(argv):
    code, _, err = call(*argv)
    assert code == 2
    assert "usage" in err


def test_bad_config(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert call("picrank", "--l", "2", "--config", str(cfg))[0] == 2
    assert call("picrank", "--l", "2", "--config", str(tmp_path / "missing"))[0] == 2


def test_computation_errors():
    code, _, err = call("bps", "kkv", "--gmax", "5", "--hmax", "2")
    assert code == 1 and "gmax" in err
    code, _, err = call("nl", "quartic", "--dmax", "12", "--trunc", "5")
    assert code == 1
    assert call("picrank", "--l", "3")[0] == 1


def test_deterministic_output():
    a = call("nl", "l6-family1", "--dmax", "4", "--json")
    b = call("nl", "l6-family1", "--dmax", "4", "--json")
    assert a == b


def test_verify_exit_codes():
    code, out, _ = call("verify", "--suite", "kkv")
    assert code == 0 and "PASS" in out
    code, out, _ = call("verify", "--suite", "modular", "--json")
    obj = json.loads(out)
    # exit status mirrors the suite verdict
    assert code == (0 if obj["passed"] else 1)
