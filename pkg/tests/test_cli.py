import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from plasticity import cli
from plasticity.closedforms import figure_curves


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_curve_figure_one_three_samples(capsys):
    code, out, _ = run(capsys, "curve", "--figure", "1", "--samples", "3")
    assert code == 0
    rows = list(csv.reader(out.splitlines()))
    assert rows[0] == ["theta", "series_a", "series_b", "series_c", "series_d", "series_e"]
    assert [float(r[0]) for r in rows[1:]] == [0.0, math.pi / 2, math.pi]
    assert [float(r[4]) for r in rows[1:]] == pytest.approx([-1, 0, 1], abs=1e-12)


def test_curve_figure_two(capsys):
    _, out, _ = run(capsys, "curve", "--figure", "2", "--samples", "2")
    rows = list(csv.reader(out.splitlines()))
    assert len(rows) == 3 and float(rows[1][2]) == 1.0


@pytest.mark.parametrize("figure", [1, 2])
def test_curve_round_trip(tmp_path, figure):
    path = tmp_path / "c.csv"
    assert cli.main(["curve", "--figure", str(figure), "--samples", "257", "--out", str(path)]) == 0
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    theta = np.array([float(r["theta"]) for r in rows])
    again = figure_curves(figure, theta)
    for key in ("series_a", "series_b", "series_c", "series_d", "series_e"):
        assert np.max(np.abs(np.array([float(r[key]) for r in rows]) - again[key])) <= 1e-12


def test_curve_byte_stable(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        cli.main(["curve", "--figure", "2", "--samples", "50", "--out", str(p)])
    assert a.read_bytes() == b.read_bytes()


def test_curve_json_and_degrees(capsys):
    code, out, _ = run(capsys, "curve", "--figure", "1", "--samples", "3", "--format", "json",
                       "--degrees")
    data = json.loads(out)
    assert code == 0 and [r[0] for r in data["rows"]] == pytest.approx([0, 90, 180])


def test_curve_usage_errors(capsys):
    assert run(capsys, "curve", "--figure", "1", "--samples", "1")[0] == 2
    assert run(capsys, "curve", "--figure", "3")[0] == 2
    assert run(capsys, "curve")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "--help")[0] == 0


def test_curve_unwritable_path(capsys, tmp_path):
    code, _, err = run(capsys, "curve", "--figure", "1", "--out", str(tmp_path / "no" / "x.csv"))
    assert code == 2 and "no/x.csv" in err


def test_singlet(capsys):
    code, out, _ = run(capsys, "singlet", "--j", "1")
    data = json.loads(out)
    assert code == 0 and data["dims"] == [3, 3]
    amps = {tuple(a["m"]): a["re"] for a in data["amplitudes"]}
    s = 1 / math.sqrt(3)
    assert amps == pytest.approx({(1, -1): s, (0, 0): -s, (-1, 1): s})
    assert data["uniqueness_max_violation"] <= 1e-10
    code, out, _ = run(capsys, "singlet", "--state", "four1", "--format", "csv")
    assert code == 0 and out.splitlines()[0] == "m1,m2,m3,m4,re,im"
    assert len(out.splitlines()) == 7
    assert run(capsys, "singlet", "--j", "1/3")[0] == 2


def test_probe_bell(capsys):
    code, out, _ = run(capsys, "probe", "--state", "bell", "--dir", "0", "--dir", "0")
    assert code == 0
    lines = dict(line.split(" = ") for line in out.splitlines())
    assert lines == {"P(-1/2,-1/2)": "0.000000", "P(-1/2,+1/2)": "0.500000",
                     "P(+1/2,-1/2)": "0.500000", "P(+1/2,+1/2)": "0.000000"}


def test_probe_spin_three_half_equal_dirs(capsys):
    _, out, _ = run(capsys, "probe", "--state", "singlet", "--j", "3/2", "--dir", "40,10",
                    "--degrees", "--format", "json", "--labels", "spin")
    data = json.loads(out)
    for row in data["rows"]:
        m1, m2 = row["m"]
        assert row["p"] == pytest.approx(0.25 if m1 == -m2 else 0, abs=1e-12)
    assert data["correlation"] == pytest.approx(-1.25)


def test_probe_four_qubit_parity(capsys):
    _, out, _ = run(capsys, "probe", "--state", "four1", "--dir", "0", "--format", "json")
    rows = json.loads(out)["rows"]
    p_even = sum(r["p"] for r in rows if sum(m < 0 for m in r["m"]) % 2 == 0)
    assert p_even == pytest.approx(1, abs=1e-12)


def test_probe_usage_errors(capsys):
    assert run(capsys, "probe", "--dir", "x")[0] == 2
    assert run(capsys, "probe")[0] == 2
    assert run(capsys, "probe", "--dir", "0", "--dir", "0", "--dir", "0")[0] == 2
    assert run(capsys, "probe", "--dir", "0", "--labels", "1,2,3")[0] == 2
    assert run(capsys, "probe", "--dir", "0", "--labels", "ks")[0] == 2
    assert run(capsys, "probe", "--dir", "0", "--tolerance", "bogus=1")[0] == 2
    assert run(capsys, "probe", "--dir", "0", "--tolerance", "oracle")[0] == 2


def test_probe_numerical_failure(capsys):
    code, _, err = run(capsys, "probe", "--state", "singlet", "--j", "2", "--dir", "0.3,0.2",
                       "--tolerance", "eigenvalue_match=1e-300")
    assert code == 3 and "numerical" in err


def test_verify_filter(capsys):
    code, out, _ = run(capsys, "verify", "--filter", "E321_spin", "--trials", "10")
    data = json.loads(out)
    assert code == 0 and [c["key"] for c in data["cases"]] == ["E321_spin"]
    assert data["cases"][0]["max_delta"] <= 1e-9


def test_verify_without_errata_fails(capsys, tmp_path):
    empty = tmp_path / "none.jsonl"
    empty.write_text("")
    code, out, _ = run(capsys, "verify", "--filter", "E321_enhanced", "--trials", "5",
                       "--errata", str(empty))
    assert code == 1 and json.loads(out)["cases"][0]["status"] == "fail"


def test_verify_writes_errata(capsys, tmp_path):
    path = tmp_path / "e.jsonl"
    code, _, _ = run(capsys, "verify", "--filter", "E321_enhanced", "--trials", "5",
                     "--write-errata", str(path))
    assert code == 0
    ids = [json.loads(line)["formula_id"] for line in path.read_text().splitlines()]
    assert ids == ["E321_enhanced", "E321_enhanced_domain", "sign_series"]


def test_verify_bad_args(capsys):
    assert run(capsys, "verify", "--trials", "0")[0] == 2
    assert run(capsys, "verify", "--filter", "nothing")[0] == 2


def test_chsh_scan(capsys):
    code, out, _ = run(capsys, "chsh-scan", "--grid", "24")
    data = json.loads(out)
    assert code == 0 and data["best"] == pytest.approx(2 * math.sqrt(2), abs=1e-5)
    assert "runtime" not in data and data["seed"] == 42
    _, out2, _ = run(capsys, "chsh-scan", "--grid", "24")
    assert out == out2
    _, out, _ = run(capsys, "chsh-scan", "--state", "four2", "--grid", "24", "--degrees")
    assert json.loads(out)["best"] == pytest.approx(2 * math.sqrt(2), abs=1e-5)
    _, out, _ = run(capsys, "chsh-scan", "--state", "singlet", "--j", "1", "--labels-a", "ks",
                    "--grid", "12", "--method", "grid")
    assert json.loads(out)["best"] <= 4


def test_enhance(capsys):
    code, out, _ = run(capsys, "enhance", "--step", "0.01")
    data = json.loads(out)
    assert code == 0 and data["agrees_with_claim"] is False
    assert data["boundary"] == pytest.approx(math.pi / 3, abs=0.01)
    assert run(capsys, "enhance", "--step", "-1")[0] == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "plasticity", "curve", "--figure", "1",
                          "--samples", "2"], capture_output=True, text=True, check=True)
    assert res.stdout.startswith("theta,series_a")
