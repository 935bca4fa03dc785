import json
import subprocess
import sys

import pytest

from weylbs.cli import main
from weylbs.fixture import FixtureError, load_fixture, parse_fixture, shipped_fixtures

EXIT = {"verified": 0, "found": 0, "refuted": 1, "none": 1}


@pytest.mark.parametrize("name", shipped_fixtures())
def test_every_shipped_fixture_meets_its_exit_code(name, capsys):
    fx = load_fixture(name)
    cmd = "search" if fx.kind == "search" else "verify"
    assert main([cmd, "-f", name]) == EXIT[fx.expect]
    report = json.loads(capsys.readouterr().out)
    assert report["label"] == fx.name


def test_verify_reports_bounds_and_witness(capsys):
    assert main(["verify", "-f", "veronese-xy", "--b", "(s+1)"]) == 1
    rep = json.loads(capsys.readouterr().out)
    assert rep["firstFailure"]["witness"] == [0, 0]
    assert "samplingBound" in rep and "gridBound" in rep


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["verify", "--bogus"])
    assert info.value.code == 2
    assert main(["verify", "-f", "no-such-fixture"]) == 2
    assert main(["nu", "--ring", "veronese:2:x,y", "--f", "x+y", "--module", "veronese-odd"]) == 2
    assert main(["verify", "-f", "veronese-xy", "--b", "(s+"]) == 2


def test_nu_fit_and_tables(tmp_path, capsys):
    assert main(["nu", "--ring", "segre:2,3", "--f", "x1*y1", "--module", "segre-b:2",
                 "-p", "5,7,11"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["predictedRoot"] == "-3"
    assert main(["fit", "--points", "5:3,7:5,11:9"]) == 0
    assert json.loads(capsys.readouterr().out)["fitted"] == "-2 + s"
    csv = tmp_path / "f.csv"
    assert main(["filtration", "--ring", "polynomial:x", "--w", "2", "--imax", "60",
                 "--csv", str(csv)]) == 0
    capsys.readouterr()
    assert csv.read_text().splitlines()[:3] == ["i,dim", "0,1", "1,3"]
    assert main(["diffsig", "--nmax", "10", "--csv", str(tmp_path / "d.csv")]) == 0


def test_segre_and_collapse(capsys):
    assert main(["segre-identities", "--a", "2", "--b", "2", "--full"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["full"]["report"]["verdict"] == "verified"
    assert main(["collapse", "-f", "veronese-x2"]) == 0


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "weylbs", "fit", "--points", "5:0,7:0"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["predictedRoot"] == "0"


def test_fixture_errors():
    with pytest.raises(FixtureError):
        parse_fixture("ring: veronese:2:x,y\nf: x*y\n")
    with pytest.raises(FixtureError):
        parse_fixture("ring: veronese:2:x,y\nf: x*y\nlet dz = x\nbs: dx*f^(s+1) = f^s\n")
    with pytest.raises(FixtureError):
        parse_fixture("ring: veronese:2:x,y\nf: dx\nbs: dx*f^(s+1) = f^s\n")
