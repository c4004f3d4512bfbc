import csv
import io
import json

import numpy as np
import pytest

from slithyp.cli import main
from slithyp.conformal import fit_map, load_map
from slithyp.domains import make_comb
from slithyp.reports import COMB_COLUMNS, PETERSEN_COLUMNS


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def files(tmp_path):
    comb2 = tmp_path / "comb2.json"
    comb2.write_text(make_comb(N=2).to_json())
    parabolic = tmp_path / "parabolic.json"
    parabolic.write_text(json.dumps({"model": "disk", "kind": "mobius", "coeffs": [[1, -1], [0, 1]]}))
    # the same parabolic map written as a Blaschke factor: no automorphism shortcut, slow 1/n approach
    slow = tmp_path / "slow.json"
    slow.write_text(json.dumps({"model": "disk", "kind": "blaschke", "coeffs": [[0, -1], [0.5, -0.5]]}))
    return {"comb2": str(comb2), "parabolic": str(parabolic), "slow": str(slow), "dir": tmp_path}


def test_orbit_csv(capsys, files):
    code, out, _ = run(capsys, "orbit", "--map", files["parabolic"], "--n", "200", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["n", "re", "im", "step_distance"]
    assert len(rows) == 202  # header plus n = 0..200
    assert rows[1][3] == "NaN"
    steps = np.array([float(r[3]) for r in rows[2:]])
    z = np.array([complex(float(r[1]), float(r[2])) for r in rows[1:]])
    assert np.all(np.abs(z) < 1)
    # an isometry: equal steps up to the rounding of points near the circle
    slack = 64 * np.finfo(float).eps / (1 - np.abs(z[1:-1]))
    assert np.all(steps[1:] <= steps[:-1] + slack * steps[1:])
    assert steps[-1] == pytest.approx(steps[0], rel=1e-9)


def test_bounds_json(capsys, files):
    code, out, _ = run(capsys, "bounds", "--domain", files["comb2"], "0.5,0", "0.5,0.6", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert 0 < d["lower"] <= d["upper"]
    assert d["curve"] == [[0.5, 0.0], [0.5, 0.6]]


def test_fitmap_reload_is_bit_exact(capsys, files):
    path = files["dir"] / "map.json"
    code, out, _ = run(capsys, "fitmap", "--domain", files["comb2"], "--samples", "128",
                       "--anchor", "0.5,0", "--out", str(path))
    assert code == 0 and out == ""
    m = load_map(path)
    direct = fit_map(make_comb(N=2), 128, 0.5)
    assert m.forward(0) == direct.forward(0)
    z = np.array([0.3 + 0.2j, -0.5j, 0.9])
    assert np.array_equal(m.forward(z), direct.forward(z))
    assert path.read_text() == direct.to_json(indent=1) + "\n"


def test_cluster_from_a_map_file(capsys, files):
    path = files["dir"] / "map.json"
    run(capsys, "fitmap", "--domain", files["comb2"], "--samples", "128", "--out", str(path))
    code, out, _ = run(capsys, "cluster", "--map-file", str(path), "--sigma=-1,0", "--levels", "3",
                       "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["level", "re", "im"]
    assert {r[0] for r in rows[1:]} <= {"1", "2", "3"}


def test_report_columns_are_golden(capsys):
    code, out, _ = run(capsys, "petersen-report", "--format", "csv", "--n-max", "6")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == PETERSEN_COLUMNS
    assert len(rows) == 8
    code, out, err = run(capsys, "comb-report", "--format", "json", "--n-max", "6")
    d = json.loads(out)
    assert d["schema"] == "slithyp.comb-report/1" and d["columns"] == COMB_COLUMNS
    assert list(d["rows"][0]) == COMB_COLUMNS
    assert err == ""


def test_comb_report_warning_goes_to_stderr(capsys):
    code, _, err = run(capsys, "comb-report", "--h", "0.1", "--n-max", "3", "--format", "csv")
    assert code == 0 and "k/17" in err


def test_seventeen_digits(capsys):
    _, out, _ = run(capsys, "petersen-report", "--format", "csv", "--n-max", "4")
    T4 = next(r for r in csv.DictReader(io.StringIO(out)) if r["n"] == "4")["T_n"]
    assert len(T4.lstrip("-").replace(".", "").lstrip("0")) == 17


def test_outputs_are_deterministic(capsys, files):
    for argv in (["petersen-report", "--format", "json"],
                 ["comb-report", "--format", "csv", "--n-max", "8"],
                 ["orbit", "--map", files["parabolic"], "--format", "json", "--seed", "7"],
                 ["bounds", "--domain", files["comb2"], "0.5,0", "0.5,0.6", "--distance-upper"]):
        first = run(capsys, *argv)
        second = run(capsys, *argv)
        assert first == second and first[0] == 0


def test_global_flags_before_the_subcommand(capsys):
    a = run(capsys, "--format", "csv", "petersen-report", "--n-max", "3")
    b = run(capsys, "petersen-report", "--n-max", "3", "--format", "csv")
    assert a == b


def test_contract_errors_exit_2(capsys, files):
    bad = files["dir"] / "bad.json"
    bad.write_text('{"model": "disk",\n "kind": }')
    code, _, err = run(capsys, "orbit", "--map", str(bad))
    assert code == 2 and "line 2" in err
    code, _, err = run(capsys, "orbit", "--map", str(files["dir"] / "missing.json"))
    assert code == 2 and "FileFormatError" in err
    code, _, _ = run(capsys, "petersen-report", "--n-max", "61")
    assert code == 2
    code, _, _ = run(capsys, "comb-report", "--k", "0.5", "--h", "0.7")
    assert code == 2
    code, _, _ = run(capsys, "orbit", "--map", files["parabolic"], "--z0", "2,0")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["no-such-command"])
    assert exc.value.code == 2


def test_convergence_failure_exits_3(capsys, files):
    code, out, err = run(capsys, "dw", "--map", files["slow"])
    assert code == 3 and out == ""
    assert "ConvergenceFailure" in err


def test_dw_and_divergence(capsys, files):
    code, out, _ = run(capsys, "dw", "--map", files["parabolic"])
    d = json.loads(out)
    assert code == 0 and d["verdict"] == "denjoy-wolff"
    assert abs(complex(*d["point"]) - 1) < 1e-4
    code, out, _ = run(capsys, "divergence", "--map", files["parabolic"], "--n", "1000")
    assert code == 0 and json.loads(out)["rate"] < 1e-2


def test_default_anchor_moves_off_the_slit(capsys, files):
    # the center 0 of the comb square is the tip of a slit
    code, out, _ = run(capsys, "fitmap", "--domain", files["comb2"], "--samples", "128")
    assert code == 0
    assert json.loads(out)["normalization"]["anchor"] == [0.5, 0.0]
    code, _, err = run(capsys, "cluster", "--map-file", str(files["dir"] / "nope.json"))
    assert code == 2 and "cannot read map file" in err
