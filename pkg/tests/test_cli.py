import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from cubelab.cli import main
from cubelab.matrices import read_matrix

DATA = Path(__file__).parent / "data"


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv)
    assert code == 0, text
    return json.loads(text)


def test_matrix_check_golden():
    code, text = run("matrix", "check", "example")
    assert code == 0
    assert text == '{"all_minors_nonsingular": true}\n'


def test_rho_query_golden():
    assert run_json("rho", "--n", "3") == {"n": 3, "rho": 1, "variant": "plain"}
    assert run_json("rho", "--n", "36", "--variant", "smooth", "--eta", "0.5")["rho"] == 0


def test_rho_table_and_csv():
    d = run_json("rho", "--N", "40")
    assert d["counts"][10] == 3 and len(d["counts"]) == 41
    code, text = run("rho", "--N", "12", "--format", "csv")
    assert text.splitlines()[0] == "n,rho" and text.splitlines()[11] == "10,3"


def test_build_reproduces_worked_example():
    d = run_json("matrix", "build", "--aux", "3,4,4,0", "--lam", "8", "--block", "example")
    assert d["matrix"] == read_matrix(DATA / "worked_13x25.txt").tolist()
    assert (d["R"], d["S"]) == (13, 25)


def test_delete_and_validate(tmp_path):
    src = str(DATA / "worked_13x25.txt")
    d = run_json("matrix", "delete", src, "--aux", "3,4,4,0", "--pattern", "D2")
    assert d["shape"] == [3, 4, 3, 1] and (d["rows"], d["cols"]) == (12, 24)
    assert run_json("matrix", "validate", src, "--aux", "3,4,4,0") == {"valid": True}
    code, _ = run("matrix", "validate", src, "--aux", "3,4,3,1")
    assert code == 4


def test_reduce_and_hns():
    d = run_json("matrix", "reduce", "1,0,1,1;0,1,1,2", "--h", "0,1,0,0")
    assert d["matrix"] == [[1, 0, -2, 1], [0, 1, 1, -1]] and d["H"] == [0, 1]
    d = run_json("matrix", "check", "1,0,1,1;0,1,1,2", "--hns")
    assert d["highly_nonsingular"] and d["block_equivalence"] == [True, True]


def test_counts_are_reproducible_without_timing():
    a = run("count", "iomega", "--shape", "0,3,2,0", "--P", "4", "--no-timing")
    b = run("count", "iomega", "--shape", "0,3,2,0", "--P", "4", "--no-timing", "--threads", "3")
    assert json.loads(a[1])["count"] == json.loads(b[1])["count"] == "448"
    assert a == run("count", "iomega", "--shape", "0,3,2,0", "--P", "4", "--no-timing")


def test_count_system_and_xi():
    assert run_json("count", "system", "--C", "1", "--signature", "1,-1", "--P", "20")["count"] == "20"
    assert run_json("xi", "--A", "1,1", "--N", "36")["count"] == "65"
    d = run_json("xi", "--A", "1,0,1,1;0,1,1,2", "--N", "200", "--bound")
    assert int(d["count"]) <= int(d["system_bound"])


def test_circle_commands():
    d = run_json("circle", "gauss", "--q", "2", "--a", "1")
    assert abs(d["value"]["re"]) < 1e-12 and d["method"] == "closed-form"
    d = run_json("circle", "v", "--beta", "0", "--P", "10")
    assert d["value"]["re"] == 10.0
    d = run_json("circle", "arcs", "--alpha", "1/7", "--P", "100")
    assert d["arc"] == {"q": 7, "a": 1}
    d = run_json("circle", "moment", "--P", "5", "--power", "2")
    assert d["value"] == pytest.approx(5)


def test_lab_run_by_short_tag():
    d = run_json("lab", "run", "lemma24", "--shape", "0,3,2,0", "--pmax", "6")
    assert d["verdict"] == "consistent" and d["slope_ok"]
    assert d["target"] == "aux-system"


def test_lab_list():
    d = run_json("lab", "list")
    assert "aux-system" in d and "correlation" in d


@pytest.mark.parametrize("argv,code", [
    (["rho"], 2),
    (["rho", "--n", "-3"], 2),
    (["bogus"], 2),
    (["matrix", "check", "1,2;3"], 2),
    (["xi", "--A", "1,1", "--N", "100000000000"], 3),
    (["count", "system", "--C", "1,1,-2", "--P", "60", "--budget", "100"], 3),
    (["matrix", "validate", "1,2;3,4", "--adjuvant", "1,3"], 4),
    (["lab", "run", "nope"], 2),
])
def test_exit_codes(argv, code):
    assert run(*argv)[0] == code


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "cubelab", "rho", "--n", "10"], capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["rho"] == 3


def test_cache_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("CUBELAB_CACHE", str(tmp_path))
    run_json("rho", "--N", "1000")
    assert any(p.suffix == ".cubl" for p in tmp_path.iterdir())


def test_random_matrices_follow_seed():
    a = run_json("matrix", "random", "--adjuvant", "1,3", "--seed", "7")
    b = run_json("matrix", "random", "--adjuvant", "1,3", "--seed", "7")
    c = run_json("matrix", "random", "--adjuvant", "1,3", "--seed", "8")
    assert a == b and a != c
    d = run_json("matrix", "random", "--aux", "1,3,2,1", "--seed", "1")
    assert (d["rows"], d["cols"]) == (4, 8)


def test_moment_power_defaults_to_delta():
    d = run_json("circle", "moment", "--P", "4", "--delta", "0.5")
    assert d["params"]["power"] == 2.5
