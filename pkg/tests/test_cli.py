import contextlib
import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from cli_cases import CASES
from qrot.cli import main
from qrot.weingarten import clear_memory_cache, table_filename

GOLDEN = Path(__file__).parent / "golden"


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        rc = main(argv)
    return rc, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("name,argv,code", CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv, code):
    rc, out, err = run(argv)
    assert rc == code
    assert out == (GOLDEN / f"{name}.out").read_text()
    if code == 2:
        assert err.strip() and not out
    # a second run must be byte-identical
    assert run(argv)[1] == out


def test_spec_values_in_goldens():
    assert run(["partitions", "--class", "nc2", "--k", "4"])[1].splitlines() == ["{1,2}{3,4}", "{1,4}{2,3}"]
    assert "odd ground set" in run(["partitions", "--class", "nc2", "--k", "3"])[2]
    assert json.loads(run(["weingarten", "--flavor", "orthogonal", "--k", "2", "--n", "2"])[1])["wg"] == [
        ["1/3", "-1/6"], ["-1/6", "1/3"]]
    u = json.loads(run(["weingarten", "--flavor", "unitary", "--d", "1*1*", "--n", "3"])[1])
    o = json.loads(run(["weingarten", "--flavor", "orthogonal", "--k", "2", "--n", "3"])[1])
    assert u["wg"] == o["wg"] and u["index"] == o["index"]
    c = json.loads(run(["verify", "counterexample", "--n", "2"])[1])
    assert (c["psi_x1_4"], c["free_prediction"], c["verdict"]) == ("1/3", "1/4", "NOT-FREE")
    b = json.loads(run(["verify", "bound-scan", "--flavor", "orthogonal", "--k", "2", "--n-min", "2", "--n-max", "50"])[1])
    assert b["d_estimate"] == "4/1" and b["argmax_n"] == 2 and b["is_lower_bound"] is True


def test_plain_and_approx():
    rc, out, _ = run(["mobius", "--lower", "{1}{2}{3}", "--upper", "{1,2,3}", "--format", "json"])
    assert json.loads(out) == {"lower": "{1}{2}{3}", "upper": "{1,2,3}", "value": "2/1"}
    assert run(["haar", "--flavor", "orthogonal", "--n", "3", "--word", "1,1 1,1", "--approx"])[1] == "1/3 ~0.333333333333\n"
    rc, out, _ = run(["cumulants", "--model", "semicircle:c=2", "--word", "1 1", "--format", "plain"])
    assert out == "{1,2} 2\n{1}{2} 0\n"
    rc, out, _ = run(["partitions", "--class", "all", "--k", "3", "--format", "csv"])
    assert rc == 0 and len(out.splitlines()) == 5


def test_cache_dir_and_validate(tmp_path, monkeypatch):
    clear_memory_cache()
    argv = ["weingarten", "--flavor", "orthogonal", "--k", "3", "--n", "4", "--cache-dir", str(tmp_path)]
    rc, first, _ = run(argv)
    assert rc == 0 and (tmp_path / table_filename("orthogonal", 3, 4)).exists()
    clear_memory_cache()
    assert run(argv)[1] == first
    assert run(["cache", "validate", "--cache-dir", str(tmp_path)])[0] == 0
    monkeypatch.setenv("QROT_CACHE_DIR", str(tmp_path))
    assert run(["cache", "validate"])[0] == 0
    path = tmp_path / table_filename("orthogonal", 3, 4)
    path.write_text(path.read_text().replace("/", "//", 1))
    rc, out, err = run(["cache", "validate"])
    assert rc == 3 and json.loads(out)["verdict"] == "FAIL"
    clear_memory_cache()
    rc, out, err = run(["weingarten", "--flavor", "orthogonal", "--k", "3", "--n", "4"])
    assert rc == 3 and "corrupted" in err
    clear_memory_cache()


def test_invalid_inputs_exit_2():
    for argv in (
        ["partitions", "--class", "nc"],
        ["weingarten", "--flavor", "unitary", "--k", "2", "--n", "3"],
        ["moments", "--model", "torus", "--word", "1"],
        ["moments", "--model", "semicircle", "--word", ""],
        ["verify", "bound-scan", "--flavor", "orthogonal", "--k", "2", "--n-min", "1", "--n-max", "3"],
        ["cache", "validate"],
    ):
        rc, out, err = run(argv)
        assert rc == 2 and err, argv


def test_console_entry_point_subprocess():
    r = subprocess.run([sys.executable, "-m", "qrot", "mobius", "--lower", "{1}{2}", "--upper", "{1,2}"],
                       capture_output=True, text=True, env={"PATH": "/usr/bin:/bin"})
    assert r.returncode == 0 and r.stdout == "-1\n"
