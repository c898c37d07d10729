import io
import json
import subprocess
import sys

import pytest

from tamegauge.cli import EXIT_COMPUTE, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, run, to_table


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue()


def payload(*argv):
    code, out = call(*argv)
    assert code == EXIT_OK, out
    return json.loads(out)


def test_ptau_golden():
    data = payload("ptau", "--p", "5", "--f", "2", "--type", "ps:7,0")
    assert data["command"] == "ptau"
    assert data["result"]["p_tau"] == [0, 1, 2, 3]
    assert data["result"]["c"] == [2, 1]
    assert data["config"] == {"allow_p3": False, "f": 2, "p": 5, "type": "ps:7,0"}


def test_ideals_example_golden():
    ex = payload("ideals", "--delta", "2", "--check", "example")["result"]["example"]
    assert [e["latex"]["sum"] for e in ex] == [
        "(X'_{j_1},X'_{j_2},Y'_{j_1},Y'_{j_2})",
        "(X'_{j_1},Y'_{j_1})",
        "(X'_{j_1},X'_{j_2}Y'_{j_1})",
    ]


def test_jh_and_weights():
    data = payload("jh", "--type", "ps:2,0", "--J", "{0}")
    assert data["result"]["factors"] == [
        {"J": {"width": 1, "bits": 1}, "weight": {"s": [2], "d": 2}}
    ]
    data = payload("weights", "--rho", "red:2,0")
    assert data["result"]["generic"]
    assert data["result"]["weights"] == [{"s": [1], "d": 0}, {"s": [1], "d": 2}]


def test_interval_and_gauge():
    r = payload("interval", "--p", "5", "--f", "2", "--rho", "red:0,7", "--type", "ps:4,21")
    assert r["result"]["interval"] == {
        "j_min": {"width": 2, "bits": 0},
        "j_max": {"width": 2, "bits": 3},
    }
    g = payload("gauge", "--f", "2", "--type", "ps:7,0", "--J", "1", "--lattice", "socle")
    assert g["result"]["gauge"] == {"0": 0, "1": 1, "2": 0, "3": 1}
    g = payload("gauge", "--type", "ps:2,0", "--J", "0", "--measure")
    assert g["result"]["measured"] == {"0": 0, "1": 1}
    assert g["config"]["precision"] == 4


def test_predict():
    r = payload("predict", "--type", "ps:2,0", "--jmin", "0", "--jmax", "1", "--lambda", "1/3")
    assert r["result"]["gauge"] == {"0": 0, "1": "1/3"}
    assert r["result"]["lattice"] == "p^{0} L_{} + p^{1/3} L_{0}"


@pytest.mark.parametrize(
    "argv, code",
    [
        (["ptau", "--type", "ps:3,3"], EXIT_USAGE),  # scalar type
        (["ptau"], EXIT_USAGE),  # missing --type
        (["ptau", "--type", "ps:1,0", "--p", "4"], EXIT_USAGE),
        (["nonsense"], EXIT_USAGE),
        (["jh", "--type", "ps:5,0", "--f", "2", "--J", "2"], EXIT_USAGE),  # J outside P_tau
        (["gauge", "--type", "ps:2,0", "--J", "0", "--measure", "--precision", "20"], EXIT_COMPUTE),
        (["ideals", "--delta", "3", "--check", "example"], EXIT_USAGE),
        (["verify", "--suite", "chains", "--p", "5", "--f", "2"], EXIT_OK),
    ],
)
def test_exit_codes(argv, code):
    assert call(*argv)[0] == code


def test_failed_suite_exits_with_violation(monkeypatch):
    from tamegauge import verify

    def broken(p, f):
        res = verify.SuiteResult("chains", {"p": p, "f": f})
        res.fail({"why": "forced"})
        return res

    monkeypatch.setitem(verify.SUITES, "chains", broken)
    code, out = call("verify", "--suite", "chains")
    assert code == EXIT_VIOLATION
    assert json.loads(out)["result"]["pass"] is False


def test_table_matches_json():
    argv = ["jh", "--p", "5", "--f", "2", "--type", "ps:7,0"]
    data = payload(*argv)
    code, table = call(*argv, "--out", "table")
    assert code == EXIT_OK
    assert table.strip().splitlines() == to_table(data)
    for line in table.strip().splitlines():
        path, value = line.split("\t")
        node = data
        for part in path.replace("]", "").replace("[", ".").split("."):
            node = node[int(part)] if isinstance(node, list) else node[part]
        assert json.loads(value) == node


def test_output_is_deterministic(tmp_path):
    argv = ["verify", "--suite", "interval", "--p", "5", "--f", "1"]
    a = payload(*argv)["result"]
    b = payload(*argv)["result"]
    a.pop("seconds"), b.pop("seconds")
    assert a == b
    out = tmp_path / "ptau.json"
    assert call("ptau", "--type", "ps:2,0", "--out-file", str(out))[0] == EXIT_OK
    assert json.loads(out.read_text())["result"]["p_tau"] == [0, 1]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "tamegauge", "ptau", "--type", "ps:2,0"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(proc.stdout)["result"]["p_tau"] == [0, 1]
    proc = subprocess.run(
        [sys.executable, "-m", "tamegauge", "ptau", "--type", "ps:2,2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == EXIT_USAGE
    assert "usage error" in proc.stderr
