import json

import mpmath

from klperiods.cli import main, parse_range


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_range():
    assert parse_range("1..4") == [1, 2, 3, 4]
    assert parse_range("2,4") == [2, 4]


def test_moment(capsys):
    code, out, _ = run(capsys, "moment", "1", "0", "0", "--digits", "40")
    assert code == 0
    with mpmath.workdps(60):
        assert abs(mpmath.mpf(out.split()[0]) - mpmath.pi / 2) < mpmath.mpf(10) ** -39


def test_divergent_moment_is_usage_error(capsys):
    code, _, err = run(capsys, "moment", "4", "2", "99")
    assert code == 2 and "diverges" in err


def test_bad_args(capsys):
    assert run(capsys, "moment", "1", "0")[0] == 2
    assert run(capsys, "moment", "1", "0", "0", "--digits", "10")[0] == 2
    assert run(capsys, "matrix", "betti", "40")[0] == 2


def test_matrix_json(capsys):
    code, out, _ = run(capsys, "matrix", "betti", "3", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["entries"] == [["-1/8", "0/1"], ["0/1", "-1/6"]]


def test_symbolic(capsys):
    assert run(capsys, "symbolic", "sym-power", "2")[1].strip() == "θ^3 − 4·t^2·θ − 4·t^2"
    assert run(capsys, "symbolic", "lambda", "3", "2")[1].strip() == "x^3 − 4·x"


def _strip(doc):
    doc["meta"].pop("timestamp")
    for r in doc["results"]:
        r.pop("seconds", None)
    return doc


def test_verify_json_deterministic(capsys):
    args = ("verify", "quadratic", "--k", "1..3", "--format", "json", "--digits", "40")
    c1, o1, _ = run(capsys, *args)
    c2, o2, _ = run(capsys, *args)
    assert c1 == c2 == 0
    d1, d2 = _strip(json.loads(o1)), _strip(json.loads(o2))
    assert d1 == d2
    assert {r["status"] for r in d1["results"]} == {"pass"}


def test_forced_failure_exit(capsys, monkeypatch):
    monkeypatch.setenv("KLPERIODS_PERTURB", "1e-20")
    code, out, _ = run(capsys, "verify", "quadratic", "--k", "3", "--digits", "30")
    assert code == 1
    assert "FAIL" in out


def test_output_file(tmp_path, capsys):
    path = tmp_path / "b.csv"
    code, out, _ = run(capsys, "verify", "exact", "--k-max", "4", "--format", "csv", "--output", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("id,params")
