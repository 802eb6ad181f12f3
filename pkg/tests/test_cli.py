import csv
import io
import json
from pathlib import Path

import click
import pytest
from click.testing import CliRunner

from ellpolylog.cli import main, parse_complex, parse_tau
from ellpolylog.eisenstein import bridge_factor, modular_DF, modular_F
from ellpolylog.jacobi import eisenstein_kronecker_e

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture
def run():
    runner = CliRunner()
    return lambda *args: runner.invoke(main, [str(a) for a in args])


@pytest.mark.parametrize("text,want", [("2i", 2j), ("0.3+0.1i", 0.3 + 0.1j), ("-1", -1), ("i", 1j),
                                       ("-i", -1j), ("1e-3-2.5i", 0.001 - 2.5j), (".5", 0.5)])
def test_parse_complex(text, want):
    assert parse_complex(text) == want


@pytest.mark.parametrize("text", ["0.3 + 0.1i", "", "1+", "abc", "2j", "1+2i+3"])
def test_parse_complex_rejects(text):
    with pytest.raises(click.BadParameter):
        parse_complex(text)


def test_parse_tau():
    with pytest.raises(click.BadParameter, match="positive imaginary"):
        parse_tau("1-2i")


def test_eval_theta(run):
    r = run("eval", "theta", "--z", "0.3+0.1i", "--tau", "2i")
    assert r.exit_code == 0
    v = json.loads(r.output)["value"]
    assert set(v) == {"re", "im"}


def test_eval_F_golden(run):
    r = run("eval", "F", "--k", 4, "--a", 1, "--b", 0, "--N", 4, "--tau", "2i")
    assert r.exit_code == 0
    got = json.loads(r.output)
    want = json.loads((GOLDEN / "eval_F_k4_a1_b0_N4_tau2i.json").read_text())
    assert got["meta"] == want["meta"] and got["meta"]["route"] == "lattice"
    assert abs(got["value"]["re"] - want["value"]["re"]) < 1e-15
    assert abs(got["value"]["im"] - want["value"]["im"]) < 1e-15
    # the frozen value agrees with the independent e_4 route
    e4 = eisenstein_kronecker_e(4, 0.5j, 2j) / bridge_factor(4)
    assert abs(e4 - complex(want["value"]["re"], want["value"]["im"])) < 1e-14


def test_eval_DF_passthrough(run):
    r = run("eval", "DF", "--k", 2, "--D", 3, "--a", 1, "--b", 0, "--N", 4, "--tau", "0.1+1.2i")
    v = json.loads(r.output)["value"]
    want = modular_DF(2, 1, 0, 4, 3, 0.1 + 1.2j).value
    assert complex(v["re"], v["im"]) == want


def test_eval_errors(run):
    assert run("eval", "nope", "--tau", "2i").exit_code == 2
    r = run("eval", "theta", "--z", "0.3 +0.1i", "--tau", "2i")
    assert r.exit_code == 2 and "malformed complex literal" in r.output
    r = run("eval", "theta", "--z", "0.3", "--tau", "-2i")
    assert r.exit_code == 2 and "positive imaginary" in r.output
    r = run("eval", "F", "--k", 3, "--a", 4, "--b", 0, "--N", 4, "--tau", "2i")
    assert r.exit_code == 2 and "divisible by N" in r.output
    r = run("eval", "theta", "--tau", "2i")
    assert r.exit_code == 2 and "--z" in r.output


def test_eval_eis_class_and_A_n(run):
    r = run("eval", "eis_class", "--n", 1, "--a", 1, "--b", 0, "--N", 3, "--tau", "2i")
    out = json.loads(r.output)
    assert "dtau_coefficient" in out["meta"]
    r = run("eval", "A_n", "--n", 1, "--z", "0.2+0.1i", "--tau", "2i", "--m", 1)
    assert r.exit_code == 0 and len(json.loads(r.output)["value"]) == 3


def test_verify_legendre(run, tmp_path):
    out = tmp_path / "rep.json"
    r = run("verify", "legendre", "--output", out)
    assert r.exit_code == 0
    rep = json.loads(out.read_text())
    assert set(rep) == {"suite", "checks", "config_hash"}
    for c in rep["checks"]:
        assert set(c) == {"name", "max_error", "tolerance", "passed"}
        assert c["passed"]
    assert [c["name"] for c in rep["checks"]] == sorted(c["name"] for c in rep["checks"])
    legendre = [c for c in rep["checks"] if c["name"] == "Legendre relation"][0]
    assert legendre["max_error"] < 1e-10


def test_verify_unknown_suite(run):
    r = run("verify", "nonsense")
    assert r.exit_code != 0 and "unknown suite" in r.output


def test_verify_failure_exit_status(run):
    # a deliberately crippled quadrature makes checks fail; the exit status must say so
    r = run("verify", "legendre", "--lattice-radius", 4)
    rep = json.loads(r.output)
    assert r.exit_code == (0 if all(c["passed"] for c in rep["checks"]) else 1)


def _table(run, tmp_path, name, *extra):
    out = tmp_path / name
    r = run("table", *extra, "--output", out)
    assert r.exit_code == 0, r.output
    return out.read_bytes()


def test_table_rows_and_determinism(run, tmp_path):
    args = ("F", "--k", 3, "--N", 3, "--a", 1, "--b", 0, "--tau-imag", "1,2,3,4,5")
    a = _table(run, tmp_path, "a.csv", *args)
    b = _table(run, tmp_path, "b.csv", *args)
    assert a == b
    lines = a.decode().splitlines()
    assert lines[0].startswith("# ellpolylog ") and "config_hash=" in lines[0] and "precision=" in lines[0]
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[1:]))))
    assert len(rows) == 5
    for row, t in zip(rows, range(1, 6)):
        v = modular_F(3, 1, 0, 3, complex(0, t)).value
        assert float(row["value_re"]) == v.real and float(row["tau_im"]) == t


def test_table_eis_class_matches_F3(run, tmp_path):
    grid = ("--tau-real", "0,0.3", "--tau-imag", "1,2", "--N", 4, "--a", 1, "--b", 2)
    e = _table(run, tmp_path, "e.csv", "eis_class", "--n", 1, *grid)
    f = _table(run, tmp_path, "f.csv", "F", "--k", 3, *grid)
    body = lambda raw: [r[-2:] for r in csv.reader(io.StringIO(raw.decode().split("\n", 1)[1]))]
    assert body(e)[1:] == body(f)[1:]


def test_table_json_and_errors(run, tmp_path):
    raw = _table(run, tmp_path, "t.json", "theta", "--tau-imag", "1", "--z", "0.1+0.1i", "--format", "json")
    doc = json.loads(raw)
    assert len(doc["rows"]) == 1 and "z" in doc["rows"][0]
    r = run("table", "F", "--k", 3, "--N", 3, "--a", 1, "--b", 0, "--tau-imag", "1",
            "--output", tmp_path / "missing" / "x.csv")
    assert r.exit_code != 0 and "missing" in r.output
    r = run("table", "F", "--k", 3, "--N", 3, "--a", 1, "--b", 0, "--tau-imag", "0,1")
    assert r.exit_code == 2


def test_verify_specialization_options(run):
    r = run("verify", "specialization", "--n", 2, "--N", 4, "--D", 3)
    assert r.exit_code == 0
    rep = json.loads(r.output)
    assert [c["name"] for c in rep["checks"]] == ["specialization of p_n^D, N=4, D=3, j0=1",
                                                  "specialization of p_n^D, N=4, D=3, j0=3"]
    assert all(c["max_error"] < 1e-6 for c in rep["checks"])
