from __future__ import annotations

import json
import subprocess
import sys

import pytest

from padyn.cli import main
from padyn.config import parse_config
from padyn.errors import ConfigError
from padyn.jobs import run_sweep
from padyn.report import read_csv

QUARTIC = """
[field]
p = 3
kind = "eisenstein"
relation = "pi^4 = p"

[multiplier]
lambda = "1+pi"
"""

STAR = """
[field]
p = 3
kind = "cyclotomic"
order = 9

[multiplier]
lambda = "1+pi+3"
"""

ROOT_OF_UNITY = """
[field]
p = 3
kind = "cyclotomic"
relation = "cyclotomic 3"

[multiplier]
lambda = "1+pi"
"""

FOUR = """
[field]
p = 3

[multiplier]
lambda = "4"
"""

BINOMIAL = """
[field]
p = 3

[multiplier]
lambda = "4"

[map]
series = "(1+x)^4 - 1"
"""


@pytest.fixture
def write(tmp_path):
    def _write(text: str, name: str = "job.toml") -> str:
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


def run_cli(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


# ---- configuration


def test_minimal_config():
    cfg = parse_config(QUARTIC)
    F = cfg.build_field()
    assert F.e == 4 and F.p == 3
    assert cfg.map == "lambda*x + x^2" and cfg.K == 50 and cfg.nmax == 2


def test_cyclotomic_preset():
    F = parse_config(STAR).build_field()
    assert F.e == 6
    assert parse_config(ROOT_OF_UNITY).build_field().e == 2


def test_eisenstein_coefficients_as_digit_strings():
    cfg = parse_config('[field]\np = 3\nkind = "eisenstein"\ncoefficients = ["10", 0]\n[multiplier]\nlambda = "1+pi"\n')
    assert cfg.field.coefficients == (3, 0)
    assert cfg.build_field().e == 2


@pytest.mark.parametrize(
    "text",
    [
        '[field]\nkind = "trivial"\n[multiplier]\nlambda = "4"\n',
        '[field]\np = "3"\n[multiplier]\nlambda = "4"\n',
        "[field]\np = 3\n",
        '[field]\np = 3\n[multiplier]\nlambda = "4"\n[extra]\nx = 1\n',
        '[field]\np = 3\n[multiplier]\nlambda = "4"\n[job]\ncommand = "plot"\n',
        '[field]\np = 4\n[multiplier]\nlambda = "4"\n',
        '[field]\np = 3\nkind = "cyclotomic"\norder = 6\n[multiplier]\nlambda = "4"\n',
        '[field]\np = 3\nkind = "eisenstein"\nrelation = "pi^2 = 9"\n[multiplier]\nlambda = "4"\n',
        "[field\np = 3",
    ],
)
def test_invalid_configs(text):
    with pytest.raises(ConfigError):
        parse_config(text)


# ---- commands


def test_analyze_quartic(write, capsys):
    code, out, _ = run_cli(["analyze", write(QUARTIC)], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["invariants"] == {"p": 3, "m": 1, "s": 1, "t": 1, "nu_1m": "1/4", "nu_gamma": "1/4"}
    assert doc["radii"]["nu_tilde_r"] == "7/12"
    assert doc["radii"]["nu_r"] == "1/2"
    assert doc["radii"]["nu_psi"] == "1/6"
    assert "approximate" not in doc


def test_analyze_star(write, capsys):
    code, out, _ = run_cli(["analyze", write(STAR)], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["invariants"]["t"] == 0 and doc["invariants"]["nu_gamma"] == "1/1"


def test_decimal_radii_are_labeled(write, capsys):
    code, out, _ = run_cli(["analyze", write(QUARTIC), "--decimal"], capsys)
    doc = json.loads(out)
    assert doc["approximate"]["nu_r"] == "~0.57735"
    assert doc["radii"]["nu_r"] == "1/2"


def test_root_of_unity_exit_code(write, capsys):
    code, _, err = run_cli(["analyze", write(ROOT_OF_UNITY)], capsys)
    assert code == 4
    assert "IndistinguishableFromRootOfUnity" in err


def test_missing_prime_exit_code(write, capsys):
    code, _, err = run_cli(["analyze", write('[field]\nkind = "trivial"\n')], capsys)
    assert code == 3 and "ConfigError" in err


def test_missing_file_exit_code(tmp_path, capsys):
    code, _, _ = run_cli(["analyze", str(tmp_path / "nope.toml")], capsys)
    assert code == 3


def test_conjugacy_quartic_checks_pass(write, capsys):
    code, out, _ = run_cli(["conjugacy", write(QUARTIC)], capsys)
    doc = json.loads(out)
    assert code == 0
    assert len(doc["coefficients"]["nu_b"]) == 50
    assert {c["name"] for c in doc["checks"]} >= {"general_bk_bound", "exact_bk_law", "tau_equality"}
    assert all(c["pass"] for c in doc["checks"])


def test_conjugacy_cancellation_table(write, capsys):
    code, out, _ = run_cli(["conjugacy", write(FOUR), "--K", "4", "--format", "csv"], capsys)
    rows = read_csv(out)
    assert code == 0
    assert [r["nu_b"] for r in rows] == ["0/1", "-1/1", "-2/1", "0/1"]


def test_conjugacy_truncation_one(write, capsys):
    code, out, _ = run_cli(["conjugacy", write(QUARTIC), "--K", "1"], capsys)
    assert code == 0
    assert json.loads(out)["coefficients"]["nu_b"] == [[1, "0/1"]]


def test_newton_csv_and_svg(write, tmp_path, capsys):
    out_path = tmp_path / "poly.csv"
    svg = tmp_path / "poly.svg"
    code, _, _ = run_cli(["newton", write(QUARTIC), "--format", "csv", "--out", str(out_path), "--svg", str(svg)], capsys)
    assert code == 0
    rows = read_csv(out_path.read_text())
    assert [(r["index"], r["nu"]) for r in rows] == [("1", "7/4"), ("2", "3/2"), ("5", "1/1"), ("14", "0/1")]
    spec = read_csv((tmp_path / "poly.spectrum.csv").read_text())
    assert [(r["period"], r["nu"], r["count"]) for r in spec] == [("1", "1/4", "1"), ("3", "1/6", "3"), ("9", "1/9", "9")]
    assert svg.read_text().startswith("<svg")


def test_newton_binomial_spectrum(write, capsys):
    code, out, _ = run_cli(["newton", write(BINOMIAL), "--nmax", "1"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["spectra"]["newton"] == [[1, "1/2", 2], [3, "1/6", 6]]
    assert doc["radii"]["nu_r_bijectivity"] == "1/2"


def test_newton_fixed_level_only(write, capsys):
    code, out, _ = run_cli(["newton", write(QUARTIC), "--nmax", "0"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert [lv["n"] for lv in doc["spectra"]["polygons"]] == [0]


def test_run_uses_job_command(write, capsys):
    code, out, _ = run_cli(["run", write(QUARTIC + '\n[job]\ncommand = "analyze"\n')], capsys)
    assert code == 0 and json.loads(out)["command"] == "analyze"


def test_run_without_command(write, capsys):
    code, _, _ = run_cli(["run", write(QUARTIC)], capsys)
    assert code == 3


def test_verify_unknown_suite(capsys):
    code, _, err = run_cli(["verify", "nosuch"], capsys)
    assert code == 3 and "ConfigError" in err


def test_verify_selected_items(capsys):
    code, out, _ = run_cli(["verify", "--only", "1", "3"], capsys)
    assert code == 0
    assert out.count("[PASS]") == 2


# ---- sweeps


SWEEP = QUARTIC + '\n[job]\ncommand = "analyze"\nsweep = ["1+pi", "1+pi^3", "1+pi^2", "1+3*pi"]\n'


def test_sweep_is_independent_of_worker_count():
    cfg = parse_config(SWEEP)
    serial = run_sweep("analyze", cfg, jobs=1)
    parallel = run_sweep("analyze", cfg, jobs=3)
    assert serial.to_json() == parallel.to_json()
    assert [r["input"]["lambda"] for r in serial.sweep] == ["1+pi", "1+pi^3", "1+pi^2", "1+3*pi"]


def test_sweep_records_errors():
    cfg = parse_config(ROOT_OF_UNITY + '\n[job]\nsweep = ["1+pi", "2"]\n')
    doc = run_sweep("analyze", cfg)
    assert doc.sweep[0]["error"]["exit_code"] == 4
    assert "error" not in doc.sweep[1]


def test_sweep_rejects_csv(write, capsys):
    code, _, _ = run_cli(["run", write(SWEEP), "--format", "csv"], capsys)
    assert code == 3


def test_module_entry_point(write):
    proc = subprocess.run(
        [sys.executable, "-m", "padyn", "analyze", write(QUARTIC)], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["radii"]["nu_r"] == "1/2"
