import csv
import io
import json
import subprocess
import sys
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from renvol import cli
from renvol.errors import ConvergenceError
from renvol.exact_core import PiValue


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run_command(list(argv) + ["--no-manifest"], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch, tmp_path):
    monkeypatch.delenv(cli.PRECISION_ENV, raising=False)
    monkeypatch.chdir(tmp_path)


def walk_numbers(obj):
    """Yield every leaf value of a manifest."""
    if isinstance(obj, dict):
        for v in obj.values():
            yield from walk_numbers(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from walk_numbers(v)
    else:
        yield obj


class TestParsing:
    @pytest.mark.parametrize("text, value", [("3", F(3)), ("-2/3", F(-2, 3)), ("+7/14", F(1, 2)), ("0", F(0))])
    def test_accepts(self, text, value):
        assert cli.parse_rational(text) == value

    @pytest.mark.parametrize("text", ["0.5", "1e3", "1/0", "1/-2", "half", "", "1//2"])
    def test_rejects(self, text):
        with pytest.raises(Exception):
            cli.parse_rational(text)

    @given(st.fractions(max_denominator=10 ** 6))
    def test_round_trip(self, q):
        assert cli.parse_rational(cli.exact(q)) == q

    def test_negative_values_as_separate_tokens(self):
        code, out, _ = run("decompose", "--n", "4", "--beta", "-2/3", "--volL", "7")
        assert code == 0 and "residual 0" in out
        code, out, _ = run("grid", "--nmax", "0", "--betas", "-1,-1/2", "--volLs", "1")
        assert code == 0 and "2 grid points" in out


class TestCommands:
    def test_formula(self):
        code, out, _ = run("formula", "--n", "1", "--beta", "1/2", "--volL", "2")
        assert code == 0
        assert "(1/36)·π^2" in out and "0.27415567" in out

    def test_formula_without_metric_warns_but_succeeds(self):
        code, out, _ = run("formula", "--n", "1", "--beta", "2", "--volL", "1")
        assert code == 0 and "no complete KE metric" in out

    def test_decompose(self):
        code, out, _ = run("decompose", "--n", "4", "--beta", "-2/3", "--volL", "7")
        assert (code, out.strip()) == (0, "residual 0")

    def test_qprime_and_chern(self):
        code, out, _ = run("qprime", "--n", "1", "--beta", "1/2", "--volL", "2")
        assert code == 0 and "total Q'" in out
        code, out, _ = run("chern", "--n", "1", "--beta", "1/2", "--volL", "3")
        assert code == 0 and "-3/4" in out
        code, out, _ = run("chern", "--n", "2", "--beta", "0", "--volL", "1", "--chern-number", "5")
        assert code == 0 and "general" in out

    def test_profile(self):
        code, out, _ = run("profile", "--n", "1", "--beta", "1/2", "--samples", "100")
        assert code == 0 and "tau0 = 1/6" in out and "C = -5/432" in out

    def test_expand(self):
        code, out, _ = run("expand", "--n", "0", "--beta", "0", "--volL", "1", "--order", "2")
        assert code == 0
        assert "V = -1·π^1" in out and "agree" in out

    def test_renvol_fit(self):
        code, out, _ = run("renvol-fit", "--n", "1", "--beta", "1/2", "--volL", "1", "--precision", "128")
        assert code == 0 and ": ok" in out

    def test_localize(self):
        code, out, _ = run("localize", "--n", "1", "--beta", "1/2", "--volL", "3", "--degree", "4")
        assert code == 0 and "exact tube value = -3/4" in out

    def test_audit(self):
        code, out, _ = run("audit", "--nmax", "2", "--precision", "128")
        assert code == 0
        assert "[RATIO] formula_comparison" in out
        assert out.count("[PASS ]") == 4 and "FAIL" not in out

    def test_grid_csv(self, tmp_path):
        path = tmp_path / "g.csv"
        code, _, _ = run("grid", "--nmax", "2", "--betas", "0,1/2,3", "--volLs", "1,2", "--csv", str(path))
        assert code == 0
        rows = list(csv.reader(path.open()))
        assert rows[0] == cli.GRID_HEADER
        assert len(rows) == 1 + 3 * 3 * 2
        # rows come back in parameter order regardless of thread scheduling
        assert [(r[0], r[1], r[2]) for r in rows[1:4]] == [("0", "0", "1"), ("0", "0", "2"), ("0", "1/2", "1")]
        assert rows[1 + 3 * 3 * 2 - 1][6] == ""     # beta = 3 has no ratios

    def test_grid_deterministic_across_workers(self):
        one = run("grid", "--nmax", "3", "--workers", "1")[1]
        many = run("grid", "--nmax", "3", "--workers", "8")[1]
        assert one == many


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ["formula", "--n", "1", "--beta", "0.5", "--volL", "1"],
        ["formula", "--n", "1", "--beta", "1/2"],
        ["formula", "--n", "1", "--beta", "1/2", "--volL", "1", "--bogus"],
        ["frobnicate"],
        ["formula", "--n", "1", "--beta", "1/2", "--volL", "1", "--precision", "32"],
        ["formula", "--n", "1", "--beta", "1/2", "--volL", "-1"],
        ["expand", "--n", "1", "--beta", "1", "--volL", "1"],
        ["localize", "--n", "1", "--beta", "0", "--volL", "1", "--t1", "-1", "--t2", "-2"],
    ])
    def test_usage(self, argv):
        code, out, err = run(*argv)
        assert code == cli.EXIT_USAGE == 1
        assert "usage error" in err and out == ""

    def test_env_precision_floor(self, monkeypatch):
        monkeypatch.setenv(cli.PRECISION_ENV, "16")
        assert run("formula", "--n", "0", "--beta", "0", "--volL", "1")[0] == 1
        monkeypatch.setenv(cli.PRECISION_ENV, "lots")
        assert run("formula", "--n", "0", "--beta", "0", "--volL", "1")[0] == 1

    def test_invariant_violation(self, monkeypatch):
        monkeypatch.setattr(cli, "check_decomposition", lambda p: PiValue(F(1, 7), p.n + 1))
        code, out, _ = run("decompose", "--n", "1", "--beta", "0", "--volL", "1")
        assert code == cli.EXIT_INVARIANT == 2 and "VIOLATION" in out

    def test_audit_reports_a_broken_identity(self, monkeypatch):
        monkeypatch.setattr(cli, "check_decomposition", lambda p: PiValue(F(1), p.n + 1))
        code, out, _ = run("audit", "--nmax", "0", "--precision", "96")
        assert code == 2
        assert "[FAIL ] decomposition" in out and "[PASS ] reversion_vs_residue" in out

    def test_numeric_failure(self, monkeypatch):
        def boom(*a, **k):
            raise ConvergenceError("no bracket")
        monkeypatch.setattr(cli, "sample_volumes", boom)
        code, _, err = run("renvol-fit", "--n", "0", "--beta", "0", "--volL", "1")
        assert code == cli.EXIT_NUMERIC == 3 and "numeric failure" in err


class TestManifest:
    def test_written_by_default(self):
        assert cli.run_command(["formula", "--n", "1", "--beta", "1/2", "--volL", "2"], io.StringIO()) == 0
        data = json.load(open("renvol-formula.json"))
        assert data["schema"] == cli.SCHEMA and data["command"] == "formula"
        assert data["parameters"] == {"n": 1, "beta": "1/2", "volL": "2", "ke_exists": True}
        assert data["precision_bits"] == 256 and data["version"]
        assert data["timestamp"].endswith("+00:00")

    def test_stdout_and_env_precision(self, monkeypatch):
        monkeypatch.setenv(cli.PRECISION_ENV, "100")
        out = io.StringIO()
        cli.run_command(["qprime", "--n", "1", "--beta", "1/2", "--volL", "2", "--out", "-"], out)
        text = out.getvalue()
        data = json.loads(text[text.index("{"):])
        assert data["precision_bits"] == 100

    @pytest.mark.parametrize("argv", [
        ["formula", "--n", "2", "--beta", "-1", "--volL", "3"],
        ["expand", "--n", "1", "--beta", "1/2", "--volL", "1"],
        ["profile", "--n", "2", "--beta", "-1/3", "--samples", "50", "--precision", "96"],
        ["localize", "--n", "1", "--beta", "-1", "--volL", "1", "--precision", "96"],
        ["renvol-fit", "--n", "0", "--beta", "1/2", "--volL", "1", "--precision", "96"],
        ["grid", "--nmax", "1", "--betas", "0,1/3"],
    ])
    def test_no_untagged_floats_and_replay(self, argv):
        status, manifest, _ = cli.execute(argv)
        assert status == 0
        leaves = list(walk_numbers(manifest["results"]))
        assert not any(isinstance(v, float) for v in leaves)
        fresh = cli.replay_manifest(json.loads(json.dumps(manifest)))
        assert json.dumps(fresh["results"], sort_keys=True) == json.dumps(manifest["results"], sort_keys=True)
        assert fresh["precision_bits"] == manifest["precision_bits"]

    def test_replay_rejects_unknown_schema(self):
        with pytest.raises(ValueError):
            cli.replay_manifest({"schema": "other/9", "argv": []})


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "renvol", "formula", "--n", "0", "--beta", "0",
                           "--volL", "1", "--no-manifest"], capture_output=True, text=True)
    assert proc.returncode == 0 and "-1·π^1" in proc.stdout
