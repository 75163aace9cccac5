import os
import subprocess
import sys
from types import SimpleNamespace

import pandas as pd
import pytest

from src.data import load_scenario

from conftest import ROOT


@pytest.fixture
def run(cli, capsys):
    def _run(*argv):
        code = cli.main(cli.parse_args(list(argv)))
        out, err = capsys.readouterr()
        return code, out, err
    return _run


@pytest.fixture
def fx(fixtures_dir):
    return lambda name: os.path.join(fixtures_dir, name)


def _value_of(out, prop):
    values = {"T", "F", "TF", "I", "TI", "FI", "TFI"}
    for line in out.splitlines():
        parts = line.split()
        if len(parts) > 1 and parts[0] == prop and parts[1] in values:
            return parts[1]
    raise AssertionError(f"{prop} not in report")


def test_classify_tf_and_tfi(run, fx):
    code, out, _ = run("classify", "--scenario", fx("two_party.scn"), "--family", "c_AB,c_BA",
                       "--prop", "A<B", "--quiet")
    assert code == 0
    assert _value_of(out, "A<B") == "TF"
    code, out, _ = run("classify", "--scenario", fx("two_party.scn"),
                       "--family", "c_AB,c_BA", "--family", "c_ico", "--prop", "A<B", "--quiet")
    assert _value_of(out, "A<B") == "TFI"


def test_classify_csv(run, fx, tmp_path):
    path = str(tmp_path / "out" / "classify.csv")
    code, _, _ = run("classify", "--scenario", fx("two_party.scn"), "--prop", "A<B",
                     "--prop", "~(A<B)", "--emit-csv", path, "--quiet")
    assert code == 0
    table = pd.read_csv(path, keep_default_na=False)
    assert list(table.columns) == ["prop", "value", "support", "refute", "indet"]
    assert table["value"].tolist() == ["TFI", "TFI"]


def test_bind_sep(run, fx):
    code, out, _ = run("classify", "--scenario", fx("two_party.scn"), "--prop", "sep",
                       "--bind-sep", "--quiet")
    assert code == 0
    assert "GLUABLE" in out
    assert _value_of(out, "sep") == "TI"


def test_parse_error_exit_code(run, fx):
    code, out, err = run("classify", "--scenario", fx("two_party.scn"), "--prop", "A<<B", "--quiet")
    assert code == 2
    assert out == ""
    assert err.startswith("error: ParseError:")
    assert "column 3" in err


def test_semantic_error_exit_code(run, fx):
    code, _, err = run("classify", "--scenario", fx("two_party.scn"), "--family", "c_zz",
                       "--prop", "A<B", "--quiet")
    assert code == 3
    assert "UnknownContextError" in err


def test_contexts(run, fx):
    code, out, _ = run("contexts", "--scenario", fx("two_party.scn"), "--quiet")
    assert code == 0
    assert "  c_ico < c_AB" in out
    assert "Maximal: c_AB c_BA" in out
    assert "  c_ico    -         no     -" in out
    assert "  c_AB     A<B       yes    c_ico" in out


def test_glue_separable(run, fx):
    code, out, _ = run("glue", "--scenario", fx("separable.scn"), "--quiet")
    assert code == 0
    assert "Verdict: GLUABLE" in out
    assert "weight" in out


def test_glue_mutual_guessing(run, fx):
    code, out, _ = run("glue", "--scenario", fx("mutual_guessing.scn"), "--witness", "--quiet")
    assert code == 10
    assert "Verdict: NOT GLUABLE" in out
    assert "(tight)" in out
    assert "Causal fraction: 0 (0.000000)" in out
    assert "L1 distance: 4 (4.000000)" in out


def test_fraction(run, fx):
    code, out, _ = run("fraction", "--scenario", fx("separable.scn"), "--measure", "cf", "--quiet")
    assert code == 0
    assert "Causal fraction: 1 (1.000000)" in out
    assert "L1 distance" not in out


def test_unnormalized_behaviour(run, tmp_path):
    path = tmp_path / "bad.scn"
    path.write_text("[scenario]\nparties: A\nsettings: 1\noutcomes: 2\n"
                    "[behavior]\n0 ; 0 ; 0.5\n0 ; 1 ; 0.49\n")
    code, _, err = run("glue", "--scenario", str(path), "--quiet")
    assert code == 3
    assert "NormalizationError" in err


def test_simulate_then_glue(run, fx, tmp_path):
    behaviour = str(tmp_path / "induced.scn")
    argv = ["simulate", "--model", fx("theta_race.model"), "--samples", "2000", "--seed", "42",
            "--then-glue", "--emit-behavior", behaviour, "--quiet"]
    code, out, _ = run(*argv)
    assert code == 0
    assert "P(A before B)" in out
    assert "Verdict: GLUABLE" in out
    assert load_scenario(behaviour).behavior is not None
    code_again, out_again, _ = run(*argv)
    assert code_again == 0
    assert out_again == out


def test_simulate_stationary_listing(run, fx):
    code, out, _ = run("simulate", "--model", fx("helicity_bias.model"), "--samples", "200",
                       "--seed", "1", "--quiet")
    assert code == 0
    assert "1/3 (0.333333)" in out
    assert "2/3 (0.666667)" in out


def test_inadmissible_seed(run, tmp_path):
    path = tmp_path / "bad.model"
    path.write_text("[graph]\ne1: v1 v2\ne2: v1 v2\ne3: v1 v2\n"
                    "[spins]\ne1: 2\ne2: 2\ne3: 1\n[moves]\nkinds: HelicityFlip\n")
    code, _, err = run("simulate", "--model", str(path), "--seed", "1", "--quiet")
    assert code == 4
    assert "InadmissibleSeedError" in err


def test_missing_seed_is_a_usage_error(cli):
    with pytest.raises(SystemExit) as info:
        cli.parse_args(["simulate", "--model", "x.model"])
    assert info.value.code == 2


def test_binary_exit_code_in_subprocess(fx):
    result = subprocess.run([sys.executable, os.path.join(ROOT, "scripts", "causal_glue.py"),
                             "glue", "--scenario", fx("mutual_guessing.scn"), "--quiet"],
                            capture_output=True, text=True)
    assert result.returncode == 10
    assert "NOT GLUABLE" in result.stdout


@pytest.mark.parametrize("horizon", ["0", "-1", "inf"])
def test_simulate_rejects_a_bad_horizon(run, fx, horizon):
    code, out, err = run("simulate", "--model", fx("theta_race.model"), "--seed", "1",
                         f"--horizon={horizon}", "--quiet")
    assert code == 3
    assert out == ""
    assert "SemanticError" in err and "--horizon" in err


def test_too_many_contexts_exit_code(run, tmp_path):
    path = tmp_path / "wide.scn"
    path.write_text("[scenario]\nparties: A B\nsettings: 2 2\noutcomes: 2 2\n[contexts]\n"
                    + "".join(f"c{i}: -\n" for i in range(65)))
    code, _, err = run("contexts", "--scenario", str(path), "--quiet")
    assert code == 3
    assert "SizeError" in err


def _fixture_commands():
    import importlib.util
    path = os.path.join(ROOT, "scripts", "test_fixture_runs.py")
    spec = importlib.util.spec_from_file_location("test_fixture_runs", path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module.fixture_commands(SimpleNamespace(fixtures="fixtures", samples=2000, seed=42))


@pytest.mark.parametrize("name,argv,expected", [pytest.param(*c, id=c[0]) for c in _fixture_commands()])
def test_reports_match_golden(run, golden, monkeypatch, name, argv, expected):
    monkeypatch.chdir(ROOT)
    code, out, _ = run(*argv)
    assert code == expected
    golden(name, out)
