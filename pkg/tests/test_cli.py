from __future__ import annotations

import json
import subprocess
import sys

import pytest

from grasscodim.cli import (EXIT_CONFIG, EXIT_FAILED, EXIT_OK, EXIT_UNSTABLE, ConfigError,
                            RunConfig, main, read_config, run)


def test_normal_form_text():
    code, text = run("normal-form", RunConfig(grading="can", polynomial="z2*z1"))
    assert code == EXIT_OK
    assert text == "-1 * z1*z2"


def test_normal_form_k1_dependency_is_zero():
    code, text = run("normal-form", RunConfig(grading="k", k=1, l=1, m=2,
                                              polynomial="z1*[y1,z2] + z2*[y1,z1]"))
    assert code == EXIT_OK
    assert text == "0"


def test_normal_form_csv():
    code, text = run("normal-form", RunConfig(grading="can", polynomial="z2*z1", format="csv"))
    lines = text.splitlines()
    assert code == EXIT_OK
    assert lines == ["ppoly,term,coeff", "[],z1*z2,2"]


def test_codim_json_keys():
    code, text = run("codim", RunConfig(grading="can", n1=1, n2=1))
    obj = json.loads(text)
    assert code == EXIT_OK
    assert {"exact", "oracle", "certificate", "params", "grading"} <= set(obj)
    assert obj["exact"] == obj["oracle"] == 1


def test_codim_table():
    code, text = run("codim", RunConfig(grading="inf", max_total=2))
    rows = json.loads(text)
    assert code == EXIT_OK
    assert len(rows) == 6


def test_count_keys():
    code, text = run("count", RunConfig(grading="kstar", k=1, l=2, m=2, n1=2, n2=1))
    obj = json.loads(text)
    assert code == EXIT_OK
    assert {"family", "params", "formula_value", "enumeration_value", "match"} <= set(obj)
    assert obj["family"] == "SS1"


def test_bounds_reports_both_readings():
    code, text = run("bounds", RunConfig(grading="can", l=2, m=2, n1=1, n2=2))
    obj = json.loads(text)
    assert code == EXIT_OK
    assert obj["enumeration_reading"]["holds"] or obj["formula_reading"]["holds"]


def test_oracle_multidegree_gap_is_reported():
    code, text = run("oracle", RunConfig(grading="k", k=1, a="1", b="1,1"))
    obj = json.loads(text)
    assert code == EXIT_FAILED
    assert (obj["predicted"], obj["rank"]) == (4, 3)
    assert obj["stable"]


def test_oracle_unstable_exit_code():
    code, _ = run("oracle", RunConfig(grading="inf", n1=0, n2=3, l=1, m=2, N=2))
    assert code == EXIT_UNSTABLE


def test_verify_identities_small():
    code, text = run("verify-identities", RunConfig(grading="k", k=1, N=16, samples=200))
    obj = json.loads(text)
    assert code == EXIT_OK
    assert obj["total_violations"] == 0
    assert obj["field"] == "GF(3)"


def test_verify_identities_csv():
    code, text = run("verify-identities", RunConfig(grading="can", N=12, samples=50,
                                                    format="csv"))
    assert code == EXIT_OK
    assert text.splitlines()[0].count(",") >= 3


def test_ledger_runs():
    code, text = run("ledger", RunConfig(l=1, m=1, max_total=3, max_k=1))
    obj = json.loads(text)
    assert code == EXIT_OK
    assert obj["count"] == len(obj["discrepancies"])


@pytest.mark.parametrize("cfg, command", [
    (RunConfig(p=4), "count"),
    (RunConfig(q=7), "count"),
    (RunConfig(grading="bogus"), "count"),
    (RunConfig(grading="k"), "count"),
    (RunConfig(N=62), "oracle"),
    (RunConfig(), "normal-form"),
])
def test_invalid_config(cfg, command):
    with pytest.raises(ConfigError):
        run(command, cfg)


def test_main_exit_codes(capsys):
    assert main(["normal-form", "--grading", "can", "z2*z1"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "-1 * z1*z2"
    assert main(["count", "--p", "4"]) == EXIT_CONFIG
    assert "error" in capsys.readouterr().err


def test_config_file(tmp_path, capsys):
    path = tmp_path / "run.cfg"
    path.write_text("# kstar run\ngrading = kstar\nk = 1\nl=2\nm = 2\nn1=2\nn2=1\n")
    assert read_config(str(path))["k"] == 1
    assert main(["count", "--config", str(path)]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["family"] == "SS1"
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert main(["count", "--config", str(bad)]) == EXIT_CONFIG


def test_deterministic_output():
    cfg = RunConfig(grading="k", k=1, l=1, m=2, n1=1, n2=2, seed=5)
    assert run("codim", cfg) == run("codim", cfg)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "grasscodim", "normal-form", "z2*z1"],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_OK
    assert proc.stdout.strip() == "-1 * z1*z2"
