import io
import json
import os
import subprocess
import sys

import pytest

from freestates.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_word_stats():
    code, text = run("word", "stats", "-1 -1 2 2 2 -1")
    assert code == 0
    assert json.loads(text) == {"length": 6, "gamma": 1, "u1_length": 3, "tau": 0}


@pytest.mark.parametrize(
    "action,word,expect",
    [("reduce", "1 2 -2", "1"), ("inverse", "1 -2", "2 -1"), ("beta", "2", "1 2"), ("sigma", "-1 2", "1 -2"), ("reduce", "1 -1", "e")],
)
def test_word_transforms(action, word, expect):
    assert run("word", action, word) == (0, expect + "\n")


def test_classify():
    code, text = run("state", "classify", "--n", "2", "--a", "0.5", "--b", "1")
    d = json.loads(text)
    assert code == 0 and d["positive_definite"] and not d["reduced"]


def test_eval():
    spec = json.dumps({"kind": "PhiA", "n": 2, "a": 0.5})
    code, text = run("state", "eval", "--spec", spec, "--word", "-1 2")
    assert code == 0 and json.loads(text)["value"] == pytest.approx([-0.5, 0.0])


def test_series_csv():
    code, text = run("state", "series", "--n", "2", "--a", "0.5", "--b", "0.25", "--K", "4")
    assert code == 0
    lines = text.split("\n")
    assert lines[0] == "k,A_brute,B_brute,C_brute,A_closed,B_closed,C_closed,abs_err"
    assert len(lines) == 6 and lines[-1] == ""
    assert "\r" not in text


def test_gram_check_exit_codes():
    good = json.dumps({"kind": "PhiA", "n": 2, "a": 0.5})
    bad = json.dumps({"kind": "PsiAB", "n": 2, "a": 0.9, "b": -0.9})
    code, text = run("gram", "check", "--spec", good, "--set", "ball:2")
    assert code == 0 and json.loads(text)["is_psd"]
    code, text = run("gram", "check", "--spec", bad, "--set", "ball:3")
    assert code == 1 and not json.loads(text)["is_psd"]


def test_algebra_verify_obs():
    code, text = run("algebra", "verify-obs", "--n", "2", "--depth", "2")
    d = json.loads(text)
    assert code == 0 and d["violations"] == [] and d["checked"] > 0


def test_boundary_commands(tmp_path):
    code, text = run("boundary", "verify", "--n", "2", "--lambda", "1.0", "--max-len", "2")
    assert code == 0 and text.startswith("word,integral,phi,abs_err\n")
    assert len(text.strip().split("\n")) == 1 + 1 + 4 + 12
    weights = {"1 1 1": 1.0}
    code, _ = run("boundary", "experiment", "--weights", json.dumps(weights))
    assert code == 2
    code, text = run("boundary", "experiment", "--depth", "4")
    assert code == 0 and json.loads(text)["ess_sup_diff"] == pytest.approx(1.0)


def test_usage_errors():
    assert run("bogus")[0] == 2
    assert run("state", "classify", "--n", "2")[0] == 2
    assert run("word", "stats", "0")[0] == 2


def test_reproduce_is_byte_identical(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# subset run\nseed = 7\nthreads = 2\n")
    a = run("reproduce", "--only", "1,6,9", "--config", str(cfg))
    b = run("reproduce", "--only", "1,6,9", "--config", str(cfg), "--threads", "0")
    assert a[0] == 0 and b[0] == 0
    da, db = json.loads(a[1]), json.loads(b[1])
    assert da["checks"] == db["checks"]
    assert run("reproduce", "--only", "1,6,9", "--config", str(cfg)) == a
    assert da["schema"] and da["config"]["seed"] == 7
    assert da["checks"][2]["status"] == "reported"


def test_reproduce_payloads_carry_tolerances():
    code, text = run("reproduce", "--only", "1,4", "--n", "2")
    d = json.loads(text)
    assert code == 0
    assert d["checks"][0]["payload"]["max_residual"]["tolerance"] == 1e-12
    assert d["checks"][1]["payload"]["max_rel_err"]["tolerance"] == 1e-9


def test_help_lists_results():
    proc = subprocess.run([sys.executable, "-m", "freestates", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for word in ("word", "algebra", "state", "gram", "boundary", "reproduce"):
        assert word in proc.stdout
    proc = subprocess.run([sys.executable, "-m", "freestates", "reproduce", "--help"], capture_output=True, text=True)
    assert "psi_region" in proc.stdout
