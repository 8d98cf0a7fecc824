import json
import subprocess
import sys

import pytest

from toriclab.cli import main


def run_cli(args, stdin_text="", env_extra=None):
    import os
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    proc = subprocess.run(
        [sys.executable, "-m", "toriclab.cli"] + args,
        input=stdin_text, capture_output=True, text=True, env=env)
    return proc.returncode, proc.stdout, proc.stderr


def call(capsys, monkeypatch, args, stdin_text=""):
    import io
    monkeypatch.setattr("sys.stdin", io.StringIO(stdin_text))
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_pipeline_mori(capsys, monkeypatch):
    code, fan_json, _ = call(capsys, monkeypatch, ["gen", "pn", "2"])
    assert code == 0
    code, out, _ = call(capsys, monkeypatch, ["fan", "mori"], fan_json)
    assert code == 0
    obj = json.loads(out)
    assert obj["kind"] == "mori-cone"
    assert obj["extremal_rays"] == [["1", "1", "1"]]


def test_pipeline_qcodeg(capsys, monkeypatch):
    code, poly_json, _ = call(capsys, monkeypatch,
                              ["gen", "contra", "2", "--emit", "L"])
    assert code == 0
    code, out, _ = call(capsys, monkeypatch, ["poly", "qcodeg"], poly_json)
    assert code == 0
    assert json.loads(out)["q_codegree"] == "3/2"


def test_pipeline_eff_flags(capsys, monkeypatch):
    code, fan_json, _ = call(capsys, monkeypatch, ["gen", "losev-manin", "3"])
    assert code == 0
    code, out, _ = call(capsys, monkeypatch,
                        ["fan", "eff", "--flags"], fan_json)
    assert code == 0
    obj = json.loads(out)
    assert obj["n_true"] == "14"
    assert all(f is True for f in obj["flags"])


def test_dilate_missing_input(capsys, monkeypatch):
    # dilate with no stdin polytope is an input error
    code, _, _ = call(capsys, monkeypatch, ["gen", "dilate", "--k", "2"], "")
    assert code == 2


def test_classify_2delta2(capsys, monkeypatch):
    simplex = json.dumps({
        "kind": "polytope", "dim": "2",
        "vertices": [["0", "0"], ["2", "0"], ["0", "2"]]})
    code, out, _ = call(capsys, monkeypatch, ["poly", "classify"], simplex)
    assert code == 0
    obj = json.loads(out)
    assert obj["label"] == "2Delta_n"
    assert obj["s"] == "2" and obj["tau"] == "3/2"


def test_hypothesis_violation_exit_code(capsys, monkeypatch):
    poly = json.dumps({
        "kind": "polytope", "dim": "2",
        "vertices": [["0", "0"], ["1", "0"], ["0", "2"]]})
    code, out, err = call(capsys, monkeypatch, ["poly", "classify"], poly)
    assert code == 3
    assert "hypothesis violation (smoothness)" in err


def test_input_error_exit_code(capsys, monkeypatch):
    code, _, err = call(capsys, monkeypatch, ["poly", "info"], "not json")
    assert code == 2
    assert "error:" in err
    code, _, err = call(capsys, monkeypatch, ["poly", "info"],
                        json.dumps({"kind": "fan", "rank": "1",
                                    "rays": [["1"], ["-1"]],
                                    "max_cones": [["0"], ["1"]]}))
    assert code == 2
    assert "expected a" in err


def test_unknown_commands(capsys, monkeypatch):
    code, _, err = call(capsys, monkeypatch, ["nosuch", "cmd"])
    assert code == 64
    assert "usage" in err.lower()
    code, _, err = call(capsys, monkeypatch, ["poly", "nosuch"])
    assert code == 64


def test_help_exits_zero(capsys, monkeypatch):
    code, out, _ = call(capsys, monkeypatch, ["--help"])
    assert code == 0
    assert "toriclab" in out


def test_byte_identical_output():
    code1, out1, _ = run_cli(["gen", "losev-manin", "2"])
    code2, out2, _ = run_cli(["gen", "losev-manin", "2"])
    assert code1 == code2 == 0
    assert out1 == out2
    obj = json.loads(out1)
    assert out1 == json.dumps(obj, sort_keys=True,
                              separators=(",", ":")) + "\n"


def test_threads_env_validation():
    code, _, err = run_cli(["gen", "pn", "2"],
                           env_extra={"TORICLAB_THREADS": "0"})
    assert code == 2
    assert "TORICLAB_THREADS" in err
    code, _, _ = run_cli(["gen", "pn", "2"],
                         env_extra={"TORICLAB_THREADS": "2"})
    assert code == 0


def test_format_text(capsys, monkeypatch):
    code, fan_json, _ = call(capsys, monkeypatch, ["gen", "pn", "2"])
    code, out, _ = call(capsys, monkeypatch,
                        ["fan", "info", "--format", "text"], fan_json)
    assert code == 0
    assert "picard rank" in out or "rank" in out
    assert "{" not in out


def test_gen_product_stdin(capsys, monkeypatch):
    seg = {"kind": "polytope", "dim": "1", "vertices": [["0"], ["1"]]}
    code, out, _ = call(capsys, monkeypatch, ["gen", "product"],
                        json.dumps([seg, seg]))
    assert code == 0
    obj = json.loads(out)
    assert obj["dim"] == "2" and len(obj["vertices"]) == 4


def test_fan_cycles(capsys, monkeypatch):
    code, fan_json, _ = call(capsys, monkeypatch, ["gen", "pn", "3"])
    code, out, _ = call(capsys, monkeypatch,
                        ["fan", "cycles", "--k", "1"], fan_json)
    assert code == 0
    obj = json.loads(out)
    assert obj["graded_dims"] == ["1", "1", "1", "1"]
    code, _, err = call(capsys, monkeypatch,
                        ["fan", "cycles", "--k", "9"], fan_json)
    assert code == 2


def test_fan_mmp_trace(capsys, monkeypatch):
    code, fan_json, _ = call(capsys, monkeypatch, ["gen", "pn", "2"])
    code, out, _ = call(capsys, monkeypatch, ["fan", "mmp"], fan_json)
    assert code == 0
    obj = json.loads(out)
    assert obj["kind"] == "mmp-trace"
    assert obj["steps"][-1]["kind"] == "fiber-end"


def test_fan_mmp_census(capsys, monkeypatch):
    code, fan_json, _ = call(capsys, monkeypatch, ["gen", "contra", "2"])
    code, out, _ = call(capsys, monkeypatch,
                        ["fan", "mmp", "--all-branches"], fan_json)
    assert code == 0
    obj = json.loads(out)
    assert obj["kind"] == "mmp-census"
    assert len(obj["runs"]) == 6


def test_gen_cayley_classify(capsys, monkeypatch):
    code, poly_json, _ = call(capsys, monkeypatch,
                              ["gen", "cayley", "2", "1", "1", "1", "3"])
    assert code == 0
    code, out, _ = call(capsys, monkeypatch, ["poly", "classify"], poly_json)
    assert code == 0
    obj = json.loads(out)
    assert obj["label"] == "Cayley^2-odd"
    assert obj["degrees"] == ["1", "1", "3"]
