import json

import pytest

from cutproject.cli import main


@pytest.fixture()
def run(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)

    def _run(*argv):
        code = main(list(argv))
        out, err = capsys.readouterr()
        return code, out, err

    return _run


@pytest.fixture()
def windows(run):
    assert run("construct", "--window", "W", "--out", "W.json")[0] == 0
    assert run("construct", "--window", "V", "--out", "V.json")[0] == 0
    return "W.json", "V.json"


def test_construct_writes_manifest(run, windows, tmp_path):
    man = json.loads((tmp_path / "W.json.manifest.json").read_text())
    assert man["command"] == "construct"
    assert set(man["versions"]) >= {"artifact", "python", "numpy"}
    assert len(man["config_sha256"]) == 64
    assert man["outputs"]["out"]["path"] == "W.json"


def test_measure_and_complexity(run, windows):
    code, out, _ = run("measure", "--window", "V.json")
    assert code == 0
    assert json.loads(out)["boundary_points"] == 4
    code, out, _ = run("complexity", "--window", "W.json", "--nmax", "4")
    assert code == 0
    assert out == "n,p_n\n1,2\n2,4\n3,6\n4,8\n"


def test_modelset_and_coding(run, windows):
    code, out, _ = run("modelset", "--window", "V.json", "--R", "10", "--t", "orbit:3")
    assert code == 0 and json.loads(out)["points"]
    code, out, _ = run("coding", "--window", "V.json", "--k1", "10")
    assert code == 0 and len(json.loads(out)["word"]) == 11


def test_ldc_check_exit_codes(run, windows):
    code, out, _ = run("ldc-check", "--window", "V.json", "--t", "crit:1:3")
    assert code == 0 and json.loads(out)["ldc"]
    code, out, err = run("ldc-check", "--window", "W.json", "--t", "crit:0", "--K", "50")
    assert code == 1
    assert json.loads(err)["exit_code"] == 1


def test_certificate_round_trip(run, windows):
    assert run("independence", "--window", "W.json", "--n", "1", "--out", "cert.json")[0] == 0
    code, out, _ = run("verify-cert", "cert.json")
    assert code == 0 and json.loads(out)["ok"]


def test_budget_exit(run):
    assert run("construct", "--window", "interval", "--out", "I.json")[0] == 0
    code, _, err = run("independence", "--window", "I.json", "--n", "3")
    assert code == 3
    assert json.loads(err)["error"] == "SearchExhausted"


def test_precondition_exits(run):
    code, _, err = run("measure")
    assert code == 2 and "window" in json.loads(err)["message"]
    code, _, err = run("measure", "--window", "missing.json")
    assert code == 2
    code, _, err = run("construct", "--eps", "2")
    assert code == 2 and json.loads(err)["error"] == "PreconditionViolated"


def test_free_set(run, windows):
    assert run("free-set", "--window", "W.json", "--S", "0,5")[0] == 0
    assert run("free-set", "--window", "W.json", "--S", "0,5,9")[0] == 1


def test_config_overrides_flags(run, tmp_path):
    (tmp_path / "cfg.json").write_text(json.dumps({"kind": "V", "out": "fromcfg.json"}))
    assert run("construct", "--window", "W", "--config", "cfg.json")[0] == 0
    data = json.loads((tmp_path / "fromcfg.json").read_text())
    assert data["kind"] == "V"


def test_replay_is_identical(run, windows, tmp_path):
    assert run("pseudolines", "--window", "W.json", "--t", "orbit:3", "--M", "8", "--csv", "p.csv",
               "--out", "p.json")[0] == 0
    for man in ("W.json.manifest.json", "p.json.manifest.json"):
        code, out, _ = run("replay", man)
        assert code == 0 and json.loads(out)["identical"]


def test_replay_detects_changed_output(run, windows, tmp_path):
    man = json.loads((tmp_path / "V.json.manifest.json").read_text())
    man["outputs"]["out"]["sha256"] = "0" * 64
    (tmp_path / "bad.manifest.json").write_text(json.dumps(man))
    code, out, _ = run("replay", "bad.manifest.json")
    assert code == 1 and not json.loads(out)["identical"]


def test_birkhoff_and_measure_estimate(run, windows):
    code, out, _ = run("birkhoff", "--window", "V.json", "--t", "crit:1:3", "--N", "200")
    assert code == 0 and json.loads(out)["holds"]
    code, out, _ = run("measure-estimate", "--depth", "2", "--families", "3", "--n", "2")
    assert code == 0 and out.count("\n") == 4
