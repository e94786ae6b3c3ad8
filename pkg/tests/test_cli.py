import json

import pytest

from qwscreen.cli import ConfigError, main, read_config
from qwscreen.suites import DEFAULT_SAMPLES, SuiteConfig, parse_sample, run_suite


def test_qvirasoro_passes_and_writes_schema(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["qvirasoro", "--order", "8", "--json", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["suite"] == "qvirasoro"
    assert doc["config"]["order"] == 8
    assert len(doc["config"]["samples"]) == len(DEFAULT_SAMPLES)
    names = [c["name"] for c in doc["checks"]]
    assert names == sorted(names) and names
    for c in doc["checks"]:
        assert set(c) >= {"name", "status", "max_err", "order"}
        assert c["status"] in {"pass", "fail", "skipped"}
        assert c["max_err"] is None or isinstance(c["max_err"], str)
    assert "suite qvirasoro: PASS" in capsys.readouterr().out


def test_perturbation_is_negative_control():
    assert main(["qvirasoro", "--order", "6", "--perturb", "p"]) == 1


def test_singular_perturbation_reports_failure(capsys):
    assert main(["sl3", "--order", "4", "--perturb", "p2"]) == 1
    assert "model/construct" in capsys.readouterr().out


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("# comment\norder = 5\nlevel = 2 # trailing\nnumeric = 0.3,0.4,0.7\nnumeric = 0.2,1/3,1.1\n")
    values = read_config(cfg)
    assert values["numeric"] == ["0.3,0.4,0.7", "0.2,1/3,1.1"]
    out = tmp_path / "r.json"
    assert main(["cross-56", "--config", str(cfg), "--order", "4", "--json", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["config"]["order"] == 4 and doc["config"]["level"] == 2
    assert len(doc["config"]["samples"]) == 2


def test_malformed_config(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("order 5\n")
    with pytest.raises(ConfigError):
        read_config(bad)
    bad.write_text("colour = red\n")
    assert main(["qvirasoro", "--config", str(bad)]) == 2


def test_invalid_values_are_errors():
    assert main(["qvirasoro", "--order", "0"]) == 2
    assert main(["sl21-bf", "--numeric", "1.5,0.4,0.7"]) == 2
    assert main(["expand", "--pair", "L1,NOPE"]) == 2
    assert main(["qvirasoro", "--perturb", "nope"]) == 2
    with pytest.raises(SystemExit):
        main(["no-such-suite"])


def test_expand_trivial_and_q2p(tmp_path):
    out = tmp_path / "e.json"
    assert main(["expand", "--model", "sl3", "--pair", "S2,S1", "--order", "3", "--q2p", "q*p^1/2", "--json", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["artifacts"]["pair"] == ["S2", "S1"]
    assert [row["k"] for row in doc["artifacts"]["series"]] == [0, 1, 2, 3]


def test_expand_default_pair_is_pole_zero():
    rep = run_suite(SuiteConfig("expand", order=3))
    series = rep.artifacts["series"]
    assert rep.artifacts["pair"] == ["L1", "S1"]
    assert series[0]["c"].startswith("(1*q^0*p^0)")


def test_parse_sample_forms():
    assert parse_sample("0.4,0.25,0.9+0.2i") == (0.4, 0.25, complex(0.9, 0.2))
    assert parse_sample("0.2, 1/3, 1.1")[1] == pytest.approx(1 / 3)
    with pytest.raises(ValueError):
        parse_sample("0.2,0.3")


def test_stdout_json(capsys):
    assert main(["sl21-ff", "--order", "4", "--json", "-"]) in (0, 1)
    doc = json.loads(capsys.readouterr().out)
    assert doc["suite"] == "sl21-ff"
