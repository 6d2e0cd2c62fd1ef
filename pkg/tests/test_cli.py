import csv
import json

import pytest

from xy1bench.cli import COMMANDS, main, read_config


def run(tmp_path, *argv):
    return main([*argv, "--out", str(tmp_path), "--quiet"])


def load(tmp_path, name):
    return json.loads((tmp_path / f"{name}.json").read_text())


def test_primes(tmp_path):
    assert run(tmp_path, "primes", "--limit", "100") == 0
    s = load(tmp_path, "primes")
    assert s["summary"] == {"limit": 100, "primes": 25, "P": 12, "Pstar": 5}
    assert s["manifest"]["subcommand"] == "primes"
    rows = [r for r in csv.reader((tmp_path / "primes.csv").read_text().splitlines()) if not r[0].startswith("#")]
    assert rows[0] == ["p", "in_P", "in_Pstar"] and len(rows) == 26


def test_hcheck(tmp_path):
    assert run(tmp_path, "hcheck", "--rho1", "0.475", "--rho2", "57/140", "--sigma", "120/37") == 0
    s = load(tmp_path, "hcheck")["summary"]
    assert s["holds"] and s["margin"] > 0
    assert run(tmp_path, "hcheck", "--rho2", "0.3") == 2


def test_lemma27(tmp_path):
    assert run(tmp_path, "lemma27") == 0
    s = load(tmp_path, "lemma27")["summary"]
    assert s["decomposed"] == s["admissible"] == 21


def test_usage_errors(tmp_path):
    assert run(tmp_path, "primes", "--bogus", "1") == 2
    assert run(tmp_path, "primes", "--limit", "abc") == 2
    assert main([]) == 2
    cfg = tmp_path / "c.cfg"
    cfg.write_text("limit=10\nnope=1\n")
    assert run(tmp_path, "primes", "--config", str(cfg)) == 2
    cfg.write_text("# subcommand=ap3\nN=10\n")
    assert run(tmp_path, "primes", "--config", str(cfg)) == 2
    assert run(tmp_path, "bv", "--b", "0", "--N", "100") == 2


def test_config_precedence(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("limit=50\n")
    assert run(tmp_path, "primes", "--config", str(cfg)) == 0
    assert load(tmp_path, "primes")["summary"]["limit"] == 50
    assert run(tmp_path, "primes", "--config", str(cfg), "--limit", "70") == 0
    assert load(tmp_path, "primes")["summary"]["limit"] == 70


def test_manifest_reproduces_output(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(a, "alphap", "--N", "20000", "--theta", "0.05", "--xi", "3/7") == 0
    first = (a / "alphap.csv").read_text()
    assert read_config(a / "alphap.csv")["xi"] == "0.42857142857142855"
    assert run(b, "alphap", "--config", str(a / "alphap.csv")) == 0
    assert (b / "alphap.csv").read_text() == first


def test_out_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("XY1BENCH_OUT", str(tmp_path / "env"))
    assert main(["ap3", "--N", "200", "--quiet"]) == 0
    assert (tmp_path / "env" / "ap3.json").exists()


def test_verify_all_subset(tmp_path):
    assert run(tmp_path, "verify-all", "--only", "1,9") == 0
    s = load(tmp_path, "verify-all")["summary"]
    assert s == {"passed": 2, "total": 2, "failed": []}


@pytest.mark.parametrize("name", ["membership", "amenable", "wbuild", "qset", "weights-enum", "singular",
                                  "dft-selftest", "chi", "ternary", "goldbach"])
def test_subcommands_run(tmp_path, name):
    small = {"ternary": ["--N", "2000"], "goldbach": ["--N", "20000", "--lo", "1000"], "qset": ["--Q", "17"]}
    assert run(tmp_path, name, *small.get(name, [])) == 0
    assert (tmp_path / f"{name}.json").exists()


def test_registry_complete():
    assert len(COMMANDS) == 22
