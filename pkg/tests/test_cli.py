import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from coalgtower.cli import main
from coalgtower.sese import MESS
from coalgtower.words import format_word

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def run():
    runner = CliRunner()
    return lambda *args: runner.invoke(main, list(args))


def test_tower_fibonacci(run):
    res = run("tower", "--c", "set", "--d", "bi", "--ident", "no11", "--k", "5")
    assert res.exit_code == 0
    assert res.output.strip().splitlines()[-1] == "level 5: 13"


def test_tower_json_schema(run):
    res = run("tower", "--c", "set", "--d", "bi", "--ident", "no10", "--k", "4", "--format", "json")
    doc = json.loads(res.output)
    assert doc["schema"] == 1 and doc["counts"] == [1, 2, 3, 4, 5]


def test_member_yes(run):
    res = run("member", "--c", "se", "--d", "se", "--word", "x00.x01.x10.x11")
    assert res.exit_code == 0 and res.output.strip() == "yes"


def test_member_mess_reports_lmr_m(run):
    res = run("member", "--c", "se", "--d", "se", "--word", format_word(MESS))
    assert res.exit_code == 2
    assert "lmr_m" in res.output


def test_member_failing_identity(run):
    res = run("member", "--c", "set", "--d", "bi", "--ident", "no11", "--word", "x11", "--format", "json")
    assert res.exit_code == 2
    doc = json.loads(res.output)
    assert not doc["member"] and any("no11" in r for r in doc["reasons"])


def test_parse_error_exit_code(run):
    assert run("member", "--c", "se", "--d", "se", "--word", "x00..x01").exit_code == 4
    assert run("instance", "--term", "(beta (p 0)", "--j", "0", "--k", "1", "--word", "x0").exit_code == 4


def test_capability_exit_code(run):
    assert run("tower", "--c", "group", "--d", "bi").exit_code == 3
    assert run("instance", "--term", "(beta (p 0) (p 1))", "--j", "1", "--k", "1", "--word", "x0").exit_code == 3


def test_instance(run):
    res = run("instance", "--term", "(beta (p 0) (beta (p 1) (p 2)))", "--j", "1", "--k", "3", "--word", "x101")
    assert res.exit_code == 0 and res.output.strip() == "x11"


def test_functor_matches_oracle(run):
    res = run("functor", "--sese", "--n", "3", "--algebra", str(DATA / "left_zero3.json"), "--format", "json")
    doc = json.loads(res.output)
    assert doc["oracle_match"] and doc["size"] == 9


def test_oracle_final_certificate(run):
    res = run("oracle", "--d", "bi", "--ident", "assoc", "--size", "2", "--final", "--format", "json")
    doc = json.loads(res.output)
    assert doc["final"]["carrier"] == ["0", "1"]
    assert "unique morphism" in doc["certificate"]


def test_oracle_commutative_empty(run):
    doc = json.loads(run("oracle", "--d", "bi", "--ident", "comm", "--size", "3", "--format", "json").output)
    assert doc["count"] == 0


def test_output_is_deterministic(run):
    args = ("tower", "--c", "se", "--d", "se", "--k", "2", "--L", "8", "--list", "--format", "json")
    assert run(*args).output == run(*args).output


def test_cache_does_not_change_output(run, tmp_path):
    args = ["tower", "--c", "se", "--d", "se", "--k", "3", "--L", "8", "--list"]
    plain = run(*args).output
    cold = run(*args, "--cache", str(tmp_path)).output
    warm = run(*args, "--cache", str(tmp_path)).output
    assert plain == cold == warm
    assert list(tmp_path.iterdir())


def test_verify_all_subset(run):
    res = run("verify-all", "--only", "9,10")
    assert res.exit_code == 0
    assert res.output.count("PASS") == 2
