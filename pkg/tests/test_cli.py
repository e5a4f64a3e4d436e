import json

import pytest

from app.algebra.crosscheck import CHECKS, CheckResult, SuiteResult, bless, compare_golden, load_golden, run_suite
from app.core.exceptions import ParseError, UsageError
from app.main import app, main, parse_args, render, run
from app.models.models import Command, OutputFormat


def run_json(capsys, *argv):
    code = main([*argv, "--format", "json"])
    out = capsys.readouterr().out
    return code, json.loads(out) if out else None


# argument handling


def test_every_command_is_routed():
    assert set(app.routes) == {c.value for c in Command}


def test_parse_args_builds_a_job():
    config = parse_args(["idempotents", "--n", "3", "--seed", "4"])
    assert config.command == Command.IDEMPOTENTS
    assert config.n == 3
    assert config.seed == 4
    assert config.format == OutputFormat.TABLE


def test_repeated_relation_flag_collects():
    config = parse_args(["trivial", "--relation", "y^2 - x^3", "--q1", "x"])
    assert config.relations == ["y^2 - x^3"]
    assert config.q1 == "x"


def test_validation_errors_name_the_flag():
    with pytest.raises(UsageError, match="^--n:"):
        parse_args(["idempotents", "--n", "0"])


def test_missing_command_is_a_usage_error():
    with pytest.raises(UsageError):
        parse_args([])


def test_expressions_are_parsed_eagerly():
    with pytest.raises(ParseError):
        parse_args(["star", "--relation", "y^2 - x^3", "--q1", "x +"])


def test_parse_error_exit_code_and_caret(capsys):
    assert main(["tjurina", "--relations", "y^2 - x^"]) == 2
    err = capsys.readouterr().err
    assert "error:" in err
    assert err.rstrip().endswith("^")


def test_unknown_option_exits_two(capsys):
    assert main(["tjurina", "--relations", "y^2-x^3", "--bogus"]) == 2
    assert "error:" in capsys.readouterr().err


# reports


def test_idempotents_json(capsys):
    code, data = run_json(capsys, "idempotents", "--n", "3", "--verify")
    assert code == 0
    assert data["command"] == "idempotents"
    assert data["ok"] is True
    results = data["results"]
    assert results["top_is_sign_average"] is True
    assert results["complete"] and results["idempotent"] and results["orthogonal"]
    assert set(results["idempotents"]) == {"e_3(1)", "e_3(2)", "e_3(3)"}


def test_json_output_is_sorted(capsys):
    main(["idempotents", "--n", "2", "--format", "json"])
    out = capsys.readouterr().out
    assert json.loads(out)
    keys = [line.strip().split('"')[1] for line in out.splitlines() if line.startswith('  "')]
    assert keys == sorted(keys)


def test_table_output(capsys):
    assert main(["tjurina", "--relations", "y^2-x^3"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("Hochschild Curve Toolkit")
    assert "| tjurina |" in lines[0]
    assert ["dim", "2"] in [line.split() for line in lines]


def test_bar_homology_with_hodge(capsys):
    code, data = run_json(
        capsys, "bar-homology", "--relations", "y^2-x^3", "--p-max", "2", "--max-degree", "7", "--hodge"
    )
    assert code == 0
    assert data["results"]["totals"] == {"1": 2, "2": 2}
    assert data["results"]["hodge"]["2"] == {"1": 1, "2": 1}
    assert all(row["hodge"] for row in data["degrees"])


def test_xn_cohomology_command(capsys):
    code, data = run_json(capsys, "xn-cohomology", "--n", "3", "--p-max", "3")
    assert code == 0
    assert data["results"]["dimensions"] == {"0": 3, "1": 2, "2": 2, "3": 2}


def test_hkr_cohomology_table(capsys):
    assert main(["hkr-cohomology", "--relations", "y^2-x^3", "--p-max", "2", "--cutoff", "6"]) == 0
    out = capsys.readouterr().out
    assert "stable: yes" in out
    assert "internal" in out


def test_hkr_homology_totals(capsys):
    code, data = run_json(capsys, "hkr-homology", "--relations", "z^3", "--p-max", "2", "--cutoff", "10")
    assert code == 0
    totals = data["results"]["totals"]
    assert sum(totals["-1"].values()) == 2
    assert sum(totals["0"].values()) == 3


def test_star_eval(capsys):
    code, data = run_json(
        capsys,
        "star", "--relation", "y^2-x^3", "--q1", "x", "--order", "1",
        "--eval", "y @ y", "--samples", "3", "--table-degree", "1",
    )
    assert code == 0
    results = data["results"]
    assert results["variable"] == "y"
    assert results["eval"]["product"] == "x^3 + hbar*(x)"
    assert results["eval"]["coefficients"] == ["x^3", "x"]
    assert results["associativity"]["passed"] is True
    assert {"f": "y", "g": "y", "value": "x"} in results["tables"]["C_1"]


def test_star_rejects_malformed_eval(capsys):
    assert main(["star", "--relation", "y^2-x^3", "--eval", "x y"]) == 2


def test_trivial_reports_obstruction():
    report = run(parse_args(["trivial", "--relation", "y^2-x^2", "--q1", "1"]))
    assert report.ok
    assert report.results["status"] == "obstructed"
    assert report.results["certificate"] == "1"


def test_trivial_without_q1_is_a_usage_error(capsys):
    assert main(["trivial", "--relation", "y^2-x^3"]) == 2


def test_miniversal_on_non_isolated_curve_exits_one(capsys):
    assert main(["miniversal", "--relations", "x^2*y^3", "--cutoff", "6"]) == 1
    assert "error:" in capsys.readouterr().err


def test_timing_is_opt_in():
    plain = run(parse_args(["idempotents", "--n", "2"]))
    timed = run(parse_args(["idempotents", "--n", "2", "--timing"]))
    assert plain.timing_ms is None
    assert timed.timing_ms is not None
    assert "timing_ms" in render(timed)


# validation suite


def test_check_rejects_unknown_names(capsys):
    assert main(["check", "--only", "no-such-check"]) == 2


def test_check_single_entry(capsys):
    code, data = run_json(capsys, "check", "--only", "idempotents")
    assert code == 0
    assert data["results"]["checks"] == [
        {"name": "idempotents", "passed": True, "detail": "n=2..5 idempotent, orthogonal, complete"}
    ]


def test_check_names_are_unique():
    names = [name for name, _ in CHECKS]
    assert len(names) == len(set(names))


def test_harrison_routes_match_golden_values():
    suite = run_suite(only=["harrison-2-routes"])
    assert suite.passed
    golden = compare_golden(suite, load_golden())
    assert [c.name for c in golden] == ["golden:harrison_2"]
    assert all(c.passed for c in golden)


def test_golden_mismatch_is_reported():
    suite = SuiteResult(observed={"triviality": {"y^2-x^2": "trivial"}})
    (result,) = compare_golden(suite, {"triviality": {"y^2-x^2": "obstructed"}, "unrelated": 1})
    assert result == CheckResult("golden:triviality", False, result.detail)
    assert "expected" in result.detail


def test_bless_round_trip(tmp_path):
    suite = SuiteResult(observed={"harrison_2": {"y^2-x^2": {"routes": [1, 1, 1]}}})
    path = bless(suite, tmp_path / "nested" / "golden.json")
    assert path.exists()
    assert load_golden(path) == suite.observed


def test_missing_golden_file_is_empty(tmp_path):
    assert load_golden(tmp_path / "absent.json") == {}


@pytest.mark.slow
def test_full_suite_passes():
    suite = run_suite()
    failed = [c.name for c in suite.checks + compare_golden(suite, load_golden()) if not c.passed]
    assert failed == []
