import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from b_operators.cli import cli

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
GOLDEN = FIXTURES / "golden"


@pytest.fixture
def run(tmp_path):
    runner = CliRunner()

    def invoke(*args, out="report.json"):
        target = tmp_path / out
        result = runner.invoke(cli, [*map(str, args), "--out", str(target)])
        return result, target

    return invoke


@pytest.mark.parametrize(
    "args,golden",
    [
        (["classify", "--algebra", FIXTURES / "b_f2x3.json"], "classify_b_f2x3.json"),
        (["equalizer", FIXTURES / "exe.json"], "equalizer_exe.json"),
        (["fiber", FIXTURES / "counterexample.json"], "fiber_counterexample.json"),
        (["fiber", FIXTURES / "control.json"], "fiber_control.json"),
        (["kernel-check", FIXTURES / "kernel_positive.json"], "kernel_check_positive.json"),
    ],
    ids=["classify", "equalizer", "fiber-counterexample", "fiber-control", "kernel-check"],
)
def test_reports_match_golden_files(run, args, golden):
    result, target = run(*args)
    assert result.exit_code == 0, result.output
    assert target.read_bytes() == (GOLDEN / golden).read_bytes()


def test_reports_are_deterministic(run):
    first, a = run("equalizer", FIXTURES / "exe.json", out="a.json")
    second, b = run("equalizer", FIXTURES / "exe.json", out="b.json")
    assert first.exit_code == second.exit_code == 0
    assert a.read_bytes() == b.read_bytes()


def test_classify_several_algebras(run):
    result, target = run(
        "classify", "--algebra", FIXTURES / "b_f2x2.json", "--algebra", FIXTURES / "b_f2_times_f4.json"
    )
    assert result.exit_code == 0, result.output
    reports = json.loads(target.read_text())["algebras"]
    assert [r["companionable"] for r in reports] == [True, True]
    assert [r["clause"] for r in reports] == ["local", "separable_product"]


def test_classify_as_text(run):
    result, target = run("classify", "--algebra", FIXTURES / "b_f3_cubed.json", "--format", "text", out="report.txt")
    assert result.exit_code == 0, result.output
    text = target.read_text()
    assert "companionable" in text
    assert "separable_product" in text


def test_prolong_with_point(run):
    result, target = run("prolong", FIXTURES / "prolong_circle.json")
    assert result.exit_code == 0, result.output
    report = json.loads(target.read_text())
    assert report["generators"] == ["a_0^2 + b_0^2 - 1", "-a_0*a_1 - b_0*b_1"]
    assert report["pi_vars"] == ["a_0", "b_0"]
    assert report["empty"] is False
    assert report["point"] == {"a_0": "1", "a_1": "0", "b_0": "0", "b_1": "0"}


def test_constants_check(run):
    result, target = run("constants-check", FIXTURES / "constants.json")
    assert result.exit_code == 0, result.output
    report = json.loads(target.read_text())
    assert report["assumption2"] is True
    rows = {row["element"]: row for row in report["elements"]}
    assert rows["y"]["strictness_counterexample"] is True
    assert rows["y"]["lambda0"] == "0"
    assert rows["x"]["constant"] is False
    assert rows["x^2"]["pth_power"] is True
    assert rows["x^2*y^2 + 1"]["lambda0"] == "x*y + 1"
    assert all(row["frl"] for row in rows.values())


def test_lidi_check(run):
    result, target = run("lidi-check", FIXTURES / "lidi.json")
    assert result.exit_code == 0, result.output
    report = json.loads(target.read_text())
    assert report["kernel"] == [["-y^3", "1", "0"]]
    assert report["passed"] is True
    assert report["wedge_constant"] is None


@pytest.mark.parametrize("bundle", ["census_circle.json", "census_cusp.json"])
def test_census(run, bundle):
    result, target = run("census", FIXTURES / bundle)
    assert result.exit_code == 0, result.output
    report = json.loads(target.read_text())
    assert report["agree"] is True
    assert report["count_b_tensor_r"] == report["count_prolongation"] > 0


def test_census_limit_is_a_precondition_error(run):
    result, _ = run("census", FIXTURES / "census_cusp.json", "--limit", "10")
    assert result.exit_code == 3
    assert '"error": "TooLarge"' in result.output


def test_invalid_algebra_exits_with_2(run, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"p": 4, "dim": 1, "mul": [[[1]]], "unit": [1]}))
    result, target = run("classify", "--algebra", bad)
    assert result.exit_code == 2
    assert '"error": "ValidationError"' in result.output
    assert not target.exists()


def test_parse_error_reports_position(run, tmp_path):
    bundle = tmp_path / "bundle.json"
    bundle.write_text(json.dumps({"operator": str(FIXTURES / "derivation_f3.json"), "elements": ["y +"]}))
    result, _ = run("constants-check", bundle)
    assert result.exit_code == 2
    assert '"error": "ParseError"' in result.output
    assert "elements[0]:1:4" in result.output


def test_non_constant_vector_exits_with_3(run, tmp_path):
    bundle = tmp_path / "bundle.json"
    bundle.write_text(json.dumps({"operator": str(FIXTURES / "derivation_f3.json"), "vectors": [["y", "0"]]}))
    result, _ = run("lidi-check", bundle)
    assert result.exit_code == 3
    assert '"error": "NotConstantInput"' in result.output


def test_missing_section(run):
    result, _ = run("classify")
    assert result.exit_code == 2
    assert "missing input section" in result.output


def test_log_file(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    result = CliRunner().invoke(
        cli, ["--log", "classify", "--algebra", str(FIXTURES / "b_f2x2.json"), "--out", "r.json"]
    )
    assert result.exit_code == 0, result.output
    assert (tmp_path / "logs" / "b_operators.log").exists()


def test_non_string_operator_image_exits_with_2(run, tmp_path):
    bundle = tmp_path / "bundle.json"
    operator = {"algebra": str(FIXTURES / "b_f3x2.json"), "vars": ["y"], "images": {"y": [1, "1"]}}
    bundle.write_text(json.dumps({"operator": operator, "elements": ["y"]}))
    result, _ = run("constants-check", bundle)
    assert result.exit_code == 2
    assert '"error": "ValidationError"' in result.output
