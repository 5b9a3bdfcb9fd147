"""
Command line tests
"""

import json

import pytest

from app.cli import EXIT_BUDGET, EXIT_FAILED, EXIT_OK, EXIT_USAGE, main
from app.core.config import settings
from app.services.verification_service import Suite, SuiteResult, VerificationService


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_count_json(capsys):
    """Test counting one run-length coloring"""
    code, out = run(capsys, "count", "--coloring", "R4 B6 R1")
    assert code == EXIT_OK
    data = json.loads(out)
    result = data["results"][0]
    assert result["coloring"]["runs"] == "R4 B6 R1"
    assert result["counts"]["total"] == 30
    assert "mu" not in result
    assert data["manifest"]["command"] == ["count", "--coloring", "R4 B6 R1"]
    assert data["manifest"]["schema_version"] == settings.SCHEMA_VERSION
    assert data["manifest"]["tolerances"] == settings.tolerances()


def test_count_with_stats(capsys):
    """Test statistics in JSON output"""
    code, out = run(capsys, "count", "--eq", "x+ay=z:a=2", "--coloring", "R6 B14 R2", "--stats")
    assert code == EXIT_OK
    result = json.loads(out)["results"][0]
    assert result["mu"]["split"] == 11
    assert "nu1" in result["regions"]


def test_count_csv(capsys):
    """Test CSV output has a header and one row per coloring"""
    code, out = run(capsys, "count", "--coloring", "R5", "--format", "csv", "--stats")
    assert code == EXIT_OK
    lines = out.strip().split("\n")
    assert lines[0] == "schema,equation,n,runs,mono,nonmono,rainbow,total,d,nu1,nu2,nu3"
    assert lines[1].startswith(f"{settings.SCHEMA_VERSION},schur,5,R5,6,0,0,6,")


def test_count_from_file(capsys, tmp_path):
    """Test @file input with one coloring per line"""
    path = tmp_path / "colorings.txt"
    path.write_text("R5\n\nR1 B3 R1\n")
    code, out = run(capsys, "count", "--coloring", f"@{path}")
    assert code == EXIT_OK
    assert [r["coloring"]["runs"] for r in json.loads(out)["results"]] == ["R5", "R1 B3 R1"]


@pytest.mark.parametrize(
    "argv",
    [
        ["count", "--coloring", "R4 Q2"],
        ["count", "--coloring", "R4 B6 R1", "--n", "12"],
        ["count", "--coloring", "R1 G1", "--r", "2"],
        ["count", "--coloring", "@/nonexistent/colorings.txt"],
        ["search", "--n", "5", "--objective", "most-mono"],
        ["search", "--n", "5", "--constraint", "1,1"],
        ["search", "--n", "5", "--mode", "sweep"],
    ],
)
def test_usage_errors(capsys, argv):
    """Test invalid input exits with the usage code"""
    code, _ = run(capsys, *argv)
    assert code == EXIT_USAGE


@pytest.mark.parametrize(
    "argv",
    [
        ["count"],
        ["count", "--coloring", "R5", "--eq", "x*y=z"],
        ["search", "--n", "5", "--r", "4"],
        ["verify", "--suite", "lemmas", "--n-list", "10"],
        ["verify", "--suite", "theorems", "--n-list", "10,x"],
    ],
)
def test_argument_errors(capsys, argv):
    """Test argparse rejects malformed arguments with exit code 2"""
    with pytest.raises(SystemExit) as error:
        main(argv)
    assert error.value.code == EXIT_USAGE


def test_search(capsys, tmp_path):
    """Test an exhaustive search writes its report and manifest"""
    out_dir = tmp_path / "run"
    code, out = run(capsys, "search", "--n", "6", "--seed", "1", "--out", str(out_dir))
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["report"]["best_value"] == 1
    assert data["manifest"]["n"] == 6
    assert data["manifest"]["seed"] == 1
    assert json.loads((out_dir / "report.json").read_text()) == data["report"]
    assert json.loads((out_dir / "manifest.json").read_text())["equation"] == "schur"


def test_search_budget_exit_code(capsys):
    """Test oversized searches exit with the budget code"""
    code, _ = run(capsys, "search", "--n", "30", "--budget", "1000")
    assert code == EXIT_BUDGET


def test_search_local(capsys):
    """Test local search mode"""
    code, out = run(capsys, "search", "--n", "12", "--mode", "local", "--restarts", "2")
    assert code == EXIT_OK
    assert json.loads(out)["report"]["heuristic"] is True


def test_sweep(capsys):
    """Test the sweep subcommand"""
    code, out = run(capsys, "sweep", "--n", "22", "--pattern", "RBR", "--granularity", "2")
    assert code == EXIT_OK
    report = json.loads(out)["report"]
    assert report["mode"] == "sweep"
    assert report["boundaries"]


def test_verify_passes(capsys, tmp_path, mocker):
    """Test a passing suite exits 0 and writes a manifest"""
    result = SuiteResult(suite=Suite.THEOREMS, files=["theorems.csv"], failures=[])
    run_suite = mocker.patch.object(VerificationService, "run", return_value=result)
    code, out = run(capsys, "verify", "--suite", "theorems", "--n-list", "22,44", "--out", str(tmp_path))
    assert code == EXIT_OK
    run_suite.assert_called_once_with(Suite.THEOREMS, [22, 44])
    assert json.loads(out)["failures"] == []
    assert (tmp_path / "manifest.json").exists()


def test_verify_failure_exit_code(capsys, tmp_path, mocker):
    """Test a failed check exits 1"""
    result = SuiteResult(suite=Suite.IDENTITIES, files=[], failures=["packed"])
    run_suite = mocker.patch.object(VerificationService, "run", return_value=result)
    code, _ = run(
        capsys, "verify", "--suite", "identities", "--n-list", "10", "--samples", "3",
        "--out", str(tmp_path),
    )
    assert code == EXIT_FAILED
    run_suite.assert_called_once_with(Suite.IDENTITIES, [10], samples=3)


@pytest.mark.slow
def test_verify_conjectures_end_to_end(capsys, tmp_path):
    """Test the conjecture suite writes its table"""
    code, out = run(capsys, "verify", "--suite", "conjectures", "--n-list", "10,20", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert (tmp_path / "conjectures.csv").exists()
    assert json.loads(out)["suite"] == "conjectures"


def test_verify_help_lists_columns(capsys):
    """Test the verify help documents the CSV columns"""
    with pytest.raises(SystemExit):
        main(["verify", "--help"])
    out = capsys.readouterr().out
    assert "identities.csv" in out
    assert "max_abs_residual" in out


def test_serve(mocker):
    """Test serve hands the app to uvicorn"""
    uvicorn_run = mocker.patch("uvicorn.run")
    assert main(["serve", "--port", "9000"]) == EXIT_OK
    uvicorn_run.assert_called_once_with(
        "app.main:app", host=settings.HOST, port=9000, log_level=settings.LOG_LEVEL.lower()
    )
