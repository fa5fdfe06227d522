import copy
import json
from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest

from deformed_vibrations.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main


def test_verify_passes(
    write_config: Callable[..., Path],
    run_document: dict[str, Any],
    tmp_path: Path,
) -> None:
    """Test verify writes a passing report and exits 0."""
    out = tmp_path / "report.json"
    config = str(write_config(run_document))
    code = main(["verify", "--config", config, "--out", str(out)])
    assert code == EXIT_OK
    assert json.loads(out.read_text(encoding="utf-8"))["passed"] is True


def test_verify_fails_with_strict_tolerance(
    write_config: Callable[..., Path],
    run_document: dict[str, Any],
    tmp_path: Path,
) -> None:
    """Test a failed check exits 1."""
    document = copy.deepcopy(run_document)
    document["task"] = {"tolerance": 1e-30}
    out = tmp_path / "report.json"
    config = str(write_config(document))
    code = main(["verify", "--config", config, "--out", str(out)])
    assert code == EXIT_FAILURE
    assert json.loads(out.read_text(encoding="utf-8"))["passed"] is False


def test_spectrum_to_stdout(
    write_config: Callable[..., Path],
    run_document: dict[str, Any],
    capsys: pytest.CaptureFixture[str],
) -> None:
    """Test spectrum prints the CSV level table."""
    assert main(["spectrum", "--config", str(write_config(run_document))]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n1,n2,energy"
    assert len(lines) == 17


def test_expand_prints_constants(
    write_config: Callable[..., Path],
    run_document: dict[str, Any],
    capsys: pytest.CaptureFixture[str],
) -> None:
    """Test expand prints the series and the effective constants."""
    assert main(["expand", "--config", str(write_config(run_document))]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("series: ")
    assert "omega1: 0.85" in out


def test_compare_with_effective_constants(
    write_config: Callable[..., Path],
    run_document: dict[str, Any],
    tmp_path: Path,
) -> None:
    """Test compare against the ABA model built from the effective constants."""
    document = copy.deepcopy(run_document)
    document["task"] = {"reference": "effective_constants", "max_polyad": 3}
    out = tmp_path / "compare.json"
    code = main(
        [
            "compare",
            "--config",
            str(write_config(document)),
            "--format",
            "json",
            "--out",
            str(out),
        ],
    )
    assert code == EXIT_OK
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert len(payload["levels"]) == 10
    assert payload["max_abs"] > 0


def test_compare_effective_constants_defaults_to_n_max(
    write_config: Callable[..., Path],
    run_document: dict[str, Any],
    tmp_path: Path,
) -> None:
    """Test levels above n_max total quanta are left out of the comparison."""
    document = copy.deepcopy(run_document)
    document["model"]["deformation"]["value"] = 0.01
    document["task"] = {"reference": "effective_constants"}
    out = tmp_path / "compare.json"
    code = main(
        [
            "compare",
            "--config",
            str(write_config(document)),
            "--format",
            "json",
            "--out",
            str(out),
        ],
    )
    assert code == EXIT_OK
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert len(payload["levels"]) == 10
    assert 0 < payload["max_abs"] < 1e-3


@pytest.mark.parametrize("command", ["spectrum", "verify"])
def test_repeated_runs_are_identical(
    command: str,
    write_config: Callable[..., Path],
    run_document: dict[str, Any],
    tmp_path: Path,
) -> None:
    """Test two runs of the same config write byte-identical files."""
    config = str(write_config(run_document))
    outputs = [tmp_path / f"{command}_{i}.out" for i in range(2)]
    for out in outputs:
        assert main([command, "--config", config, "--out", str(out)]) == EXIT_OK
    first, second = (out.read_bytes() for out in outputs)
    assert first == second


def test_compare_needs_reference(
    write_config: Callable[..., Path],
    run_document: dict[str, Any],
) -> None:
    """Test compare without task.reference is a usage error."""
    assert main(["compare", "--config", str(write_config(run_document))]) == EXIT_USAGE


def test_simulate_then_fit(
    write_config: Callable[..., Path],
    run_document: dict[str, Any],
    tmp_path: Path,
) -> None:
    """Test fitting a simulated level file recovers the configured model."""
    document = copy.deepcopy(run_document)
    document["model"]["scale"] = 1000.0
    config = str(write_config(document))
    levels = tmp_path / "levels.csv"
    fitted = tmp_path / "fit.json"
    assert main(["simulate", "--config", config, "--out", str(levels)]) == EXIT_OK
    code = main(
        ["fit", "--config", config, "--levels", str(levels), "--out", str(fitted)],
    )
    assert code == EXIT_OK
    payload = json.loads(fitted.read_text(encoding="utf-8"))
    assert payload["params"]["scale"] == pytest.approx(1000.0, rel=1e-6)
    assert payload["params"]["T"] == pytest.approx(0.1, rel=1e-6)


def test_fit_with_duplicate_level(
    write_config: Callable[..., Path],
    run_document: dict[str, Any],
    tmp_path: Path,
) -> None:
    """Test a malformed level file is a usage error."""
    levels = tmp_path / "levels.csv"
    levels.write_text("n1,n2,energy\n0,0,0\n1,0,1\n1,0,1.1\n", encoding="utf-8")
    config = str(write_config(run_document))
    assert main(["fit", "--config", config, "--levels", str(levels)]) == EXIT_USAGE


def test_fit_needs_levels(
    write_config: Callable[..., Path],
    run_document: dict[str, Any],
) -> None:
    """Test fit without --levels is a usage error."""
    assert main(["fit", "--config", str(write_config(run_document))]) == EXIT_USAGE


def test_invalid_config(
    write_config: Callable[..., Path],
    run_document: dict[str, Any],
    tmp_path: Path,
) -> None:
    """Test unreadable and invalid configurations exit 2."""
    assert main(["spectrum", "--config", str(tmp_path / "none.json")]) == EXIT_USAGE
    document = copy.deepcopy(run_document)
    document["basis"]["modes"] = 3
    assert main(["spectrum", "--config", str(write_config(document))]) == EXIT_USAGE


def test_bad_arguments() -> None:
    """Test argparse errors exit 2 and --help exits 0."""
    assert main(["unknown"]) == EXIT_USAGE
    assert main(["spectrum"]) == EXIT_USAGE
    assert main(["--help"]) == EXIT_OK
