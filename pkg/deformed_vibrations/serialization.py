"""Level files, comparison tables, expansion text and fit reports."""

from __future__ import annotations

import csv
import io
import json
import logging
from enum import Enum
from pathlib import Path

from deformed_vibrations import exceptions, utils
from deformed_vibrations.analysis import SpectrumComparison
from deformed_vibrations.fitting import FitResult
from deformed_vibrations.fock import Label
from deformed_vibrations.models import EmpiricalParams, LevelSpectrum
from deformed_vibrations.series import SeriesPolynomial

logger = logging.getLogger(__name__)


class OutputFormat(str, Enum):
    """Tabular output format for level listings."""

    CSV = "csv"
    JSON = "json"


def _mode_header(mode_count: int) -> list[str]:
    return [f"n{i}" for i in range(1, mode_count + 1)]


def _csv_text(rows: list[list[str]]) -> str:
    buffer = io.StringIO()
    csv.writer(buffer, lineterminator="\n").writerows(rows)
    return buffer.getvalue()


def _json_text(payload: object) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _number(value: float) -> float:
    return utils.round_significant(value)


def dump_levels(
    spectrum: LevelSpectrum,
    output_format: OutputFormat = OutputFormat.CSV,
    energy_unit_scale: float = 1.0,
) -> str:
    """Render levels with header ``n1,…,nl,energy``.

    :param energy_unit_scale: Multiplier applied to energies on output only.
    """
    output_format = OutputFormat(output_format)
    if output_format is OutputFormat.JSON:
        return _json_text(
            {
                "levels": [
                    {
                        "assignment": list(level.assignment),
                        "polyad": level.polyad,
                        "energy": _number(level.energy * energy_unit_scale),
                    }
                    for level in spectrum
                ],
            },
        )
    rows = [[*_mode_header(spectrum.mode_count), "energy"]]
    rows += [
        [
            *(str(n) for n in level.assignment),
            utils.format_number(level.energy * energy_unit_scale),
        ]
        for level in spectrum
    ]
    return _csv_text(rows)


def _parse_row(row: list[str], mode_count: int, line: int) -> tuple[Label, float]:
    if len(row) != mode_count + 1:
        raise exceptions.LevelFileError(
            f"Line {line}: expected {mode_count + 1} fields, got {len(row)}",
        )
    try:
        assignment = tuple(int(field) for field in row[:-1])
        energy = float(row[-1])
    except ValueError as e:
        raise exceptions.LevelFileError(f"Line {line}: {e}") from e
    if min(assignment) < 0:
        raise exceptions.LevelFileError(f"Line {line}: negative quantum number")
    return assignment, energy


def parse_levels(text: str) -> LevelSpectrum:
    """Parse CSV level text with header ``n1,…,nl,energy``.

    :raises LevelFileError: On a bad header, malformed rows, duplicate
        assignments or non-finite energies.
    """
    rows = [
        [field.strip() for field in row]
        for row in csv.reader(io.StringIO(text))
        if row and any(field.strip() for field in row)
    ]
    if not rows:
        raise exceptions.LevelFileError("Level file is empty")
    header, *body = rows
    mode_count = len(header) - 1
    if mode_count < 1 or header != [*_mode_header(mode_count), "energy"]:
        raise exceptions.LevelFileError(
            f"Header must read n1,...,nl,energy; got {','.join(header)}",
        )
    pairs = [
        _parse_row(row, mode_count, line)
        for line, row in enumerate(body, start=2)
    ]
    try:
        return LevelSpectrum.from_pairs(pairs)
    except exceptions.ArgumentError as e:
        raise exceptions.LevelFileError(str(e)) from e


def read_levels(path: str | Path) -> LevelSpectrum:
    """Read and validate a CSV or JSON level file."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise exceptions.LevelFileError(f"Cannot read level file {path}: {e}") from e
    levels = parse_levels(text)
    logger.debug("Read %d levels from %s", len(levels), path)
    return levels


def dump_comparison(
    comparison: SpectrumComparison,
    mode_count: int,
    output_format: OutputFormat = OutputFormat.CSV,
    energy_unit_scale: float = 1.0,
) -> str:
    """Residual table keyed by assignment, plus max and rms in JSON output."""
    output_format = OutputFormat(output_format)
    if output_format is OutputFormat.JSON:
        return _json_text(
            {
                "max_abs": _number(comparison.max_abs * energy_unit_scale),
                "rms": _number(comparison.rms * energy_unit_scale),
                "levels": [
                    {
                        "assignment": list(entry.assignment),
                        "model": _number(entry.first * energy_unit_scale),
                        "reference": _number(entry.second * energy_unit_scale),
                        "residual": _number(entry.residual * energy_unit_scale),
                    }
                    for entry in comparison.entries
                ],
            },
        )
    rows = [[*_mode_header(mode_count), "model", "reference", "residual"]]
    rows += [
        [
            *(str(n) for n in entry.assignment),
            *(
                utils.format_number(value * energy_unit_scale)
                for value in (entry.first, entry.second, entry.residual)
            ),
        ]
        for entry in comparison.entries
    ]
    return _csv_text(rows)


def constants_payload(params: EmpiricalParams) -> dict[str, float]:
    """Effective constants by parameter name (omega1, gamma1, gamma_1_2, …)."""
    payload = {f"omega{i}": w for i, w in enumerate(params.omega, start=1)}
    payload |= {f"gamma{i}": g for i, g in enumerate(params.gamma, start=1)}
    payload |= {
        utils.pair_name("gamma", *pair.modes): pair.value for pair in params.gamma_cross
    }
    return {name: _number(value) for name, value in payload.items()}


def dump_expansion(
    series: SeriesPolynomial,
    value: float,
    params: EmpiricalParams | None = None,
) -> str:
    """Symbolic series, the series at the configured deformation and constants."""
    symbol = str(series.symbol)
    lines = [
        f"series: {series.to_text()}",
        f"at {symbol}={utils.format_number(value)}: {series.at_value(value).to_text()}",
    ]
    if params is not None:
        lines += [
            f"{name}: {utils.format_number(number)}"
            for name, number in constants_payload(params).items()
        ]
    return "\n".join(lines) + "\n"


def dump_fit(result: FitResult) -> str:
    """JSON document with the fitted spec, residuals and convergence data."""
    return _json_text(
        {
            "family": result.spec.family.value,
            "converged": result.converged,
            "iterations": result.iterations,
            "sse": _number(result.sse),
            "rms": _number(result.rms),
            "gradient_norm": _number(result.gradient_norm),
            "free_params": list(result.free_params),
            "params": {name: _number(v) for name, v in result.params.items()},
            "condition_note": result.condition_note,
            "residuals": [
                {"assignment": list(assignment), "residual": _number(residual)}
                for assignment, residual in result.residuals.items()
            ],
        },
    )
