"""Command-line entry point.

Exit codes: 0 on success, 1 on a computational failure (failed check,
non-converged fit), 2 on usage, configuration or data errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path

from pydantic import ValidationError

from deformed_vibrations import exceptions, serialization
from deformed_vibrations.analysis import (
    compare_spectra,
    effective_constants,
    empirical_from_constants,
)
from deformed_vibrations.arithmetic import DeformationKind
from deformed_vibrations.config import RunConfig, load_config
from deformed_vibrations.fitting import fit, simulate_levels
from deformed_vibrations.hamiltonian import spectrum_levels
from deformed_vibrations.models import ModelSpec
from deformed_vibrations.series import expand_model
from deformed_vibrations.verification import run_verification

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def _write(path: Path | None, text: str) -> None:
    if path is None:
        print(text, end="")
    else:
        path.write_text(text, encoding="utf-8")


def run_spectrum(config: RunConfig, args: argparse.Namespace) -> int:
    """Write the eigenvalue spectrum in the requested format."""
    levels = spectrum_levels(config.model, config.basis.n_max)
    _write(
        args.out,
        serialization.dump_levels(levels, args.format, config.task.energy_unit_scale),
    )
    return EXIT_OK


def run_expand(config: RunConfig, args: argparse.Namespace) -> int:
    """Write the truncated series, plus effective constants for q_real."""
    model = config.model
    series = expand_model(model, config.task.order)
    params = None
    if model.deformation_kind is DeformationKind.Q_REAL:
        params = effective_constants(model)
    d = model.require_deformation()
    _write(args.out, serialization.dump_expansion(series, d.value, params))
    return EXIT_OK


def run_verify(config: RunConfig, args: argparse.Namespace) -> int:
    """Write the identity report as JSON; exit 1 when any check fails."""
    report = run_verification(
        config.model,
        config.basis.n_max,
        config.task.margin,
        config.task.tolerance,
    )
    _write(args.out, report.to_json())
    for failure in report.failures():
        logger.warning(
            "FAILED %s (%s): residual %.3e > %.3e",
            failure.name,
            failure.relation,
            failure.residual,
            failure.tolerance,
        )
    return EXIT_OK if report.passed else EXIT_FAILURE


def run_fit(config: RunConfig, args: argparse.Namespace) -> int:
    """Fit the configured family to --levels; exit 1 when the fit did not converge."""
    if args.levels is None:
        raise exceptions.ConfigError("fit needs --levels")
    levels = serialization.read_levels(args.levels)
    options = config.task.fit
    result = fit(
        levels,
        options.family or config.model.family,
        options.free_params,
        options.init,
        mode_count=options.mode_count,
        max_iterations=options.max_iterations,
        ftol=options.ftol,
        xtol=options.xtol,
    )
    _write(args.out, serialization.dump_fit(result))
    return EXIT_OK if result.converged else EXIT_FAILURE


def _reference_model(config: RunConfig) -> ModelSpec:
    reference = config.task.reference
    if reference is None:
        raise exceptions.ConfigError("compare needs task.reference")
    if reference == "effective_constants":
        return empirical_from_constants(effective_constants(config.model))
    return reference


def _compared_polyad(config: RunConfig) -> int | None:
    # effective constants only describe levels up to n_max total quanta
    max_polyad = config.task.max_polyad
    if max_polyad is None and config.task.reference == "effective_constants":
        return config.basis.n_max
    return max_polyad


def run_compare(config: RunConfig, args: argparse.Namespace) -> int:
    """Compare ground-referenced levels with task.reference by assignment."""
    n_max = config.basis.n_max
    comparison = compare_spectra(
        spectrum_levels(config.model, n_max),
        spectrum_levels(_reference_model(config), n_max),
        _compared_polyad(config),
    )
    logger.info("max_abs %.6e, rms %.6e", comparison.max_abs, comparison.rms)
    _write(
        args.out,
        serialization.dump_comparison(
            comparison,
            config.model.mode_count,
            args.format,
            config.task.energy_unit_scale,
        ),
    )
    return EXIT_OK


def run_simulate(config: RunConfig, args: argparse.Namespace) -> int:
    """Write synthetic levels with Gaussian noise of task.noise_sigma."""
    levels = simulate_levels(
        config.model,
        config.basis.n_max,
        config.task.noise_sigma,
        config.task.seed,
    )
    _write(
        args.out,
        serialization.dump_levels(levels, args.format, config.task.energy_unit_scale),
    )
    return EXIT_OK


COMMANDS: dict[str, tuple[Callable[[RunConfig, argparse.Namespace], int], str]] = {
    "spectrum": (run_spectrum, "Write the model's levels"),
    "expand": (run_expand, "Print the series expansion and effective constants"),
    "verify": (run_verify, "Run the identity suite and write a JSON report"),
    "fit": (run_fit, "Fit model parameters to a level file"),
    "compare": (run_compare, "Compare the model with task.reference"),
    "simulate": (run_simulate, "Write synthetic levels with optional noise"),
}


def build_parser() -> argparse.ArgumentParser:
    """Parser for the subcommands in COMMANDS, all sharing the common options."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, required=True, help="JSON run config")
    common.add_argument("--out", type=Path, help="Output file (default: stdout)")
    common.add_argument(
        "--format",
        choices=[f.value for f in serialization.OutputFormat],
        default=serialization.OutputFormat.CSV.value,
        help="Level and comparison table format",
    )
    common.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="-v for progress, -vv for debug output on stderr",
    )
    parser = argparse.ArgumentParser(
        prog="deformed-vibrations",
        description="Deformed-oscillator models of molecular vibrational spectra.",
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for name, (_, text) in COMMANDS.items():
        sub = commands.add_parser(name, parents=[common], help=text)
        if name == "fit":
            sub.add_argument("--levels", type=Path, help="CSV level file to fit")
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point; maps usage errors to 2 and domain failures to 1."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    _configure_logging(args.verbose)
    handler, _ = COMMANDS[args.command]
    try:
        config = load_config(args.config)
        return handler(config, args)
    except (ValidationError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except exceptions.DeformedVibrationsError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_FAILURE
