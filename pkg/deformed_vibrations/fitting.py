"""Damped least-squares fits of model parameters to vibrational levels."""

from __future__ import annotations

import itertools
import logging
import math
import re
from collections.abc import Collection, Mapping
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from deformed_vibrations import constants, exceptions, utils
from deformed_vibrations.arithmetic import DeformationKind, DeformationParameter
from deformed_vibrations.fock import Label
from deformed_vibrations.hamiltonian import level_energy, spectrum_levels
from deformed_vibrations.models import (
    CouplingKind,
    CouplingTerm,
    EmpiricalParams,
    LevelSpectrum,
    ModelFamily,
    ModelSpec,
    PairConstant,
    ZeroPoint,
)

logger = logging.getLogger(__name__)

_COUPLING_NAME = re.compile(r"^(bilinear|darling_dennison)_(\d+)_(\d+)$")


def simulate_levels(
    spec: ModelSpec,
    n_max: int,
    noise_sigma: float = 0.0,
    seed: int = constants.DEFAULT_SEED,
) -> LevelSpectrum:
    """Model levels with seeded Gaussian noise of standard deviation ``noise_sigma``.

    :raises ArgumentError: If ``noise_sigma`` is negative.
    """
    if noise_sigma < 0:
        raise exceptions.ArgumentError(f"noise_sigma must be >= 0, got {noise_sigma}")
    levels = spectrum_levels(spec, n_max)
    if noise_sigma == 0:
        return levels
    rng = np.random.default_rng(seed)
    noise = rng.normal(0.0, noise_sigma, size=len(levels))
    return LevelSpectrum.from_pairs(
        (level.assignment, level.energy + float(delta))
        for level, delta in zip(levels, noise, strict=True)
    )


def _deformation_symbol(family: ModelFamily) -> str:
    return "tau" if family.is_symmetric else "T"


def parameter_names(family: ModelFamily, mode_count: int) -> list[str]:
    """Names of the parameters a family is fitted with, in canonical order."""
    modes = range(1, mode_count + 1)
    if family is ModelFamily.EMPIRICAL_ABA:
        return [
            *(f"omega{i}" for i in modes),
            *(f"gamma{i}" for i in modes),
            *(
                utils.pair_name("gamma", i, j)
                for i, j in itertools.combinations(modes, 2)
            ),
        ]
    if family is ModelFamily.EMPIRICAL_POLYATOMIC:
        return [
            *(f"omega{i}" for i in modes),
            *(
                utils.pair_name("x", i, k)
                for i, k in itertools.combinations_with_replacement(modes, 2)
            ),
        ]
    names = ["scale", _deformation_symbol(family)]
    if family.has_anharmonic_terms:
        names += [f"c{i}" for i in modes]
    return names


def _coupling_terms(values: Mapping[str, float]) -> list[CouplingTerm]:
    terms = []
    for name, strength in values.items():
        match = _COUPLING_NAME.match(name)
        if match:
            kind, first, second = match.groups()
            terms.append(
                CouplingTerm(
                    kind=CouplingKind(kind),
                    modes=(int(first), int(second)),
                    strength=strength,
                ),
            )
    return terms


def build_model(
    family: ModelFamily,
    mode_count: int,
    values: Mapping[str, float],
) -> ModelSpec:
    """Ground-referenced ModelSpec from named parameter values.

    q families are built with the real kind q = e^τ.
    """
    modes = range(1, mode_count + 1)
    couplings = _coupling_terms(values)
    if family.is_empirical:
        omega = [values[f"omega{i}"] for i in modes]
        if family is ModelFamily.EMPIRICAL_ABA:
            params = EmpiricalParams(
                omega=omega,
                gamma=[values[f"gamma{i}"] for i in modes],
                gamma_cross=[
                    PairConstant(
                        modes=(i, j),
                        value=values[utils.pair_name("gamma", i, j)],
                    )
                    for i, j in itertools.combinations(modes, 2)
                ],
            )
        else:
            params = EmpiricalParams(
                omega=omega,
                x=[
                    PairConstant(modes=(i, k), value=values[utils.pair_name("x", i, k)])
                    for i, k in itertools.combinations_with_replacement(modes, 2)
                ],
            )
        return ModelSpec(
            family=family,
            mode_count=mode_count,
            empirical=params,
            couplings=couplings,
        )
    kind = DeformationKind.SYM_REAL if family.is_symmetric else DeformationKind.Q_REAL
    symbol = _deformation_symbol(family)
    return ModelSpec(
        family=family,
        mode_count=mode_count,
        deformation=DeformationParameter(kind=kind, value=values[symbol]),
        c=[values[f"c{i}"] for i in modes] if family.has_anharmonic_terms else [],
        scale=values["scale"],
        couplings=couplings,
        zero_point=ZeroPoint.GROUND_REFERENCED,
    )


def _quadratic_seed(levels: LevelSpectrum) -> tuple[float, float]:
    """Linear and quadratic coefficients of E against total quanta."""
    total = np.array([level.polyad for level in levels], dtype=np.float64)
    energy = np.array(levels.energies, dtype=np.float64)
    if len(set(total.tolist())) >= 3:  # noqa: PLR2004
        quadratic, linear, _ = np.polyfit(total, energy, 2)
    elif len(set(total.tolist())) == 2:  # noqa: PLR2004
        quadratic, (linear, _) = 0.0, np.polyfit(total, energy, 1)
    else:
        quadratic, linear = 0.0, 1.0
    return float(linear), float(quadratic)


def initial_values(
    levels: LevelSpectrum,
    family: ModelFamily,
    mode_count: int,
) -> dict[str, float]:
    """Starting point seeded from a quadratic fit of E against Σn_i.

    For Q families x = b/a is inverted through the one-mode anharmonicity
    x = (T/2)/(1 - T/2), giving T = 2x/(1 + x) and scale = a/(1 - T/2).
    c_i and couplings start at zero, τ at a fixed small value.
    """
    linear, quadratic = _quadratic_seed(levels)
    modes = range(1, mode_count + 1)
    values = dict.fromkeys(parameter_names(family, mode_count), 0.0)
    if family.is_empirical:
        for i in modes:
            values[f"omega{i}"] = linear - quadratic
            if family is ModelFamily.EMPIRICAL_ABA:
                values[f"gamma{i}"] = 2 * quadratic
            else:
                values[utils.pair_name("x", i, i)] = quadratic
        return values
    if family.is_symmetric:
        values.update(scale=linear, tau=constants.FIT_DEFAULT_TAU)
        return values
    x = quadratic / linear if linear else 0.0
    if family is ModelFamily.Q_SINGLE:
        # ½([n]+[n+1]) carries no -T/2 shift on its linear term.
        values.update(scale=linear, T=2 * x)
        return values
    T = 2 * x / (1 + x) if x != -1 else 0.0
    values.update(scale=linear / (1 - T / 2), T=T)
    return values


@dataclass(frozen=True)
class FitResult:
    """Outcome of :func:`fit`.

    ``params`` holds every parameter, free and fixed; ``history`` the SSE of
    the starting point and of every accepted step.
    """

    params: dict[str, float]
    free_params: tuple[str, ...]
    spec: ModelSpec
    sse: float
    iterations: int
    converged: bool
    residuals: dict[Label, float]
    gradient_norm: float
    history: tuple[float, ...]
    condition_note: str | None = None

    @property
    def rms(self) -> float:
        """Root mean square residual at the optimum."""
        if not self.residuals:
            return 0.0
        return math.sqrt(self.sse / len(self.residuals))


class _Objective:
    """Residual vector model(assignment) - energy over the free parameters."""

    def __init__(
        self,
        levels: LevelSpectrum,
        family: ModelFamily,
        mode_count: int,
        values: dict[str, float],
        free: tuple[str, ...],
    ) -> None:
        self.family = family
        self.mode_count = mode_count
        self.values = values
        self.free = free
        self.assignments = levels.assignments
        self.energies = np.array(levels.energies, dtype=np.float64)
        self.cutoff = max(max(a) for a in self.assignments)

    def params(self, vector: NDArray[np.float64]) -> dict[str, float]:
        values = dict(self.values)
        values.update(zip(self.free, (float(v) for v in vector), strict=True))
        return values

    def spec(self, vector: NDArray[np.float64]) -> ModelSpec:
        return build_model(self.family, self.mode_count, self.params(vector))

    def model_energies(self, spec: ModelSpec) -> NDArray[np.float64]:
        if spec.is_diagonal:
            ground = level_energy(spec, (0,) * self.mode_count)
            model = [level_energy(spec, a) - ground for a in self.assignments]
            return np.array(model, dtype=np.float64)
        levels = spectrum_levels(spec, self.cutoff).as_dict()
        missing = [a for a in self.assignments if a not in levels]
        if missing:
            raise exceptions.FitError(f"Model has no level assigned {missing[0]}")
        return np.array([levels[a] for a in self.assignments], dtype=np.float64)

    def residuals(self, vector: NDArray[np.float64]) -> NDArray[np.float64] | None:
        """Residuals, or None where the parameters leave the model's domain."""
        try:
            model = self.model_energies(self.spec(vector))
        except ValueError as e:
            logger.debug("Parameters %s rejected: %s", vector, e)
            return None
        residuals = model - self.energies
        return residuals if np.all(np.isfinite(residuals)) else None

    def jacobian(self, vector: NDArray[np.float64]) -> NDArray[np.float64]:
        """Central differences with step FIT_JACOBIAN_STEP·max(|p|, 1)."""
        columns = []
        for k, value in enumerate(vector):
            step = constants.FIT_JACOBIAN_STEP * max(abs(value), 1.0)
            upper, lower = vector.copy(), vector.copy()
            upper[k] += step
            lower[k] -= step
            forward, backward = self.residuals(upper), self.residuals(lower)
            if forward is None or backward is None:
                raise exceptions.FitError(
                    f"Cannot differentiate {self.free[k]} at {value}: "
                    "the model is undefined next to this point",
                )
            columns.append((forward - backward) / (2 * step))
        return np.column_stack(columns)


def _sse(residuals: NDArray[np.float64]) -> float:
    return float(residuals @ residuals)


def _condition_note(
    jacobian: NDArray[np.float64],
    names: tuple[str, ...],
) -> str | None:
    norms = np.linalg.norm(jacobian, axis=0)
    notes = [
        f"{name} does not change the levels"
        for name, norm in zip(names, norms, strict=True)
        if norm == 0
    ]
    safe = np.where(norms == 0, 1.0, norms)
    cosines = np.abs((jacobian / safe).T @ (jacobian / safe))
    for i, j in itertools.combinations(range(len(names)), 2):
        if norms[i] and norms[j] and cosines[i, j] > constants.FIT_COLLINEARITY:
            notes.append(
                f"{names[i]} and {names[j]} are nearly collinear "
                f"(|cos| = {cosines[i, j]:.6f})",
            )
    if not notes:
        return None
    note = "; ".join(notes)
    logger.warning("Poorly conditioned fit: %s", note)
    return note


def _is_stationary(
    jacobian: NDArray[np.float64],
    residuals: NDArray[np.float64],
) -> bool:
    """First-order optimality: ||J^T r|| <= tol * (1 + ||r||)."""
    gradient = float(np.linalg.norm(jacobian.T @ residuals))
    bound = constants.FIT_GRADIENT_TOLERANCE * (1 + float(np.linalg.norm(residuals)))
    return gradient <= bound


def _solve_step(
    jacobian: NDArray[np.float64],
    residuals: NDArray[np.float64],
    damping: float,
) -> NDArray[np.float64] | None:
    normal = jacobian.T @ jacobian
    scaling = np.diag(normal).copy()
    scaling[scaling == 0] = 1.0
    try:
        return np.linalg.solve(
            normal + damping * np.diag(scaling),
            -(jacobian.T @ residuals),
        )
    except np.linalg.LinAlgError:
        return None


def _levenberg_marquardt(
    objective: _Objective,
    start: NDArray[np.float64],
    max_iterations: int,
    ftol: float,
    xtol: float,
) -> tuple[NDArray[np.float64], int, bool, list[float]]:
    point = start
    residuals = objective.residuals(point)
    if residuals is None:
        raise exceptions.FitError(
            f"Initial parameters {objective.params(point)} are invalid",
        )
    sse = _sse(residuals)
    history = [sse]
    damping = constants.FIT_INITIAL_DAMPING
    if sse <= np.finfo(np.float64).tiny:
        return point, 0, True, history

    for iteration in range(1, max_iterations + 1):
        jacobian = objective.jacobian(point)
        while True:
            step = _solve_step(jacobian, residuals, damping)
            trial = None if step is None else objective.residuals(point + step)
            if step is not None and trial is not None and _sse(trial) < sse:
                break
            damping *= constants.FIT_DAMPING_UP
            if damping > constants.FIT_MAX_DAMPING:
                stationary = _is_stationary(jacobian, residuals)
                logger.log(
                    logging.DEBUG if stationary else logging.WARNING,
                    "No descent step left after %d iterations (stationary: %s)",
                    iteration,
                    stationary,
                )
                return point, iteration, stationary, history

        trial_sse = _sse(trial)
        relative = (sse - trial_sse) / sse
        small_step = np.linalg.norm(step) <= xtol * (np.linalg.norm(point) + xtol)
        point, residuals, sse = point + step, trial, trial_sse
        history.append(sse)
        damping /= constants.FIT_DAMPING_DOWN
        logger.debug("Iteration %d: SSE %.6e, damping %.1e", iteration, sse, damping)
        if sse <= np.finfo(np.float64).tiny or relative < ftol or small_step:
            return point, iteration, True, history

    logger.warning("Fit did not converge in %d iterations", max_iterations)
    return point, max_iterations, False, history


def fit(
    levels: LevelSpectrum,
    family: ModelFamily,
    free_params: Collection[str] | None = None,
    init: Mapping[str, float] | None = None,
    *,
    mode_count: int | None = None,
    max_iterations: int = constants.FIT_MAX_ITERATIONS,
    ftol: float = constants.FIT_FTOL,
    xtol: float = constants.FIT_XTOL,
) -> FitResult:
    """Fit a model family to ground-referenced levels by Levenberg-Marquardt.

    Each iteration solves (JᵀJ + λ·diag(JᵀJ))δ = -Jᵀr with a central-difference
    Jacobian, raising λ on rejected steps and lowering it on accepted ones. The
    fit stops when the relative SSE change falls below ``ftol`` or the step
    below ``xtol`` times the parameter norm.

    :param levels: Observed levels; must contain the all-zero assignment.
    :param free_params: Names to vary (default: every family parameter).
        Coupling strengths ``bilinear_i_j`` and ``darling_dennison_i_j`` may be
        named here or in ``init``.
    :param init: Starting values overriding the seeded ones.
    :raises UnderdeterminedFitError: With fewer levels than free parameters.
    :raises LevelFileError: Without the all-zero assignment.
    :raises ArgumentError: On unknown parameter names or mode count mismatch.
    """
    mode_count = mode_count or levels.mode_count
    init = dict(init or {})
    names = parameter_names(family, mode_count)
    free = tuple(free_params) if free_params is not None else tuple(names)
    if len(levels) == 0 or len(levels) < len(free):
        raise exceptions.UnderdeterminedFitError(
            f"{len(levels)} levels cannot determine {len(free)} free parameters",
        )
    if levels.mode_count != mode_count:
        raise exceptions.ArgumentError(
            f"Levels have {levels.mode_count} modes, the model {mode_count}",
        )
    for name in (*free, *init):
        if name not in names and not _COUPLING_NAME.match(name):
            raise exceptions.ArgumentError(
                f"Unknown parameter {name!r} for {family.value}; known: {names}",
            )
    if (0,) * mode_count not in levels.as_dict():
        raise exceptions.LevelFileError(
            "Ground-referenced fitting needs the all-zero assignment level",
        )

    data = levels.ground_referenced()
    values = initial_values(data, family, mode_count)
    for name in free:
        values.setdefault(name, 0.0)
    values.update(init)
    objective = _Objective(data, family, mode_count, values, free)
    start = np.array([values[name] for name in free], dtype=np.float64)
    logger.info("Fitting %s with free %s from %s", family.value, free, values)

    point, iterations, converged, history = _levenberg_marquardt(
        objective,
        start,
        max_iterations,
        ftol,
        xtol,
    )
    residuals = objective.residuals(point)
    if residuals is None:  # pragma: no cover
        raise exceptions.FitError("Fitted parameters left the model domain")
    jacobian = objective.jacobian(point)
    return FitResult(
        params=objective.params(point),
        free_params=free,
        spec=objective.spec(point),
        sse=_sse(residuals),
        iterations=iterations,
        converged=converged,
        residuals=dict(zip(objective.assignments, residuals.tolist(), strict=True)),
        gradient_norm=float(np.linalg.norm(jacobian.T @ residuals)),
        history=tuple(history),
        condition_note=_condition_note(jacobian, free),
    )
