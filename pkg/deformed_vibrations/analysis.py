"""Spectroscopic constants, anharmonicity ratios and spectrum comparison."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass

import numpy as np
import sympy as sp

from deformed_vibrations import exceptions, utils
from deformed_vibrations.arithmetic import DeformationKind
from deformed_vibrations.fock import Label
from deformed_vibrations.models import (
    EmpiricalParams,
    LevelSpectrum,
    ModelFamily,
    ModelSpec,
    PairConstant,
    ZeroPoint,
)
from deformed_vibrations.series import SeriesPolynomial, expand_model

logger = logging.getLogger(__name__)


def self_anharmonicity(T: float, c: float = 0.0) -> float:
    """Ratio of the n² to the n coefficient of one mode at first order in T.

    c + (T/2)/(1 - T/2); with c = 0 this is the Morse-type ratio of the
    Q-oscillator.

    :raises DeformationDomainError: At the pole T = 2.
    """
    if T == 2:  # noqa: PLR2004
        raise exceptions.DeformationDomainError("T = 2 is a pole of (T/2)/(1 - T/2)")
    return c + (T / 2) / (1 - T / 2)


def _unit(mode_count: int, mode: int, power: int = 1) -> Label:
    return tuple(power if i == mode else 0 for i in range(mode_count))


def _pair(mode_count: int, first: int, second: int) -> Label:
    return tuple(1 if i in (first, second) else 0 for i in range(mode_count))


def effective_constants(spec: ModelSpec) -> EmpiricalParams:
    """Map the first-order expansion of a Q family onto the ABA-type formula.

    With the first-order polynomial Σa_i n_i + Σb_i n_i² + Σ_{i<j}g_ij n_i n_j
    and n = (n + ½) - ½, the constants are γ_i = 2b_i, γ_ij = g_ij and
    ħω_i = a_i - b_i - Σ_{j≠i} g_ij/2. Monomials beyond degree two, such as
    the (T/2)c_i² n_i⁴ self terms, are not folded in.

    :raises UnsupportedModelError: For q families, whose first-order
        expansions carry no n_i n_j term, and for empirical or coupled models.
    """
    if spec.deformation_kind is not DeformationKind.Q_REAL:
        raise exceptions.UnsupportedModelError(
            f"{spec.family.value} has no quadratic truncation: q-deformed models "
            "lack the n_i n_j cross term at leading order",
        )
    d = spec.require_deformation()
    series = expand_model(spec, order=1).at_value(d.value)
    modes = spec.mode_count
    linear = [float(series.coefficient(_unit(modes, i))) for i in range(modes)]
    square = [float(series.coefficient(_unit(modes, i, 2))) for i in range(modes)]
    cross = {
        (i, j): float(series.coefficient(_pair(modes, i, j)))
        for i, j in itertools.combinations(range(modes), 2)
    }
    dropped = [mono for mono in series.terms if sum(mono) > 2]  # noqa: PLR2004
    if dropped:
        logger.debug("Effective constants ignore monomials %s", sorted(dropped))

    def pair_value(i: int, j: int) -> float:
        return cross[(min(i, j), max(i, j))]

    omega = [
        linear[i]
        - square[i]
        - sum(pair_value(i, j) / 2 for j in range(modes) if j != i)
        for i in range(modes)
    ]
    return EmpiricalParams(
        omega=omega,
        gamma=[2 * b for b in square],
        gamma_cross=[
            PairConstant(modes=(i + 1, j + 1), value=value)
            for (i, j), value in cross.items()
        ],
    )


def empirical_from_constants(
    params: EmpiricalParams,
    zero_point: ZeroPoint = ZeroPoint.GROUND_REFERENCED,
) -> ModelSpec:
    """The ABA-type empirical model carrying ``params``."""
    return ModelSpec(
        family=ModelFamily.EMPIRICAL_ABA,
        mode_count=len(params.omega),
        empirical=params,
        zero_point=zero_point,
    )


@dataclass(frozen=True)
class CrossAnharmonicity:
    """Leading-order monomials that couple the two modes."""

    bilinear: sp.Expr
    cross_terms: dict[Label, sp.Expr]

    @property
    def bilinear_is_zero(self) -> bool:
        """True when the n1*n2 coefficient vanishes identically."""
        return self.bilinear == 0


def cross_anharmonicity_report(spec: ModelSpec) -> CrossAnharmonicity:
    """The n₁n₂ coefficient and every mixed monomial at first order.

    For the q families the n₁n₂ coefficient vanishes identically and the
    leading mixed terms are cubic; for the Q families it equals T·scale.
    """
    if spec.mode_count != 2:  # noqa: PLR2004
        raise exceptions.UnsupportedModelError(
            "Cross-anharmonicity report needs a two-mode model",
        )
    series: SeriesPolynomial = expand_model(spec, order=1)
    mixed = {
        mono: coefficient
        for mono, coefficient in series.terms.items()
        if all(e > 0 for e in mono)
    }
    return CrossAnharmonicity(bilinear=series.coefficient((1, 1)), cross_terms=mixed)


@dataclass(frozen=True)
class ComparisonEntry:
    """One assignment present in both compared spectra."""

    assignment: Label
    first: float
    second: float

    @property
    def residual(self) -> float:
        """First minus second."""
        return self.first - self.second


@dataclass(frozen=True)
class SpectrumComparison:
    """Ground-referenced level differences keyed by assignment."""

    entries: tuple[ComparisonEntry, ...]

    @property
    def residuals(self) -> dict[Label, float]:
        """Residual per shared assignment."""
        return {entry.assignment: entry.residual for entry in self.entries}

    @property
    def max_abs(self) -> float:
        """Largest absolute residual, 0 for an empty comparison."""
        return max((abs(entry.residual) for entry in self.entries), default=0.0)

    @property
    def rms(self) -> float:
        """Root mean square residual."""
        if not self.entries:
            return 0.0
        values = np.array([entry.residual for entry in self.entries])
        return float(np.sqrt(np.mean(values**2)))


def compare_spectra(
    a: LevelSpectrum,
    b: LevelSpectrum,
    max_polyad: int | None = None,
) -> SpectrumComparison:
    """Compare two spectra level by level after referencing both to the ground.

    :param max_polyad: Keep only levels with Σn_i <= ``max_polyad``.
    :raises SpectrumMismatchError: If the assignment sets differ.
    """
    first = a.ground_referenced().restricted(max_polyad)
    second = b.ground_referenced().restricted(max_polyad).as_dict()
    missing = set(first.assignments) ^ set(second)
    if missing:
        raise exceptions.SpectrumMismatchError(
            f"Spectra differ in {len(missing)} assignments, "
            f"e.g. {sorted(missing)[0]}",
        )
    comparison = SpectrumComparison(
        tuple(
            ComparisonEntry(level.assignment, level.energy, second[level.assignment])
            for level in first
        ),
    )
    logger.debug(
        "Compared %d levels: max %s, rms %s",
        len(comparison.entries),
        utils.format_number(comparison.max_abs),
        utils.format_number(comparison.rms),
    )
    return comparison


def level_anharmonicity(spectrum: LevelSpectrum, mode: int = 1) -> float:
    """Quadratic over linear coefficient of a quadratic fit to one mode's ladder.

    Uses the ground-referenced levels whose quanta all sit in ``mode``.

    :raises ArgumentError: With fewer than three such levels.
    """
    if not 1 <= mode <= spectrum.mode_count:
        raise exceptions.ArgumentError(
            f"Mode {mode} out of range 1..{spectrum.mode_count}",
        )
    ladder = [
        (level.assignment[mode - 1], level.energy)
        for level in spectrum.ground_referenced()
        if level.polyad == level.assignment[mode - 1]
    ]
    if len(ladder) < 3:  # noqa: PLR2004
        raise exceptions.ArgumentError(
            f"Mode {mode} has {len(ladder)} pure overtone levels; need 3",
        )
    n = np.array([quanta for quanta, _ in ladder], dtype=np.float64)
    energy = np.array([value for _, value in ladder], dtype=np.float64)
    quadratic, linear, _ = np.polyfit(n, energy, 2)
    if math.isclose(linear, 0.0, abs_tol=1e-300):
        raise exceptions.ArgumentError(f"Mode {mode} has no linear term")
    return float(quadratic / linear)
