"""Hamiltonian builders, closed-form levels, couplings and diagonalization."""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import linear_sum_assignment

from deformed_vibrations import constants, exceptions
from deformed_vibrations.arithmetic import (
    DeformationKind,
    DeformationParameter,
    bracket_Q,
    bracket_symmetric,
)
from deformed_vibrations.eigen import jacobi_eigh
from deformed_vibrations.fock import (
    FockBasis,
    Label,
    OperatorMatrix,
    build_basis,
    deformed_exponential,
    diagonal_operator,
    function_of_number,
    lowering_Q,
    lowering_q,
)
from deformed_vibrations.models import (
    CouplingKind,
    CouplingTerm,
    EmpiricalParams,
    LevelSpectrum,
    ModelFamily,
    ModelSpec,
    ZeroPoint,
)

logger = logging.getLogger(__name__)

UNDEFORMED_Q = DeformationParameter(kind=DeformationKind.Q_REAL, value=0.0)


def _anharmonic_argument(spec: ModelSpec, assignment: Label) -> float:
    """Σ(n_i + c_i n_i²)."""
    return sum(n + c * n * n for n, c in zip(assignment, spec.c, strict=True))


def _empirical_aba(params: EmpiricalParams, assignment: Label) -> float:
    shifted = [n + 0.5 for n in assignment]
    energy = 0.0
    for mode, m in enumerate(shifted, start=1):
        energy += params.omega[mode - 1] * m + params.gamma_at(mode) / 2 * m * m
    for pair in params.gamma_cross:
        first, second = pair.modes
        energy += pair.value * shifted[first - 1] * shifted[second - 1]
    return energy


def _empirical_polyatomic(params: EmpiricalParams, assignment: Label) -> float:
    shifted = [
        v + params.degeneracy_at(mode) / 2
        for mode, v in enumerate(assignment, start=1)
    ]
    energy = sum(w * m for w, m in zip(params.omega, shifted, strict=True))
    for pair in params.x:
        first, second = pair.modes
        energy += pair.value * shifted[first - 1] * shifted[second - 1]
    return energy


def level_energy(spec: ModelSpec, assignment: Label) -> float:
    """Raw closed-form energy of one label for a diagonal family.

    :param spec: The model; couplings are ignored here.
    :param assignment: Quantum numbers (n₁, …, n_l).
    """
    family = spec.family
    if family is ModelFamily.EMPIRICAL_ABA:
        return _empirical_aba(_empirical(spec), assignment)
    if family is ModelFamily.EMPIRICAL_POLYATOMIC:
        return _empirical_polyatomic(_empirical(spec), assignment)

    d = spec.require_deformation()
    total = sum(assignment)
    if family is ModelFamily.SYM_SINGLE:
        value = (bracket_symmetric(total, d) + bracket_symmetric(total + 1, d)) / 2
    elif family is ModelFamily.Q_SINGLE:
        value = (bracket_Q(total, d) + bracket_Q(total + 1, d)) / 2
    elif family is ModelFamily.SYM_COUPLED:
        value = bracket_symmetric(total, d)
    elif family is ModelFamily.Q_COUPLED:
        value = bracket_Q(total, d)
    else:
        value = bracket_Q(_anharmonic_argument(spec, assignment), d)
    return spec.scale * value


def _empirical(spec: ModelSpec) -> EmpiricalParams:
    if spec.empirical is None:  # pragma: no cover
        raise exceptions.UnsupportedModelError(f"{spec.family.value} lacks parameters")
    return spec.empirical


def _zero_point_shift(spec: ModelSpec) -> float:
    if spec.zero_point is ZeroPoint.RAW:
        return 0.0
    return level_energy(spec, (0,) * spec.mode_count)


def _resolve_basis(spec: ModelSpec, basis_or_nmax: FockBasis | int) -> FockBasis:
    if isinstance(basis_or_nmax, FockBasis):
        basis = basis_or_nmax
    else:
        basis = build_basis(spec.mode_count, basis_or_nmax)
    if basis.mode_count != spec.mode_count:
        raise exceptions.BasisMismatchError(
            f"{basis!r} does not match a {spec.mode_count}-mode model",
        )
    return basis


def analytic_levels(spec: ModelSpec, basis_or_nmax: FockBasis | int) -> LevelSpectrum:
    """Closed-form levels of a diagonal family over every basis label.

    :raises UnsupportedModelError: If the model carries coupling terms.
    """
    if spec.couplings:
        raise exceptions.UnsupportedModelError(
            "Closed forms cover diagonal families only; use build_hamiltonian "
            "and diagonalize for coupled models",
        )
    basis = _resolve_basis(spec, basis_or_nmax)
    shift = _zero_point_shift(spec)
    return LevelSpectrum.from_pairs(
        (label, level_energy(spec, label) - shift) for label in basis.labels
    )


def coupling_element(
    kind: CouplingKind,
    n_i: int,
    n_j: int,
    d: DeformationParameter,
) -> float | None:
    """Matrix element of b_i† b_j or b_i†² b_j² from (n_i, n_j).

    Returns ``None`` when the operator annihilates the state.
    """
    if kind is CouplingKind.BILINEAR:
        if n_j < 1:
            return None
        return float(np.sqrt(bracket_Q(n_i + 1, d) * bracket_Q(n_j, d)))
    if n_j < 2:  # noqa: PLR2004
        return None
    return float(
        np.sqrt(
            bracket_Q(n_i + 2, d)
            * bracket_Q(n_i + 1, d)
            * bracket_Q(n_j, d)
            * bracket_Q(n_j - 1, d),
        ),
    )


def _coupling_deformation(spec: ModelSpec) -> DeformationParameter:
    # b-operators need a Q deformation; other families couple undeformed bosons.
    if spec.deformation is not None and spec.deformation.kind is DeformationKind.Q_REAL:
        return spec.deformation
    return UNDEFORMED_Q


def _add_coupling(
    entries: NDArray[np.float64],
    basis: FockBasis,
    term: CouplingTerm,
    d: DeformationParameter,
) -> None:
    i, j = (mode - 1 for mode in term.modes)
    jump = 1 if term.kind is CouplingKind.BILINEAR else 2
    for source, label in enumerate(basis.labels):
        element = coupling_element(term.kind, label[i], label[j], d)
        if element is None or label[i] + jump > basis.cutoff:
            continue
        target_label = list(label)
        target_label[i] += jump
        target_label[j] -= jump
        target = basis.index(tuple(target_label))
        entries[target, source] += term.strength * element
        entries[source, target] += term.strength * element


def build_hamiltonian(spec: ModelSpec, basis: FockBasis) -> OperatorMatrix:
    """Dense Hamiltonian: closed-form diagonal plus symmetric coupling blocks."""
    basis = _resolve_basis(spec, basis)
    shift = _zero_point_shift(spec)
    entries = np.diag([level_energy(spec, label) - shift for label in basis.labels])
    d = _coupling_deformation(spec)
    for term in spec.couplings:
        _add_coupling(entries, basis, term, d)
    return OperatorMatrix(basis, entries)


def product_form_hamiltonian(spec: ModelSpec, basis: FockBasis) -> OperatorMatrix:
    """Two-mode operator-product forms of the coupled Hamiltonians.

    - q_coupled (q_real): a₁†a₁ q^{N₂} + q^{-N₁} a₂†a₂
    - Q_coupled: b₁†b₁ (Q^{N₂}+1)/2 + (Q^{N₁}+1)/2 b₂†b₂
    - Q_generalized: [X₁]_Q (Q^{X₂}+1)/2 + (Q^{X₁}+1)/2 [X₂]_Q, X_i = N_i + c_i N_i²

    These equal the bracket forms exactly and exist to check that identity.

    :raises UnsupportedModelError: For other families, l ≠ 2, or a phase q.
    """
    basis = _resolve_basis(spec, basis)
    if spec.mode_count != 2:  # noqa: PLR2004
        raise exceptions.UnsupportedModelError(
            "Product forms are defined pairwise, for two modes only",
        )
    d = spec.require_deformation()
    family = spec.family
    if family is ModelFamily.SYM_COUPLED:
        if d.kind is DeformationKind.SYM_PHASE:
            raise exceptions.UnsupportedModelError(
                "The operator form needs real powers of q; use q_real",
            )
        a1, a2 = lowering_q(basis, 1, d), lowering_q(basis, 2, d)
        operator = (
            a1.dagger() @ a1 @ deformed_exponential(basis, 2, d)
            + deformed_exponential(basis, 1, d, -1.0) @ a2.dagger() @ a2
        )
    elif family is ModelFamily.Q_COUPLED:
        b1, b2 = lowering_Q(basis, 1, d), lowering_Q(basis, 2, d)
        half_sum_2 = _half_sum(deformed_exponential(basis, 2, d))
        half_sum_1 = _half_sum(deformed_exponential(basis, 1, d))
        operator = b1.dagger() @ b1 @ half_sum_2 + half_sum_1 @ b2.dagger() @ b2
    elif family is ModelFamily.Q_GENERALIZED:
        c1, c2 = spec.c

        def x1(label: Label) -> float:
            return label[0] + c1 * label[0] ** 2

        def x2(label: Label) -> float:
            return label[1] + c2 * label[1] ** 2

        bracket_1 = function_of_number(basis, lambda label: bracket_Q(x1(label), d))
        bracket_2 = function_of_number(basis, lambda label: bracket_Q(x2(label), d))
        half_sum_1 = function_of_number(
            basis,
            lambda label: (d.power(x1(label)) + 1) / 2,
        )
        half_sum_2 = function_of_number(
            basis,
            lambda label: (d.power(x2(label)) + 1) / 2,
        )
        operator = bracket_1 @ half_sum_2 + half_sum_1 @ bracket_2
    else:
        raise exceptions.UnsupportedModelError(
            f"{family.value} has no operator-product form",
        )
    shift = _zero_point_shift(spec)
    return spec.scale * operator - diagonal_operator(basis, [shift] * basis.dimension)


def _half_sum(power: OperatorMatrix) -> OperatorMatrix:
    """(X + 1)/2 for a diagonal X."""
    return diagonal_operator(power.basis, (power.diagonal() + 1.0) / 2.0)


@dataclass(frozen=True)
class PolyadBlock:
    """One polyad: its basis indices, labels and the H sub-block."""

    polyad: int
    indices: tuple[int, ...]
    labels: tuple[Label, ...]
    matrix: NDArray[np.float64]


def polyad_decompose(
    hamiltonian: OperatorMatrix,
    basis: FockBasis,
) -> list[PolyadBlock]:
    """Split H into blocks of equal total quanta P = Σn_i.

    :raises StructureError: If an entry linking two polyads is not negligible.
    """
    if hamiltonian.basis != basis:
        raise exceptions.BasisMismatchError(
            f"Hamiltonian on {hamiltonian.basis!r}, basis {basis!r}",
        )
    polyads = basis.polyads
    leakage = np.abs(hamiltonian.entries) * (polyads[:, None] != polyads[None, :])
    if leakage.size and leakage.max() >= constants.POLYAD_LEAKAGE_TOLERANCE:
        row, col = np.unravel_index(int(np.argmax(leakage)), leakage.shape)
        raise exceptions.StructureError(
            f"Entry ⟨{basis.label(int(row))}|H|{basis.label(int(col))}⟩ = "
            f"{hamiltonian.entries[row, col]:.3e} couples different polyads",
        )
    blocks = []
    for polyad in sorted(set(polyads.tolist())):
        indices = np.flatnonzero(polyads == polyad)
        blocks.append(
            PolyadBlock(
                polyad=polyad,
                indices=tuple(int(i) for i in indices),
                labels=tuple(basis.label(int(i)) for i in indices),
                matrix=hamiltonian.entries[np.ix_(indices, indices)].copy(),
            ),
        )
    return blocks


def _assign(vectors: NDArray[np.float64]) -> list[int]:
    """Label position of each eigenvector (columns), unique within a block."""
    magnitudes = np.abs(vectors)
    choices = []
    for column in magnitudes.T:
        cutoff = column.max() - constants.ASSIGNMENT_TIE_TOLERANCE
        ties = np.flatnonzero(column >= cutoff)
        choices.append(int(ties[0]))
    if len(set(choices)) == len(choices):
        return choices
    logger.debug("Resolving %d shared assignments by overlap", len(choices))
    rows, cols = linear_sum_assignment(-(magnitudes.T**2))
    return [int(col) for _, col in sorted(zip(rows, cols, strict=True))]


def diagonalize(hamiltonian: OperatorMatrix, basis: FockBasis) -> LevelSpectrum:
    """Eigenvalues per polyad block with basis-label assignments.

    :raises StructureError: If H is not symmetric to 1e-10 or leaks across
        polyads.
    """
    asymmetry = hamiltonian.asymmetry()
    if asymmetry > constants.SYMMETRY_TOLERANCE:
        raise exceptions.StructureError(f"Hamiltonian asymmetry {asymmetry:.3e}")
    pairs: list[tuple[Label, float]] = []
    for block in polyad_decompose(hamiltonian, basis):
        values, vectors = jacobi_eigh(block.matrix)
        for value, position in zip(values, _assign(vectors), strict=True):
            pairs.append((block.labels[position], float(value)))
    return LevelSpectrum.from_pairs(pairs)


def spectrum_levels(spec: ModelSpec, basis_or_nmax: FockBasis | int) -> LevelSpectrum:
    """Closed-form levels for diagonal models, diagonalized ones otherwise."""
    basis = _resolve_basis(spec, basis_or_nmax)
    if spec.is_diagonal:
        return analytic_levels(spec, basis)
    return diagonalize(build_hamiltonian(spec, basis), basis)
