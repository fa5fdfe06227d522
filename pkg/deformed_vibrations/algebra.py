"""Schwinger-realized su_q(2) and su_Q(2) generators and the su_Q(2) Casimir."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import numpy as np

from deformed_vibrations import constants, exceptions
from deformed_vibrations.arithmetic import (
    DeformationKind,
    DeformationParameter,
    bracket_Q,
    bracket_symmetric,
)
from deformed_vibrations.fock import (
    FockBasis,
    OperatorMatrix,
    commutator,
    deformed_exponential,
    diagonal_operator,
    lowering_Q,
    lowering_q,
    margin_projector,
    number_operator,
)
from deformed_vibrations.hamiltonian import build_hamiltonian
from deformed_vibrations.models import ModelFamily, ModelSpec, ZeroPoint
from deformed_vibrations.report import CheckResult, VerificationReport

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GeneratorTriple:
    """J₀, J₊, J₋ on a two-mode basis."""

    j0: OperatorMatrix
    jplus: OperatorMatrix
    jminus: OperatorMatrix
    deformation: DeformationParameter

    @property
    def basis(self) -> FockBasis:
        """Basis the generators act on."""
        return self.j0.basis

    def j0_values(self) -> np.ndarray:
        """Eigenvalues of J0 along the basis diagonal."""
        return self.j0.diagonal()


class CasimirForm(str, Enum):
    """Which Casimir identity a check exercises."""

    FIRST = "first"
    SECOND = "second"
    CLOSED = "closed"


def _require_two_modes(basis: FockBasis) -> None:
    if basis.mode_count != 2:  # noqa: PLR2004
        raise exceptions.BasisMismatchError(
            f"Schwinger generators need a two-mode basis, got {basis!r}",
        )


def _j0(basis: FockBasis) -> OperatorMatrix:
    return 0.5 * (number_operator(basis, 1) - number_operator(basis, 2))


def suq2_generators(basis: FockBasis, d: DeformationParameter) -> GeneratorTriple:
    """J₀ = (N₁-N₂)/2, J₊ = a₁†a₂, J₋ = a₂†a₁ from symmetric q-bosons."""
    _require_two_modes(basis)
    a1, a2 = lowering_q(basis, 1, d), lowering_q(basis, 2, d)
    return GeneratorTriple(
        j0=_j0(basis),
        jplus=a1.dagger() @ a2,
        jminus=a2.dagger() @ a1,
        deformation=d,
    )


def suQ2_generators(basis: FockBasis, d: DeformationParameter) -> GeneratorTriple:
    """J₀ = (N₁-N₂)/2, J₊ = b₁† Q^{-N₂/2} b₂, J₋ = J₊ᵀ from Q-bosons."""
    _require_two_modes(basis)
    b1, b2 = lowering_Q(basis, 1, d), lowering_Q(basis, 2, d)
    jplus = b1.dagger() @ deformed_exponential(basis, 2, d, -0.5) @ b2
    return GeneratorTriple(
        j0=_j0(basis),
        jplus=jplus,
        jminus=jplus.dagger(),
        deformation=d,
    )


def _bracket_of_diagonal(
    operator: OperatorMatrix,
    d: DeformationParameter,
    shift: float = 0.0,
    factor: float = 1.0,
) -> OperatorMatrix:
    """[factor·X + shift] applied entrywise to a diagonal X."""
    bracket = bracket_symmetric if d.kind.is_symmetric else bracket_Q
    values = [bracket(factor * x + shift, d) for x in operator.diagonal()]
    return diagonal_operator(operator.basis, values)


def casimir_Q(
    basis: FockBasis,
    d: DeformationParameter,
    form: CasimirForm | str = CasimirForm.CLOSED,
    generators: GeneratorTriple | None = None,
) -> OperatorMatrix:
    """The su_Q(2) Casimir in one of three equivalent forms.

    - first: Q^{-J₀}([J₀]_Q [J₀+1]_Q + Q^{-1} J₋J₊)
    - second: Q^{-J₀}(J₊J₋ + Q [J₀]_Q [J₀-1]_Q)
    - closed: -[(N₁+N₂)/2 + 1]_Q [-(N₁+N₂)/2]_Q

    :param generators: Generators to build the operator forms from; defaults
        to :func:`suQ2_generators`.
    """
    _require_two_modes(basis)
    form = CasimirForm(form)
    if form is CasimirForm.CLOSED:
        values = [
            -bracket_Q(s + 1, d) * bracket_Q(-s, d)
            for s in basis.polyads.astype(np.float64) / 2
        ]
        return diagonal_operator(basis, values)

    triple = generators or suQ2_generators(basis, d)
    j0 = triple.j0
    Q = d.power(1.0)
    prefactor = diagonal_operator(basis, [d.power(-j) for j in triple.j0_values()])
    bracket_j0 = _bracket_of_diagonal(j0, d)
    if form is CasimirForm.FIRST:
        inner = bracket_j0 @ _bracket_of_diagonal(j0, d, shift=1.0) + (
            (1 / Q) * (triple.jminus @ triple.jplus)
        )
    else:
        inner = triple.jplus @ triple.jminus + Q * (
            bracket_j0 @ _bracket_of_diagonal(j0, d, shift=-1.0)
        )
    return prefactor @ inner


def _structure_checks(
    triple: GeneratorTriple,
    projector: OperatorMatrix,
    tol: float,
) -> list[CheckResult]:
    j0, jplus, jminus = triple.j0, triple.jplus, triple.jminus
    values = triple.j0_values()
    off_diagonal = j0 - diagonal_operator(j0.basis, values)
    half_integer = float(np.max(np.abs(2 * values - np.round(2 * values)), initial=0))
    return [
        CheckResult.from_operator(
            "jminus_is_transpose",
            "J- = transpose(J+)",
            jminus - jplus.dagger(),
            tol,
        ),
        CheckResult.from_residual(
            "j0_diagonal_half_integer",
            "J0 = diag((n1 - n2)/2)",
            max(off_diagonal.max_abs(), half_integer),
            tol,
        ),
        CheckResult.from_operator(
            "j0_raises_jplus",
            "[J0, J+] = J+",
            commutator(j0, jplus) - jplus,
            tol,
            projector,
        ),
        CheckResult.from_operator(
            "j0_lowers_jminus",
            "[J0, J-] = -J-",
            commutator(j0, jminus) + jminus,
            tol,
            projector,
        ),
    ]


def _casimir_checks(
    basis: FockBasis,
    triple: GeneratorTriple,
    projector: OperatorMatrix,
    tol: float,
) -> list[CheckResult]:
    d = triple.deformation
    first = casimir_Q(basis, d, CasimirForm.FIRST, triple)
    second = casimir_Q(basis, d, CasimirForm.SECOND, triple)
    closed = casimir_Q(basis, d, CasimirForm.CLOSED)
    diagonal = closed.diagonal()
    spread = max(
        float(np.ptp(diagonal[basis.polyads == polyad]))
        for polyad in set(basis.polyads.tolist())
    )
    return [
        CheckResult.from_operator(
            "casimir_first_equals_second",
            "Q^-J0([J0][J0+1] + Q^-1 J-J+) = Q^-J0(J+J- + Q[J0][J0-1])",
            first - second,
            tol,
            projector,
        ),
        CheckResult.from_operator(
            "casimir_first_equals_closed",
            "Q^-J0([J0][J0+1] + Q^-1 J-J+) = -[(N1+N2)/2 + 1][-(N1+N2)/2]",
            first - closed,
            tol,
            projector,
        ),
        CheckResult.from_residual(
            "casimir_depends_on_total_quanta",
            "C is diagonal and constant on each n1 + n2",
            max(spread, (closed - diagonal_operator(basis, diagonal)).max_abs()),
            tol,
        ),
    ]


def _symmetry_checks(
    basis: FockBasis,
    triple: GeneratorTriple,
    projector: OperatorMatrix,
    tol: float,
) -> list[CheckResult]:
    spec = ModelSpec(
        family=ModelFamily.Q_COUPLED,
        mode_count=2,
        deformation=triple.deformation,
        zero_point=ZeroPoint.RAW,
    )
    hamiltonian = build_hamiltonian(spec, basis)
    return [
        CheckResult.from_operator(
            f"hamiltonian_commutes_with_{name}",
            f"[[N1 + N2]_Q, {symbol}] = 0",
            commutator(hamiltonian, generator),
            tol,
            projector,
        )
        for name, symbol, generator in (
            ("j0", "J0", triple.j0),
            ("jplus", "J+", triple.jplus),
            ("jminus", "J-", triple.jminus),
        )
    ]


def verify_algebra(
    basis: FockBasis,
    d: DeformationParameter,
    margin: int = constants.DEFAULT_MARGIN,
    tol: float = constants.DEFAULT_CHECK_TOLERANCE,
    generators: GeneratorTriple | None = None,
) -> VerificationReport:
    """Check the commutation relations, Casimir forms and model symmetry.

    Operator identities are compared as P(lhs - rhs)P with the margin
    projector P; residuals are max-absolute-entry norms.

    :param generators: Generators to check instead of freshly built ones.
    :raises ArgumentError: If ``margin`` < 1.
    """
    if margin < 1:
        raise exceptions.ArgumentError(f"Algebra checks need margin >= 1, got {margin}")
    projector = margin_projector(basis, margin)
    if d.kind is DeformationKind.Q_REAL:
        triple = generators or suQ2_generators(basis, d)
        Q = d.power(1.0)
        deformed = CheckResult.from_operator(
            "deformed_commutator",
            "J+J- - Q^-1 J-J+ = [2J0]_Q",
            triple.jplus @ triple.jminus
            - (1 / Q) * (triple.jminus @ triple.jplus)
            - _bracket_of_diagonal(triple.j0, d, factor=2.0),
            tol,
            projector,
        )
        checks = [
            *_structure_checks(triple, projector, tol),
            deformed,
            *_casimir_checks(basis, triple, projector, tol),
            *_symmetry_checks(basis, triple, projector, tol),
        ]
    else:
        triple = generators or suq2_generators(basis, d)
        deformed = CheckResult.from_operator(
            "deformed_commutator",
            "[J+, J-] = [2J0]_q",
            commutator(triple.jplus, triple.jminus)
            - _bracket_of_diagonal(triple.j0, d, factor=2.0),
            tol,
            projector,
        )
        checks = [*_structure_checks(triple, projector, tol), deformed]
    report = VerificationReport(checks=tuple(checks))
    for failure in report.failures():
        logger.info("Check %s failed: residual %.3e", failure.name, failure.residual)
    return report
