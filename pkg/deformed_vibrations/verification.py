"""The full identity suite behind ``deformed-vibrations verify``."""

from __future__ import annotations

import itertools
import logging
import math

import numpy as np
import sympy as sp

from deformed_vibrations import constants
from deformed_vibrations.algebra import verify_algebra
from deformed_vibrations.analysis import (
    compare_spectra,
    effective_constants,
    empirical_from_constants,
    level_anharmonicity,
    self_anharmonicity,
)
from deformed_vibrations.arithmetic import (
    DeformationKind,
    DeformationParameter,
    bracket_Q,
    bracket_symmetric,
)
from deformed_vibrations.fock import (
    FockBasis,
    Label,
    build_basis,
    commutator,
    deformed_exponential,
    diagonal_operator,
    identity,
    lowering_Q,
    lowering_q,
    margin_projector,
    total_number_operator,
)
from deformed_vibrations.hamiltonian import (
    analytic_levels,
    build_hamiltonian,
    diagonalize,
    polyad_decompose,
    product_form_hamiltonian,
    spectrum_levels,
)
from deformed_vibrations.models import ModelFamily, ModelSpec, ZeroPoint
from deformed_vibrations.report import CheckResult, VerificationReport
from deformed_vibrations.series import SeriesPolynomial, exact, expand_model

logger = logging.getLogger(__name__)

ADDITION_GRID = range(11)
CONTINUITY_DEFORMATION = 1e-13


def suite_deformations(
    spec: ModelSpec,
) -> tuple[DeformationParameter, DeformationParameter]:
    """The Q and the symmetric deformation the suite checks.

    A Q model pairs with q_real at τ = T/2 (Q = q²), a q_real model with its
    Q = q² counterpart, a q_phase model with the undeformed Q, and empirical
    models check the undeformed limit of both.
    """
    d = spec.deformation
    if d is None:
        return (
            DeformationParameter(kind=DeformationKind.Q_REAL, value=0.0),
            DeformationParameter(kind=DeformationKind.SYM_REAL, value=0.0),
        )
    if d.kind is DeformationKind.Q_REAL:
        paired = DeformationParameter(kind=DeformationKind.SYM_REAL, value=d.value / 2)
        return d, paired
    if d.kind is DeformationKind.SYM_REAL:
        return d.as_Q(), d
    return DeformationParameter(kind=DeformationKind.Q_REAL, value=0.0), d


def _relative(value: float, expected: float) -> float:
    return abs(value - expected) / max(1.0, abs(expected))


def arithmetic_checks(
    Q: DeformationParameter,
    q: DeformationParameter,
    tol: float,
) -> list[CheckResult]:
    """Bracket identities, the Q/q mapping and the ABA transform constants."""
    Qv = math.exp(Q.value)
    addition = max(
        _relative(bracket_Q(a + b, Q), bracket_Q(a, Q) + Qv**a * bracket_Q(b, Q))
        for a, b in itertools.product(ADDITION_GRID, repeat=2)
    )
    recurrence = max(
        _relative(bracket_Q(x + 1, Q), Qv * bracket_Q(x, Q) + 1)
        for x in np.linspace(-3.0, 10.0, 27)
    )
    tau = q.value
    if q.kind is DeformationKind.SYM_REAL:

        def symmetric_rhs(a: int, b: int) -> float:
            return (
                bracket_symmetric(a, q) * math.exp(tau * b)
                + math.exp(-tau * a) * bracket_symmetric(b, q)
            )

    else:

        def symmetric_rhs(a: int, b: int) -> float:
            if tau == 0:
                return float(a + b)
            return (
                math.sin(a * tau) * math.cos(b * tau)
                + math.cos(a * tau) * math.sin(b * tau)
            ) / math.sin(tau)

    symmetric = max(
        _relative(bracket_symmetric(a + b, q), symmetric_rhs(a, b))
        for a, b in itertools.product(ADDITION_GRID, repeat=2)
    )
    continuity = max(
        abs(bracket(x, kind_d) - x)
        for x in np.linspace(-5.0, 5.0, 21)
        for bracket, kind_d in (
            (bracket_Q, Q.model_copy(update={"value": CONTINUITY_DEFORMATION})),
            (
                bracket_symmetric,
                q.model_copy(update={"value": CONTINUITY_DEFORMATION}),
            ),
        )
    )
    return [
        CheckResult.from_residual(
            "Q_addition_law",
            "[a+b]_Q = [a]_Q + Q^a [b]_Q",
            addition,
            tol,
        ),
        CheckResult.from_residual(
            "Q_recurrence",
            "[x+1]_Q = Q [x]_Q + 1",
            recurrence,
            tol,
        ),
        CheckResult.from_residual(
            "q_addition_law",
            "[a+b]_q = [a]_q q^b + q^-a [b]_q",
            symmetric,
            tol,
        ),
        CheckResult.from_residual(
            "bracket_continuity",
            "[x] -> x as the deformation -> 0",
            continuity,
            tol,
        ),
    ]


def fock_checks(
    basis: FockBasis,
    Q: DeformationParameter,
    q: DeformationParameter,
    tol: float,
) -> list[CheckResult]:
    """Commutators, Casimirs and operator transforms on the truncated basis."""
    margin_one = margin_projector(basis, 1)
    eye = identity(basis)
    Qv = math.exp(Q.value)
    b = lowering_Q(basis, 1, Q)
    b_dag = b.dagger()
    column = basis.mode_column(1)
    checks = [
        CheckResult.from_operator(
            "Q_oscillator_commutator",
            "b b+ - Q b+ b = 1",
            b @ b_dag - Qv * (b_dag @ b) - eye,
            tol,
            margin_one,
        ),
        CheckResult.from_operator(
            "Q_number_relation",
            "b+ b = [N]_Q",
            b_dag @ b - diagonal_operator(basis, [bracket_Q(n, Q) for n in column]),
            tol,
        ),
        CheckResult.from_operator(
            "Q_number_relation_raised",
            "b b+ = [N+1]_Q",
            b @ b_dag
            - diagonal_operator(basis, [bracket_Q(n + 1, Q) for n in column]),
            tol,
            margin_one,
        ),
    ]
    if q.kind is DeformationKind.SYM_REAL:
        a = lowering_q(basis, 1, q)
        a_dag = a.dagger()
        for sign, label in ((1, "upper"), (-1, "lower")):
            checks.append(
                CheckResult.from_operator(
                    f"q_oscillator_commutator_{label}",
                    f"a a+ - q^{-sign} a+ a = q^({sign} N)",
                    a @ a_dag
                    - math.exp(-sign * q.value) * (a_dag @ a)
                    - deformed_exponential(basis, 1, q, float(sign)),
                    tol,
                    margin_one,
                ),
            )
        b_pair = lowering_Q(basis, 1, q.as_Q())
        checks.append(
            CheckResult.from_operator(
                "q_from_Q_transform",
                "q^(1/2) b q^(-N/2) = a",
                math.exp(q.value / 2)
                * (b_pair @ deformed_exponential(basis, 1, q, -0.5))
                - a,
                tol,
            ),
        )
    if basis.mode_count > 1:
        checks.append(
            CheckResult.from_operator(
                "distinct_modes_commute",
                "[b_1, b_2+] = 0",
                commutator(b, lowering_Q(basis, 2, Q).dagger()),
                tol,
            ),
        )
    return checks


def _product_form_specs(
    spec: ModelSpec,
    Q: DeformationParameter,
    q: DeformationParameter,
) -> list[ModelSpec]:
    specs = [
        ModelSpec(
            family=ModelFamily.Q_COUPLED,
            mode_count=2,
            deformation=Q,
            zero_point=ZeroPoint.RAW,
        ),
    ]
    two_modes = spec.mode_count == 2  # noqa: PLR2004
    if spec.family is ModelFamily.Q_GENERALIZED and two_modes:
        specs.append(spec.model_copy(update={"couplings": []}))
    if q.kind is DeformationKind.SYM_REAL:
        specs.append(
            ModelSpec(
                family=ModelFamily.SYM_COUPLED,
                mode_count=2,
                deformation=q,
                zero_point=ZeroPoint.RAW,
            ),
        )
    return specs


def hamiltonian_checks(
    spec: ModelSpec,
    basis: FockBasis,
    Q: DeformationParameter,
    q: DeformationParameter,
    tol: float,
) -> list[CheckResult]:
    """Model energies against closed forms and the block-diagonal structure."""
    hamiltonian = build_hamiltonian(spec, basis)
    checks = [
        CheckResult.from_residual(
            "hamiltonian_symmetric",
            "H = transpose(H)",
            hamiltonian.asymmetry(),
            tol,
        ),
        CheckResult.from_operator(
            "polyad_conservation",
            "[H, N1 + ... + Nl] = 0",
            commutator(hamiltonian, total_number_operator(basis)),
            tol,
        ),
    ]
    polyads = basis.polyads
    leakage = np.abs(hamiltonian.entries) * (polyads[:, None] != polyads[None, :])
    checks.append(
        CheckResult.from_residual(
            "polyad_block_structure",
            "<m|H|n> = 0 unless sum(m) = sum(n)",
            float(leakage.max(initial=0.0)),
            tol,
        ),
    )
    diagonal_spec = spec.model_copy(update={"couplings": []})
    exact = analytic_levels(diagonal_spec, basis).as_dict()
    diagonal = build_hamiltonian(diagonal_spec, basis)
    solved = diagonalize(diagonal, basis)
    checks.append(
        CheckResult.from_residual(
            "diagonalization_matches_closed_form",
            "eig(H) = closed-form levels for diagonal H",
            max(abs(level.energy - exact[level.assignment]) for level in solved),
            tol,
        ),
    )
    if not spec.is_diagonal:
        energies = diagonalize(hamiltonian, basis)
        traces = max(
            abs(
                float(np.trace(block.matrix))
                - sum(
                    level.energy
                    for level in energies
                    if level.polyad == block.polyad
                ),
            )
            for block in polyad_decompose(hamiltonian, basis)
        )
        checks.append(
            CheckResult.from_residual(
                "block_trace_invariance",
                "sum of block eigenvalues = block trace",
                traces,
                tol,
            ),
        )

    pair_basis = build_basis(2, basis.cutoff)
    for product_spec in _product_form_specs(spec, Q, q):
        checks.append(
            CheckResult.from_operator(
                f"product_form_{product_spec.family.value}",
                "operator-product form = bracket form",
                product_form_hamiltonian(product_spec, pair_basis)
                - build_hamiltonian(product_spec, pair_basis),
                tol,
            ),
        )
    return checks


def _coefficient_residual(
    series: SeriesPolynomial,
    expected: dict[Label, sp.Expr],
) -> float:
    """Largest rational coefficient of series minus expected, over all monomials."""
    residual = 0.0
    for mono in set(series.terms) | set(expected):
        difference = sp.expand(
            series.coefficient(mono) - expected.get(mono, sp.Integer(0)),
        )
        if difference != 0:
            coefficients = sp.Poly(difference, series.symbol).coeffs()
            residual = max(residual, *(abs(float(c)) for c in coefficients))
    return residual


def _coupled_Q_terms(mode_count: int, T: sp.Symbol) -> dict[Label, sp.Expr]:
    half = sp.Rational(1, 2)
    terms: dict[Label, sp.Expr] = {}
    for i in range(mode_count):
        unit = tuple(1 if k == i else 0 for k in range(mode_count))
        terms[unit] = 1 - half * T
        terms[tuple(2 * e for e in unit)] = half * T
    for i, j in itertools.combinations(range(mode_count), 2):
        terms[tuple(1 if k in (i, j) else 0 for k in range(mode_count))] = T
    return terms


def _coupled_q_terms(kind: DeformationKind, tau: sp.Symbol) -> dict[Label, sp.Expr]:
    sign = 1 if kind is DeformationKind.SYM_PHASE else -1
    linear = 1 + sign * tau**2 / 6
    cubic = -sign * tau**2 / 6
    mixed = -sign * tau**2 / 2
    return {
        (1, 0): linear,
        (0, 1): linear,
        (3, 0): cubic,
        (0, 3): cubic,
        (2, 1): mixed,
        (1, 2): mixed,
    }


def _generalized_terms(
    c1: sp.Expr,
    c2: sp.Expr,
    T: sp.Symbol,
) -> dict[Label, sp.Expr]:
    half = sp.Rational(1, 2)
    terms: dict[Label, sp.Expr] = {}
    for c, (one, two, three, four) in (
        (c1, ((1, 0), (2, 0), (3, 0), (4, 0))),
        (c2, ((0, 1), (0, 2), (0, 3), (0, 4))),
    ):
        terms[one] = 1 - half * T
        terms[two] = c * (1 - half * T) + half * T
        terms[three] = T * c
        terms[four] = half * T * c**2
    terms[(1, 1)] = T
    terms[(2, 1)] = T * c1
    terms[(1, 2)] = T * c2
    terms[(2, 2)] = T * c1 * c2
    return {mono: value for mono, value in terms.items() if sp.expand(value) != 0}


def _morse_residual(T: float) -> float:
    n_max = constants.MORSE_CHECK_N_MAX
    spec = ModelSpec(
        family=ModelFamily.Q_COUPLED,
        mode_count=2,
        deformation=DeformationParameter(kind=DeformationKind.Q_REAL, value=T),
    )
    reference = empirical_from_constants(effective_constants(spec))
    return compare_spectra(
        spectrum_levels(spec, n_max),
        spectrum_levels(reference, n_max),
        max_polyad=n_max,
    ).max_abs


def series_checks(
    spec: ModelSpec,
    Q: DeformationParameter,
    q: DeformationParameter,
    tol: float,
) -> list[CheckResult]:
    """Exact expansion coefficients of the deformed families at first order."""
    T = sp.Symbol(Q.symbol)

    def coupled(mode_count: int) -> SeriesPolynomial:
        model = ModelSpec(
            family=ModelFamily.Q_COUPLED,
            mode_count=mode_count,
            deformation=Q,
        )
        return expand_model(model, order=1)

    symmetric = expand_model(
        ModelSpec(family=ModelFamily.SYM_COUPLED, mode_count=2, deformation=q),
        order=1,
    )
    two_modes = spec.mode_count == 2  # noqa: PLR2004
    if spec.family is ModelFamily.Q_GENERALIZED and two_modes:
        c1, c2 = spec.c
    else:
        c1, c2 = constants.GENERALIZED_CHECK_C
    generalized = expand_model(
        ModelSpec(
            family=ModelFamily.Q_GENERALIZED,
            mode_count=2,
            deformation=Q,
            c=[c1, c2],
        ),
        order=1,
    )
    single = coupled(1)
    ratio = single.coefficient((2,)) / single.coefficient((1,))
    closed = (T / 2) / (1 - T / 2)
    ratio_residual = abs(float(sp.cancel(ratio - closed).subs(T, exact(Q.value))))
    return [
        CheckResult.from_residual(
            "Q_series_coefficients",
            "[n1+n2]_Q = (1 - T/2)(n1+n2) + (T/2)(n1²+n2²) + T n1n2 + O(T²)",
            _coefficient_residual(coupled(2), _coupled_Q_terms(2, T)),
            tol,
        ),
        CheckResult.from_residual(
            "Q_series_pairwise_coefficients",
            "every pair of three Q-coupled modes carries the same T n_i n_j",
            _coefficient_residual(coupled(3), _coupled_Q_terms(3, T)),
            tol,
        ),
        CheckResult.from_residual(
            "q_series_coefficients",
            "[n1+n2]_q = (1 ± τ²/6)Σn ∓ (τ²/6)Σn³ ∓ (τ²/2)(n1²n2+n1n2²)",
            _coefficient_residual(
                symmetric,
                _coupled_q_terms(q.kind, sp.Symbol(q.symbol)),
            ),
            tol,
        ),
        CheckResult.from_residual(
            "generalized_series_coefficients",
            "[Σ(n_i + c_i n_i²)]_Q through first order in T",
            _coefficient_residual(
                generalized,
                _generalized_terms(exact(c1), exact(c2), T),
            ),
            tol,
        ),
        CheckResult.from_residual(
            "self_anharmonicity_ratio",
            "n² / n coefficient of one Q mode = (T/2)/(1 - T/2)",
            ratio_residual,
            tol,
        ),
    ]


def morse_checks() -> list[CheckResult]:
    """Morse-type equivalence of Q-coupled levels at small T."""
    T = constants.MORSE_CHECK_T
    single = ModelSpec(
        family=ModelFamily.Q_SINGLE,
        mode_count=1,
        deformation=DeformationParameter(kind=DeformationKind.Q_REAL, value=T),
    )
    ladder = spectrum_levels(single, constants.MORSE_CHECK_N_MAX)
    residual = _morse_residual(T)
    order = residual / _morse_residual(T / 10) / constants.MORSE_ORDER_RATIO
    return [
        CheckResult.from_residual(
            "level_anharmonicity_ratio",
            "quadratic fit of Q-oscillator levels has ratio (T/2)/(1 - T/2)",
            abs(level_anharmonicity(ladder) - self_anharmonicity(T)),
            constants.ANHARMONICITY_RATIO_TOLERANCE,
        ),
        CheckResult.from_residual(
            "morse_equivalence_bound",
            "Q-coupled levels = ABA levels with effective constants + O(T²)",
            residual,
            constants.MORSE_BOUND,
        ),
        CheckResult.from_residual(
            "morse_remainder_order",
            "T -> T/10 shrinks the ABA remainder a hundredfold",
            abs(order - 1),
            constants.MORSE_ORDER_TOLERANCE,
        ),
    ]


def run_verification(
    spec: ModelSpec,
    n_max: int,
    margin: int = constants.DEFAULT_MARGIN,
    tol: float = constants.DEFAULT_CHECK_TOLERANCE,
) -> VerificationReport:
    """Run every identity check for one model and basis size.

    Algebra checks run on a two-mode basis with the same cutoff whatever the
    model's mode count.
    """
    basis = build_basis(spec.mode_count, n_max)
    pair_basis = build_basis(2, n_max)
    Q, q = suite_deformations(spec)
    report = VerificationReport(
        checks=(
            *arithmetic_checks(Q, q, tol),
            *fock_checks(pair_basis, Q, q, tol),
            *hamiltonian_checks(spec, basis, Q, q, tol),
            *series_checks(spec, Q, q, tol),
            *morse_checks(),
        ),
    )
    report += verify_algebra(pair_basis, Q, margin, tol).prefixed("suQ2_")
    report += verify_algebra(pair_basis, q, margin, tol).prefixed("suq2_")
    logger.info(
        "Verification: %d checks, %d failed",
        len(report.checks),
        len(report.failures()),
    )
    return report
