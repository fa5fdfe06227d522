from deformed_vibrations.algebra import (
    casimir_Q,
    suq2_generators,
    suQ2_generators,
    verify_algebra,
)
from deformed_vibrations.analysis import (
    compare_spectra,
    cross_anharmonicity_report,
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
    q_factorial,
    taylor_bracket_Q,
    taylor_bracket_symmetric,
)
from deformed_vibrations.fitting import FitResult, fit, simulate_levels
from deformed_vibrations.fock import FockBasis, OperatorMatrix, build_basis
from deformed_vibrations.hamiltonian import (
    analytic_levels,
    build_hamiltonian,
    diagonalize,
    polyad_decompose,
    spectrum_levels,
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
from deformed_vibrations.series import SeriesPolynomial, expand_model
from deformed_vibrations.verification import run_verification

__all__ = [
    "CouplingKind",
    "CouplingTerm",
    "DeformationKind",
    "DeformationParameter",
    "EmpiricalParams",
    "FitResult",
    "FockBasis",
    "LevelSpectrum",
    "ModelFamily",
    "ModelSpec",
    "OperatorMatrix",
    "SeriesPolynomial",
    "ZeroPoint",
    "analytic_levels",
    "bracket_Q",
    "bracket_symmetric",
    "build_basis",
    "build_hamiltonian",
    "casimir_Q",
    "compare_spectra",
    "cross_anharmonicity_report",
    "diagonalize",
    "effective_constants",
    "empirical_from_constants",
    "expand_model",
    "fit",
    "level_anharmonicity",
    "polyad_decompose",
    "q_factorial",
    "run_verification",
    "self_anharmonicity",
    "simulate_levels",
    "spectrum_levels",
    "suQ2_generators",
    "suq2_generators",
    "taylor_bracket_Q",
    "taylor_bracket_symmetric",
    "verify_algebra",
]
