import itertools
import math

import numpy as np
import pytest

from deformed_vibrations import (
    CouplingKind,
    CouplingTerm,
    DeformationKind,
    DeformationParameter,
    EmpiricalParams,
    LevelSpectrum,
    ModelFamily,
    ModelSpec,
    fit,
    fitting,
    simulate_levels,
    spectrum_levels,
)
from deformed_vibrations.exceptions import (
    ArgumentError,
    LevelFileError,
    UnderdeterminedFitError,
)
from deformed_vibrations.fitting import build_model, initial_values, parameter_names
from deformed_vibrations.models import PairConstant


def _Q(T: float) -> DeformationParameter:
    return DeformationParameter(kind=DeformationKind.Q_REAL, value=T)


@pytest.mark.parametrize(
    "family, mode_count, expected",
    [
        (ModelFamily.Q_COUPLED, 2, ["scale", "T"]),
        (ModelFamily.SYM_SINGLE, 1, ["scale", "tau"]),
        (ModelFamily.Q_GENERALIZED, 2, ["scale", "T", "c1", "c2"]),
        (
            ModelFamily.EMPIRICAL_ABA,
            2,
            ["omega1", "omega2", "gamma1", "gamma2", "gamma_1_2"],
        ),
        (
            ModelFamily.EMPIRICAL_POLYATOMIC,
            2,
            ["omega1", "omega2", "x_1_1", "x_1_2", "x_2_2"],
        ),
    ],
)
def test_parameter_names(
    family: ModelFamily,
    mode_count: int,
    expected: list[str],
) -> None:
    """Test the canonical parameter order per family."""
    assert parameter_names(family, mode_count) == expected


def test_build_model_with_coupling() -> None:
    """Test named coupling strengths become coupling terms."""
    spec = build_model(
        ModelFamily.Q_COUPLED,
        2,
        {"scale": 10.0, "T": 0.1, "bilinear_1_2": 0.5},
    )
    assert spec.deformation == _Q(0.1)
    assert spec.scale == 10.0
    assert spec.couplings == [
        CouplingTerm(kind=CouplingKind.BILINEAR, modes=(1, 2), strength=0.5),
    ]


def test_build_model_q_family_uses_real_kind() -> None:
    """Test q families are fitted with q = e^tau."""
    spec = build_model(ModelFamily.SYM_COUPLED, 2, {"scale": 1.0, "tau": 0.1})
    assert spec.deformation_kind is DeformationKind.SYM_REAL


def test_initial_values_invert_Q_anharmonicity() -> None:
    """Test the seed recovers T from an exactly quadratic ladder."""
    T = 0.1
    levels = LevelSpectrum.from_pairs(
        ((n,), 1000 * ((1 - T / 2) * n + T / 2 * n * n)) for n in range(6)
    )
    values = initial_values(levels, ModelFamily.Q_COUPLED, 1)
    assert values["T"] == pytest.approx(T)
    assert values["scale"] == pytest.approx(1000)


def test_fit_recovers_Q_coupled() -> None:
    """Test a noiseless Q-coupled spectrum is fitted back to its parameters."""
    truth = ModelSpec(
        family=ModelFamily.Q_COUPLED,
        mode_count=2,
        deformation=_Q(0.05),
        scale=1000.0,
    )
    result = fit(simulate_levels(truth, 4), ModelFamily.Q_COUPLED)
    assert result.converged
    assert result.params["scale"] == pytest.approx(1000.0, rel=1e-6)
    assert result.params["T"] == pytest.approx(0.05, rel=1e-6)
    assert result.rms < 1e-6
    assert all(
        later <= earlier
        for earlier, later in itertools.pairwise(result.history)
    )


def test_fit_recovers_Q_generalized() -> None:
    """Test distinct c coefficients are recovered from two-mode levels."""
    truth = ModelSpec(
        family=ModelFamily.Q_GENERALIZED,
        mode_count=2,
        deformation=_Q(0.02),
        c=[0.01, -0.02],
        scale=1000.0,
    )
    result = fit(simulate_levels(truth, 4), ModelFamily.Q_GENERALIZED)
    assert result.converged
    for name, value in {"scale": 1000.0, "T": 0.02, "c1": 0.01, "c2": -0.02}.items():
        assert result.params[name] == pytest.approx(value, rel=1e-6)


def test_fit_recovers_empirical_aba() -> None:
    """Test the linear ABA formula is fitted exactly."""
    params = EmpiricalParams(
        omega=[1600.0, 3700.0],
        gamma=[-30.0, -80.0],
        gamma_cross=[PairConstant(modes=(1, 2), value=-20.0)],
    )
    truth = ModelSpec(family=ModelFamily.EMPIRICAL_ABA, mode_count=2, empirical=params)
    result = fit(spectrum_levels(truth, 3), ModelFamily.EMPIRICAL_ABA)
    assert result.converged
    assert result.params["omega1"] == pytest.approx(1600.0, rel=1e-6)
    assert result.params["gamma2"] == pytest.approx(-80.0, rel=1e-6)
    assert result.params["gamma_1_2"] == pytest.approx(-20.0, rel=1e-6)


def test_fit_fixed_parameters() -> None:
    """Test parameters left out of free_params keep their initial values."""
    truth = ModelSpec(
        family=ModelFamily.Q_COUPLED,
        mode_count=2,
        deformation=_Q(0.05),
        scale=500.0,
    )
    result = fit(
        simulate_levels(truth, 3),
        ModelFamily.Q_COUPLED,
        free_params=["scale"],
        init={"T": 0.05},
    )
    assert result.free_params == ("scale",)
    assert result.params["T"] == 0.05
    assert result.params["scale"] == pytest.approx(500.0, rel=1e-8)


def test_fit_coupling_strength() -> None:
    """Test a bilinear coupling strength is fitted through diagonalization."""
    values = {"scale": 1000.0, "T": 0.02, "c1": 0.01, "c2": -0.02}
    truth = build_model(ModelFamily.Q_GENERALIZED, 2, values | {"bilinear_1_2": 2.0})
    result = fit(
        simulate_levels(truth, 3),
        ModelFamily.Q_GENERALIZED,
        free_params=["bilinear_1_2"],
        init=values | {"bilinear_1_2": 0.5},
    )
    assert result.converged
    assert abs(result.params["bilinear_1_2"]) == pytest.approx(2.0, rel=1e-5)


def test_fit_reports_inert_parameters() -> None:
    """Test a coupling that cannot act inside the basis is flagged."""
    truth = ModelSpec(
        family=ModelFamily.Q_COUPLED,
        mode_count=2,
        deformation=_Q(0.05),
        scale=100.0,
    )
    result = fit(
        simulate_levels(truth, 1),
        ModelFamily.Q_COUPLED,
        free_params=["scale", "darling_dennison_1_2"],
        init={"T": 0.05},
    )
    assert result.condition_note is not None
    assert "darling_dennison_1_2 does not change the levels" in result.condition_note


def test_fit_with_noise_converges() -> None:
    """Test noisy levels still converge with residuals near the noise level."""
    truth = ModelSpec(
        family=ModelFamily.Q_COUPLED,
        mode_count=2,
        deformation=_Q(0.05),
        scale=1000.0,
    )
    levels = simulate_levels(truth, 4, noise_sigma=0.5, seed=1)
    result = fit(levels, ModelFamily.Q_COUPLED)
    assert result.converged
    assert 0.15 <= result.rms <= 1.5
    assert result.params["T"] == pytest.approx(0.05, rel=1e-2)
    assert result.gradient_norm <= 1e-6 * (1 + math.sqrt(result.sse))


def test_fit_harmonic_levels_give_zero_T() -> None:
    """Test an exactly harmonic ladder is fitted with T = 0."""
    levels = LevelSpectrum.from_pairs(
        ((n1, n2), 1000.0 * (n1 + n2)) for n1 in range(5) for n2 in range(5)
    )
    result = fit(levels, ModelFamily.Q_COUPLED)
    assert result.converged
    assert abs(result.params["T"]) < 1e-8
    assert result.params["scale"] == pytest.approx(1000.0, rel=1e-8)


def test_stalled_fit_needs_stationary_point() -> None:
    """Test a stalled fit only counts as converged at a stationary point."""
    jacobian = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    orthogonal = np.array([1.0, 1.0, -1.0])
    assert fitting._is_stationary(jacobian, orthogonal)
    assert not fitting._is_stationary(jacobian, np.array([1.0, 0.0, 0.0]))
    assert fitting._is_stationary(jacobian, orthogonal + 1e-8)
    assert not fitting._is_stationary(jacobian, orthogonal + 1e-5)


def test_fit_underdetermined() -> None:
    """Test fewer levels than free parameters raise."""
    levels = LevelSpectrum.from_pairs([((0, 0), 0.0), ((1, 0), 1.0)])
    with pytest.raises(UnderdeterminedFitError):
        fit(levels, ModelFamily.Q_GENERALIZED)
    with pytest.raises(UnderdeterminedFitError):
        fit(LevelSpectrum.from_pairs([]), ModelFamily.Q_COUPLED, mode_count=2)


def test_fit_unknown_parameter() -> None:
    """Test unknown parameter names raise."""
    levels = LevelSpectrum.from_pairs([((0,), 0.0), ((1,), 1.0), ((2,), 2.1)])
    with pytest.raises(ArgumentError, match="Unknown parameter"):
        fit(levels, ModelFamily.Q_SINGLE, free_params=["scale", "omega"])


def test_fit_needs_ground_level() -> None:
    """Test levels without the all-zero assignment raise."""
    levels = LevelSpectrum.from_pairs([((1,), 1.0), ((2,), 2.1), ((3,), 3.3)])
    with pytest.raises(LevelFileError, match="all-zero"):
        fit(levels, ModelFamily.Q_SINGLE)


def test_fit_mode_count_mismatch() -> None:
    """Test levels must have as many modes as the model."""
    levels = LevelSpectrum.from_pairs([((0,), 0.0), ((1,), 1.0), ((2,), 2.1)])
    with pytest.raises(ArgumentError, match="modes"):
        fit(levels, ModelFamily.Q_COUPLED, mode_count=2)


def test_simulate_levels_noise_is_seeded(Q_coupled: ModelSpec) -> None:
    """Test equal seeds give equal noise and sigma 0 gives the model levels."""
    first = simulate_levels(Q_coupled, 2, noise_sigma=0.1, seed=4)
    second = simulate_levels(Q_coupled, 2, noise_sigma=0.1, seed=4)
    assert first == second
    assert simulate_levels(Q_coupled, 2) == spectrum_levels(Q_coupled, 2)
    with pytest.raises(ArgumentError):
        simulate_levels(Q_coupled, 2, noise_sigma=-1.0)


def test_simulate_levels_noise_spread(Q_coupled: ModelSpec) -> None:
    """Test the added noise has roughly the requested standard deviation."""
    sigma = 1e-3
    exact = spectrum_levels(Q_coupled, 9).as_dict()
    noisy = simulate_levels(Q_coupled, 9, noise_sigma=sigma, seed=7).as_dict()
    deltas = np.array([noisy[a] - exact[a] for a in exact])
    assert len(deltas) == 100
    assert 0.5 * sigma <= np.std(deltas, ddof=1) <= 1.5 * sigma
