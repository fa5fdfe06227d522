import math

import pytest
from pydantic import ValidationError

from deformed_vibrations import (
    DeformationKind,
    DeformationParameter,
    bracket_Q,
    bracket_symmetric,
    q_factorial,
    taylor_bracket_Q,
    taylor_bracket_symmetric,
)
from deformed_vibrations.arithmetic import require_positive_brackets
from deformed_vibrations.exceptions import ArgumentError, DeformationDomainError


def _Q(T: float) -> DeformationParameter:
    return DeformationParameter(kind=DeformationKind.Q_REAL, value=T)


def _q(kind: DeformationKind, tau: float) -> DeformationParameter:
    return DeformationParameter(kind=kind, value=tau)


def test_bracket_Q_integer_values(Q_deformation: DeformationParameter) -> None:
    """Test [n]_Q = 1 + Q + ... + Q^(n-1) for small n."""
    Q = math.exp(Q_deformation.value)
    assert bracket_Q(0, Q_deformation) == 0
    assert bracket_Q(1, Q_deformation) == pytest.approx(1.0)
    assert bracket_Q(2, Q_deformation) == pytest.approx(1 + Q)
    assert bracket_Q(3, Q_deformation) == pytest.approx(1 + Q + Q * Q)


def test_bracket_Q_negative_argument(Q_deformation: DeformationParameter) -> None:
    """Test [-1]_Q = -1/Q."""
    assert bracket_Q(-1, Q_deformation) == pytest.approx(-math.exp(-0.1))


@pytest.mark.parametrize("x", [-2.5, 0.0, 0.5, 1.0, 7.0])
def test_brackets_reduce_to_argument_when_undeformed(x: float) -> None:
    """Test [x] = x at zero deformation for every kind."""
    assert bracket_Q(x, _Q(0.0)) == pytest.approx(x)
    assert bracket_symmetric(x, _q(DeformationKind.SYM_REAL, 0.0)) == pytest.approx(x)
    assert bracket_symmetric(x, _q(DeformationKind.SYM_PHASE, 0.0)) == pytest.approx(x)


def test_bracket_symmetric_real_and_phase() -> None:
    """Test the hyperbolic and trigonometric forms of [3]_q."""
    real = bracket_symmetric(3, _q(DeformationKind.SYM_REAL, 0.1))
    phase = bracket_symmetric(3, _q(DeformationKind.SYM_PHASE, 0.1))
    assert real == pytest.approx(math.sinh(0.3) / math.sinh(0.1))
    assert phase == pytest.approx(math.sin(0.3) / math.sin(0.1))
    assert real == pytest.approx(3.0401335, abs=1e-6)
    assert phase == pytest.approx(2.9601332, abs=1e-6)


def test_bracket_symmetric_is_odd(q_real_deformation: DeformationParameter) -> None:
    """Test [-x]_q = -[x]_q."""
    assert bracket_symmetric(-2.5, q_real_deformation) == pytest.approx(
        -bracket_symmetric(2.5, q_real_deformation),
    )


def test_bracket_symmetric_continuous_at_threshold() -> None:
    """Test the series and the closed form agree around the switch-over point."""
    below = bracket_symmetric(4, _q(DeformationKind.SYM_REAL, 0.99e-8))
    above = bracket_symmetric(4, _q(DeformationKind.SYM_REAL, 1.01e-8))
    assert below == pytest.approx(above, abs=1e-12)


def test_phase_bracket_undefined_at_pi() -> None:
    """Test sin(tau) = 0 is rejected when built and when evaluated."""
    with pytest.raises(ValidationError, match="sin"):
        _q(DeformationKind.SYM_PHASE, math.pi)
    with pytest.raises(ValidationError, match="sin"):
        _q(DeformationKind.SYM_PHASE, -2 * math.pi)
    unchecked = DeformationParameter.model_construct(
        kind=DeformationKind.SYM_PHASE,
        value=math.pi,
    )
    with pytest.raises(DeformationDomainError, match="sin"):
        bracket_symmetric(2, unchecked)
    assert bracket_symmetric(2, _q(DeformationKind.SYM_PHASE, 0.0)) == 2


@pytest.mark.parametrize("x", [math.inf, -math.inf, math.nan])
def test_brackets_reject_non_finite_arguments(
    x: float,
    Q_deformation: DeformationParameter,
) -> None:
    """Test non-finite arguments raise a domain error."""
    with pytest.raises(DeformationDomainError):
        bracket_Q(x, Q_deformation)


def test_brackets_reject_wrong_kind(
    Q_deformation: DeformationParameter,
    q_real_deformation: DeformationParameter,
) -> None:
    """Test each bracket only accepts its own deformation kind."""
    with pytest.raises(ArgumentError):
        bracket_Q(1, q_real_deformation)
    with pytest.raises(ArgumentError):
        bracket_symmetric(1, Q_deformation)


def test_q_factorial(Q_deformation: DeformationParameter) -> None:
    """Test [3]_Q! = [1][2][3] and [0]_Q! = 1."""
    Q = math.exp(Q_deformation.value)
    assert q_factorial(0, Q_deformation) == 1
    assert q_factorial(3, Q_deformation) == pytest.approx((1 + Q) * (1 + Q + Q * Q))
    with pytest.raises(ArgumentError):
        q_factorial(-1, Q_deformation)


@pytest.mark.parametrize("n", [0, 1, 2, 3.5, 5])
def test_taylor_bracket_Q_matches_exact(n: float) -> None:
    """Test the third-order series against the closed form at small T."""
    d = _Q(1e-3)
    assert taylor_bracket_Q(n, d, order=3) == pytest.approx(bracket_Q(n, d), abs=1e-9)


@pytest.mark.parametrize(
    "kind",
    [DeformationKind.SYM_REAL, DeformationKind.SYM_PHASE],
)
@pytest.mark.parametrize("n", [1, 2, 5])
def test_taylor_bracket_symmetric_matches_exact(
    kind: DeformationKind,
    n: int,
) -> None:
    """Test the fourth-order series in tau for both q kinds."""
    d = _q(kind, 0.01)
    assert taylor_bracket_symmetric(n, d, order=4) == pytest.approx(
        bracket_symmetric(n, d),
        abs=1e-9,
    )


def test_taylor_bracket_symmetric_sign() -> None:
    """Test [2]_q = 2 cosh(tau) for q_real and 2 cos(tau) for q_phase at order 2."""
    tau = 0.1
    assert taylor_bracket_symmetric(2, _q(DeformationKind.SYM_REAL, tau), 2) == (
        pytest.approx(2 + tau * tau)
    )
    assert taylor_bracket_symmetric(2, _q(DeformationKind.SYM_PHASE, tau), 2) == (
        pytest.approx(2 - tau * tau)
    )


def test_taylor_orders_are_bounded(
    Q_deformation: DeformationParameter,
    q_real_deformation: DeformationParameter,
) -> None:
    """Test unsupported series orders raise."""
    with pytest.raises(ArgumentError):
        taylor_bracket_Q(1, Q_deformation, order=4)
    with pytest.raises(ArgumentError):
        taylor_bracket_symmetric(1, q_real_deformation, order=3)


def test_deformation_parameter_power_and_as_Q() -> None:
    """Test q^x, Q = q² and the phase restrictions."""
    q = _q(DeformationKind.SYM_REAL, 0.2)
    assert q.power(2.0) == pytest.approx(math.exp(0.4))
    assert q.as_Q() == _Q(0.4)
    assert q.symbol == "tau"
    assert _Q(0.1).symbol == "T"
    phase = _q(DeformationKind.SYM_PHASE, 0.2)
    with pytest.raises(ArgumentError):
        phase.power(1.0)
    with pytest.raises(ArgumentError):
        phase.as_Q()


def test_deformation_parameter_rejects_non_finite() -> None:
    """Test the model validation of the deformation value."""
    with pytest.raises(ValidationError):
        DeformationParameter(kind=DeformationKind.Q_REAL, value=math.nan)


def test_require_positive_brackets() -> None:
    """Test tau * (n_max + 1) < pi for phase deformations."""
    require_positive_brackets(_q(DeformationKind.SYM_PHASE, 0.5), 3)
    require_positive_brackets(_q(DeformationKind.SYM_REAL, 5.0), 3)
    with pytest.raises(DeformationDomainError, match="pi"):
        require_positive_brackets(_q(DeformationKind.SYM_PHASE, 1.0), 3)
