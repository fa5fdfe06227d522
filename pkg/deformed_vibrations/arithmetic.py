"""Deformed numbers, factorials and their Taylor truncations."""

from __future__ import annotations

import math
from enum import Enum

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from deformed_vibrations import constants, exceptions


class DeformationKind(str, Enum):
    """Which deformation a parameter describes."""

    SYM_REAL = "q_real"
    SYM_PHASE = "q_phase"
    Q_REAL = "Q_real"

    @property
    def is_symmetric(self) -> bool:
        """True for the two q-kinds (symmetric bracket)."""
        return self is not DeformationKind.Q_REAL


class DeformationParameter(BaseModel):
    """A deformation and its exponent.

    ``q_real`` means q = e^τ, ``q_phase`` means q = e^{iτ} and ``Q_real`` means
    Q = e^T; ``value`` holds τ or T.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    kind: DeformationKind
    value: float

    @field_validator("value")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError(f"Deformation value must be finite, got {value}")
        return value

    @model_validator(mode="after")
    def _phase_has_brackets(self) -> DeformationParameter:
        tau = self.value
        if (
            self.kind is DeformationKind.SYM_PHASE
            and abs(tau) >= constants.SMALL_DEFORMATION
            and abs(math.sin(tau)) < constants.IDENTITY_TOLERANCE
        ):
            raise ValueError(
                f"Phase deformation with sin(tau) = 0 (tau={tau}) has no q-numbers",
            )
        return self

    @property
    def symbol(self) -> str:
        """Name of the expansion parameter."""
        return "tau" if self.kind.is_symmetric else "T"

    def power(self, exponent: float) -> float:
        """Return q^x (q_real) or Q^x (Q_real).

        :param exponent: The real exponent x.
        :return: The real power of the deformation base.
        :raises ArgumentError: For ``q_phase``, whose powers are complex.
        """
        if self.kind is DeformationKind.SYM_PHASE:
            raise exceptions.ArgumentError(
                "Powers of a phase deformation are complex; use the bracket instead.",
            )
        return math.exp(self.value * exponent)

    def as_Q(self) -> DeformationParameter:
        """Convert a real q deformation to the Q deformation with Q = q²."""
        if self.kind is DeformationKind.Q_REAL:
            return self
        if self.kind is DeformationKind.SYM_PHASE:
            raise exceptions.ArgumentError(
                "Only a real q deformation has a real Q = q² counterpart.",
            )
        return DeformationParameter(kind=DeformationKind.Q_REAL, value=2 * self.value)

    def __str__(self) -> str:
        return f"{self.kind.value}({self.symbol}={self.value})"


def _require_symmetric(d: DeformationParameter) -> None:
    if not d.kind.is_symmetric:
        raise exceptions.ArgumentError(
            f"Expected a q deformation (q_real or q_phase), got {d.kind.value}",
        )


def _require_Q(d: DeformationParameter) -> None:
    if d.kind is not DeformationKind.Q_REAL:
        raise exceptions.ArgumentError(
            f"Expected a Q_real deformation, got {d.kind.value}",
        )


def _require_finite(x: float) -> None:
    if not math.isfinite(x):
        raise exceptions.DeformationDomainError(f"Non-finite bracket argument {x}")


def _symmetric_sign(d: DeformationParameter) -> int:
    # Upper sign of the τ² correction belongs to the phase kind.
    return 1 if d.kind is DeformationKind.SYM_PHASE else -1


def bracket_symmetric(x: float, d: DeformationParameter) -> float:
    """The symmetric q-number [x]_q = (q^x - q^{-x}) / (q - q^{-1}).

    Evaluates sinh(τx)/sinh(τ) for ``q_real`` and sin(τx)/sin(τ) for
    ``q_phase``. Below the small-deformation threshold the three-term series
    is used, so the bracket is continuous through τ = 0 where it equals x.

    :param x: Real argument.
    :param d: A q_real or q_phase deformation.
    :return: The bracket value.
    :raises DeformationDomainError: If sin(τ) = 0 for a phase deformation.
    """
    _require_symmetric(d)
    _require_finite(x)
    tau = d.value
    if abs(tau) < constants.SMALL_DEFORMATION:
        return taylor_bracket_symmetric(x, d, order=4)
    if d.kind is DeformationKind.SYM_REAL:
        return math.sinh(tau * x) / math.sinh(tau)
    denominator = math.sin(tau)
    if abs(denominator) < constants.IDENTITY_TOLERANCE:
        raise exceptions.DeformationDomainError(
            f"Phase deformation with sin(tau) = 0 (tau={tau}) has no q-numbers",
        )
    return math.sin(tau * x) / denominator


def bracket_Q(x: float, d: DeformationParameter) -> float:
    """The Q-number [x]_Q = (Q^x - 1) / (Q - 1) with Q = e^T.

    Any real ``x`` is accepted, including negative and half-integer values.
    """
    _require_Q(d)
    _require_finite(x)
    T = d.value
    if abs(T) < constants.SMALL_DEFORMATION:
        return taylor_bracket_Q(x, d, order=2)
    return math.expm1(T * x) / math.expm1(T)


def q_factorial(n: int, d: DeformationParameter) -> float:
    """[n]_Q! = [n]_Q [n-1]_Q ... [1]_Q, with [0]_Q! = 1.

    :raises ArgumentError: If ``n`` is negative.
    """
    _require_Q(d)
    if n < 0:
        raise exceptions.ArgumentError(f"Factorial of negative integer {n}")
    return math.prod(bracket_Q(k, d) for k in range(1, n + 1))


def q_factorial_symmetric(n: int, d: DeformationParameter) -> float:
    """[n]_q! with the symmetric bracket, [0]_q! = 1."""
    _require_symmetric(d)
    if n < 0:
        raise exceptions.ArgumentError(f"Factorial of negative integer {n}")
    return math.prod(bracket_symmetric(k, d) for k in range(1, n + 1))


def taylor_bracket_symmetric(n: float, d: DeformationParameter, order: int) -> float:
    """Truncated series of [n]_q in τ.

    N ± (τ²/6)(N - N³) + (τ⁴/360)(7N - 10N³ + 3N⁵), upper sign for q_phase.

    :param n: Real argument N.
    :param d: A q deformation.
    :param order: Highest retained power of τ: 0, 2 or 4.
    """
    _require_symmetric(d)
    if order not in (0, 2, 4):
        raise exceptions.ArgumentError(
            f"Symmetric bracket series order must be 0, 2 or 4, got {order}",
        )
    tau2 = d.value * d.value
    result = n
    if order >= 2:  # noqa: PLR2004
        result += _symmetric_sign(d) * tau2 / 6 * (n - n**3)
    if order >= 4:  # noqa: PLR2004
        result += tau2 * tau2 / 360 * (7 * n - 10 * n**3 + 3 * n**5)
    return result


def taylor_bracket_Q(n: float, d: DeformationParameter, order: int) -> float:
    """Truncated series of [n]_Q in T.

    N + (T/2)(N² - N) + (T²/12)(2N³ - 3N² + N) + (T³/24)(N⁴ - 2N³ + N²).

    :param order: Highest retained power of T: 0 to 3.
    """
    _require_Q(d)
    if not 0 <= order <= constants.MAX_Q_SERIES_ORDER:
        raise exceptions.ArgumentError(
            f"Q bracket series order must be between 0 and 3, got {order}",
        )
    T = d.value
    terms = (
        n,
        (n**2 - n) / 2,
        (2 * n**3 - 3 * n**2 + n) / 12,
        (n**4 - 2 * n**3 + n**2) / 24,
    )
    return sum(terms[k] * T**k for k in range(order + 1))


def require_positive_brackets(d: DeformationParameter, n_max: int) -> None:
    """Guard for consumers that take square roots of [n]_q, 1 <= n <= n_max.

    For a phase deformation τ·(n_max + 1) < π is required.

    :raises DeformationDomainError: If the constraint is violated.
    """
    if d.kind is DeformationKind.SYM_PHASE and abs(d.value) * (n_max + 1) >= math.pi:
        raise exceptions.DeformationDomainError(
            f"Phase deformation tau={d.value} needs tau*(n_max+1) < pi "
            f"for n_max={n_max}",
        )
