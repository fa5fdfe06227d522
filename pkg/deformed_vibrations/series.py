"""Exact truncated series of the diagonal level formulas in the deformation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import sympy as sp

from deformed_vibrations import constants, exceptions
from deformed_vibrations.arithmetic import DeformationKind
from deformed_vibrations.fock import Label
from deformed_vibrations.models import ModelSpec


def exact(value: float) -> sp.Rational:
    """The rational with the shortest decimal form of ``value``."""
    return sp.Rational(repr(float(value)))


def mode_symbols(mode_count: int) -> tuple[sp.Symbol, ...]:
    """Symbols n1..n_l for ``mode_count`` modes."""
    return sp.symbols(f"n1:{mode_count + 1}")


def bracket_series_Q(argument: sp.Expr, symbol: sp.Symbol, order: int) -> sp.Expr:
    """[X]_Q through T^order, the Q bracket series composed with X."""
    x = argument
    terms = (
        x,
        (x**2 - x) / 2,
        (2 * x**3 - 3 * x**2 + x) / 12,
        (x**4 - 2 * x**3 + x**2) / 24,
    )
    return sum((terms[k] * symbol**k for k in range(order + 1)), sp.Integer(0))


def bracket_series_symmetric(
    argument: sp.Expr,
    symbol: sp.Symbol,
    order: int,
    kind: DeformationKind,
) -> sp.Expr:
    """[X]_q through τ^(2·order), upper sign of the τ² term for the phase kind."""
    x = argument
    sign = 1 if kind is DeformationKind.SYM_PHASE else -1
    terms = (
        x,
        sign * (x - x**3) / 6,
        (7 * x - 10 * x**3 + 3 * x**5) / 360,
    )
    powers = (terms[k] * symbol ** (2 * k) for k in range(order + 1))
    return sum(powers, sp.Integer(0))


@dataclass(frozen=True, eq=False)
class SeriesPolynomial:
    """Polynomial in n₁…n_l whose coefficients are polynomials in T or τ.

    ``terms`` maps exponent tuples to exact coefficients and never holds
    zeros. ``order`` counts powers of T for the Q kind and powers of τ² for
    the q kinds.
    """

    mode_count: int
    symbol: sp.Symbol
    order: int
    terms: dict[Label, sp.Expr] = field(default_factory=dict)

    @classmethod
    def from_expression(
        cls,
        expression: sp.Expr,
        mode_count: int,
        symbol: sp.Symbol,
        order: int,
        max_power: int | None = None,
    ) -> SeriesPolynomial:
        """Collect an expanded expression by monomial.

        Powers of ``symbol`` above ``max_power`` are dropped.
        """
        variables = mode_symbols(mode_count)
        poly = sp.Poly(sp.expand(expression), *variables)
        terms: dict[Label, sp.Expr] = {}
        for monomial, coefficient in poly.terms():
            coefficient = sp.expand(coefficient)
            if max_power is not None:
                coefficient = sum(
                    (
                        coefficient.coeff(symbol, k) * symbol**k
                        for k in range(max_power + 1)
                    ),
                    sp.Integer(0),
                )
            if coefficient != 0:
                terms[tuple(int(e) for e in monomial)] = coefficient
        return cls(mode_count=mode_count, symbol=symbol, order=order, terms=terms)

    @property
    def variables(self) -> tuple[sp.Symbol, ...]:
        """Occupation-number symbols, one per mode."""
        return mode_symbols(self.mode_count)

    def coefficient(self, monomial: Label) -> sp.Expr:
        """Coefficient of n₁^e₁…n_l^e_l, zero when absent."""
        if len(monomial) != self.mode_count:
            raise exceptions.ArgumentError(
                f"Monomial {monomial} needs {self.mode_count} exponents",
            )
        return self.terms.get(tuple(monomial), sp.Integer(0))

    def as_expr(self) -> sp.Expr:
        """Sum of all terms as a single sympy expression."""
        variables = self.variables
        return sum(
            (
                coefficient
                * sp.Mul(*(v**e for v, e in zip(variables, mono, strict=True)))
                for mono, coefficient in self.terms.items()
            ),
            sp.Integer(0),
        )

    def at_value(self, value: float) -> SeriesPolynomial:
        """Substitute the deformation with the exact rational of ``value``."""
        substituted = {
            mono: sp.expand(coefficient.subs(self.symbol, exact(value)))
            for mono, coefficient in self.terms.items()
        }
        return SeriesPolynomial(
            mode_count=self.mode_count,
            symbol=self.symbol,
            order=self.order,
            terms={mono: c for mono, c in substituted.items() if c != 0},
        )

    def evaluate(self, assignment: Label, value: float) -> float:
        """Floating value at integer quantum numbers and a numeric deformation."""
        if len(assignment) != self.mode_count:
            raise exceptions.ArgumentError(
                f"Assignment {assignment} needs {self.mode_count} entries",
            )
        total = 0.0
        for mono, coefficient in self.terms.items():
            weight = float(coefficient.subs(self.symbol, value))
            powers = (n**e for n, e in zip(assignment, mono, strict=True))
            total += weight * math.prod(powers)
        return total

    def to_text(self) -> str:
        """Canonical form: total degree, then descending exponent tuple."""
        ordered = sorted(
            self.terms.items(),
            key=lambda item: (sum(item[0]), _desc(item[0])),
        )
        pieces = [
            _term_text(coefficient, mono, self.symbol) for mono, coefficient in ordered
        ]
        if not pieces:
            return "0"
        text = pieces[0]
        for piece in pieces[1:]:
            text += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
        return text

    def __str__(self) -> str:
        return self.to_text()


def _desc(mono: Label) -> tuple[int, ...]:
    return tuple(-e for e in mono)


def _rational_text(value: sp.Rational) -> str:
    return str(value.p) if value.q == 1 else f"{value.p}/{value.q}"


def _coefficient_text(coefficient: sp.Expr, symbol: sp.Symbol) -> tuple[str, bool]:
    """Text of a coefficient and whether it has more than one term."""
    poly = sp.Poly(coefficient, symbol)
    parts = []
    for (power,), value in sorted(poly.terms()):
        magnitude = abs(sp.Rational(value))
        if power == 0:
            power_text = ""
        else:
            power_text = str(symbol) if power == 1 else f"{symbol}^{power}"
        if power_text and magnitude == 1:
            body = power_text
        elif power_text:
            body = f"{_rational_text(magnitude)} {power_text}"
        else:
            body = _rational_text(magnitude)
        parts.append(("-" if value < 0 else "+", body))
    sign, body = parts[0]
    text = f"-{body}" if sign == "-" else body
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text, len(parts) > 1


def _monomial_text(mono: Label) -> str:
    factors = []
    for mode, exponent in enumerate(mono, start=1):
        if exponent == 1:
            factors.append(f"n{mode}")
        elif exponent > 1:
            factors.append(f"n{mode}^{exponent}")
    return " ".join(factors)


def _term_text(coefficient: sp.Expr, mono: Label, symbol: sp.Symbol) -> str:
    coefficient_text, compound = _coefficient_text(coefficient, symbol)
    monomial = _monomial_text(mono)
    if not monomial:
        return f"({coefficient_text})" if compound else coefficient_text
    if compound:
        return f"({coefficient_text}) {monomial}"
    if coefficient_text == "1":
        return monomial
    if coefficient_text == "-1":
        return f"-{monomial}"
    return f"{coefficient_text} {monomial}"


def _argument(spec: ModelSpec, variables: tuple[sp.Symbol, ...]) -> sp.Expr:
    if spec.family.has_anharmonic_terms:
        return sum(
            (n + exact(c) * n**2 for n, c in zip(variables, spec.c, strict=True)),
            sp.Integer(0),
        )
    return sp.Add(*variables)


def expand_model(
    spec: ModelSpec,
    order: int = constants.DEFAULT_SERIES_ORDER,
) -> SeriesPolynomial:
    """Expand a diagonal deformed family in its deformation parameter.

    The bracket series is composed with the family's argument polynomial
    (Σn_i or Σ(n_i + c_i n_i²)) in exact rational arithmetic, truncated and
    multiplied by ``spec.scale``.

    :param order: Powers of T (1 to 3) for Q families, powers of τ² (1 or 2)
        for q families.
    :raises UnsupportedModelError: For empirical families or coupled models.
    :raises ArgumentError: For an order outside the supported range.
    """
    if spec.family.is_empirical:
        raise exceptions.UnsupportedModelError(
            f"{spec.family.value} is already a polynomial and has no deformation",
        )
    if spec.couplings:
        raise exceptions.UnsupportedModelError(
            "Series expansion covers diagonal models only",
        )
    d = spec.require_deformation()
    symbol = sp.Symbol(d.symbol)
    variables = mode_symbols(spec.mode_count)
    argument = _argument(spec, variables)
    if d.kind is DeformationKind.Q_REAL:
        limit, max_power = constants.MAX_Q_SERIES_ORDER, order
    else:
        limit, max_power = constants.MAX_SYMMETRIC_SERIES_ORDER, 2 * order
    if not 0 <= order <= limit:
        raise exceptions.ArgumentError(
            f"Series order for {d.kind.value} must lie between 0 and {limit}, "
            f"got {order}",
        )

    def bracket(x: sp.Expr) -> sp.Expr:
        if d.kind is DeformationKind.Q_REAL:
            return bracket_series_Q(x, symbol, order)
        return bracket_series_symmetric(x, symbol, order, d.kind)

    if spec.family.is_single and not spec.family.has_anharmonic_terms:
        expression = (bracket(argument) + bracket(argument + 1)) / 2
    else:
        expression = bracket(argument)
    return SeriesPolynomial.from_expression(
        exact(spec.scale) * expression,
        spec.mode_count,
        symbol,
        order,
        max_power,
    )
