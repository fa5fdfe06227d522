"""Truncated multi-mode number basis and dense operator matrices."""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.typing import NDArray

from deformed_vibrations import constants, exceptions
from deformed_vibrations.arithmetic import (
    DeformationKind,
    DeformationParameter,
    bracket_Q,
    bracket_symmetric,
    require_positive_brackets,
)

Label = tuple[int, ...]


@dataclass(frozen=True)
class FockBasis:
    """Full tensor-product number basis with a uniform cutoff per mode.

    Labels are ordered lexicographically with n₁ varying slowest, which is
    the C-order of ``numpy.ravel_multi_index`` over the shape
    ``(cutoff + 1,) * mode_count``.
    """

    mode_count: int
    cutoff: int

    @property
    def shape(self) -> tuple[int, ...]:
        """Per-mode extent, cutoff + 1 along each axis."""
        return (self.cutoff + 1,) * self.mode_count

    @property
    def dimension(self) -> int:
        """Number of basis states."""
        return (self.cutoff + 1) ** self.mode_count

    @functools.cached_property
    def labels(self) -> tuple[Label, ...]:
        """All basis labels in index order."""
        return tuple(itertools.product(range(self.cutoff + 1), repeat=self.mode_count))

    @functools.cached_property
    def occupations(self) -> NDArray[np.int64]:
        """(dimension, mode_count) array of occupation numbers."""
        return np.array(self.labels, dtype=np.int64).reshape(
            self.dimension,
            self.mode_count,
        )

    @functools.cached_property
    def polyads(self) -> NDArray[np.int64]:
        """Total quanta Σn_i of every basis state."""
        return self.occupations.sum(axis=1)

    def index(self, label: Label) -> int:
        """Flat index of a label.

        :raises ArgumentError: If the label does not belong to this basis.
        """
        if len(label) != self.mode_count or not all(
            0 <= n <= self.cutoff for n in label
        ):
            raise exceptions.ArgumentError(f"Label {label} is not in {self!r}")
        return int(np.ravel_multi_index(label, self.shape))

    def label(self, index: int) -> Label:
        """Label of a flat index."""
        return self.labels[index]

    def mode_column(self, mode: int) -> NDArray[np.int64]:
        """Occupations of the 1-based ``mode`` for every basis state."""
        return self.occupations[:, _mode_index(self, mode)]

    def __repr__(self) -> str:
        return f"FockBasis(modes={self.mode_count}, n_max={self.cutoff})"


def build_basis(
    mode_count: int,
    n_max: int,
    dimension_cap: int = constants.DEFAULT_DIMENSION_CAP,
) -> FockBasis:
    """Build the basis of ``mode_count`` modes with 0 <= n_i <= n_max.

    :raises ArgumentError: If either size is below 1.
    :raises ResourceLimitError: If (n_max + 1)^l exceeds ``dimension_cap``.
    """
    if mode_count < 1 or n_max < 1:
        raise exceptions.ArgumentError(
            f"Basis needs at least one mode and n_max >= 1, got ({mode_count}, "
            f"{n_max})",
        )
    dimension = (n_max + 1) ** mode_count
    if dimension > dimension_cap:
        raise exceptions.ResourceLimitError(
            f"Basis dimension {dimension} exceeds the cap of {dimension_cap}",
        )
    return FockBasis(mode_count=mode_count, cutoff=n_max)


def _mode_index(basis: FockBasis, mode: int) -> int:
    if not 1 <= mode <= basis.mode_count:
        raise exceptions.ArgumentError(
            f"Mode {mode} out of range 1..{basis.mode_count}",
        )
    return mode - 1


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """A dense real operator whose rows and columns follow ``basis`` order."""

    basis: FockBasis
    entries: NDArray[np.float64]

    def __post_init__(self) -> None:
        side = self.basis.dimension
        if self.entries.shape != (side, side):
            raise exceptions.BasisMismatchError(
                f"Matrix of shape {self.entries.shape} does not match {self.basis!r}",
            )

    def _check(self, other: OperatorMatrix) -> None:
        if other.basis != self.basis:
            raise exceptions.BasisMismatchError(
                f"Operators on {self.basis!r} and {other.basis!r} cannot be combined",
            )

    def __matmul__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._check(other)
        return OperatorMatrix(self.basis, self.entries @ other.entries)

    def __add__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._check(other)
        return OperatorMatrix(self.basis, self.entries + other.entries)

    def __sub__(self, other: OperatorMatrix) -> OperatorMatrix:
        self._check(other)
        return OperatorMatrix(self.basis, self.entries - other.entries)

    def __mul__(self, factor: float) -> OperatorMatrix:
        return OperatorMatrix(self.basis, self.entries * factor)

    __rmul__ = __mul__

    def __neg__(self) -> OperatorMatrix:
        return OperatorMatrix(self.basis, -self.entries)

    def dagger(self) -> OperatorMatrix:
        """Adjoint, which is the transpose for real matrices."""
        return OperatorMatrix(self.basis, self.entries.T.copy())

    def diagonal(self) -> NDArray[np.float64]:
        """Copy of the diagonal in basis order."""
        return np.diag(self.entries).copy()

    def element(self, row: Label, column: Label) -> float:
        """⟨row|A|column⟩."""
        return float(self.entries[self.basis.index(row), self.basis.index(column)])

    def project(self, projector: OperatorMatrix) -> OperatorMatrix:
        """P A P."""
        return projector @ self @ projector

    def max_abs(self) -> float:
        """Largest absolute entry, 0 for an empty matrix."""
        return float(np.max(np.abs(self.entries), initial=0.0))

    def asymmetry(self) -> float:
        """Largest absolute entry of A - A^T."""
        return float(np.max(np.abs(self.entries - self.entries.T), initial=0.0))


def identity(basis: FockBasis) -> OperatorMatrix:
    """Identity operator on ``basis``."""
    return OperatorMatrix(basis, np.eye(basis.dimension))


def diagonal_operator(
    basis: FockBasis,
    values: NDArray[np.float64] | list[float],
) -> OperatorMatrix:
    """Operator with ``values`` on the diagonal, in basis order."""
    return OperatorMatrix(basis, np.diag(np.asarray(values, dtype=np.float64)))


def function_of_number(
    basis: FockBasis,
    fn: Callable[[Label], float],
) -> OperatorMatrix:
    """Diagonal operator f(N₁, …, N_l) from a scalar function of labels."""
    return diagonal_operator(basis, [fn(label) for label in basis.labels])


def number_operator(basis: FockBasis, mode: int) -> OperatorMatrix:
    """N_i: diagonal with the occupation of ``mode`` (1-based)."""
    return diagonal_operator(basis, basis.mode_column(mode).astype(np.float64))


def total_number_operator(basis: FockBasis) -> OperatorMatrix:
    """N₁ + … + N_l."""
    return diagonal_operator(basis, basis.polyads.astype(np.float64))


def deformed_exponential(
    basis: FockBasis,
    mode: int,
    d: DeformationParameter,
    exponent_scale: float = 1.0,
) -> OperatorMatrix:
    """Diagonal base^{s·N_i} with base q (q_real) or Q (Q_real)."""
    column = basis.mode_column(mode)
    return diagonal_operator(basis, [d.power(exponent_scale * n) for n in column])


def _embed(basis: FockBasis, mode: int, single: NDArray[np.float64]) -> OperatorMatrix:
    position = _mode_index(basis, mode)
    size = basis.cutoff + 1
    entries = np.ones((1, 1))
    for i in range(basis.mode_count):
        entries = np.kron(entries, single if i == position else np.eye(size))
    return OperatorMatrix(basis, entries)


def _lowering_from_brackets(
    basis: FockBasis,
    mode: int,
    brackets: list[float],
) -> OperatorMatrix:
    for n, value in enumerate(brackets[1:], start=1):
        if value < 0:
            raise exceptions.DeformationDomainError(
                f"Bracket [{n}] = {value} is negative; its square root is undefined",
            )
    elements = [math.sqrt(value) for value in brackets[1:]]
    return _embed(basis, mode, np.diagflat(elements, 1))


def lowering_Q(basis: FockBasis, mode: int, d: DeformationParameter) -> OperatorMatrix:
    """b_i with ⟨n-1|b|n⟩ = sqrt([n]_Q); b|0⟩ = 0."""
    if d.kind is not DeformationKind.Q_REAL:
        raise exceptions.ArgumentError(
            f"lowering_Q needs a Q_real deformation, got {d}",
        )
    brackets = [bracket_Q(n, d) for n in range(basis.cutoff + 1)]
    return _lowering_from_brackets(basis, mode, brackets)


def raising_Q(basis: FockBasis, mode: int, d: DeformationParameter) -> OperatorMatrix:
    """A_i^dagger, the transpose of lowering_Q."""
    return lowering_Q(basis, mode, d).dagger()


def lowering_q(basis: FockBasis, mode: int, d: DeformationParameter) -> OperatorMatrix:
    """a_i with ⟨n-1|a|n⟩ = sqrt([n]_q), symmetric bracket.

    :raises DeformationDomainError: If a phase deformation makes any bracket
        under the square root non-positive.
    """
    if not d.kind.is_symmetric:
        raise exceptions.ArgumentError(f"lowering_q needs a q deformation, got {d}")
    require_positive_brackets(d, basis.cutoff)
    brackets = [bracket_symmetric(n, d) for n in range(basis.cutoff + 1)]
    return _lowering_from_brackets(basis, mode, brackets)


def raising_q(basis: FockBasis, mode: int, d: DeformationParameter) -> OperatorMatrix:
    """Adjoint of lowering_q."""
    return lowering_q(basis, mode, d).dagger()


def margin_projector(basis: FockBasis, margin: int) -> OperatorMatrix:
    """Diagonal 0/1 projector onto states with n_i <= n_max - margin for all i."""
    if not 0 <= margin <= basis.cutoff:
        raise exceptions.ArgumentError(
            f"Margin {margin} must lie between 0 and n_max={basis.cutoff}",
        )
    inside = np.all(basis.occupations <= basis.cutoff - margin, axis=1)
    return diagonal_operator(basis, inside.astype(np.float64))


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """[A, B] = AB - BA."""
    return a @ b - b @ a
