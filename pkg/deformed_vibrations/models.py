"""Model specifications and the level spectrum exchange format."""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from deformed_vibrations import exceptions
from deformed_vibrations.arithmetic import DeformationKind, DeformationParameter
from deformed_vibrations.fock import Label


class ModelFamily(str, Enum):
    """Hamiltonian families."""

    SYM_SINGLE = "q_single"
    Q_SINGLE = "Q_single"
    Q_GEN_SINGLE = "Q_gen_single"
    SYM_COUPLED = "q_coupled"
    Q_COUPLED = "Q_coupled"
    Q_GENERALIZED = "Q_generalized"
    EMPIRICAL_POLYATOMIC = "empirical_polyatomic"
    EMPIRICAL_ABA = "empirical_ABA"

    @property
    def is_empirical(self) -> bool:
        """Families given directly by a polynomial level formula."""
        return self in (
            ModelFamily.EMPIRICAL_POLYATOMIC,
            ModelFamily.EMPIRICAL_ABA,
        )

    @property
    def is_single(self) -> bool:
        """One-mode families."""
        return self in (
            ModelFamily.SYM_SINGLE,
            ModelFamily.Q_SINGLE,
            ModelFamily.Q_GEN_SINGLE,
        )

    @property
    def is_symmetric(self) -> bool:
        """Families built on the symmetric q-bracket."""
        return self in (ModelFamily.SYM_SINGLE, ModelFamily.SYM_COUPLED)

    @property
    def has_anharmonic_terms(self) -> bool:
        """Families carrying the c_i coefficients."""
        return self in (ModelFamily.Q_GEN_SINGLE, ModelFamily.Q_GENERALIZED)


class CouplingKind(str, Enum):
    """Shape of an off-diagonal coupling term."""

    BILINEAR = "bilinear"
    DARLING_DENNISON = "darling_dennison"


class ZeroPoint(str, Enum):
    """Whether reported energies keep the zero-point offset."""

    RAW = "raw"
    GROUND_REFERENCED = "ground_referenced"


class _Frozen(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class CouplingTerm(_Frozen):
    """Off-diagonal term λ(b_i† b_j + h.c.) or λ(b_i†² b_j² + h.c.)."""

    kind: CouplingKind
    modes: tuple[int, int]
    strength: float

    @field_validator("modes")
    @classmethod
    def _distinct(cls, modes: tuple[int, int]) -> tuple[int, int]:
        first, second = modes
        if first == second or min(modes) < 1:
            raise ValueError(f"Coupling modes must be distinct and >= 1, got {modes}")
        return modes

    @property
    def parameter_name(self) -> str:
        """Name used for this term among the fit parameters."""
        return f"{self.kind.value}_{self.modes[0]}_{self.modes[1]}"


class PairConstant(_Frozen):
    """A constant attached to a pair of modes (1-based)."""

    modes: tuple[int, int]
    value: float


class EmpiricalParams(_Frozen):
    """Parameters of the two polynomial level formulas.

    ``omega``, ``gamma`` and ``gamma_cross`` serve the ABA-type formula
    Σħω_i(n_i+½) + Σ(γ_i/2)(n_i+½)² + Σ_{i<j}γ_ij(n_i+½)(n_j+½);
    ``omega``, ``x`` and ``degeneracy`` serve the polyatomic formula
    Σω_i(v_i+d_i/2) + Σ_{i<=k}x_ik(v_i+d_i/2)(v_k+d_k/2).
    """

    omega: list[float]
    gamma: list[float] = Field(default_factory=list)
    gamma_cross: list[PairConstant] = Field(default_factory=list)
    x: list[PairConstant] = Field(default_factory=list)
    degeneracy: list[int] = Field(default_factory=list)

    def gamma_at(self, mode: int) -> float:
        """gamma_i for 1-based ``mode``, 0 when no gamma is given."""
        return self.gamma[mode - 1] if self.gamma else 0.0

    def degeneracy_at(self, mode: int) -> int:
        """d_i for 1-based ``mode``, 1 when no degeneracies are given."""
        return self.degeneracy[mode - 1] if self.degeneracy else 1


class ModelSpec(_Frozen):
    """One Hamiltonian family together with its parameters.

    ``scale`` (ħω) multiplies the deformed families; empirical parameters are
    already energies. Mode numbers in couplings and pair constants are 1-based.
    """

    family: ModelFamily
    mode_count: int = Field(ge=1)
    deformation: DeformationParameter | None = None
    c: list[float] = Field(default_factory=list)
    scale: float = Field(default=1.0, gt=0)
    empirical: EmpiricalParams | None = None
    couplings: list[CouplingTerm] = Field(default_factory=list)
    zero_point: ZeroPoint = ZeroPoint.GROUND_REFERENCED

    @model_validator(mode="after")
    def _consistent(self) -> ModelSpec:
        family = self.family
        if family.is_single and self.mode_count != 1:
            raise ValueError(f"{family.value} is a single oscillator, mode_count=1")
        if family.is_empirical:
            self._check_empirical()
        else:
            self._check_deformed()
        for term in self.couplings:
            if max(term.modes) > self.mode_count:
                raise ValueError(
                    f"Coupling modes {term.modes} out of range 1..{self.mode_count}",
                )
        return self

    def _check_deformed(self) -> None:
        if self.deformation is None:
            raise ValueError(f"{self.family.value} needs a deformation")
        if self.family.is_symmetric != self.deformation.kind.is_symmetric:
            raise ValueError(
                f"{self.family.value} cannot use a {self.deformation.kind.value} "
                "deformation",
            )
        if self.empirical is not None:
            raise ValueError(f"{self.family.value} takes no empirical parameters")
        if self.family.has_anharmonic_terms:
            if len(self.c) != self.mode_count:
                raise ValueError(
                    f"{self.family.value} needs {self.mode_count} c coefficients, "
                    f"got {len(self.c)}",
                )
        elif self.c:
            raise ValueError(f"{self.family.value} takes no c coefficients")

    def _check_empirical(self) -> None:
        if self.deformation is not None or self.c:
            raise ValueError(f"{self.family.value} takes no deformation parameters")
        params = self.empirical
        if params is None:
            raise ValueError(f"{self.family.value} needs empirical parameters")
        if len(params.omega) != self.mode_count:
            raise ValueError(f"omega needs {self.mode_count} entries")
        if params.gamma and len(params.gamma) != self.mode_count:
            raise ValueError(f"gamma needs {self.mode_count} entries")
        if params.degeneracy and (
            len(params.degeneracy) != self.mode_count
            or min(params.degeneracy) < 1
        ):
            raise ValueError(f"degeneracy needs {self.mode_count} integers >= 1")
        for pair in params.gamma_cross:
            first, second = pair.modes
            if not 1 <= first < second <= self.mode_count:
                raise ValueError(f"gamma_cross modes {pair.modes} need i < j")
        for pair in params.x:
            first, second = pair.modes
            if not 1 <= first <= second <= self.mode_count:
                raise ValueError(f"x modes {pair.modes} need i <= k")

    @property
    def deformation_kind(self) -> DeformationKind | None:
        """Kind of the deformation, None for empirical families."""
        return self.deformation.kind if self.deformation else None

    @property
    def is_diagonal(self) -> bool:
        """True when no coupling term is present."""
        return not self.couplings

    def require_deformation(self) -> DeformationParameter:
        """The deformation, or UnsupportedModelError for empirical families."""
        if self.deformation is None:
            raise exceptions.UnsupportedModelError(
                f"{self.family.value} has no deformation",
            )
        return self.deformation


@dataclass(frozen=True)
class Level:
    """A vibrational level labelled by its occupation numbers."""

    assignment: Label
    energy: float

    @property
    def polyad(self) -> int:
        """Total number of quanta."""
        return sum(self.assignment)


@dataclass(frozen=True)
class LevelSpectrum:
    """Levels sorted by energy, ties broken by lexicographic assignment.

    Build instances with :meth:`from_pairs`, which sorts and validates.
    """

    entries: tuple[Level, ...]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[Label, float]]) -> LevelSpectrum:
        """Validate and sort (assignment, energy) pairs.

        :raises ArgumentError: On non-finite energies, duplicate assignments or
            assignments of differing length.
        """
        levels = [Level(tuple(int(n) for n in a), float(e)) for a, e in pairs]
        seen: set[Label] = set()
        for level in levels:
            if not math.isfinite(level.energy):
                raise exceptions.ArgumentError(
                    f"Level {level.assignment} has non-finite energy {level.energy}",
                )
            if level.assignment in seen:
                raise exceptions.ArgumentError(
                    f"Duplicate assignment {level.assignment}",
                )
            seen.add(level.assignment)
        if len({len(a) for a in seen}) > 1:
            raise exceptions.ArgumentError("Assignments have differing mode counts")
        levels.sort(key=lambda level: (level.energy, level.assignment))
        return cls(tuple(levels))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Level]:
        return iter(self.entries)

    @property
    def mode_count(self) -> int:
        """Number of modes in each assignment, 0 when empty."""
        return len(self.entries[0].assignment) if self.entries else 0

    @property
    def assignments(self) -> list[Label]:
        """Assignments in spectrum order."""
        return [level.assignment for level in self.entries]

    @property
    def energies(self) -> list[float]:
        """Energies in spectrum order."""
        return [level.energy for level in self.entries]

    def as_dict(self) -> dict[Label, float]:
        """Energy by assignment."""
        return {level.assignment: level.energy for level in self.entries}

    def ground_energy(self) -> float:
        """Energy of the all-zero assignment, or of the lowest level without one."""
        if not self.entries:
            raise exceptions.ArgumentError("Empty spectrum has no ground level")
        zero = (0,) * self.mode_count
        return self.as_dict().get(zero, self.entries[0].energy)

    def ground_referenced(self) -> LevelSpectrum:
        """Copy with the ground energy subtracted from every level."""
        if not self.entries:
            return self
        ground = self.ground_energy()
        return LevelSpectrum.from_pairs(
            (level.assignment, level.energy - ground) for level in self.entries
        )

    def shifted(self, offset: float) -> LevelSpectrum:
        """Copy with ``offset`` added to every level."""
        return LevelSpectrum.from_pairs(
            (level.assignment, level.energy + offset) for level in self.entries
        )

    def restricted(self, max_polyad: int | None) -> LevelSpectrum:
        """Keep levels with total quanta <= ``max_polyad`` (all when None)."""
        if max_polyad is None:
            return self
        return LevelSpectrum(
            tuple(level for level in self.entries if level.polyad <= max_polyad),
        )
