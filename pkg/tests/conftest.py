import json
from collections.abc import Callable
from pathlib import Path
from typing import Any

import pytest

from deformed_vibrations import (
    DeformationKind,
    DeformationParameter,
    FockBasis,
    ModelFamily,
    ModelSpec,
    build_basis,
)

TEST_T = 0.1
TEST_TAU = 0.05


@pytest.fixture(scope="session")
def Q_deformation() -> DeformationParameter:
    return DeformationParameter(kind=DeformationKind.Q_REAL, value=TEST_T)


@pytest.fixture(scope="session")
def q_real_deformation() -> DeformationParameter:
    return DeformationParameter(kind=DeformationKind.SYM_REAL, value=TEST_TAU)


@pytest.fixture(scope="session")
def q_phase_deformation() -> DeformationParameter:
    return DeformationParameter(kind=DeformationKind.SYM_PHASE, value=0.3)


@pytest.fixture(scope="session")
def pair_basis() -> FockBasis:
    """Two modes, n_max = 4."""
    return build_basis(2, 4)


@pytest.fixture()
def Q_coupled(Q_deformation: DeformationParameter) -> ModelSpec:
    return ModelSpec(
        family=ModelFamily.Q_COUPLED,
        mode_count=2,
        deformation=Q_deformation,
    )


@pytest.fixture()
def q_coupled(q_real_deformation: DeformationParameter) -> ModelSpec:
    return ModelSpec(
        family=ModelFamily.SYM_COUPLED,
        mode_count=2,
        deformation=q_real_deformation,
    )


@pytest.fixture()
def Q_generalized(Q_deformation: DeformationParameter) -> ModelSpec:
    return ModelSpec(
        family=ModelFamily.Q_GENERALIZED,
        mode_count=2,
        deformation=Q_deformation,
        c=[0.01, -0.02],
    )


@pytest.fixture()
def run_document() -> dict[str, Any]:
    """A minimal valid run configuration."""
    return {
        "model": {
            "family": "Q_coupled",
            "mode_count": 2,
            "deformation": {"kind": "Q_real", "value": TEST_T},
        },
        "basis": {"modes": 2, "n_max": 3},
    }


@pytest.fixture()
def write_config(tmp_path: Path) -> Callable[..., Path]:
    """Write a config document to a temporary file and return its path."""

    def _write(document: dict[str, Any], name: str = "run.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return path

    return _write
