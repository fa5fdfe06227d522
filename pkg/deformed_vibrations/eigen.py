"""Cyclic Jacobi eigensolver for small dense symmetric blocks."""

from __future__ import annotations

import logging
import math

import numpy as np
from numpy.typing import NDArray

from deformed_vibrations import constants

logger = logging.getLogger(__name__)


def _rotate(
    a: NDArray[np.float64],
    v: NDArray[np.float64],
    p: int,
    q: int,
) -> None:
    """Annihilate a[p, q] in place with one Jacobi rotation."""
    apq = a[p, q]
    theta = (a[q, q] - a[p, p]) / (2.0 * apq)
    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c

    col_p, col_q = a[:, p].copy(), a[:, q].copy()
    a[:, p] = c * col_p - s * col_q
    a[:, q] = s * col_p + c * col_q
    row_p, row_q = a[p, :].copy(), a[q, :].copy()
    a[p, :] = c * row_p - s * row_q
    a[q, :] = s * row_p + c * row_q
    a[p, q] = a[q, p] = 0.0

    vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
    v[:, p] = c * vec_p - s * vec_q
    v[:, q] = s * vec_p + c * vec_q


def _off_diagonal(a: NDArray[np.float64]) -> float:
    if a.shape[0] < 2:  # noqa: PLR2004
        return 0.0
    return float(np.max(np.abs(a - np.diag(np.diag(a)))))


def jacobi_eigh(
    matrix: NDArray[np.float64],
    relative_threshold: float = constants.JACOBI_RELATIVE_THRESHOLD,
    max_sweeps: int = constants.JACOBI_MAX_SWEEPS,
) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Eigenvalues and eigenvectors of a real symmetric matrix.

    Rotations sweep the upper triangle row by row in a fixed order, so the
    result is bit-identical across runs. Iteration stops once every
    off-diagonal entry is below ``relative_threshold`` times the largest
    absolute entry of the input.

    :param matrix: Real symmetric square matrix.
    :return: Ascending eigenvalues and the matching eigenvectors as columns.
    """
    a = np.array(matrix, dtype=np.float64, copy=True)
    size = a.shape[0]
    v = np.eye(size)
    limit = relative_threshold * float(np.max(np.abs(a), initial=0.0))

    for sweep in range(max_sweeps):
        if _off_diagonal(a) <= limit:
            logger.debug("Jacobi converged after %d sweeps (size %d)", sweep, size)
            break
        for p in range(size - 1):
            for q in range(p + 1, size):
                if abs(a[p, q]) > limit:
                    _rotate(a, v, p, q)
    else:
        logger.warning(
            "Jacobi stopped after %d sweeps with off-diagonal %.3e",
            max_sweeps,
            _off_diagonal(a),
        )

    values = np.diag(a).copy()
    order = np.argsort(values, kind="stable")
    return values[order], v[:, order]
