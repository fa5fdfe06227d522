import numpy as np
import pytest

from deformed_vibrations.eigen import jacobi_eigh


def _random_symmetric(size: int, seed: int = 7) -> np.ndarray:
    rng = np.random.default_rng(seed)
    matrix = rng.normal(size=(size, size))
    return (matrix + matrix.T) / 2


@pytest.mark.parametrize("size", [1, 2, 5, 9])
def test_jacobi_matches_lapack(size: int) -> None:
    """Test eigenvalues against numpy.linalg.eigvalsh."""
    matrix = _random_symmetric(size)
    values, _ = jacobi_eigh(matrix)
    np.testing.assert_allclose(values, np.linalg.eigvalsh(matrix), atol=1e-10)


def test_jacobi_eigenvectors() -> None:
    """Test the eigenvectors are orthonormal and diagonalize the input."""
    matrix = _random_symmetric(6)
    values, vectors = jacobi_eigh(matrix)
    np.testing.assert_allclose(vectors.T @ vectors, np.eye(6), atol=1e-12)
    np.testing.assert_allclose(matrix @ vectors, vectors * values, atol=1e-10)


def test_jacobi_is_deterministic() -> None:
    """Test repeated runs give bit-identical output."""
    matrix = _random_symmetric(7, seed=3)
    first_values, first_vectors = jacobi_eigh(matrix)
    second_values, second_vectors = jacobi_eigh(matrix)
    assert np.array_equal(first_values, second_values)
    assert np.array_equal(first_vectors, second_vectors)


def test_jacobi_does_not_modify_input() -> None:
    """Test the input matrix is copied."""
    matrix = _random_symmetric(4)
    original = matrix.copy()
    jacobi_eigh(matrix)
    assert np.array_equal(matrix, original)


def test_jacobi_diagonal_input() -> None:
    """Test a diagonal matrix needs no rotation and keeps unit eigenvectors."""
    values, vectors = jacobi_eigh(np.diag([3.0, 1.0, 2.0]))
    assert values.tolist() == [1.0, 2.0, 3.0]
    assert np.array_equal(np.abs(vectors), np.eye(3)[:, [1, 2, 0]])


def test_jacobi_empty() -> None:
    """Test an empty block."""
    values, vectors = jacobi_eigh(np.zeros((0, 0)))
    assert values.size == 0
    assert vectors.shape == (0, 0)
