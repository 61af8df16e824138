import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qchan.qlinalg import (
    I2,
    DensityMatrix,
    ValidationError,
    binary_entropy,
    bloch_to_density,
    density_to_bloch,
    eigenvalues_batch,
    eigenvalues_hermitian,
    entropy_from_eigenvalues,
    random_density_matrix,
    von_neumann_entropy,
)

finite = st.floats(-10, 10, allow_nan=False)


def test_eigenvalues_identity():
    assert eigenvalues_hermitian(0.5 * I2) == pytest.approx([0.5, 0.5], abs=1e-15)


def test_eigenvalues_splaying_first_output():
    m = [[2 / 3, 1 / (2 * math.sqrt(3))], [1 / (2 * math.sqrt(3)), 1 / 3]]
    assert eigenvalues_hermitian(m) == pytest.approx([5 / 6, 1 / 6], abs=1e-15)


def test_eigenvalues_amplitude_output():
    m = 0.5 * np.array([[1.5, math.sqrt(0.5)], [math.sqrt(0.5), 0.5]])
    assert eigenvalues_hermitian(m) == pytest.approx([0.9330127018922193, 0.0669872981077807], abs=1e-14)


def test_eigenvalues_block_3x3():
    m = np.zeros((3, 3), dtype=complex)
    m[:2, :2] = [[0.3, 0.1j], [-0.1j, 0.2]]
    m[2, 2] = 0.5
    vals = eigenvalues_hermitian(m)
    assert vals == sorted(vals, reverse=True)
    assert vals == pytest.approx(sorted(np.linalg.eigvalsh(m), reverse=True), abs=1e-14)


def test_eigenvalues_errors():
    with pytest.raises(ValidationError, match="not Hermitian"):
        eigenvalues_hermitian([[1, 1], [0, 1]])
    m = np.eye(3) / 3
    m[0, 2] = m[2, 0] = 0.1
    with pytest.raises(ValidationError, match="unsupported 3x3 shape"):
        eigenvalues_hermitian(m)


@settings(max_examples=300, deadline=None)
@given(finite, finite, finite, finite)
def test_eigenvalues_trace_and_det(a, d, re, im):
    m = np.array([[a, re + 1j * im], [re - 1j * im, d]])
    l1, l2 = eigenvalues_hermitian(m)
    scale = max(1.0, abs(a) + abs(d) + abs(re) + abs(im)) ** 2
    assert l1 >= l2
    assert l1 + l2 == pytest.approx(a + d, abs=1e-10 * scale)
    assert l1 * l2 == pytest.approx((a * d - re * re - im * im), abs=1e-10 * scale)


def test_batch_matches_scalar(rng):
    states = [random_density_matrix(rng).matrix for _ in range(50)]
    batch = eigenvalues_batch(np.array(states))
    for m, row in zip(states, batch):
        assert row == pytest.approx(eigenvalues_hermitian(m), abs=1e-15)


def test_entropy_examples():
    assert von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0
    assert von_neumann_entropy(0.5 * I2) == pytest.approx(1.0, abs=1e-12)
    assert von_neumann_entropy(np.diag([5 / 6, 1 / 6])) == pytest.approx(0.6500224216483542, abs=1e-14)


def test_entropy_zero_iff_pure(rng):
    for _ in range(200):
        w = rng.normal(size=3)
        w /= np.linalg.norm(w)
        assert von_neumann_entropy(bloch_to_density(w)) <= 1e-10
        mixed = bloch_to_density(w * rng.uniform(0.0, 1 - 1e-6))
        assert eigenvalues_hermitian(mixed)[0] < 1 - 1e-10
        assert von_neumann_entropy(mixed) > 1e-10


def test_entropy_clamps_rounding_residue():
    assert entropy_from_eigenvalues([1 + 1e-13, -1e-13]) == 0.0


def test_binary_entropy():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(1 / 3) == pytest.approx(0.9182958340544895, abs=1e-15)
    with pytest.raises(ValueError):
        binary_entropy(1.5)
    with pytest.raises(ValueError):
        binary_entropy(-0.1)


def test_binary_entropy_symmetry(rng):
    for x in rng.uniform(size=1000):
        assert binary_entropy(x) == pytest.approx(binary_entropy(1 - x), abs=1e-14)


def test_bloch_examples():
    assert np.allclose(bloch_to_density((0, 0, 1)).matrix, np.diag([1, 0]), atol=1e-15)
    assert np.allclose(bloch_to_density((0, 0, 0)).matrix, 0.5 * I2, atol=1e-15)
    th = math.pi / 2
    assert np.allclose(bloch_to_density((math.sin(th), 0, math.cos(th))).matrix, 0.5 * np.ones((2, 2)), atol=1e-15)
    assert np.allclose(density_to_bloch(0.5 * I2), 0)
    assert np.allclose(density_to_bloch(np.diag([1.0, 0.0])), (0, 0, 1))
    eta = 0.5
    rho = 0.5 * np.array([[1 + eta, math.sqrt(1 - eta)], [math.sqrt(1 - eta), 1 - eta]])
    assert density_to_bloch(rho) == pytest.approx([math.sqrt(0.5), 0, 0.5], abs=1e-15)


def test_bloch_errors():
    with pytest.raises(ValidationError, match="outside Bloch ball"):
        bloch_to_density((1, 1, 0))
    with pytest.raises(ValidationError):
        density_to_bloch(np.eye(3) / 3)


def test_bloch_round_trip(rng):
    for _ in range(1000):
        rho = random_density_matrix(rng)
        back = bloch_to_density(density_to_bloch(rho))
        assert np.max(np.abs(back.matrix - rho.matrix)) <= 1e-12


def test_density_matrix_validation():
    with pytest.raises(ValidationError, match="Hermitian"):
        DensityMatrix([[0.5, 0.1], [0.2, 0.5]])
    with pytest.raises(ValidationError, match="trace"):
        DensityMatrix(np.eye(2))
    with pytest.raises(ValidationError, match="positive"):
        DensityMatrix(np.diag([1.5, -0.5]))
    rho = DensityMatrix(np.diag([0.25, 0.75]))
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1.0


def test_angles_from_bloch_wraps_phi():
    from qchan.qlinalg import angles_from_bloch
    th, ph = angles_from_bloch((1e-17, -1e-33, -1.0))
    assert 0.0 <= ph < 2 * math.pi
    assert th == pytest.approx(math.pi)
