import numpy as np
import pytest
from numpy.testing import assert_allclose

from bottlab.errors import DimensionError, InvalidMatrix
from bottlab.matrixcore import (
    HermitianMatrix,
    SquareMatrix,
    UnitaryMatrix,
    apply_function_hermitian,
    apply_function_unitary,
    commutator,
    eig_hermitian,
    eig_unitary,
    identity,
    operator_norm,
    random_unitary,
)
from bottlab.model import voiculescu_pair
from bottlab.symbols import on_circle


def random_hermitian(n, rng):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return HermitianMatrix((z + z.conj().T) / 2)


def power_iteration_norm(m, iters=2000, seed=1):
    """Independent oracle: sqrt of the top eigenvalue of M*M."""
    rng = np.random.default_rng(seed)
    gram = m.conj().T @ m
    x = rng.normal(size=m.shape[0]) + 1j * rng.normal(size=m.shape[0])
    x /= np.linalg.norm(x)
    lam = 0.0
    for _ in range(iters):
        y = gram @ x
        lam = np.linalg.norm(y)
        x = y / lam
    return np.sqrt(lam)


class TestOperatorNorm:
    def test_diagonal(self):
        assert operator_norm(SquareMatrix(np.diag([1.0, 2.0, 3.0]))) == pytest.approx(3.0)

    def test_zero(self):
        assert operator_norm(SquareMatrix(np.zeros((4, 4)))) == 0.0

    def test_against_power_iteration(self, rng):
        m = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        assert operator_norm(SquareMatrix(m)) == pytest.approx(power_iteration_norm(m), abs=1e-10)

    def test_unitary_norm_is_one(self, rng):
        for n in (2, 5, 9):
            u = random_unitary(n, rng)
            assert abs(operator_norm(u) - 1.0) <= 1e-10

    def test_nonfinite_rejected(self):
        with pytest.raises(InvalidMatrix):
            SquareMatrix(np.array([[np.nan, 0], [0, 1]]))
        with pytest.raises(InvalidMatrix):
            SquareMatrix(np.array([[np.inf, 0], [0, 1]]))


class TestCommutator:
    def test_identity_commutes(self, rng):
        b = SquareMatrix(rng.normal(size=(4, 4)))
        assert operator_norm(commutator(identity(4), b)) == 0.0

    def test_hand_computed_2x2(self):
        a = SquareMatrix(np.diag([1.0, -1.0]))
        b = SquareMatrix(np.array([[0.0, 1.0], [1.0, 0.0]]))
        assert_allclose(commutator(a, b).a, [[0, 2], [-2, 0]], atol=1e-15)

    def test_voiculescu_n8_closed_form(self):
        u, v = voiculescu_pair(8)
        c = commutator(u, v)
        # brute-force oracle: the commutator has one nonzero entry per
        # column, so its norm is the max norm over basis-vector images
        brute = max(np.linalg.norm(c.a[:, k]) for k in range(8))
        assert operator_norm(c) == pytest.approx(brute, abs=1e-14)
        assert operator_norm(c) == pytest.approx(2 * np.sin(np.pi / 8), abs=1e-12)

    def test_dim_mismatch(self):
        with pytest.raises(DimensionError):
            commutator(identity(2), identity(3))

    def test_polynomials_of_one_unitary_commute(self, rng):
        u = random_unitary(6, rng)
        p1 = SquareMatrix(u.a @ u.a + 2 * u.a)
        p2 = SquareMatrix(u.a.conj().T + 3 * u.a @ u.a @ u.a)
        assert operator_norm(commutator(p1, p2)) <= 1e-10


class TestEigHermitian:
    def test_diag(self):
        dec = eig_hermitian(HermitianMatrix(np.diag([0.0, 1.0])))
        assert_allclose(dec.eigenvalues, [0.0, 1.0])
        assert_allclose(np.abs(dec.eigenvectors.a), np.eye(2), atol=1e-14)

    def test_pauli_x(self):
        dec = eig_hermitian(HermitianMatrix(np.array([[0.0, 1.0], [1.0, 0.0]])))
        assert_allclose(dec.eigenvalues, [-1.0, 1.0], atol=1e-14)

    def test_trace_identity(self, rng):
        h = random_hermitian(6, rng)
        dec = eig_hermitian(h)
        assert np.sum(dec.eigenvalues) == pytest.approx(np.trace(h.a).real, abs=1e-10)

    def test_sorted_ascending(self, rng):
        dec = eig_hermitian(random_hermitian(8, rng))
        assert np.all(np.diff(dec.eigenvalues) >= 0)


class TestFunctionalCalculus:
    def test_hermitian_identity_function(self, rng):
        h = random_hermitian(5, rng)
        assert_allclose(apply_function_hermitian(h, lambda x: x).a, h.a, atol=1e-12)

    def test_hermitian_constant_function(self, rng):
        h = random_hermitian(5, rng)
        assert_allclose(apply_function_hermitian(h, np.ones_like).a, np.eye(5), atol=1e-12)

    def test_hermitian_square(self, rng):
        h = random_hermitian(7, rng)
        assert_allclose(apply_function_hermitian(h, lambda x: x ** 2).a, h.a @ h.a, atol=1e-10)

    def test_composition(self, rng):
        h = random_hermitian(8, rng)
        phi = lambda x: np.tanh(x)
        psi = lambda x: x ** 2 + 1
        once = apply_function_hermitian(h, lambda x: phi(psi(x)))
        twice = apply_function_hermitian(HermitianMatrix(apply_function_hermitian(h, psi).a), phi)
        assert operator_norm(SquareMatrix(once.a - twice.a)) <= 1e-9

    def test_unitary_identity_function(self, rng):
        u = random_unitary(6, rng)
        assert_allclose(apply_function_unitary(u, lambda z: z).a, u.a, atol=1e-12)

    def test_unitary_constant_function(self, rng):
        u = random_unitary(6, rng)
        assert_allclose(apply_function_unitary(u, lambda z: np.ones_like(z)).a,
                        np.eye(6), atol=1e-12)

    def test_symbol_on_clock_is_diagonal(self, triple):
        # the clock matrix is already diagonal, so applying a circle symbol
        # must reproduce the pointwise values on the phases
        u, _ = voiculescu_pair(8)
        f_u = apply_function_unitary(u, on_circle(triple.f))
        expected = np.diag(triple.f(np.arange(8) / 8))
        assert_allclose(f_u.a, expected, atol=1e-12)

    def test_unitary_with_repeated_eigenvalues(self, rng):
        # clustered spectra are where a non-Schur eigensolver loses
        # orthogonality; the result must still be accurate
        phases = np.exp(2j * np.pi * np.concatenate([np.zeros(5), np.arange(6) / 6]))
        w = random_unitary(11, rng)
        u = UnitaryMatrix((w.a * phases) @ w.a.conj().T)
        sq = apply_function_unitary(u, lambda z: z ** 2)
        assert_allclose(sq.a, u.a @ u.a, atol=1e-10)


class TestDecompositionInvariants:
    def test_eig_unitary_unit_modulus(self, rng):
        dec = eig_unitary(random_unitary(9, rng))
        assert_allclose(np.abs(dec.eigenvalues), 1.0, atol=1e-12)

    def test_reconstruction(self, rng):
        u = random_unitary(12, rng)
        dec = eig_unitary(u)
        assert_allclose(dec.reconstruct(), u.a, atol=1e-12)

    def test_unitary_invariant_rejects_garbage(self):
        with pytest.raises(InvalidMatrix):
            UnitaryMatrix(np.array([[1.0, 0.5], [0.0, 1.0]]))

    def test_hermitian_invariant_rejects_garbage(self):
        with pytest.raises(InvalidMatrix):
            HermitianMatrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
