"""Dense complex linear algebra with certified structural invariants.

Matrices are immutable value types: constructors copy their input, mark the
array read-only, and check the structural invariant (Hermitian, unitary) at
construction time so downstream code never has to re-verify. Functional
calculus of Hermitian matrices goes through ``eigh``; functional calculus of
unitary (normal) matrices goes through a complex Schur decomposition, which
keeps the eigenbasis unitary even for clustered spectra.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg as sla

from .errors import DimensionError, InvalidMatrix, NumericalError

HERMITIAN_TOL = 1e-9
UNITARY_TOL = 1e-9
EIG_TOL = 1e-11

# Schur off-diagonal mass beyond this (times dim) means the input was not
# normal enough for a unitary eigenbasis.
NORMALITY_TOL = 1e-8


def norm2_at_most(a: np.ndarray, tol: float) -> tuple[bool, float]:
    """Certified test for ``||a||_2 <= tol``.

    The Frobenius norm dominates the spectral norm, so it settles the common
    (tiny-defect) case without an SVD; the exact norm is computed only when
    the cheap bound is inconclusive.
    """
    frob = float(np.linalg.norm(a))
    if frob <= tol:
        return True, frob
    exact = float(np.linalg.norm(a, 2))
    return exact <= tol, exact


def _as_complex_array(entries) -> np.ndarray:
    a = np.array(entries, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidMatrix(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] < 1:
        raise InvalidMatrix("matrix dimension must be at least 1")
    if not np.all(np.isfinite(a)):
        raise InvalidMatrix("matrix has non-finite entries")
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class SquareMatrix:
    """Dense square complex matrix with finite entries."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _as_complex_array(self.entries))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def a(self) -> np.ndarray:
        """The underlying read-only ndarray."""
        return self.entries

    def adjoint(self) -> "SquareMatrix":
        return SquareMatrix(self.entries.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.entries))


@dataclass(frozen=True, eq=False)
class HermitianMatrix(SquareMatrix):
    """Square matrix with ``||M - M*|| <= HERMITIAN_TOL``, checked on build."""

    def __post_init__(self):
        super().__post_init__()
        ok, defect = norm2_at_most(self.entries - self.entries.conj().T, HERMITIAN_TOL)
        if not ok:
            raise InvalidMatrix(f"not Hermitian: defect {defect:.3e} > {HERMITIAN_TOL}")


@dataclass(frozen=True, eq=False)
class UnitaryMatrix(SquareMatrix):
    """Square matrix with ``||U*U - I|| <= UNITARY_TOL``, checked on build."""

    def __post_init__(self):
        super().__post_init__()
        gram = self.entries.conj().T @ self.entries
        ok, defect = norm2_at_most(gram - np.eye(self.dim), UNITARY_TOL)
        if not ok:
            raise InvalidMatrix(f"not unitary: defect {defect:.3e} > {UNITARY_TOL}")


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigenvalues (ascending by real part, then imaginary part) and a
    unitary eigenvector matrix, with the reconstruction error certified."""

    eigenvalues: np.ndarray
    eigenvectors: UnitaryMatrix
    source: SquareMatrix

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues)
        lam.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)
        bound = EIG_TOL * self.source.dim * max(1.0, float(np.abs(lam).max()))
        ok, err = norm2_at_most(self.reconstruct() - self.source.a, bound)
        if not ok:
            raise NumericalError(f"eigendecomposition reconstruction error {err:.3e} > {bound:.3e}")

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors.a
        return (v * self.eigenvalues) @ v.conj().T


def identity(n: int) -> UnitaryMatrix:
    return UnitaryMatrix(np.eye(n))


def operator_norm(m: SquareMatrix) -> float:
    """Largest singular value of ``m``."""
    return float(np.linalg.norm(m.a, 2))


def commutator(a: SquareMatrix, b: SquareMatrix) -> SquareMatrix:
    """The matrix ``ab - ba``."""
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return SquareMatrix(a.a @ b.a - b.a @ a.a)


def _sorted_by_value(lam: np.ndarray, v: np.ndarray):
    order = np.lexsort((lam.imag, lam.real))
    return lam[order], v[:, order]


def eig_hermitian(h: HermitianMatrix) -> SpectralDecomposition:
    """Full eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    try:
        lam, v = np.linalg.eigh(h.a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Hermitian eigensolver failed: {exc}") from exc
    return SpectralDecomposition(lam, UnitaryMatrix(v), h)


def eig_unitary(u: UnitaryMatrix) -> SpectralDecomposition:
    """Eigendecomposition of a unitary matrix via complex Schur form.

    A unitary matrix is normal, so its Schur form is diagonal and the Schur
    basis is a genuine unitary eigenbasis; this stays true for clustered or
    repeated eigenvalues where a generic eigensolver can lose orthogonality.
    """
    t, z = sla.schur(u.a, output="complex")
    off = np.linalg.norm(t - np.diag(np.diagonal(t)))
    if off > NORMALITY_TOL * u.dim:
        raise NumericalError(f"Schur form not diagonal (off-diagonal mass {off:.3e}); input not normal")
    lam = np.diagonal(t).copy()
    lam, z = _sorted_by_value(lam, z)
    return SpectralDecomposition(lam, UnitaryMatrix(z), u)


def apply_function_hermitian(h: HermitianMatrix, phi: Callable) -> SquareMatrix:
    """Evaluate ``phi`` on the spectrum of ``h``: returns ``V phi(L) V*``.

    ``phi`` must accept a real ndarray and evaluate elementwise.
    """
    dec = eig_hermitian(h)
    values = np.asarray(phi(dec.eigenvalues.real))
    v = dec.eigenvectors.a
    return SquareMatrix((v * values) @ v.conj().T)


def apply_function_unitary(u: UnitaryMatrix, k: Callable) -> SquareMatrix:
    """Evaluate ``k`` on the unit-circle spectrum of ``u``.

    Parameters
    ----------
    u : UnitaryMatrix
        The (normal) matrix whose spectrum is fed to ``k``.
    k : callable
        Function of a complex ndarray of unit-modulus points; applied
        elementwise to the eigenvalues after renormalizing them onto the
        circle.
    """
    dec = eig_unitary(u)
    lam = dec.eigenvalues
    mod = np.abs(lam)
    if np.any(mod < 0.5):
        raise NumericalError("eigenvalue far from the unit circle; input not unitary")
    values = np.asarray(k(lam / mod))
    v = dec.eigenvectors.a
    return SquareMatrix((v * values) @ v.conj().T)


def hermitian_part(m: SquareMatrix) -> HermitianMatrix:
    return HermitianMatrix((m.a + m.a.conj().T) / 2)


def random_unitary(n: int, rng: np.random.Generator) -> UnitaryMatrix:
    """Haar-ish random unitary: QR of a complex Gaussian with fixed phases."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return UnitaryMatrix(q)
