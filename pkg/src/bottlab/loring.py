"""Loring element of an almost-commuting pair and its certified integer index.

Given unitaries u, v of size n and a symbol triple (f, g, h), the Loring
element is the 2n x 2n self-adjoint block matrix

    e(u, v) = [ f(u)            g(u) + h(u) v ]
              [ v* h(u) + g(u)  1 - f(u)      ]

with trace exactly n. When u and v commute, e is an idempotent; in general
the defect e^2 - e is controlled by the commutator of u and v, and equals a
closed-form block matrix built from [f, hv], [v*h, f], hvg + gv*h and
v*h^2v - h^2 (an exact identity used here as a cross-check).

When the spectrum of e stays away from 1/2, the spectral projection onto
[1/2, oo) is well defined and

    index = trace( chi(e) ) - n

is an integer invariant: 0 for commuting pairs, +1 for the canonical
clock/shift pair. Every index is returned with its certificate (spectral
gap, idempotency defect, raw trace before rounding).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, GapClosedError, InvalidMatrix, NonIntegerIndexError
from .matrixcore import (
    HermitianMatrix,
    SquareMatrix,
    UnitaryMatrix,
    apply_function_unitary,
    eig_hermitian,
)
from .symbols import SymbolTriple, on_circle

GAP_MIN_DEFAULT = 0.05
INDEX_SLACK = 0.01
TRACE_TOL = 1e-9


@dataclass(frozen=True)
class LoringElement:
    """The 2n x 2n self-adjoint matrix e(u, v) with its construction data."""

    matrix: HermitianMatrix
    source_dim: int
    triple: SymbolTriple

    def __post_init__(self):
        tr = self.matrix.trace().real
        if abs(tr - self.source_dim) > TRACE_TOL:
            raise InvalidMatrix(f"trace {tr!r} deviates from n = {self.source_dim}")


@dataclass(frozen=True)
class IndexResult:
    """Integer index with its numerical certificate."""

    index: int
    gap: float
    defect: float
    raw_trace: float


def _symbol_matrices(u: UnitaryMatrix, t: SymbolTriple):
    a = u.a
    diag = np.diagonal(a)
    if np.count_nonzero(a - np.diag(diag)) == 0:
        # clock-type input: functional calculus acts entrywise on the phases
        x = np.mod(np.angle(diag) / (2 * np.pi), 1.0)
        return (np.diag(t.f(x)).astype(complex),
                np.diag(t.g(x)).astype(complex),
                np.diag(t.h(x)).astype(complex))
    f = apply_function_unitary(u, on_circle(t.f)).a
    g = apply_function_unitary(u, on_circle(t.g)).a
    h = apply_function_unitary(u, on_circle(t.h)).a
    return f, g, h


def loring_element(u: UnitaryMatrix, v: SquareMatrix, t: SymbolTriple) -> LoringElement:
    """Assemble e(u, v). ``v`` may be any square matrix of matching size;
    unitarity of ``v`` is not needed for self-adjointness of the result."""
    if u.dim != v.dim:
        raise DimensionError(f"dimension mismatch: {u.dim} vs {v.dim}")
    f, g, h = _symbol_matrices(u, t)
    n = u.dim
    eye = np.eye(n)
    off = g + h @ v.a
    e = np.block([[f, off], [off.conj().T, eye - f]])
    e = (e + e.conj().T) / 2
    return LoringElement(HermitianMatrix(e), n, t)


def defect_identity_rhs(u: UnitaryMatrix, v: SquareMatrix, t: SymbolTriple) -> SquareMatrix:
    """Closed form for e^2 - e:

        [ hvg + gv*h   [f, hv]      ]
        [ [v*h, f]     v*h^2v - h^2 ]

    with f = f(u), g = g(u), h = h(u). Exact whenever the symbol identities
    hold; any gap to the directly computed e^2 - e is numerical noise.
    """
    if u.dim != v.dim:
        raise DimensionError(f"dimension mismatch: {u.dim} vs {v.dim}")
    f, g, h = _symbol_matrices(u, t)
    va = v.a
    hv = h @ va
    vh = va.conj().T @ h
    top_left = hv @ g + g @ vh
    top_right = f @ hv - hv @ f
    bot_left = vh @ f - f @ vh
    bot_right = vh @ hv - h @ h
    return SquareMatrix(np.block([[top_left, top_right], [bot_left, bot_right]]))


def spectral_gap_at_half(e: LoringElement) -> float:
    """Distance of the spectrum of e to 1/2."""
    lam = eig_hermitian(e.matrix).eigenvalues.real
    return float(np.min(np.abs(lam - 0.5)))


def spectral_projection(e: LoringElement, gap_min: float = GAP_MIN_DEFAULT) -> SquareMatrix:
    """Spectral projection of e onto [1/2, oo), certified by the gap."""
    dec = eig_hermitian(e.matrix)
    lam = dec.eigenvalues.real
    gap = float(np.min(np.abs(lam - 0.5)))
    if gap <= gap_min:
        raise GapClosedError(f"spectral gap {gap:.4f} <= {gap_min}; projection not certified")
    v = dec.eigenvectors.a
    return SquareMatrix((v * (lam >= 0.5)) @ v.conj().T)


def index_from_element(e: LoringElement, gap_min: float = GAP_MIN_DEFAULT) -> IndexResult:
    """Index certificate of an already-built Loring element."""
    dec = eig_hermitian(e.matrix)
    lam = dec.eigenvalues.real
    gap = float(np.min(np.abs(lam - 0.5)))
    if gap <= gap_min:
        raise GapClosedError(f"spectral gap {gap:.4f} <= {gap_min}; index undefined")
    vecs = dec.eigenvectors.a
    proj = (vecs * (lam >= 0.5)) @ vecs.conj().T
    raw = float(np.trace(proj).real - e.source_dim)
    index = int(round(raw))
    if abs(raw - index) > INDEX_SLACK:
        raise NonIntegerIndexError(f"raw trace {raw!r} is not integral within {INDEX_SLACK}")
    defect = float(np.max(np.abs(lam * lam - lam)))
    return IndexResult(index=index, gap=gap, defect=defect, raw_trace=raw)


def bott_index(u: UnitaryMatrix, v: UnitaryMatrix, t: SymbolTriple,
               gap_min: float = GAP_MIN_DEFAULT) -> IndexResult:
    """Certified integer index of the almost-commuting pair (u, v)."""
    return index_from_element(loring_element(u, v, t), gap_min)
