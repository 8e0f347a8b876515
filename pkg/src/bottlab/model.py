"""Concrete operator families: clock/shift pairs, truncated Fourier windows,
the partial-rotation family u_t, and its realization from a spectral ramp.

Shift orientation is a recurring source of silent sign flips, so it is an
explicit enum everywhere a shift is built. The canonical orientation is
``Z_INVERSE`` (each basis vector moves one mode down), which is the
compression of multiplication by 1/z; with it the clock/shift index comes
out +1. The opposite orientation ``Z`` is the Voiculescu shift of
``voiculescu_pair`` and flips the index sign.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ModelInconsistencyError
from .matrixcore import HermitianMatrix, SquareMatrix, UnitaryMatrix

UT_DIRAC_TOL = 1e-12


class ShiftOrientation(enum.Enum):
    """Direction a shift moves the Fourier basis: Z_INVERSE sends mode n to
    n - 1 (multiplication by 1/z), Z sends mode n to n + 1."""

    Z_INVERSE = -1
    Z = +1


CANONICAL_ORIENTATION = ShiftOrientation.Z_INVERSE


@dataclass(frozen=True)
class TruncatedFourierSpace:
    """Contiguous window of Fourier modes {m_min, ..., m_max} containing 0."""

    m_min: int
    m_max: int

    def __post_init__(self):
        if not (self.m_min <= 0 <= self.m_max):
            raise ValueError(f"window [{self.m_min}, {self.m_max}] must contain mode 0")

    @property
    def dim(self) -> int:
        return self.m_max - self.m_min + 1

    @property
    def modes(self) -> np.ndarray:
        return np.arange(self.m_min, self.m_max + 1)


def _default_ramp(x):
    return np.clip(2.0 * np.asarray(x, dtype=float) - 1.0, -1.0, 1.0)


@dataclass(frozen=True)
class DiracRamp:
    """Continuous ramp: -1 on (-inf, 0], 2x - 1 on (0, 1), +1 on [1, inf)."""

    chi: Callable = field(default=_default_ramp)


def voiculescu_pair(n: int) -> tuple[UnitaryMatrix, UnitaryMatrix]:
    """Clock and shift unitaries: u has phases exp(2*pi*i*k/n) on the
    diagonal and v cyclically permutes basis vector k to k+1 (mod n)."""
    if n < 1:
        raise ValueError("n must be positive")
    k = np.arange(n)
    u = np.diag(np.exp(2j * np.pi * k / n))
    v = np.zeros((n, n), dtype=complex)
    v[(k + 1) % n, k] = 1.0
    return UnitaryMatrix(u), UnitaryMatrix(v)


def commutator_norm_voiculescu(n: int) -> float:
    """Operator norm of [u_n, v_n]; equals 2 sin(pi/n) in exact arithmetic."""
    u, v = voiculescu_pair(n)
    value = float(np.linalg.norm(u.a @ v.a - v.a @ u.a, 2))
    closed_form = 2.0 * np.sin(np.pi / n)
    if abs(value - closed_form) > 1e-12:
        raise ModelInconsistencyError(
            f"commutator norm {value!r} deviates from 2 sin(pi/{n}) = {closed_form!r}")
    return value


def u_t_phases(t: float, space: TruncatedFourierSpace) -> np.ndarray:
    """Diagonal of u_t on the window: exp(2*pi*i*n/t) for 0 <= n <= t, else 1."""
    if t < 1:
        raise ValueError("t must be at least 1")
    n = space.modes
    active = (n >= 0) & (n <= t)
    return np.where(active, np.exp(2j * np.pi * n / t), 1.0)


def u_t_operator(t: float, space: TruncatedFourierSpace) -> UnitaryMatrix:
    """The partial-rotation unitary u_t restricted to the mode window."""
    return UnitaryMatrix(np.diag(u_t_phases(t, space)))


def bilateral_shift(space: TruncatedFourierSpace, mode: str = "cyclic",
                    orientation: ShiftOrientation = CANONICAL_ORIENTATION) -> SquareMatrix:
    """Shift of the Fourier basis on the window.

    ``cyclic`` wraps at the window edge and returns a unitary; ``truncated``
    drops the vector that falls off the edge and returns a partial isometry
    with one zero column.
    """
    d = space.dim
    step = orientation.value
    m = np.zeros((d, d), dtype=complex)
    idx = np.arange(d)
    if mode == "cyclic":
        m[(idx + step) % d, idx] = 1.0
        return UnitaryMatrix(m)
    if mode == "truncated":
        tgt = idx + step
        keep = (tgt >= 0) & (tgt < d)
        m[tgt[keep], idx[keep]] = 1.0
        return SquareMatrix(m)
    raise ValueError(f"unknown shift mode {mode!r}")


def canonical_pair(n: int) -> tuple[UnitaryMatrix, UnitaryMatrix]:
    """Clock plus cyclic shift in the canonical (index +1) orientation."""
    space = TruncatedFourierSpace(0, n - 1)
    u = u_t_operator(float(n), space)
    b = bilateral_shift(space, "cyclic", CANONICAL_ORIENTATION)
    return u, UnitaryMatrix(b.a)


def dirac_F_t(t: float, space: TruncatedFourierSpace,
              ramp: DiracRamp | None = None) -> HermitianMatrix:
    """Diagonal operator with entries ramp(n/t) over the mode window."""
    if t < 1:
        raise ValueError("t must be at least 1")
    ramp = ramp or DiracRamp()
    return HermitianMatrix(np.diag(ramp.chi(space.modes / t)).astype(complex))


def ut_from_dirac(t: float, space: TruncatedFourierSpace,
                  ramp: DiracRamp | None = None) -> UnitaryMatrix:
    """Build u_t as -exp(pi*i*F_t) and certify it against the direct formula.

    For the default ramp the two constructions agree exactly: below mode 0
    the ramp gives -exp(-pi*i) = 1, above mode t it gives -exp(pi*i) = 1,
    and in between -exp(pi*i*(2n/t - 1)) = exp(2*pi*i*n/t).
    """
    f_t = dirac_F_t(t, space, ramp)
    u = -np.diag(np.exp(1j * np.pi * np.diagonal(f_t.a)))
    direct = u_t_operator(t, space)
    drift = float(np.max(np.abs(u - direct.a)))
    if drift > UT_DIRAC_TOL:
        raise ModelInconsistencyError(
            f"exp(pi*i*ramp) construction deviates from u_t by {drift:.3e}")
    return UnitaryMatrix(u)
