"""Integer pairing between the partial-rotation family u_t and unitary loops.

A loop is a matrix-valued Fourier polynomial z -> sum_m z^m a_m that is
unitary at every point of the circle and equals the identity at z = 1. On a
truncated Fourier window the loop acts as a block multiplication operator
(mode m moves block-column n to block-row n + m); pairing it with u_t means
building the Loring element e(u_t x 1_k, V) and taking the certified trace
of its spectral projection relative to diag(1, 0).

Window policy: outside the modes reached by the symbols of u_t and the loop
coefficients, e agrees with diag(1, 0) exactly, so truncation drops only
zeros once the window has margin degree + 4 around [0, t]. Every reported
index is recomputed at margin + 8 and must not change.

Sign conventions are frozen by two anchors: the pairing of the basic loop
z -> 1/z is +1, and the pairing of the scalar loop z -> z^m is -m, the
negative of the determinant winding number computed by the independent
oracle in this module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import (
    GapClosedError,
    NotAProjection,
    SampleError,
    StabilityError,
    WindowError,
)
from .loring import GAP_MIN_DEFAULT, IndexResult, index_from_element, loring_element
from .matrixcore import SquareMatrix, UnitaryMatrix
from .model import TruncatedFourierSpace, u_t_phases
from .symbols import SymbolTriple

LOOP_GRID = 256
LOOP_UNITARY_TOL = 1e-8
PROJECTION_TOL = 1e-10
LOCALITY_TOL = 1e-12
DEFAULT_MARGIN = 4
STABILITY_EXTRA = 8


@dataclass(frozen=True)
class LoopUnitary:
    """Matrix-valued Fourier polynomial, pointwise unitary with value 1 at z=1.

    ``coeffs`` maps the integer Fourier mode m to the k x k coefficient of
    z^m; zero coefficients are dropped on construction.
    """

    k: int
    coeffs: Mapping[int, np.ndarray]

    def __post_init__(self):
        cleaned = {}
        for mode, a in self.coeffs.items():
            arr = np.array(a, dtype=complex)
            if arr.shape != (self.k, self.k):
                raise WindowError(f"coefficient for mode {mode} has shape {arr.shape}, expected ({self.k}, {self.k})")
            if np.max(np.abs(arr)) == 0.0:
                continue
            arr.setflags(write=False)
            cleaned[int(mode)] = arr
        object.__setattr__(self, "coeffs", cleaned)
        base = self.eval_at(np.array([1.0 + 0j]))[0]
        if np.linalg.norm(base - np.eye(self.k), 2) > LOOP_UNITARY_TOL:
            raise SampleError("loop value at z = 1 is not the identity")
        grid = np.exp(2j * np.pi * np.arange(LOOP_GRID) / LOOP_GRID)
        vals = self.eval_at(grid)
        gram = vals.conj().transpose(0, 2, 1) @ vals - np.eye(self.k)
        worst = float(np.max(np.linalg.svd(gram, compute_uv=False))) if self.k else 0.0
        if worst > LOOP_UNITARY_TOL:
            raise SampleError(f"loop is not pointwise unitary: defect {worst:.3e}")

    @property
    def degree(self) -> int:
        return max((abs(m) for m in self.coeffs), default=0)

    def eval_at(self, z: np.ndarray) -> np.ndarray:
        """Evaluate the loop at points of the circle; returns (len(z), k, k)."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros((len(z), self.k, self.k), dtype=complex)
        for mode, a in self.coeffs.items():
            out += (z ** mode)[:, None, None] * a
        return out


@dataclass(frozen=True)
class ProjectionMatrix:
    """k x k matrix with ``||p^2 - p||`` and ``||p - p*||`` below 1e-10."""

    p: SquareMatrix

    def __post_init__(self):
        if not isinstance(self.p, SquareMatrix):
            object.__setattr__(self, "p", SquareMatrix(self.p))
        a = self.p.a
        idem = np.linalg.norm(a @ a - a, 2)
        herm = np.linalg.norm(a - a.conj().T, 2)
        if max(idem, herm) > PROJECTION_TOL:
            raise NotAProjection(f"defects idempotent={idem:.3e} hermitian={herm:.3e}")

    @property
    def k(self) -> int:
        return self.p.dim

    @property
    def rank(self) -> int:
        return int(round(self.p.trace().real))


def bott_loop(p: ProjectionMatrix) -> LoopUnitary:
    """The loop z -> p/z + (1 - p) attached to a projection."""
    eye = np.eye(p.k)
    return LoopUnitary(p.k, {-1: p.p.a, 0: eye - p.p.a})


def power_loop(m: int) -> LoopUnitary:
    """Scalar loop z -> z^m."""
    return LoopUnitary(1, {m: np.eye(1)})


def constant_loop(k: int) -> LoopUnitary:
    """Constant identity loop in size k."""
    return LoopUnitary(k, {0: np.eye(k)})


def direct_sum(a: LoopUnitary, b: LoopUnitary) -> LoopUnitary:
    k = a.k + b.k
    coeffs: dict[int, np.ndarray] = {}
    for mode in set(a.coeffs) | set(b.coeffs):
        block = np.zeros((k, k), dtype=complex)
        if mode in a.coeffs:
            block[: a.k, : a.k] = a.coeffs[mode]
        if mode in b.coeffs:
            block[a.k :, a.k :] = b.coeffs[mode]
        coeffs[mode] = block
    return LoopUnitary(k, coeffs)


def tensor_with_projection(v: LoopUnitary, p: ProjectionMatrix) -> LoopUnitary:
    """The product loop v (x) p + 1 (x) (1 - p) in size k(v) * k(p)."""
    k = v.k * p.k
    coeffs = {mode: np.kron(a, p.p.a) for mode, a in v.coeffs.items()}
    rest = np.kron(np.eye(v.k), np.eye(p.k) - p.p.a)
    coeffs[0] = coeffs.get(0, np.zeros((k, k), dtype=complex)) + rest
    return LoopUnitary(k, coeffs)


def multiplication_operator(v: LoopUnitary, space: TruncatedFourierSpace) -> SquareMatrix:
    """Block matrix of the loop acting on the window tensor C^k.

    Basis ordering is mode-major: index (n, i) -> (n - m_min) * k + i. The
    coefficient of z^m connects block-column n to block-row n + m; pairs
    that leave the window are dropped (truncated boundary).
    """
    if space.m_min > -v.degree or space.m_max < v.degree:
        raise WindowError(
            f"window [{space.m_min}, {space.m_max}] cannot represent a loop of degree {v.degree}")
    w, k = space.dim, v.k
    out = np.zeros((w * k, w * k), dtype=complex)
    for mode, a in v.coeffs.items():
        for col, n in enumerate(space.modes):
            row = col + mode
            if 0 <= row < w:
                out[row * k : (row + 1) * k, col * k : (col + 1) * k] = a
    return SquareMatrix(out)


def auto_window(v: LoopUnitary, t: float, margin: int = DEFAULT_MARGIN) -> TruncatedFourierSpace:
    """Default window for pairing computations at time t."""
    d = v.degree
    return TruncatedFourierSpace(-(d + margin), int(np.ceil(t)) + d + margin)


def _pairing_once(v: LoopUnitary, t: float, triple: SymbolTriple,
                  space: TruncatedFourierSpace, gap_min: float) -> IndexResult:
    phases = u_t_phases(t, space)
    u = UnitaryMatrix(np.diag(np.repeat(phases, v.k)))
    big_v = multiplication_operator(v, space)
    element = loring_element(u, big_v, triple)
    return index_from_element(element, gap_min)


def pairing_index(v: LoopUnitary, t: float, triple: SymbolTriple,
                  gap_min: float = GAP_MIN_DEFAULT,
                  margin: int = DEFAULT_MARGIN) -> IndexResult:
    """Certified pairing of the loop ``v`` with the family member u_t.

    The integer is computed on the auto-sized window and recomputed with
    margin + 8; a disagreement raises StabilityError, a spectral gap at or
    below ``gap_min`` raises GapClosedError (choose a larger t).
    """
    if margin < DEFAULT_MARGIN:
        raise WindowError(f"margin {margin} below the minimum {DEFAULT_MARGIN}")
    base = _pairing_once(v, t, triple, auto_window(v, t, margin), gap_min)
    check = _pairing_once(v, t, triple, auto_window(v, t, margin + STABILITY_EXTRA), gap_min)
    if base.index != check.index:
        raise StabilityError(
            f"index changed from {base.index} to {check.index} when widening the window")
    return base


def winding_number(v: LoopUnitary, samples: int | None = None) -> int:
    """Winding of det(v(z)) around the circle; the independent integer oracle.

    The determinant of a degree-d loop in size k can wind up to k*d times,
    so the default sampling resolves that rate comfortably.
    """
    min_samples = 8 * (v.degree + 1)
    if samples is None:
        samples = max(256, 16 * v.k * (v.degree + 1))
    if samples < min_samples:
        raise ValueError(f"samples {samples} below the minimum {min_samples}")
    grid = np.exp(2j * np.pi * np.arange(samples) / samples)
    dets = np.linalg.det(v.eval_at(grid))
    if np.min(np.abs(dets)) < 0.5:
        raise SampleError("determinant near zero at a sample; loop is not unitary there")
    steps = np.angle(np.roll(dets, -1) / dets)
    total = float(np.sum(steps) / (2 * np.pi))
    wind = int(round(total))
    if abs(total - wind) > 0.01:
        raise SampleError(f"accumulated phase {total!r} is not integral")
    return wind


def roundtrip_check(p: ProjectionMatrix, t: float, triple: SymbolTriple,
                    gap_min: float = GAP_MIN_DEFAULT) -> bool:
    """Does pairing the projection's loop recover the projection's rank?"""
    result = pairing_index(bott_loop(p), t, triple, gap_min)
    return result.index == p.rank


def product_compatibility_check(v: LoopUnitary, p: ProjectionMatrix, t: float,
                                triple: SymbolTriple,
                                gap_min: float = GAP_MIN_DEFAULT) -> bool:
    """Is pairing multiplicative against the product with a projection?"""
    product = tensor_with_projection(v, p)
    left = pairing_index(product, t, triple, gap_min).index
    right = pairing_index(v, t, triple, gap_min).index * p.rank
    return left == right


def locality_window(v: LoopUnitary, t: float, triple: SymbolTriple,
                    probe_margin: int = 12) -> int:
    """Largest |mode| at which e(u_t x 1, V) deviates from diag(1, 0).

    Entries touching modes beyond the returned half-width are below 1e-12,
    which is what makes the truncated window exact.
    """
    space = auto_window(v, t, probe_margin)
    phases = u_t_phases(t, space)
    u = UnitaryMatrix(np.diag(np.repeat(phases, v.k)))
    big_v = multiplication_operator(v, space)
    element = loring_element(u, big_v, triple)
    half = space.dim * v.k
    ref = np.zeros((2 * half, 2 * half))
    ref[:half, :half] = np.eye(half)
    dev = np.abs(element.matrix.a - ref)
    mode_of = np.tile(np.repeat(space.modes, v.k), 2)
    touched = np.maximum(dev.max(axis=0), dev.max(axis=1)) > LOCALITY_TOL
    if not np.any(touched):
        return 0
    return int(np.max(np.abs(mode_of[touched])))


def random_projection(k: int, rank: int, rng: np.random.Generator) -> ProjectionMatrix:
    """Random rank-r projection in size k from a seeded generator."""
    if not 0 <= rank <= k:
        raise ValueError(f"rank {rank} out of range for size {k}")
    z = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
    q, _ = np.linalg.qr(z)
    basis = q[:, :rank]
    return ProjectionMatrix(SquareMatrix(basis @ basis.conj().T))


def loop_to_json(v: LoopUnitary) -> str:
    """Serialize a loop to the interchange schema."""
    entries = []
    for mode in sorted(v.coeffs):
        a = v.coeffs[mode]
        entries.append({
            "mode": mode,
            "matrix": [[[float(x.real), float(x.imag)] for x in row] for row in a],
        })
    return json.dumps({"k": v.k, "coeffs": entries}, indent=2)


def loop_from_json(text: str) -> LoopUnitary:
    """Parse a loop from the interchange schema.

    Raises ValueError for structural problems and SampleError (from the
    LoopUnitary constructor) if the data is not pointwise unitary.
    """
    data = json.loads(text)
    if not isinstance(data, dict) or "k" not in data or "coeffs" not in data:
        raise ValueError("loop JSON must be an object with 'k' and 'coeffs'")
    k = int(data["k"])
    if k < 1:
        raise ValueError("loop size k must be positive")
    coeffs: dict[int, np.ndarray] = {}
    for item in data["coeffs"]:
        mode = int(item["mode"])
        if mode in coeffs:
            raise ValueError(f"duplicate mode {mode} in loop JSON")
        raw = np.array(item["matrix"], dtype=float)
        if raw.shape != (k, k, 2):
            raise ValueError(f"matrix for mode {mode} has shape {raw.shape}, expected ({k}, {k}, 2)")
        coeffs[mode] = raw[..., 0] + 1j * raw[..., 1]
    return LoopUnitary(k, coeffs)
