"""The circle symbol triple (f, g, h) feeding the Loring construction.

The triple consists of functions of the circle coordinate x in [0, 1)
(identifying x with the point exp(2*pi*i*x)) satisfying

    f^2 + g^2 + h^2 = f,   f(0) = 1,   g(0) = h(0) = 0,   g*h = 0,

with ranges inside [0, 1]. The default triple is built from the raised
cosine f(x) = cos(pi x)^2, for which f - f^2 = sin(2 pi x)^2 / 4 has an
elementary square root; g carries it on [0, 1/2] and h on [1/2, 1), so the
product g*h vanishes identically by disjoint supports.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

SYM_TOL = 1e-10
LIPSCHITZ_SAFETY = 1.1


@dataclass(frozen=True)
class SymbolTriple:
    """Symbol functions of x in [0, 1), vectorized over ndarrays, with
    certified Lipschitz upper bounds (derivative w.r.t. x)."""

    f: Callable
    g: Callable
    h: Callable
    lipschitz_f: float
    lipschitz_g: float
    lipschitz_h: float


@dataclass(frozen=True)
class ValidationReport:
    """Grid violations of the symbol identities; failures are data."""

    grid_size: int
    sum_rule_violation: float        # max |f^2 + g^2 + h^2 - f|
    product_rule_violation: float    # max |g * h|
    base_point_violation: float      # max(|f(0) - 1|, |g(0)|, |h(0)|)
    range_violation: float           # distance of values from [0, 1]
    tol: float
    passed: bool


def on_circle(fn: Callable) -> Callable:
    """Adapt a function of x in [0, 1) to a function of points on S^1."""

    def k(z):
        x = np.mod(np.angle(z) / (2 * np.pi), 1.0)
        return fn(x)

    return k


def default_triple(grid_size: int = 4096) -> SymbolTriple:
    """The raised-cosine triple with numerically certified Lipschitz bounds."""

    def f(x):
        return np.cos(np.pi * np.asarray(x)) ** 2

    def g(x):
        x = np.asarray(x)
        return np.where(x <= 0.5, 0.5 * np.sin(2 * np.pi * x), 0.0)

    def h(x):
        # strictly right of 1/2 so the supports are exactly disjoint even
        # though sin(pi) rounds to 1.2e-16 rather than zero
        x = np.asarray(x)
        return np.where(x > 0.5, -0.5 * np.sin(2 * np.pi * x), 0.0)

    return SymbolTriple(
        f=f,
        g=g,
        h=h,
        lipschitz_f=lipschitz_bound(f, grid_size),
        lipschitz_g=lipschitz_bound(g, grid_size),
        lipschitz_h=lipschitz_bound(h, grid_size),
    )


def constant_triple(value: float) -> SymbolTriple:
    """Degenerate triple f = const, g = h = 0 (valid only for value in {0, 1})."""

    def const(x):
        return np.full_like(np.asarray(x, dtype=float), value)

    def zero(x):
        return np.zeros_like(np.asarray(x, dtype=float))

    return SymbolTriple(f=const, g=zero, h=zero,
                        lipschitz_f=0.0, lipschitz_g=0.0, lipschitz_h=0.0)


def validate_triple(t: SymbolTriple, grid_size: int = 10_000, tol: float = SYM_TOL) -> ValidationReport:
    """Check the symbol identities on a uniform grid of x values."""
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    x = np.arange(grid_size) / grid_size
    fv, gv, hv = t.f(x), t.g(x), t.h(x)
    sum_rule = float(np.max(np.abs(fv ** 2 + gv ** 2 + hv ** 2 - fv)))
    product_rule = float(np.max(np.abs(gv * hv)))
    base = float(max(abs(t.f(np.array(0.0)) - 1.0),
                     abs(t.g(np.array(0.0))),
                     abs(t.h(np.array(0.0)))))
    stacked = np.concatenate([fv, gv, hv])
    range_violation = float(max(np.max(-stacked, initial=0.0), np.max(stacked - 1.0, initial=0.0), 0.0))
    passed = max(sum_rule, product_rule, base, range_violation) <= tol
    return ValidationReport(grid_size, sum_rule, product_rule, base, range_violation, tol, passed)


def lipschitz_bound(k: Callable, grid_size: int = 4096) -> float:
    """Certified upper bound for the slope of ``k`` w.r.t. x in [0, 1).

    Returns the maximum difference quotient |k(x_{i+1}) - k(x_i)| / (1/G)
    over a uniform grid (wrapping around the circle), inflated by a 1.1
    safety factor. For smooth k this converges to max |dk/dx|.
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    x = np.arange(grid_size) / grid_size
    vals = np.asarray(k(x), dtype=complex)
    diffs = np.abs(np.diff(np.append(vals, vals[0])))
    return float(np.max(diffs) * grid_size * LIPSCHITZ_SAFETY)
