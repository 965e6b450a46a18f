"""Quadrature grids on the unit interval.

Every integral operator in the package is discretised on a :class:`UnitGrid`;
samples of a function always live at the grid nodes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class Scheme(str, Enum):
    GAUSS_LEGENDRE = "gauss_legendre"
    UNIFORM_TRAPEZOID = "uniform_trapezoid"


@dataclass(frozen=True, eq=False)
class UnitGrid:
    """Nodes and weights of a quadrature rule on [0, 1]."""

    scheme: Scheme
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        for arr in (self.nodes, self.weights):
            arr.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def is_uniform(self) -> bool:
        return self.scheme is Scheme.UNIFORM_TRAPEZOID

    @property
    def step(self) -> float:
        if not self.is_uniform:
            raise ValueError("step is only defined for uniform grids")
        return 1.0 / (self.n - 1)

    def integrate(self, samples) -> complex | float:
        values = _check_samples(samples, self)
        return np.dot(self.weights, values)

    def reversed_samples(self, samples) -> np.ndarray:
        """Samples of x -> f(1 - x), exact because the node set is symmetric about 1/2."""
        return _check_samples(samples, self)[::-1]

    def __eq__(self, other):
        if not isinstance(other, UnitGrid):
            return NotImplemented
        return (
            self.scheme is other.scheme
            and np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.weights, other.weights)
        )

    def __hash__(self):
        return hash((self.scheme, self.n))

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme.value,
            "n": self.n,
            "nodes": self.nodes.tolist(),
            "weights": self.weights.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "UnitGrid":
        return cls(
            Scheme(data["scheme"]),
            np.array(data["nodes"], dtype=float),
            np.array(data["weights"], dtype=float),
        )


def _check_samples(samples, grid: UnitGrid) -> np.ndarray:
    values = np.asarray(samples)
    if values.shape[0] != grid.n:
        raise ValueError(f"expected {grid.n} samples along the first axis, got {values.shape[0]}")
    return values


def _legendre_newton(n: int, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Polish initial guesses z for the roots of P_n; returns roots and P_n'(roots)."""
    for _ in range(100):
        p0 = np.ones_like(z)
        p1 = z.copy()
        for k in range(2, n + 1):
            p0, p1 = p1, ((2 * k - 1) * z * p1 - (k - 1) * p0) / k
        dp = n * (z * p1 - p0) / (z * z - 1.0)
        dz = p1 / dp
        z = z - dz
        if np.max(np.abs(dz)) < 1e-15:
            break
    # derivative at the converged roots
    p0 = np.ones_like(z)
    p1 = z.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * z * p1 - (k - 1) * p0) / k
    dp = n * (z * p1 - p0) / (z * z - 1.0)
    return z, dp


def make_gauss_legendre(n: int) -> UnitGrid:
    """n-point Gauss-Legendre rule mapped to [0, 1].

    Only the roots in the lower half are computed; the upper half is their
    mirror image so that ``nodes[::-1] == 1 - nodes`` holds exactly.
    """
    if int(n) != n or n < 2:
        raise ValueError(f"Gauss-Legendre rule needs n >= 2, got {n}")
    n = int(n)
    m = (n + 1) // 2
    i = np.arange(1, m + 1)
    guess = np.cos(math.pi * (i - 0.25) / (n + 0.5))
    z, dp = _legendre_newton(n, guess)
    # z descends from near 1: x = (1 - z)/2 ascends from near 0
    lower = 0.5 * (1.0 - z)
    wlower = 1.0 / ((1.0 - z * z) * dp * dp)
    nodes = np.empty(n)
    weights = np.empty(n)
    nodes[:m] = lower
    weights[:m] = wlower
    nodes[n - m :] = (1.0 - lower)[::-1]
    weights[n - m :] = wlower[::-1]
    if n % 2:
        nodes[m - 1] = 0.5
    return UnitGrid(Scheme.GAUSS_LEGENDRE, nodes, weights)


def make_trapezoid(n: int) -> UnitGrid:
    """n uniformly spaced nodes including both endpoints, trapezoidal weights."""
    if int(n) != n or n < 2:
        raise ValueError(f"trapezoid rule needs n >= 2, got {n}")
    n = int(n)
    h = 1.0 / (n - 1)
    nodes = np.arange(n) * h
    nodes[-1] = 1.0
    weights = np.full(n, h)
    weights[0] = weights[-1] = 0.5 * h
    return UnitGrid(Scheme.UNIFORM_TRAPEZOID, nodes, weights)


def inner_product(f, g, grid: UnitGrid):
    """Quadrature of conj(f) * g over [0, 1]."""
    fv = _check_samples(f, grid)
    gv = _check_samples(g, grid)
    if fv.shape != gv.shape:
        raise ValueError(f"sample shapes differ: {fv.shape} vs {gv.shape}")
    return np.dot(grid.weights, np.conj(fv) * gv)
