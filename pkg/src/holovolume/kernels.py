"""Interaction kernels of the counter-propagating light/spin-wave coupling.

With the dimensionless coupling kappa the write and readout kernels are

    G0(p, q) = (kappa/2) J0(kappa sqrt(p q))
    G1(p, q) = delta(p) - (kappa/2) J1(kappa sqrt(q p)) sqrt(q/p) theta(p)

The delta part of G1 is never evaluated pointwise; operators that use G1 add
it as an identity term.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .specfun import bessel_j0, bessel_j1, j1_over_x


@dataclass(frozen=True)
class Coupling:
    """Dimensionless light-spin coupling strength."""

    kappa: float

    def __post_init__(self):
        k = float(self.kappa)
        if not math.isfinite(k) or k < 0:
            raise ValueError(f"kappa must be finite and >= 0, got {self.kappa}")
        object.__setattr__(self, "kappa", k)


@dataclass(frozen=True)
class PhysicalCoupling:
    """Resonant optical depth and spontaneous-emission probability."""

    alpha0: float
    eta: float


def coupling_from_physical(p: PhysicalCoupling) -> Coupling:
    """kappa = sqrt(alpha0 * eta).

    eta = 1 is accepted with a warning: spontaneous emission is then certainly
    not negligible and the lossless model no longer applies.
    """
    if not (math.isfinite(p.alpha0) and p.alpha0 > 0):
        raise ValueError(f"optical depth must be > 0, got {p.alpha0}")
    if not (math.isfinite(p.eta) and 0 < p.eta <= 1):
        raise ValueError(f"spontaneous-emission probability must lie in (0, 1], got {p.eta}")
    if p.eta == 1:
        warnings.warn("eta = 1 is outside the lossless regime (eta << 1)", RuntimeWarning, stacklevel=2)
    return Coupling(math.sqrt(p.alpha0 * p.eta))


def _unit_interval(name, v, *, open_left=False):
    arr = np.asarray(v, dtype=float)
    lo_ok = arr > 0 if open_left else arr >= 0
    if not np.all(lo_ok & (arr <= 1)):
        bound = "(0, 1]" if open_left else "[0, 1]"
        raise ValueError(f"{name} must lie in {bound}")
    return arr


def g0(p, q, c: Coupling):
    """(kappa/2) J0(kappa sqrt(p q)); symmetric in p and q bit for bit."""
    pa = _unit_interval("p", p)
    qa = _unit_interval("q", q)
    k = c.kappa
    return 0.5 * k * bessel_j0(k * np.sqrt(pa * qa))


def g1_regular(p, q, c: Coupling):
    """Regular (Volterra) part of G1: -(kappa/2) J1(kappa sqrt(q p)) sqrt(q/p), p > 0."""
    pa = _unit_interval("p", p, open_left=True)
    qa = _unit_interval("q", q)
    k = c.kappa
    return -0.5 * k * bessel_j1(k * np.sqrt(qa * pa)) * np.sqrt(qa / pa)


def greens_j1_kernel(s, c: Coupling):
    """(kappa/2) J1(kappa sqrt(s)) / sqrt(s) for s > 0.

    The kernel is analytic in s; its value at s -> 0+ is
    :func:`greens_j1_limit`.
    """
    sa = np.asarray(s, dtype=float)
    if not np.all(sa > 0):
        raise ValueError("greens_j1_kernel needs s > 0")
    return _j1_kernel(sa, c.kappa)


def greens_j1_limit(c: Coupling) -> float:
    return 0.25 * c.kappa**2


def _j1_kernel(s, kappa: float):
    """greens_j1_kernel extended continuously to s = 0, no validation."""
    # (k/2) J1(k r)/r = (k^2/2) * [J1(x)/x] with x = k r
    return 0.5 * kappa * kappa * j1_over_x(kappa * np.sqrt(s))
