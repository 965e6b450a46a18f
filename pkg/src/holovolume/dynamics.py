"""Field-space solvers for the coupled light / spin-wave envelopes.

In dimensionless coordinates (xi along the cell, tau along the pulse) the
slowly varying envelopes obey

    d alpha / d xi  = -i (kappa/2) beta,
    d beta  / d tau = -i (kappa/2) alpha,

with alpha given on the entrance face xi = 0 and beta on the initial face
tau = 0.  Two independent solvers are provided: a marching scheme on the
characteristic lattice and a quadrature of the Bessel Green's-function
solution.  They serve as oracles for each other.
"""
from __future__ import annotations

import functools
import json
from dataclasses import dataclass

import numpy as np

from .io import fmt, write_csv
from .kernels import Coupling, _j1_kernel
from .quadrature import UnitGrid, make_trapezoid
from .specfun import bessel_j0


@dataclass(frozen=True, eq=False)
class BoundaryData:
    """alpha_in over tau on the xi = 0 face, beta_in over xi on the tau = 0 face."""

    grid_xi: UnitGrid
    grid_tau: UnitGrid
    alpha_in: np.ndarray
    beta_in: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.alpha_in, dtype=complex)
        b = np.asarray(self.beta_in, dtype=complex)
        if a.shape != (self.grid_tau.n,):
            raise ValueError(f"alpha_in needs {self.grid_tau.n} samples, got shape {a.shape}")
        if b.shape != (self.grid_xi.n,):
            raise ValueError(f"beta_in needs {self.grid_xi.n} samples, got shape {b.shape}")
        object.__setattr__(self, "alpha_in", a)
        object.__setattr__(self, "beta_in", b)

    @classmethod
    def uniform(cls, n: int, alpha_in, beta_in) -> "BoundaryData":
        g = make_trapezoid(n)
        return cls(g, g, alpha_in, beta_in)


@dataclass(frozen=True, eq=False)
class FieldState:
    """alpha[i, j] = alpha(xi_i, tau_j), beta likewise.

    Entries a solver did not evaluate are NaN; the four faces are always
    present.
    """

    grid_xi: UnitGrid
    grid_tau: UnitGrid
    alpha: np.ndarray
    beta: np.ndarray

    @property
    def alpha_out(self) -> np.ndarray:
        return self.alpha[-1, :]

    @property
    def beta_out(self) -> np.ndarray:
        return self.beta[:, -1]

    @property
    def alpha_in(self) -> np.ndarray:
        return self.alpha[0, :]

    @property
    def beta_in(self) -> np.ndarray:
        return self.beta[:, 0]

    def to_csv(self, path) -> None:
        rows = []
        for i, xi in enumerate(self.grid_xi.nodes):
            for j, tau in enumerate(self.grid_tau.nodes):
                a = self.alpha[i, j]
                b = self.beta[i, j]
                rows.append([fmt(xi), fmt(tau), fmt(a.real), fmt(a.imag), fmt(b.real), fmt(b.imag)])
        write_csv(path, ["xi", "tau", "re_alpha", "im_alpha", "re_beta", "im_beta"], rows)

    def summary(self) -> dict:
        def cplx(v):
            return {"re": np.real(v).tolist(), "im": np.imag(v).tolist()}

        return {
            "xi": self.grid_xi.nodes.tolist(),
            "tau": self.grid_tau.nodes.tolist(),
            "alpha_in": cplx(self.alpha_in),
            "beta_in": cplx(self.beta_in),
            "alpha_out": cplx(self.alpha_out),
            "beta_out": cplx(self.beta_out),
            "balance": excitation_balance(self).to_dict(),
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=1)


@dataclass(frozen=True)
class ExcitationBalance:
    in_total: float
    out_total: float
    defect: float

    def to_dict(self) -> dict:
        return {"in_total": self.in_total, "out_total": self.out_total, "defect": self.defect}


def excitation_balance(f: FieldState) -> ExcitationBalance:
    """Photons plus flipped spins entering vs leaving the unit square."""
    wx, wt = f.grid_xi.weights, f.grid_tau.weights
    e_in = float(wt @ np.abs(f.alpha_in) ** 2 + wx @ np.abs(f.beta_in) ** 2)
    e_out = float(wt @ np.abs(f.alpha_out) ** 2 + wx @ np.abs(f.beta_out) ** 2)
    defect = abs(e_out - e_in) / max(e_in, np.finfo(float).eps)
    return ExcitationBalance(e_in, e_out, defect)


def _require_uniform(*grids: UnitGrid) -> None:
    for g in grids:
        if not g.is_uniform:
            raise ValueError("field solvers need uniform (trapezoid) grids")


def integrate_characteristics(b: BoundaryData, c: Coupling) -> FieldState:
    """Second-order implicit-trapezoid marching over the whole unit square.

    Along each lattice line the equations are integrated with the trapezoid
    rule, so the new node (i+1, j+1) solves

        alpha_new = alpha(i, j+1)   - i g hx/2 (beta(i, j+1) + beta_new)
        beta_new  = beta(i+1, j)    - i g ht/2 (alpha(i+1, j) + alpha_new)

    with g = kappa/2.  Nodes on one anti-diagonal are independent and are
    updated together.
    """
    _require_uniform(b.grid_xi, b.grid_tau)
    nx, nt = b.grid_xi.n, b.grid_tau.n
    g = 0.5 * c.kappa
    sx = 0.5 * g * b.grid_xi.step
    st = 0.5 * g * b.grid_tau.step
    alpha = np.zeros((nx, nt), dtype=complex)
    beta = np.zeros((nx, nt), dtype=complex)
    alpha[0, :] = b.alpha_in
    beta[:, 0] = b.beta_in
    # edges: beta along xi = 0 and alpha along tau = 0 follow from one equation each
    for j in range(nt - 1):
        beta[0, j + 1] = beta[0, j] - 1j * st * (alpha[0, j] + alpha[0, j + 1])
    for i in range(nx - 1):
        alpha[i + 1, 0] = alpha[i, 0] - 1j * sx * (beta[i, 0] + beta[i + 1, 0])
    det = 1.0 + sx * st
    for d in range(2, nx + nt - 1):
        i = np.arange(max(1, d - nt + 1), min(nx - 1, d - 1) + 1)
        j = d - i
        r1 = alpha[i - 1, j] - 1j * sx * beta[i - 1, j]
        r2 = beta[i, j - 1] - 1j * st * alpha[i, j - 1]
        alpha[i, j] = (r1 - 1j * sx * r2) / det
        beta[i, j] = (r2 - 1j * st * r1) / det
    return FieldState(b.grid_xi, b.grid_tau, alpha, beta)


def _partial_trapezoid(n: int) -> np.ndarray:
    """Row m holds trapezoid weights for integrating over nodes 0..m of a uniform grid."""
    h = 1.0 / (n - 1)
    w = np.tril(np.full((n, n), h))
    idx = np.arange(1, n)
    w[idx, 0] = 0.5 * h
    w[idx, idx] = 0.5 * h
    w[0, 0] = 0.0
    return w


@functools.lru_cache(maxsize=16)
def _greens_operators(kappa: float, n_xi: int, n_tau: int):
    """Discrete operators of the Green's-function solution on uniform grids.

    For a line at fixed xi_p, the transfer of alpha_in to alpha(xi_p, .) uses
    the Volterra kernel xi_p * K1(xi_p (tau - tau')) and the transfer of
    beta_in uses J0(kappa sqrt((xi_p - xi') tau)).  Returned as functions of
    the line position so probes share the code path with the faces.
    """
    gx = make_trapezoid(n_xi)
    gt = make_trapezoid(n_tau)
    wx_part = _partial_trapezoid(n_xi)
    wt_part = _partial_trapezoid(n_tau)
    dx = np.subtract.outer(gx.nodes, gx.nodes).clip(min=0.0)
    dt = np.subtract.outer(gt.nodes, gt.nodes).clip(min=0.0)
    ops = {
        "gx": gx,
        "gt": gt,
        "wx_part": wx_part,
        "wt_part": wt_part,
        "dx": dx,
        "dt": dt,
    }
    for arr in (wx_part, wt_part, dx, dt):
        arr.setflags(write=False)
    return ops


def _greens_line_alpha(ops, kappa: float, p: int, alpha_in, beta_in):
    """alpha(xi_p, tau_m) for all m, beta(xi_p, tau_m) for all m."""
    xi = ops["gx"].nodes[p]
    tau = ops["gt"].nodes
    g = 0.5 * kappa
    # alpha: Volterra term in tau, J0 term over xi' in [0, xi_p]
    volt = ops["wt_part"] * (xi * _j1_kernel(xi * ops["dt"], kappa))
    alpha = alpha_in - volt @ alpha_in
    wx_row = ops["wx_part"][p]
    j0a = bessel_j0(kappa * np.sqrt(np.multiply.outer(tau, (xi - ops["gx"].nodes).clip(min=0.0))))
    alpha = alpha - 1j * g * (j0a * wx_row[None, :]) @ beta_in
    # beta: Volterra term in xi' over [0, xi_p], J0 term over tau' in [0, tau_m]
    kx = tau[:, None] * _j1_kernel(np.multiply.outer(tau, ops["dx"][p]), kappa)
    beta = beta_in[p] - (kx * wx_row[None, :]) @ beta_in
    j0b = bessel_j0(kappa * np.sqrt(xi * ops["dt"]))
    beta = beta - 1j * g * (ops["wt_part"] * j0b) @ alpha_in
    return alpha, beta


def _greens_line_beta(ops, kappa: float, m: int, alpha_in, beta_in):
    """alpha(xi_p, tau_m) and beta(xi_p, tau_m) for all p at fixed tau_m."""
    mirrored = {
        "gx": ops["gt"],
        "gt": ops["gx"],
        "wx_part": ops["wt_part"],
        "wt_part": ops["wx_part"],
        "dx": ops["dt"],
        "dt": ops["dx"],
    }
    # the equations are symmetric under (xi, alpha) <-> (tau, beta)
    beta, alpha = _greens_line_alpha(mirrored, kappa, m, beta_in, alpha_in)
    return alpha, beta


def greens_solution(b: BoundaryData, c: Coupling, probe_xi=(), full: bool = False) -> FieldState:
    """Quadrature of the Bessel Green's-function solution.

    Always evaluates the four faces; ``probe_xi`` adds lines of constant xi
    (node indices) and ``full`` evaluates every node, O(n^3).  Kernels are
    analytic in their arguments, so the trapezoid rule on the input nodes is
    second-order accurate like the marching scheme.
    """
    _require_uniform(b.grid_xi, b.grid_tau)
    nx, nt = b.grid_xi.n, b.grid_tau.n
    k = c.kappa
    ops = _greens_operators(k, nx, nt)
    alpha = np.full((nx, nt), np.nan, dtype=complex)
    beta = np.full((nx, nt), np.nan, dtype=complex)
    rows = set(range(nx)) if full else {0, nx - 1, *(int(p) for p in probe_xi)}
    for p in sorted(rows):
        if not 0 <= p < nx:
            raise ValueError(f"probe index {p} outside 0..{nx - 1}")
        alpha[p, :], beta[p, :] = _greens_line_alpha(ops, k, p, b.alpha_in, b.beta_in)
    if not full:
        for m in (0, nt - 1):
            alpha[:, m], beta[:, m] = _greens_line_beta(ops, k, m, b.alpha_in, b.beta_in)
    return FieldState(b.grid_xi, b.grid_tau, alpha, beta)
