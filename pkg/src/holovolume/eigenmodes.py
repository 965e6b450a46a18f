"""Shared eigenmodes of the write/readout kernels.

The write kernel, written with a time-reversed input argument, is the
symmetric operator

    K(x, y) = (kappa/2) J0(kappa sqrt(x y)),    K phi_i = lambda_i phi_i,

and the readout kernel G1 maps the reversed mode phi_i(1 - x) onto
mu_i phi_i(y) with lambda_i^2 + mu_i^2 = 1.  ``compute_modes`` solves the
Nystrom-discretised symmetric eigenproblem and obtains every mu_i by
applying G1 directly, so the constraint is a check rather than an input.

Conventions
-----------
* modes are ordered by decreasing |lambda|; public ``mode`` arguments are
  1-based (mode 1 is the dominant one), array rows are 0-based;
* each phi_i is normalised to unit L2 norm under the grid weights and its
  sign is chosen so that the sample at the node nearest x = 1 is positive
  (for kappa = 4 this makes lambda_2 negative);
* for kappa = 0 the spectrum is fully degenerate and the basis is the
  kappa -> 0 limit, the orthonormal shifted Legendre polynomials.  Their
  parity gives mu_i = (-1)^(i-1), so the one-pass map is the identity in
  field space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .jacobi import jacobi_eigh
from .kernels import Coupling
from .quadrature import UnitGrid
from .specfun import bessel_j0, bessel_j1

# Below this fraction of |lambda_1| the Nystrom extension divides quadrature
# and rounding noise by a tiny lambda, and the projected mu drifts off the
# constraint by more than ~1e-11 (measured up to kappa = 40 on n = 200);
# mu is then fixed by the constraint, keeping the projected sign.
RESOLUTION_FLOOR = 1e-6
TRUNCATION_EPS = 10 * np.finfo(float).eps
RESIDUAL_LIMIT = 1e-3

_BLOCK_ELEMENTS = 2_000_000


class ConsistencyError(RuntimeError):
    """A numerical self-check failed; the grid is too coarse for the request."""


@dataclass(frozen=True)
class G1Projection:
    mu: np.ndarray
    residual: np.ndarray
    constraint_defect: np.ndarray


@dataclass(frozen=True, eq=False)
class ModeSet:
    coupling: Coupling
    grid: UnitGrid
    phi: np.ndarray
    lam: np.ndarray
    mu: np.ndarray
    residual: np.ndarray
    overlap: np.ndarray
    resolved: np.ndarray
    warnings: tuple[str, ...] = ()
    # kappa = 0 only: Legendre coefficients of each mode, for off-grid evaluation
    legendre: np.ndarray | None = field(default=None, repr=False)

    @property
    def kappa(self) -> float:
        return self.coupling.kappa

    @property
    def n_modes(self) -> int:
        return self.phi.shape[0]

    def evaluate(self, mode: int, x) -> np.ndarray:
        """phi_mode at arbitrary points of [0, 1] (Nystrom extension)."""
        i = _mode_row(self, mode)
        xs = np.asarray(x, dtype=float)
        if np.any((xs < 0) | (xs > 1)):
            raise ValueError("evaluation points must lie in [0, 1]")
        if self.legendre is not None:
            return np.polynomial.legendre.legval(2.0 * xs - 1.0, self.legendre[i])
        if not self.resolved[i]:
            raise ValueError(f"mode {mode} is below the resolution floor; no stable extension")
        k = self.kappa
        kern = 0.5 * k * bessel_j0(k * np.sqrt(np.multiply.outer(xs, self.grid.nodes)))
        return kern @ (self.grid.weights * self.phi[i]) / self.lam[i]

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "grid": self.grid.to_dict(),
            "modes": [
                {
                    "index": i + 1,
                    "lambda": float(self.lam[i]),
                    "mu": float(self.mu[i]),
                    "residual": float(self.residual[i]),
                    "resolved": bool(self.resolved[i]),
                    "samples": self.phi[i].tolist(),
                }
                for i in range(self.n_modes)
            ],
            "overlap": self.overlap.tolist(),
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModeSet":
        grid = UnitGrid.from_dict(data["grid"])
        modes = sorted(data["modes"], key=lambda m: m["index"])
        coupling = Coupling(data["kappa"])
        phi = np.array([m["samples"] for m in modes], dtype=float).reshape(len(modes), grid.n)
        legendre = None
        if coupling.kappa == 0:
            legendre = _legendre_coefficients(grid, len(modes))[1]
        return cls(
            coupling=coupling,
            grid=grid,
            phi=phi,
            lam=np.array([m["lambda"] for m in modes], dtype=float),
            mu=np.array([m["mu"] for m in modes], dtype=float),
            residual=np.array([m["residual"] for m in modes], dtype=float),
            overlap=np.array(data["overlap"], dtype=float).reshape(len(modes), len(modes)),
            resolved=np.array([m.get("resolved", True) for m in modes], dtype=bool),
            warnings=tuple(data.get("warnings", ())),
            legendre=legendre,
        )


def _mode_row(m: ModeSet, mode: int) -> int:
    if int(mode) != mode or not 1 <= mode <= m.n_modes:
        raise ValueError(f"mode must be in 1..{m.n_modes}, got {mode}")
    return int(mode) - 1


def nystrom_matrix(c: Coupling, grid: UnitGrid) -> np.ndarray:
    """W^1/2 K W^1/2 for K(x, y) = (kappa/2) J0(kappa sqrt(x y))."""
    x = grid.nodes
    sw = np.sqrt(grid.weights)
    k = c.kappa
    kern = 0.5 * k * bessel_j0(k * np.sqrt(np.outer(x, x)))
    a = sw[:, None] * kern * sw[None, :]
    return 0.5 * (a + a.T)


def _fix_signs(phi: np.ndarray) -> np.ndarray:
    """Make the last clearly nonzero sample of every row positive."""
    out = phi.copy()
    for row in out:
        big = np.flatnonzero(np.abs(row) > 1e-8 * np.max(np.abs(row)))
        if big.size and row[big[-1]] < 0:
            row *= -1.0
    return out


def _legendre_coefficients(grid: UnitGrid, n_modes: int) -> tuple[np.ndarray, np.ndarray]:
    """Grid-orthonormal polynomials of degree 0..n_modes-1, and their Legendre coefficients."""
    t = 2.0 * grid.nodes - 1.0
    vander = np.polynomial.legendre.legvander(t, n_modes - 1)
    sw = np.sqrt(grid.weights)
    q, r = np.linalg.qr(sw[:, None] * vander)
    # columns of vander @ inv(r) are grid-orthonormal; P_k(1) = 1 fixes the sign at x = 1
    coeffs = np.linalg.inv(r)
    coeffs = coeffs * np.where(coeffs.sum(axis=0) < 0, -1.0, 1.0)[None, :]
    phi = (vander @ coeffs).T
    return phi, coeffs.T


def _volterra_points(kappa: float) -> tuple[np.ndarray, np.ndarray]:
    n = 40 + int(math.ceil(kappa))
    s, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (s + 1.0), 0.5 * w


def _apply_g1_to_reversed(
    kappa: float, grid: UnitGrid, phi: np.ndarray, lam: np.ndarray
) -> np.ndarray:
    """(G1 applied to x -> phi_i(1 - x)) sampled at the grid nodes, one row per mode.

    G1 = identity + Volterra part.  With y - x = u^2 the Volterra integral
    int_0^y (kappa/2) J1(kappa sqrt(y-x))/sqrt(y-x) g(x) dx becomes
    int_0^sqrt(y) kappa J1(kappa u) g(y - u^2) du, evaluated with
    Gauss-Legendre points; g = phi_i(1 - .) off the grid comes from the
    Nystrom extension.
    """
    direct = phi[:, ::-1].copy()
    if kappa == 0.0:
        return direct
    x = grid.nodes
    s, ws = _volterra_points(kappa)
    safe = np.where(lam != 0.0, lam, 1.0)
    coeff = (grid.weights[:, None] * phi.T) / safe[None, :]  # (n, modes)
    out = np.empty((phi.shape[0], grid.n))
    block = max(1, _BLOCK_ELEMENTS // (len(s) * grid.n))
    for start in range(0, grid.n, block):
        y = x[start : start + block]
        root = np.sqrt(y)
        u = root[:, None] * s[None, :]  # (b, nu)
        arg = 1.0 - y[:, None] + u * u
        np.clip(arg, 0.0, 1.0, out=arg)
        kern = 0.5 * kappa * bessel_j0(kappa * np.sqrt(arg[:, :, None] * x[None, None, :]))
        g = kern @ coeff  # (b, nu, modes)
        wu = kappa * bessel_j1(kappa * u) * (root[:, None] * ws[None, :])
        out[:, start : start + block] = np.einsum("bu,bum->mb", wu, g)
    return direct - out


def _project(grid: UnitGrid, phi: np.ndarray, applied: np.ndarray, lam: np.ndarray) -> G1Projection:
    w = grid.weights
    mu = np.sum(w[None, :] * phi * applied, axis=1)
    diff = applied - mu[:, None] * phi
    residual = np.sqrt(np.sum(w[None, :] * diff * diff, axis=1))
    return G1Projection(mu=mu, residual=residual, constraint_defect=np.abs(lam * lam + mu * mu - 1.0))


def mu_from_g1(m: ModeSet) -> G1Projection:
    """Project G1 applied to each reversed eigenfunction back onto it.

    Returns the raw projected mu_i, the residual ||G1 R phi_i - mu_i phi_i||
    and |lambda_i^2 + mu_i^2 - 1|.  Raises ConsistencyError when a resolved
    mode's residual exceeds 1e-3 ||phi_i||.
    """
    applied = _apply_g1_to_reversed(m.kappa, m.grid, m.phi, m.lam)
    proj = _project(m.grid, m.phi, applied, m.lam)
    _check_residuals(m.grid, m.phi, proj.residual, m.resolved)
    return proj


def _check_residuals(grid, phi, residual, resolved):
    norms = np.sqrt(np.sum(grid.weights[None, :] * phi * phi, axis=1))
    bad = np.flatnonzero(resolved & (residual > RESIDUAL_LIMIT * norms))
    if bad.size:
        raise ConsistencyError(
            f"G1 projection residual too large for modes {(bad + 1).tolist()}; refine the grid"
        )


def overlap_matrix(m: ModeSet) -> np.ndarray:
    """f_ij = int_0^1 phi_i(1 - xi) phi_j(xi) dxi."""
    return cross_overlap(m, m)


def cross_overlap(m_read: ModeSet, m_write: ModeSet) -> np.ndarray:
    """f_ij = int_0^1 phi_i^read(1 - xi) phi_j^write(xi) dxi on a common grid."""
    if m_read.grid != m_write.grid:
        raise ValueError("overlap needs both mode sets on the same grid")
    return _overlap(m_read.grid, m_read.phi, m_write.phi)


def _overlap(grid: UnitGrid, phi_read: np.ndarray, phi_write: np.ndarray) -> np.ndarray:
    return (phi_read[:, ::-1] * grid.weights[None, :]) @ phi_write.T


def compute_modes(c: Coupling, grid: UnitGrid, n_modes: int | None = None) -> ModeSet:
    """Eigenfunctions, (lambda, mu) pairs and overlap matrix for coupling c."""
    if n_modes is None:
        n_modes = grid.n
    if int(n_modes) != n_modes or not 1 <= n_modes <= grid.n:
        raise ValueError(f"n_modes must be in 1..{grid.n}, got {n_modes}")
    n_modes = int(n_modes)
    if not np.allclose(grid.nodes[::-1], 1.0 - grid.nodes, rtol=0, atol=1e-14):
        raise ValueError("mode computation needs a grid symmetric about 1/2")
    notes: list[str] = []

    if c.kappa == 0.0:
        phi, legendre = _legendre_coefficients(grid, n_modes)
        lam = np.zeros(n_modes)
        resolved = np.ones(n_modes, dtype=bool)
        notes.append("degenerate spectrum at kappa = 0: Legendre basis, lambda = 0, |mu| = 1")
        applied = _apply_g1_to_reversed(0.0, grid, phi, lam)
        proj = _project(grid, phi, applied, lam)
        mu = proj.mu
    else:
        legendre = None
        values, vectors, _ = jacobi_eigh(nystrom_matrix(c, grid))
        order = np.argsort(-np.abs(values), kind="stable")[:n_modes]
        lam = values[order]
        phi = _fix_signs((vectors[:, order] / np.sqrt(grid.weights)[:, None]).T)
        floor = RESOLUTION_FLOOR * abs(lam[0])
        resolved = np.abs(lam) >= floor
        applied = _apply_g1_to_reversed(c.kappa, grid, phi, lam)
        proj = _project(grid, phi, applied, lam)
        _check_residuals(grid, phi, proj.residual, resolved)
        sign = np.where(proj.mu < 0, -1.0, 1.0)
        completed = sign * np.sqrt(np.clip(1.0 - lam * lam, 0.0, None))
        mu = np.where(resolved, proj.mu, completed)
        if not np.all(resolved):
            first = int(np.flatnonzero(~resolved)[0]) + 1
            notes.append(
                f"modes {first}..{n_modes} lie below the resolution floor "
                f"(|lambda| < {RESOLUTION_FLOOR:g} |lambda_1|); mu fixed by the constraint"
            )
        if np.any(np.abs(lam) < TRUNCATION_EPS):
            notes.append("grid truncation: requested modes with |lambda| below 10 machine epsilon")

    return ModeSet(
        coupling=c,
        grid=grid,
        phi=phi,
        lam=lam,
        mu=mu,
        residual=proj.residual,
        overlap=_overlap(grid, phi, phi),
        resolved=resolved,
        warnings=tuple(notes),
        legendre=legendre,
    )
