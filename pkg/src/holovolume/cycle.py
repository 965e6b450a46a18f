"""Mode-space input/output maps of the write and readout passes.

One pass couples light mode i and spin mode i through the beamsplitter

    [alpha_out]   [ mu_i      -i lambda_i ] [alpha_in]
    [beta_out ] = [-i lambda_i  mu_i      ] [beta_in ]

where inputs are expanded in reversed eigenfunctions phi_i(1 - x) and
outputs in phi_i(x).  Between write and readout the stored spin wave is
re-expanded in the readout basis with the overlap matrix
f_ij = int phi_i^read(1 - xi) phi_j^write(xi) dxi.

The readout pass uses the readout mode set's (lambda, mu) throughout; with
equal couplings this is the shared-basis formula.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .capacity import HologramGeometry, diffraction_phase
from .eigenmodes import ModeSet, cross_overlap
from .kernels import Coupling


@dataclass(frozen=True, eq=False)
class ModeCoefficients:
    """Light and spin amplitudes per eigenmode for one transverse wavevector q (rad/m)."""

    light: np.ndarray
    spin: np.ndarray
    q: np.ndarray = field(default_factory=lambda: np.zeros(2))

    def __post_init__(self):
        light = np.atleast_1d(np.asarray(self.light, dtype=complex))
        spin = np.atleast_1d(np.asarray(self.spin, dtype=complex))
        if light.shape != spin.shape or light.ndim != 1:
            raise ValueError(f"light and spin need equal 1-d lengths, got {light.shape} and {spin.shape}")
        q = np.asarray(self.q, dtype=float).reshape(2)
        object.__setattr__(self, "light", light)
        object.__setattr__(self, "spin", spin)
        object.__setattr__(self, "q", q)

    @property
    def n_modes(self) -> int:
        return len(self.light)

    @classmethod
    def vacuum(cls, n_modes: int, q=(0.0, 0.0)) -> "ModeCoefficients":
        return cls(np.zeros(n_modes), np.zeros(n_modes), q)

    @classmethod
    def light_only(cls, light, q=(0.0, 0.0)) -> "ModeCoefficients":
        light = np.asarray(light, dtype=complex)
        return cls(light, np.zeros_like(light), q)

    @classmethod
    def spin_only(cls, spin, q=(0.0, 0.0)) -> "ModeCoefficients":
        spin = np.asarray(spin, dtype=complex)
        return cls(np.zeros_like(spin), spin, q)


@dataclass(frozen=True)
class CycleConfig:
    kappa_write: Coupling
    kappa_read: Coupling
    n_modes: int
    geometry: HologramGeometry | None = None

    def __post_init__(self):
        if int(self.n_modes) != self.n_modes or self.n_modes < 1:
            raise ValueError(f"n_modes must be >= 1, got {self.n_modes}")


def _check_size(name: str, coeffs: ModeCoefficients, n: int) -> None:
    if coeffs.n_modes != n:
        raise ValueError(f"{name} has {coeffs.n_modes} modes, basis has {n}")


def beamsplitter_matrices(m: ModeSet) -> np.ndarray:
    """Per-mode 2x2 one-pass matrices, shape (n_modes, 2, 2)."""
    out = np.empty((m.n_modes, 2, 2), dtype=complex)
    out[:, 0, 0] = m.mu
    out[:, 0, 1] = -1j * m.lam
    out[:, 1, 0] = -1j * m.lam
    out[:, 1, 1] = m.mu
    return out


def one_pass_map(inp: ModeCoefficients, m: ModeSet) -> ModeCoefficients:
    _check_size("input", inp, m.n_modes)
    light = m.mu * inp.light - 1j * m.lam * inp.spin
    spin = -1j * m.lam * inp.light + m.mu * inp.spin
    return ModeCoefficients(light, spin, inp.q)


def readout_overlap(m_write: ModeSet, m_read: ModeSet) -> np.ndarray:
    """Overlap used to hand the stored spin wave to the readout basis."""
    if m_read is m_write or (m_read.kappa == m_write.kappa and m_read.grid == m_write.grid):
        return m_write.overlap
    return cross_overlap(m_read, m_write)


def cycle_prefactor(cfg: CycleConfig, q) -> complex:
    """Free-space diffraction phase accumulated over the cell, or 1 without geometry."""
    if cfg.geometry is None:
        return 1.0 + 0.0j
    return diffraction_phase(q, cfg.geometry.cell_length, cfg.geometry)


def _check_cycle(cfg: CycleConfig, m_w: ModeSet, m_r: ModeSet, *coeffs: ModeCoefficients) -> None:
    if m_w.kappa != cfg.kappa_write.kappa or m_r.kappa != cfg.kappa_read.kappa:
        raise ValueError("mode sets do not match the configured couplings")
    for name, m in (("write", m_w), ("read", m_r)):
        if m.n_modes != cfg.n_modes:
            raise ValueError(f"{name} mode set has {m.n_modes} modes, config asks for {cfg.n_modes}")
    for i, c in enumerate(coeffs):
        _check_size(f"input {i}", c, cfg.n_modes)


def full_cycle_map(
    light_write: ModeCoefficients,
    spin_initial: ModeCoefficients,
    light_read_in: ModeCoefficients,
    cfg: CycleConfig,
    m_w: ModeSet,
    m_r: ModeSet,
) -> ModeCoefficients:
    """Readout light (and final spin) after a complete write/readout cycle.

    Light amplitudes come from ``.light`` of the first and third arguments,
    the initial spin wave from ``.spin`` of the second.  The returned light
    carries the diffraction prefactor exp(-i q^2 L / 2 k0) when a geometry is
    configured; the returned spin is in the phase-compensated frame.
    """
    _check_cycle(cfg, m_w, m_r, light_write, spin_initial, light_read_in)
    f = readout_overlap(m_w, m_r)
    stored = m_w.mu * spin_initial.spin - 1j * m_w.lam * light_write.light
    handed = f @ stored
    a_r = light_read_in.light
    light = cycle_prefactor(cfg, light_write.q) * (m_r.mu * a_r - 1j * m_r.lam * handed)
    spin = -1j * m_r.lam * a_r + m_r.mu * handed
    return ModeCoefficients(light, spin, light_write.q)


def compose_cycle(
    light_write: ModeCoefficients,
    spin_initial: ModeCoefficients,
    light_read_in: ModeCoefficients,
    cfg: CycleConfig,
    m_w: ModeSet,
    m_r: ModeSet,
) -> ModeCoefficients:
    """The same cycle built from two one-pass maps and an explicit basis change."""
    _check_cycle(cfg, m_w, m_r, light_write, spin_initial, light_read_in)
    written = one_pass_map(ModeCoefficients(light_write.light, spin_initial.spin, light_write.q), m_w)
    handed = readout_overlap(m_w, m_r) @ written.spin
    read = one_pass_map(ModeCoefficients(light_read_in.light, handed, light_write.q), m_r)
    return ModeCoefficients(cycle_prefactor(cfg, light_write.q) * read.light, read.spin, light_write.q)


def full_cycle_matrix(m_w: ModeSet, m_r: ModeSet) -> np.ndarray:
    """Linear map of the whole cycle over all ports, prefactor omitted.

    Columns: write light in, initial spin, readout light in.
    Rows: write light out, readout light out, final spin.
    Each block is n_modes wide.
    """
    n = m_w.n_modes
    if m_r.n_modes != n:
        raise ValueError("write and read mode sets differ in size")
    f = readout_overlap(m_w, m_r)
    z = np.zeros((n, n), dtype=complex)
    eye = np.eye(n)
    write_light = np.hstack([np.diag(m_w.mu), np.diag(-1j * m_w.lam), z])
    stored = np.hstack([np.diag(-1j * m_w.lam), np.diag(m_w.mu), z])
    handed = f @ stored
    read_in = np.hstack([z, z, eye])
    read_light = np.diag(m_r.mu) @ read_in - 1j * np.diag(m_r.lam) @ handed
    final_spin = -1j * np.diag(m_r.lam) @ read_in + np.diag(m_r.mu) @ handed
    return np.vstack([write_light, read_light, final_spin])


@dataclass(frozen=True)
class Efficiency:
    diagonal: float
    total: float


def mode_efficiency(j: int, m_w: ModeSet, m_r: ModeSet) -> Efficiency:
    """Retrieved fraction of the mean-field energy written into mode j (1-based).

    ``diagonal`` counts only readout mode j, ``total`` every readout mode.
    """
    if int(j) != j or not 1 <= j <= m_w.n_modes:
        raise ValueError(f"mode index must be in 1..{m_w.n_modes}, got {j}")
    col = int(j) - 1
    f = readout_overlap(m_w, m_r)
    amp = m_r.lam * m_w.lam[col] * f[:, col]
    total = float(np.sum(np.abs(amp) ** 2))
    diagonal = float(abs(amp[col]) ** 2) if col < m_r.n_modes else 0.0
    return Efficiency(diagonal=diagonal, total=total)


@dataclass(frozen=True)
class NoiseBudget:
    signal_gain2: float
    vacuum_admixture: float
    # output noise of readout mode j with every input port in vacuum, in vacuum units
    output_vacuum_level: float
    max_row_defect: float


def noise_budget(j: int, m_w: ModeSet, m_r: ModeSet) -> NoiseBudget:
    """Signal transfer and vacuum admixture of readout mode j.

    Because the cycle is a passive linear map, vacuum in every port gives
    vacuum at every output exactly when each output row of the all-port
    matrix has unit norm; ``max_row_defect`` reports the worst deviation.
    """
    eff = mode_efficiency(j, m_w, m_r)
    rows = np.sum(np.abs(full_cycle_matrix(m_w, m_r)) ** 2, axis=1)
    n = m_w.n_modes
    return NoiseBudget(
        signal_gain2=eff.total,
        vacuum_admixture=1.0 - eff.total,
        output_vacuum_level=float(rows[n + int(j) - 1]),
        max_row_defect=float(np.max(np.abs(rows - 1.0))),
    )


def cycle_report(cfg: CycleConfig, m_w: ModeSet, m_r: ModeSet, mode: int = 1, q=(0.0, 0.0)) -> dict:
    eff = mode_efficiency(mode, m_w, m_r)
    phase = cmath.phase(cycle_prefactor(cfg, q))
    return {
        "kappa_write": m_w.kappa,
        "kappa_read": m_r.kappa,
        "mode_index": int(mode),
        "diagonal_efficiency": eff.diagonal,
        "total_efficiency": eff.total,
        "vacuum_admixture": 1.0 - eff.total,
        "prefactor_phase": phase,
    }
