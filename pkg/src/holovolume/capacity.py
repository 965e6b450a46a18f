"""Transverse-mode capacity of thin and volume holograms, and the paraxial phase."""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

import numpy as np

PARAXIAL_LIMITED = "paraxial-limited"
GEOMETRY_LIMITED = "geometry-limited"


@dataclass(frozen=True)
class HologramGeometry:
    """Sample geometry in SI units; epsilon is the paraxial small parameter."""

    wavelength: float
    cell_length: float
    cross_section: float
    epsilon: float = 0.1

    def __post_init__(self):
        for name in ("wavelength", "cell_length", "cross_section"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be positive, got {v}")
        if not (0 < self.epsilon <= 0.5):
            raise ValueError(f"epsilon must lie in (0, 0.5], got {self.epsilon}")

    @property
    def k0(self) -> float:
        return 2.0 * math.pi / self.wavelength

    def mode_cap(self) -> float:
        """4 S / lambda^2, the number of propagating transverse plane waves."""
        return 4.0 * self.cross_section / self.wavelength**2


@dataclass(frozen=True)
class VolumeCapacity:
    value: float
    regime: str


def fresnel_number(g: HologramGeometry) -> float:
    return g.cross_section / (g.wavelength * g.cell_length)


def _capped(value: float, g: HologramGeometry) -> float:
    cap = g.mode_cap()
    if value > cap:
        warnings.warn(
            f"capacity estimate {value:.6g} exceeds the propagating-mode bound 4S/lambda^2 = {cap:.6g}",
            RuntimeWarning,
            stacklevel=3,
        )
    return value


def capacity_thin(g: HologramGeometry) -> float:
    """Diffraction-limited mode count of a thin hologram: the Fresnel number."""
    return _capped(fresnel_number(g), g)


def capacity_volume(g: HologramGeometry) -> VolumeCapacity:
    """min(eps^2 S / lambda^2, F_N^2) and which of the two limits applies."""
    paraxial = g.epsilon**2 * g.cross_section / g.wavelength**2
    geometric = fresnel_number(g) ** 2
    if paraxial <= geometric:
        return VolumeCapacity(_capped(paraxial, g), PARAXIAL_LIMITED)
    return VolumeCapacity(_capped(geometric, g), GEOMETRY_LIMITED)


def diffraction_phase(q, z: float, g: HologramGeometry) -> complex:
    """exp(-i |q|^2 z / (2 k0)) for a transverse wavevector q (scalar or 2-vector, rad/m)."""
    qv = np.atleast_1d(np.asarray(q, dtype=float))
    q2 = float(np.dot(qv, qv))
    qabs = math.sqrt(q2)
    if qabs >= g.k0:
        raise ValueError(f"|q| = {qabs:.6g} rad/m is not below 2 pi / lambda = {g.k0:.6g}")
    if qabs >= g.epsilon * g.k0:
        warnings.warn("|q| exceeds epsilon * k0; paraxial approximation questionable", RuntimeWarning, stacklevel=2)
    return cmath.exp(-0.5j * q2 * z / g.k0)


def capacity_report(g: HologramGeometry) -> dict:
    vol = capacity_volume(g)
    return {
        "wavelength": g.wavelength,
        "L": g.cell_length,
        "S": g.cross_section,
        "epsilon": g.epsilon,
        "fresnel_number": fresnel_number(g),
        "capacity_thin": capacity_thin(g),
        "capacity_volume": vol.value,
        "regime": vol.regime,
    }
