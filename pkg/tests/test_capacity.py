import math
import warnings

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from holovolume import HologramGeometry, capacity_report, capacity_thin, capacity_volume, diffraction_phase, fresnel_number
from holovolume.capacity import GEOMETRY_LIMITED, PARAXIAL_LIMITED

REF = HologramGeometry(800e-9, 1e-2, 1e-4, 0.1)

geometries = st.builds(
    HologramGeometry,
    st.floats(1e-7, 1e-5),
    st.floats(1e-4, 1e-1),
    st.floats(1e-8, 1e-3),
    st.floats(0.01, 0.5),
)


def test_reference_numbers():
    assert fresnel_number(REF) == pytest.approx(12500, rel=1e-12)
    assert capacity_thin(REF) == pytest.approx(12500, rel=1e-12)
    vol = capacity_volume(REF)
    assert vol.value == pytest.approx(1.5625e6, rel=1e-12)
    assert vol.regime == PARAXIAL_LIMITED


def test_fresnel_scaling():
    g = HologramGeometry(1e-6, 2e-3, 2e-9)
    assert fresnel_number(g) == pytest.approx(1.0)
    assert fresnel_number(HologramGeometry(1e-6, 4e-3, 2e-9)) == pytest.approx(0.5)
    assert capacity_thin(HologramGeometry(1e-6, 2e-3, 4e-9)) == pytest.approx(2.0)


def test_validation():
    for args in ((0, 1, 1), (1e-6, -1, 1), (1e-6, 1, math.nan)):
        with pytest.raises(ValueError):
            HologramGeometry(*args)
    with pytest.raises(ValueError):
        HologramGeometry(1e-6, 1, 1, epsilon=0.6)


@given(geometries)
def test_k0(g):
    assert abs(g.k0 * g.wavelength - 2 * math.pi) < 1e-12


@given(geometries)
def test_volume_bounds_and_regime(g):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        vol = capacity_volume(g)
    par = g.epsilon**2 * g.cross_section / g.wavelength**2
    geo = fresnel_number(g) ** 2
    assert vol.value <= par * (1 + 1e-12) and vol.value <= geo * (1 + 1e-12)
    assert vol.regime == (PARAXIAL_LIMITED if par <= geo else GEOMETRY_LIMITED)


@given(st.floats(1e-7, 1e-5), st.floats(1e-3, 1e-1), st.floats(0.01, 0.5))
def test_regime_boundary(wl, length, eps):
    g = HologramGeometry(wl, length, (eps * length) ** 2, eps)
    a = g.epsilon**2 * g.cross_section / g.wavelength**2
    b = fresnel_number(g) ** 2
    assert abs(a - b) <= 1e-12 * a


def test_cap_warning():
    # very thin, wide sample: F_N^2 and eps^2 S / lambda^2 both below the cap,
    # but F_N itself exceeds 4 S / lambda^2 when L < lambda / 4
    g = HologramGeometry(1e-6, 1e-7, 1e-6)
    with pytest.warns(RuntimeWarning):
        capacity_thin(g)


def test_diffraction_phase():
    assert diffraction_phase(0.0, 1.0, REF) == 1
    q = math.sqrt(2 * REF.k0 * math.pi / REF.cell_length)
    assert diffraction_phase(q, REF.cell_length, REF) == pytest.approx(-1, abs=1e-12)
    with pytest.raises(ValueError):
        diffraction_phase(REF.k0, 1.0, REF)
    with pytest.warns(RuntimeWarning):
        diffraction_phase(0.2 * REF.k0, 1.0, REF)


@given(st.floats(0, 1e5), st.floats(0, 1e5), st.floats(0, 1e-2), st.floats(0, 1e-2))
def test_phase_additive_and_unimodular(qx, qy, z1, z2):
    q = (qx, qy)
    p1, p2, p12 = (diffraction_phase(q, z, REF) for z in (z1, z2, z1 + z2))
    assert abs(abs(p1) - 1) < 1e-15
    assert abs(p1 * p2 - p12) < 1e-12


def test_report_keys():
    rep = capacity_report(REF)
    assert list(rep) == ["wavelength", "L", "S", "epsilon", "fresnel_number", "capacity_thin", "capacity_volume", "regime"]
