import dataclasses

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holovolume import (
    Coupling,
    CycleConfig,
    HologramGeometry,
    ModeCoefficients,
    compose_cycle,
    compute_modes,
    cycle_report,
    full_cycle_map,
    full_cycle_matrix,
    make_gauss_legendre,
    mode_efficiency,
    noise_budget,
    one_pass_map,
)
from holovolume.cycle import beamsplitter_matrices

# frozen oracle for mode-1 total efficiency at kappa_write = 4, from the
# field-space simulation below (n = 400) and an independent scipy prototype
EFFICIENCY_4_TO = {4.0: 0.51678, 8.0: 0.72511, 16.0: 0.85088, 25.0: 0.89490}


def _fake_modes(lam, mu, n_grid=8):
    """A ModeSet with prescribed (lambda, mu) and an identity overlap."""
    base = compute_modes(Coupling(1.0), make_gauss_legendre(n_grid), len(lam))
    k = len(lam)
    return dataclasses.replace(base, lam=np.asarray(lam, float), mu=np.asarray(mu, float), overlap=np.eye(k))


def _random_coeffs(rng, n):
    return ModeCoefficients(rng.normal(size=n) + 1j * rng.normal(size=n), rng.normal(size=n) + 1j * rng.normal(size=n))


def test_ideal_mode_swaps_light_into_spin():
    m = _fake_modes([1.0], [0.0])
    out = one_pass_map(ModeCoefficients([1.0], [0.0]), m)
    assert out.light[0] == 0 and out.spin[0] == -1j


def test_kappa_zero_pass_is_field_identity(gl200):
    # mu_i = (-1)^(i-1) in the Legendre basis; reversed inputs map back onto
    # the same function in field space
    m = compute_modes(Coupling(0.0), gl200, 6)
    rng = np.random.default_rng(0)
    coeffs = rng.normal(size=6)
    out = one_pass_map(ModeCoefficients(coeffs, coeffs), m)
    field_in = coeffs @ m.phi[:, ::-1]
    assert np.allclose(out.light @ m.phi, field_in, atol=1e-12)
    assert np.allclose(out.spin @ m.phi, field_in, atol=1e-12)


def test_one_pass_unitarity(modes4, rng):
    for _ in range(1000):
        inp = _random_coeffs(rng, modes4.n_modes)
        out = one_pass_map(inp, modes4)
        e_in = np.sum(np.abs(inp.light) ** 2 + np.abs(inp.spin) ** 2)
        e_out = np.sum(np.abs(out.light) ** 2 + np.abs(out.spin) ** 2)
        assert abs(e_out - e_in) <= 1e-10 * e_in


def test_beamsplitter_determinants(modes4):
    det = np.linalg.det(beamsplitter_matrices(modes4))
    assert np.max(np.abs(np.abs(det) - 1.0)) < 1e-10


def test_length_mismatch(modes4):
    with pytest.raises(ValueError):
        one_pass_map(ModeCoefficients.vacuum(3), modes4)
    with pytest.raises(ValueError):
        ModeCoefficients([1, 2], [1])


def test_all_port_matrix_rows_unit(modes4, modes25):
    m = full_cycle_matrix(modes4, modes25)
    assert np.max(np.abs(np.sum(np.abs(m) ** 2, axis=1) - 1)) < 1e-10
    assert np.max(np.abs(m.conj().T @ m - np.eye(len(m)))) < 1e-10


def test_composition_consistency(modes4, modes25, rng):
    geo = HologramGeometry(8e-7, 1e-2, 1e-4)
    cfg = CycleConfig(Coupling(4.0), Coupling(25.0), 200, geo)
    q = (2e4, -1e4)
    args = [ModeCoefficients(c.light, c.spin, q) for c in (_random_coeffs(rng, 200) for _ in range(3))]
    a = full_cycle_map(*args, cfg, modes4, modes25)
    b = compose_cycle(*args, cfg, modes4, modes25)
    assert np.max(np.abs(a.light - b.light)) < 1e-10
    assert np.max(np.abs(a.spin - b.spin)) < 1e-10


def test_zero_in_zero_out(modes4):
    cfg = CycleConfig(Coupling(4.0), Coupling(4.0), 200)
    v = ModeCoefficients.vacuum(200)
    out = full_cycle_map(v, v, v, cfg, modes4, modes4)
    assert not np.any(out.light) and not np.any(out.spin)


def test_same_kappa_amplitudes(modes4):
    geo = HologramGeometry(8e-7, 1e-2, 1e-4)
    cfg = CycleConfig(Coupling(4.0), Coupling(4.0), 200, geo)
    q = (3e4, 0.0)
    j = 2
    light = np.zeros(200, complex)
    light[j - 1] = 1.0
    v = ModeCoefficients.vacuum(200, q)
    out = full_cycle_map(ModeCoefficients.light_only(light, q), v, v, cfg, modes4, modes4)
    phase = np.exp(-0.5j * (q[0] ** 2) * geo.cell_length / geo.k0)
    want = -phase * modes4.lam * modes4.lam[j - 1] * modes4.overlap[:, j - 1]
    assert np.allclose(out.light, want, atol=1e-14)


def test_size_and_coupling_checks(modes4, modes25):
    v = ModeCoefficients.vacuum(200)
    with pytest.raises(ValueError):
        full_cycle_map(v, v, v, CycleConfig(Coupling(4.0), Coupling(25.0), 100), modes4, modes25)
    with pytest.raises(ValueError):
        full_cycle_map(v, v, v, CycleConfig(Coupling(4.0), Coupling(8.0), 200), modes4, modes25)
    with pytest.raises(ValueError):
        CycleConfig(Coupling(1.0), Coupling(1.0), 0)


def test_efficiency_bounds_and_ideal_limit(modes4):
    e = mode_efficiency(1, modes4, modes4)
    assert e.diagonal <= e.total <= 1.0
    ideal = _fake_modes([1.0, 1.0], [0.0, 0.0])
    e = mode_efficiency(2, ideal, ideal)
    assert e.diagonal == e.total == 1.0
    with pytest.raises(ValueError):
        mode_efficiency(0, modes4, modes4)


def test_efficiency_grid_convergence(modes4):
    m300 = compute_modes(Coupling(4.0), make_gauss_legendre(300))
    a = mode_efficiency(1, modes4, modes4).total
    b = mode_efficiency(1, m300, m300).total
    assert abs(a - b) < 1e-6


def test_monotone_in_read_coupling(modes4, gl200):
    totals = []
    for kr in sorted(EFFICIENCY_4_TO):
        m_r = compute_modes(Coupling(kr), gl200)
        totals.append(mode_efficiency(1, modes4, m_r).total)
    assert np.all(np.diff(totals) >= 0)
    assert np.allclose(totals, [EFFICIENCY_4_TO[k] for k in sorted(EFFICIENCY_4_TO)], atol=2e-5)


def _staggered_pass(a_in, b_in, kappa):
    """Cell-centred implicit midpoint sweep, independent of the package solvers."""
    n = len(a_in)
    s = 0.25 * kappa / n
    det = 1 + s * s
    a = np.array(a_in, complex)
    b = np.array(b_in, complex)
    for i in range(n):
        bb = b[i]
        for j in range(n):
            r1 = a[j] - 1j * s * bb
            r2 = bb - 1j * s * a[j]
            a[j] = (r1 - 1j * s * r2) / det
            bb = (r2 - 1j * s * r1) / det
        b[i] = bb
    return a, b


def test_efficiency_matches_field_simulation(modes4, modes25):
    n = 400
    mid = (np.arange(n) + 0.5) / n
    a_in = modes4.evaluate(1, 1.0 - mid)
    _, stored = _staggered_pass(a_in, np.zeros(n), 4.0)
    out, _ = _staggered_pass(np.zeros(n), stored, 25.0)
    field = np.sum(np.abs(out) ** 2) / np.sum(np.abs(a_in) ** 2)
    assert field == pytest.approx(mode_efficiency(1, modes4, modes25).total, abs=5e-4)


@settings(max_examples=20, deadline=None)
@given(st.floats(-1e5, 1e5), st.floats(-1e5, 1e5))
def test_prefactor_is_pure_phase(qx, qy):
    m = _fake_modes([0.9, 0.3], [np.sqrt(1 - 0.81), np.sqrt(1 - 0.09)])
    geo = HologramGeometry(8e-7, 1e-2, 1e-4)
    cfg = CycleConfig(Coupling(1.0), Coupling(1.0), 2, geo)
    w = ModeCoefficients([1.0, 0.5j], [0.2, 0.0], (qx, qy))
    ref = full_cycle_map(ModeCoefficients([1.0, 0.5j], [0.2, 0.0]), w, w, cfg, m, m)
    out = full_cycle_map(w, w, w, cfg, m, m)
    assert np.sum(np.abs(out.light) ** 2) == pytest.approx(np.sum(np.abs(ref.light) ** 2), abs=1e-12)


def test_noise_budget(modes4, modes25, gl200):
    nb = noise_budget(1, modes4, modes25)
    assert nb.vacuum_admixture == pytest.approx(1 - nb.signal_gain2)
    assert abs(nb.output_vacuum_level - 1) < 1e-10 and nb.max_row_defect < 1e-10
    m0 = compute_modes(Coupling(0.0), gl200, 4)
    nb0 = noise_budget(1, m0, m0)
    assert nb0.signal_gain2 == 0 and nb0.vacuum_admixture == 1
    ideal = _fake_modes([1.0], [0.0])
    assert noise_budget(1, ideal, ideal).vacuum_admixture == 0


def test_cycle_report_keys(modes4, modes25):
    cfg = CycleConfig(Coupling(4.0), Coupling(25.0), 200)
    rep = cycle_report(cfg, modes4, modes25)
    assert set(rep) == {"kappa_write", "kappa_read", "mode_index", "diagonal_efficiency",
                        "total_efficiency", "vacuum_admixture", "prefactor_phase"}
    assert rep["prefactor_phase"] == 0.0
    assert rep["total_efficiency"] == pytest.approx(EFFICIENCY_4_TO[25.0], abs=2e-5)
