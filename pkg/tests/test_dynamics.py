import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holovolume import (
    BoundaryData,
    Coupling,
    compute_modes,
    excitation_balance,
    greens_solution,
    integrate_characteristics,
    make_gauss_legendre,
    make_trapezoid,
)
from holovolume.io import read_csv
from holovolume.verify import random_smooth


def _boundary(n, seed):
    rng = np.random.default_rng(seed)
    x = make_trapezoid(n).nodes
    return BoundaryData.uniform(n, random_smooth(rng)(x), random_smooth(rng)(x))


def test_zero_coupling_is_transport():
    b = _boundary(64, 1)
    f = integrate_characteristics(b, Coupling(0.0))
    assert np.array_equal(f.alpha_out, b.alpha_in)
    assert np.array_equal(f.beta_out, b.beta_in)
    g = greens_solution(b, Coupling(0.0))
    assert np.allclose(g.alpha_out, b.alpha_in) and np.allclose(g.beta_out, b.beta_in)


def test_constant_inputs_closed_form():
    # alpha_in = 1, beta_in = 0: beta(0, tau) = -i (kappa/2) tau exactly, and the
    # solution along xi = 1 is J0(kappa sqrt(tau)) for the light
    k = 2.0
    n = 401
    b = BoundaryData.uniform(n, np.ones(n), np.zeros(n))
    f = integrate_characteristics(b, Coupling(k))
    tau = b.grid_tau.nodes
    assert np.allclose(f.beta[0, :], -0.5j * k * tau, atol=1e-12)
    from holovolume.specfun import bessel_j0

    assert np.max(np.abs(f.alpha_out - bessel_j0(k * np.sqrt(tau)))) < 1e-5


@settings(max_examples=10, deadline=None)
@given(st.floats(-2, 2), st.floats(-2, 2))
def test_linearity(a, c):
    b1, b2 = _boundary(48, 2), _boundary(48, 3)
    comb = BoundaryData(b1.grid_xi, b1.grid_tau, a * b1.alpha_in + c * b2.alpha_in, a * b1.beta_in + c * b2.beta_in)
    k = Coupling(3.0)
    f1, f2, f = (integrate_characteristics(x, k) for x in (b1, b2, comb))
    assert np.allclose(f.alpha, a * f1.alpha + c * f2.alpha, atol=1e-12)
    assert np.allclose(f.beta, a * f1.beta + c * f2.beta, atol=1e-12)


@pytest.mark.parametrize("kappa,tol", [(1.0, 1e-6), (4.0, 1e-4), (8.0, 1e-3)])
def test_two_solvers_agree(kappa, tol):
    b = _boundary(400, 7)
    c = Coupling(kappa)
    ref = integrate_characteristics(b, c)
    gr = greens_solution(b, c, probe_xi=(100, 250))
    mask = ~np.isnan(gr.alpha)
    scale = np.max(np.abs(ref.alpha[mask]))
    assert np.max(np.abs(gr.alpha[mask] - ref.alpha[mask])) / scale < tol
    assert np.max(np.abs(gr.beta[mask] - ref.beta[mask])) / scale < tol


def test_greens_full_matches_faces():
    b = _boundary(40, 9)
    c = Coupling(4.0)
    full = greens_solution(b, c, full=True)
    faces = greens_solution(b, c)
    assert not np.any(np.isnan(full.alpha))
    mask = ~np.isnan(faces.alpha)
    assert np.allclose(full.alpha[mask], faces.alpha[mask], atol=1e-12)
    with pytest.raises(ValueError):
        greens_solution(b, c, probe_xi=(40,))


def test_second_order_convergence():
    k = Coupling(4.0)
    rng = np.random.default_rng(11)
    fa, fb = random_smooth(rng), random_smooth(rng)
    outs = {}
    for n in (101, 201, 401):
        x = make_trapezoid(n).nodes
        outs[n] = integrate_characteristics(BoundaryData.uniform(n, fa(x), fb(x)), k).alpha_out
    e1 = np.max(np.abs(outs[101] - outs[401][::4]))
    e2 = np.max(np.abs(outs[201] - outs[401][::2]))
    assert 4.0 < e1 / e2 < 6.0  # Richardson: (4 - 1/4) / (1 - 1/4) = 5


def test_conservation():
    f = integrate_characteristics(_boundary(400, 5), Coupling(4.0))
    bal = excitation_balance(f)
    assert bal.defect < 1e-4
    assert bal.in_total > 0


def test_eigenmode_input_gives_beamsplitter_outputs():
    c = Coupling(4.0)
    m = compute_modes(c, make_gauss_legendre(200), 3)
    u = make_trapezoid(400)
    rev = m.evaluate(1, 1.0 - u.nodes)
    f = integrate_characteristics(BoundaryData(u, u, rev, np.zeros(400)), c)
    phi = m.evaluate(1, u.nodes)
    assert np.max(np.abs(f.alpha_out - m.mu[0] * phi)) < 1e-3
    assert np.max(np.abs(f.beta_out + 1j * m.lam[0] * phi)) < 1e-3


def test_shape_and_grid_errors():
    g = make_trapezoid(10)
    with pytest.raises(ValueError):
        BoundaryData(g, g, np.zeros(9), np.zeros(10))
    gl = make_gauss_legendre(10)
    with pytest.raises(ValueError):
        integrate_characteristics(BoundaryData(gl, gl, np.zeros(10), np.zeros(10)), Coupling(1.0))


def test_csv_and_json_export(tmp_path):
    f = integrate_characteristics(_boundary(6, 4), Coupling(1.0))
    f.to_csv(tmp_path / "f.csv")
    header, rows = read_csv(tmp_path / "f.csv")
    assert header == ["xi", "tau", "re_alpha", "im_alpha", "re_beta", "im_beta"]
    assert len(rows) == 36
    # 17 significant digits round-trip exactly
    assert complex(float(rows[7][2]), float(rows[7][3])) == f.alpha[1, 1]
    assert (tmp_path / "f.csv").read_bytes().count(b"\r\n") == 37
    doc = json.loads(f.to_json())
    assert doc["alpha_out"]["re"] == np.real(f.alpha_out).tolist()
    assert doc["balance"]["defect"] == excitation_balance(f).defect
