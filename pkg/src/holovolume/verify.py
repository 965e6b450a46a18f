"""Self-verification suite: the numbered acceptance checks and a JSON report.

Each check returns a :class:`CheckResult`.  ``tolerance_scale`` multiplies
every numeric tolerance (not the runtime budget or the convergence-ratio
band), so a scale of 0 forces every check with a nonzero error to fail.
"""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .capacity import HologramGeometry, capacity_thin, capacity_volume, fresnel_number
from .cycle import ModeCoefficients, full_cycle_matrix, mode_efficiency, one_pass_map
from .dynamics import BoundaryData, excitation_balance, greens_solution, integrate_characteristics
from .eigenmodes import ModeSet, compute_modes, mu_from_g1
from .kernels import Coupling
from .quadrature import make_gauss_legendre, make_trapezoid

SEED = 20240611
LEADING_LAMBDAS = (0.988, -0.518, 0.043)
EFFICIENCY_TARGET = 0.95
EFFICIENCY_FLAG_BAND = (0.90, 0.95)


@dataclass
class CheckResult:
    id: int
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str
    flagged: bool = False


class _Cache:
    """Mode sets shared between checks within one run."""

    def __init__(self):
        self._modes: dict[tuple, ModeSet] = {}

    def modes(self, kappa: float, n: int, n_modes: int | None = None) -> ModeSet:
        key = (kappa, n, n_modes)
        if key not in self._modes:
            self._modes[key] = compute_modes(Coupling(kappa), make_gauss_legendre(n), n_modes)
        return self._modes[key]


def random_smooth(rng: np.random.Generator, terms: int = 5):
    """A random smooth complex profile on [0, 1]: low cosines with decaying weights."""
    k = np.arange(terms)
    amp = (rng.normal(size=terms) + 1j * rng.normal(size=terms)) / (1.0 + k) ** 2
    phase = rng.uniform(0, 2 * math.pi, size=terms)

    def profile(x):
        return np.cos(np.multiply.outer(x, k * math.pi) + phase) @ amp

    return profile


def sign_changes(samples: np.ndarray, rel_floor: float = 1e-8) -> int:
    s = samples[np.abs(samples) > rel_floor * np.max(np.abs(samples))]
    return int(np.count_nonzero(np.signbit(s[1:]) != np.signbit(s[:-1])))


def check_leading_eigenvalues(cache: _Cache, scale: float) -> CheckResult:
    t0 = time.perf_counter()
    m = compute_modes(Coupling(4.0), make_gauss_legendre(200), 3)
    elapsed = time.perf_counter() - t0
    cache._modes[(4.0, 200, 3)] = m
    err = float(np.max(np.abs(m.lam - np.array(LEADING_LAMBDAS))))
    tol = 0.01 * scale
    lam = ", ".join(f"{v:.6f}" for v in m.lam)
    return CheckResult(
        1, "leading_eigenvalues", bool(err <= tol and elapsed < 5.0), err, tol,
        f"lambda_1..3 = {lam}; runtime {elapsed:.2f} s (limit 5 s)",
    )


def check_constraint(cache: _Cache, scale: float) -> CheckResult:
    worst_defect = 0.0
    worst_residual = 0.0
    for kappa in (0.5, 1.0, 2.0, 4.0, 8.0):
        m = cache.modes(kappa, 200, 5)
        proj = mu_from_g1(m)
        worst_defect = max(worst_defect, float(np.max(np.abs(m.lam**2 + proj.mu**2 - 1.0))))
        worst_residual = max(worst_residual, float(np.max(proj.residual)))
    tol = 1e-6 * scale
    return CheckResult(
        2, "eigenvalue_constraint", bool(worst_defect <= tol and worst_residual <= 1e-3 * scale),
        worst_defect, tol, f"max |lambda^2 + mu^2 - 1| over 5 modes x 5 kappas; max residual {worst_residual:.3g}",
    )


def _face_error(n: int, kappa: float, alpha_in, beta_in) -> float:
    b = BoundaryData.uniform(n, alpha_in, beta_in)
    c = Coupling(kappa)
    ref = integrate_characteristics(b, c)
    gr = greens_solution(b, c)
    mask = ~np.isnan(gr.alpha)
    scale = max(np.max(np.abs(ref.alpha[mask])), np.max(np.abs(ref.beta[mask])))
    diff = max(np.max(np.abs(gr.alpha[mask] - ref.alpha[mask])), np.max(np.abs(gr.beta[mask] - ref.beta[mask])))
    return float(diff / scale)


def check_oracles(cache: _Cache, scale: float) -> CheckResult:
    rng = np.random.default_rng(SEED)
    worst = 0.0
    ratios = []
    for kappa in (1.0, 4.0):
        for _ in range(10):
            fa, fb = random_smooth(rng), random_smooth(rng)
            errs = []
            for n in (200, 400):
                x = make_trapezoid(n).nodes
                errs.append(_face_error(n, kappa, fa(x), fb(x)))
            worst = max(worst, errs[1])
            ratios.append(errs[0] / errs[1])
    tol = 1e-3 * scale
    lo, hi = min(ratios), max(ratios)
    return CheckResult(
        3, "oracle_equivalence", bool(worst <= tol and lo >= 3.0 and hi <= 5.0), worst, tol,
        f"max relative L-inf gap at n=400; error ratio n=200/n=400 in [{lo:.3f}, {hi:.3f}] (band [3, 5])",
    )


def check_conservation(cache: _Cache, scale: float) -> CheckResult:
    rng = np.random.default_rng(SEED + 4)
    x = make_trapezoid(400).nodes
    worst = 0.0
    for _ in range(10):
        b = BoundaryData.uniform(400, random_smooth(rng)(x), random_smooth(rng)(x))
        worst = max(worst, excitation_balance(integrate_characteristics(b, Coupling(4.0))).defect)
    tol = 1e-4 * scale
    return CheckResult(4, "conservation", bool(worst <= tol), worst, tol, "max relative excitation defect, kappa=4, n=400")


def check_unitarity(cache: _Cache, scale: float) -> CheckResult:
    rng = np.random.default_rng(SEED + 5)
    m_w = cache.modes(4.0, 200)
    m_r = cache.modes(25.0, 200)
    worst_pass = 0.0
    for _ in range(1000):
        n = m_w.n_modes
        inp = ModeCoefficients(rng.normal(size=n) + 1j * rng.normal(size=n), rng.normal(size=n) + 1j * rng.normal(size=n))
        out = one_pass_map(inp, m_w)
        e_in = np.sum(np.abs(inp.light) ** 2 + np.abs(inp.spin) ** 2)
        e_out = np.sum(np.abs(out.light) ** 2 + np.abs(out.spin) ** 2)
        worst_pass = max(worst_pass, float(abs(e_out - e_in) / e_in))
    rows = np.sum(np.abs(full_cycle_matrix(m_w, m_r)) ** 2, axis=1)
    worst_rows = float(np.max(np.abs(rows - 1.0)))
    tol = 1e-10 * scale
    return CheckResult(
        5, "unitarity", bool(worst_pass <= tol and worst_rows <= tol), max(worst_pass, worst_rows), tol,
        f"one-pass norm defect {worst_pass:.3g} over 1000 vectors (kappa=4); "
        f"full-cycle row-norm defect {worst_rows:.3g} (kappa 4 -> 25, all {m_w.n_modes} modes, n=200)",
    )


def check_efficiency(cache: _Cache, scale: float) -> CheckResult:
    eff = mode_efficiency(1, cache.modes(4.0, 200), cache.modes(25.0, 200))
    target = EFFICIENCY_TARGET
    passed = eff.total >= target
    flagged = EFFICIENCY_FLAG_BAND[0] <= eff.total < EFFICIENCY_FLAG_BAND[1]
    detail = f"measured total efficiency {eff.total:.6f} (diagonal {eff.diagonal:.6f}) for mode 1, kappa_write=4, kappa_read=25"
    if flagged:
        detail += "; within [0.90, 0.95): readout-basis reprojection interpretation question flagged"
    elif eff.total < EFFICIENCY_FLAG_BAND[0]:
        detail += "; below the 0.90 flag band"
    return CheckResult(6, "efficiency_claim", bool(passed), eff.total, target, detail, flagged)


def check_capacity(cache: _Cache, scale: float) -> CheckResult:
    rng = np.random.default_rng(SEED + 7)
    worst = 0.0
    for _ in range(200):
        wl = 10 ** rng.uniform(-7, -5)
        length = 10 ** rng.uniform(-4, -1)
        s = 10 ** rng.uniform(-8, -3)
        eps = rng.uniform(0.01, 0.5)
        g = HologramGeometry(wl, length, s, eps)
        fn = s / (wl * length)
        # independent evaluation order
        paraxial = (eps / wl) ** 2 * s
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            thin = capacity_thin(g)
            vol = capacity_volume(g)
        worst = max(worst, abs(thin - fn) / fn, abs(fresnel_number(g) - fn) / fn)
        worst = max(worst, abs(vol.value - min(paraxial, fn * fn)) / min(paraxial, fn * fn))
        # boundary sqrt(S)/L = eps: both branches coincide
        gb = HologramGeometry(wl, length, (eps * length) ** 2, eps)
        a = gb.epsilon**2 * gb.cross_section / gb.wavelength**2
        b = fresnel_number(gb) ** 2
        worst = max(worst, abs(a - b) / a)
    tol = 1e-12 * scale
    return CheckResult(7, "capacity_formulas", bool(worst <= tol), worst, tol, "max relative error over 200 random geometries")


def check_cross_module(cache: _Cache, scale: float) -> CheckResult:
    m = cache.modes(4.0, 200, 6)
    u = make_trapezoid(400)
    w = u.weights
    c = Coupling(4.0)
    worst = 0.0
    zero = np.zeros(u.n)
    for j in (1, 2, 3):
        phi = m.evaluate(j, u.nodes)
        rev = m.evaluate(j, 1.0 - u.nodes)
        lam, mu = m.lam[j - 1], m.mu[j - 1]
        light = integrate_characteristics(BoundaryData(u, u, rev, zero), c)
        spin = integrate_characteristics(BoundaryData(u, u, zero, rev), c)
        got = np.array([w @ (phi * light.alpha_out), w @ (phi * light.beta_out), w @ (phi * spin.alpha_out), w @ (phi * spin.beta_out)])
        want = np.array([mu, -1j * lam, -1j * lam, mu])
        worst = max(worst, float(np.max(np.abs(got - want))))
    tol = 5e-3 * scale
    return CheckResult(8, "cross_module", bool(worst <= tol), worst, tol, "max |projected - beamsplitter| over modes 1..3, kappa=4, n=400")


def check_shapes(cache: _Cache, scale: float) -> CheckResult:
    m = cache.modes(4.0, 200, 6)
    counts = [sign_changes(m.phi[i]) for i in range(3)]
    ok = counts == [0, 1, 2]
    return CheckResult(9, "eigenfunction_shape", ok, float(sum(abs(c - e) for c, e in zip(counts, (0, 1, 2)))), 0.0,
                       f"interior sign changes of phi_1..3 = {counts} (expected [0, 1, 2])")


CHECKS = (
    check_leading_eigenvalues,
    check_constraint,
    check_oracles,
    check_conservation,
    check_unitarity,
    check_efficiency,
    check_capacity,
    check_cross_module,
    check_shapes,
)


def run_checks(tolerance_scale: float = 1.0, only=None) -> list[CheckResult]:
    if not (math.isfinite(tolerance_scale) and tolerance_scale >= 0):
        raise ValueError("tolerance scale must be finite and >= 0")
    cache = _Cache()
    out = []
    for i, fn in enumerate(CHECKS, start=1):
        if only is not None and i not in only:
            continue
        out.append(fn(cache, tolerance_scale))
    return out


def report(results: list[CheckResult], tolerance_scale: float = 1.0) -> dict:
    return {
        "tolerance_scale": tolerance_scale,
        "all_passed": all(r.passed for r in results),
        "failed": [r.name for r in results if not r.passed],
        "checks": [asdict(r) for r in results],
    }
