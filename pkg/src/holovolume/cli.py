"""Command-line front end: ``holovolume <command> [options]``.

Exit codes: 0 success, 1 usage, 2 I/O, 3 numeric-consistency failure
(including a failed verification check).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import svg
from .capacity import HologramGeometry, capacity_report
from .cycle import CycleConfig, cycle_report, mode_efficiency, noise_budget
from .dynamics import BoundaryData, greens_solution, integrate_characteristics
from .eigenmodes import ConsistencyError, ModeSet, compute_modes
from .io import fmt, read_csv, write_csv, write_json
from .kernels import Coupling
from .quadrature import make_gauss_legendre, make_trapezoid
from .verify import report, run_checks

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3
MIN_GRID = 32
FORMATS = ("csv", "json", "svg")

DEFAULTS = {
    "kappa": 4.0,
    "kappa_write": 4.0,
    "kappa_read": 25.0,
    "grid_n": 200,
    "n_modes": None,
    "out": ".",
    "format": "csv,json,svg",
    "mode": 1,
    "input": "eigenmode:1",
    "spin_input": "zero",
    "solver": "characteristics",
    "wavelength": None,
    "length": None,
    "cross_section": None,
    "epsilon": 0.1,
    "q": "0,0",
    "tolerance_scale": 1.0,
    "checks": None,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_common(p: argparse.ArgumentParser) -> None:
    # every option defaults to None so config-file values survive unless overridden
    p.add_argument("--config", help="flat JSON document with option values")
    p.add_argument("--kappa", help="coupling constant (modes, dynamics)")
    p.add_argument("--kappa-write", help="write coupling; comma list for sweep")
    p.add_argument("--kappa-read", help="readout coupling; comma list for sweep")
    p.add_argument("--grid-n", type=int, help="quadrature nodes (>= 32)")
    p.add_argument("--n-modes", type=int, help="number of eigenmodes to keep")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", help="comma list of csv, json, svg")
    p.add_argument("--mode", type=int, help="1-based mode index (cycle); modes 1..M reported (sweep)")
    p.add_argument("--input", help="light input: eigenmode:J | gaussian:C,W | flat | zero | file:PATH")
    p.add_argument("--spin-input", help="initial spin wave, same forms as --input")
    p.add_argument("--solver", choices=("characteristics", "greens"))
    p.add_argument("--wavelength", type=float, help="metres")
    p.add_argument("--length", type=float, help="cell length L in metres")
    p.add_argument("--cross-section", type=float, help="S in square metres")
    p.add_argument("--epsilon", type=float, help="paraxial parameter, default 0.1")
    p.add_argument("--q", help="transverse wavevector qx,qy in rad/m")
    p.add_argument("--tolerance-scale", type=float, help="multiplies verification tolerances")
    p.add_argument("--checks", help="comma list of check numbers to run")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="holovolume", description="Volume-hologram quantum memory toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, text in (
        ("modes", "eigenmodes, eigenvalues and the mode-shape plot"),
        ("dynamics", "field-space solution for one boundary input"),
        ("cycle", "write/readout efficiency report"),
        ("sweep", "efficiency over a grid of write/readout couplings"),
        ("capacity", "thin and volume hologram capacity"),
        ("verify", "run the self-verification suite"),
    ):
        _add_common(sub.add_parser(name, help=text))
    return parser


def resolve(args: argparse.Namespace) -> dict:
    cfg = dict(DEFAULTS)
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise UsageError("config file must hold a flat JSON object")
        unknown = sorted(set(data) - set(DEFAULTS))
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        cfg.update(data)
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    cfg["command"] = args.command
    return cfg


def _float(v, name: str) -> float:
    try:
        x = float(v)
    except (TypeError, ValueError):
        raise UsageError(f"{name} must be a number, got {v!r}") from None
    if not math.isfinite(x):
        raise UsageError(f"{name} must be finite")
    return x


def _float_list(v, name: str) -> list[float]:
    if isinstance(v, (list, tuple)):
        items = list(v)
    else:
        items = [s for s in str(v).split(",") if s.strip()]
    if not items:
        raise UsageError(f"{name} range is empty")
    return [_float(s, name) for s in items]


def _coupling(v, name: str) -> Coupling:
    try:
        return Coupling(_float(v, name))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _grid_n(cfg: dict) -> int:
    n = int(cfg["grid_n"])
    if n < MIN_GRID:
        raise UsageError(f"grid-n must be at least {MIN_GRID}, got {n}")
    return n


def _formats(cfg: dict) -> set[str]:
    fs = {s.strip() for s in str(cfg["format"]).split(",") if s.strip()}
    bad = fs - set(FORMATS)
    if bad or not fs:
        raise UsageError(f"format must be a comma list of {', '.join(FORMATS)}")
    return fs


def _outdir(cfg: dict) -> Path:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def _geometry(cfg: dict, required: bool) -> HologramGeometry | None:
    fields = (cfg["wavelength"], cfg["length"], cfg["cross_section"])
    if all(f is None for f in fields):
        if required:
            raise UsageError("--wavelength, --length and --cross-section are required")
        return None
    if any(f is None for f in fields):
        raise UsageError("geometry needs all of --wavelength, --length and --cross-section")
    try:
        return HologramGeometry(*(_float(f, "geometry") for f in fields), _float(cfg["epsilon"], "epsilon"))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _mode_table(m: ModeSet) -> str:
    lines = [f"{'mode':>4}  {'lambda':>12}  {'mu':>12}  {'residual':>10}  resolved"]
    for i in range(m.n_modes):
        lines.append(f"{i + 1:>4}  {m.lam[i]:>12.6f}  {m.mu[i]:>12.6f}  {m.residual[i]:>10.2e}  {'yes' if m.resolved[i] else 'no'}")
    return "\n".join(lines)


def run_modes(cfg: dict) -> int:
    c = _coupling(cfg["kappa"], "kappa")
    n = _grid_n(cfg)
    n_modes = int(cfg["n_modes"] or 3)
    formats = _formats(cfg)
    try:
        m = compute_modes(c, make_gauss_legendre(n), n_modes)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    out = _outdir(cfg)
    if c.kappa == 0.0:
        print("notice: degenerate spectrum at kappa = 0 (all lambda = 0, |mu| = 1); Legendre basis shown")
    for w in m.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(f"kappa = {c.kappa:g}, grid n = {n}")
    print(_mode_table(m))
    if "json" in formats:
        write_json(out / "modes.json", m.to_dict())
    if "csv" in formats:
        header = ["x"] + [f"phi_{i + 1}" for i in range(m.n_modes)]
        rows = [[fmt(x)] + [fmt(v) for v in m.phi[:, k]] for k, x in enumerate(m.grid.nodes)]
        write_csv(out / "modes.csv", header, rows)
    if "svg" in formats:
        styles = ("bold", "thin", "dashed")
        series = [
            svg.Series(m.grid.nodes, m.phi[i], f"phi_{i + 1}, lambda = {m.lam[i]:.3f}", styles[i])
            for i in range(min(3, m.n_modes))
        ]
        (out / "modes.svg").write_text(svg.line_plot(series, f"First eigenfunctions, kappa = {c.kappa:g}", "x"), encoding="utf-8")
    return EXIT_OK


def _waveform(spec: str, x: np.ndarray, modes_for) -> np.ndarray:
    """Boundary profile on the entry face, sampled at the grid nodes."""
    kind, _, arg = str(spec).partition(":")
    if kind == "zero":
        return np.zeros(len(x), dtype=complex)
    if kind == "flat":
        return np.ones(len(x), dtype=complex)
    if kind == "gaussian":
        try:
            centre, width = (float(s) for s in arg.split(","))
        except ValueError:
            raise UsageError("gaussian input needs gaussian:CENTRE,WIDTH") from None
        if width <= 0:
            raise UsageError("gaussian width must be positive")
        return np.exp(-0.5 * ((x - centre) / width) ** 2).astype(complex)
    if kind == "eigenmode":
        try:
            j = int(arg or 1)
        except ValueError:
            raise UsageError("eigenmode input needs eigenmode:INDEX") from None
        m = modes_for(j)
        if not 1 <= j <= m.n_modes:
            raise UsageError(f"eigenmode index must be in 1..{m.n_modes}")
        # inputs enter through the reversed mode so that the output is phi_j itself
        return m.evaluate(j, 1.0 - x).astype(complex)
    if kind == "file":
        header, rows = read_csv(arg)
        try:
            cols = {h: [float(r[k]) for r in rows] for k, h in enumerate(header)}
            xs, re = np.array(cols["x"]), np.array(cols["re"])
        except (KeyError, ValueError, IndexError):
            raise UsageError("waveform file needs CSV columns x, re and optionally im") from None
        im = np.array(cols.get("im", np.zeros_like(re)))
        if np.any(np.diff(xs) <= 0):
            raise UsageError("waveform file x column must be increasing")
        return np.interp(x, xs, re) + 1j * np.interp(x, xs, im)
    raise UsageError(f"unknown waveform {spec!r}")


def run_dynamics(cfg: dict) -> int:
    c = _coupling(cfg["kappa"], "kappa")
    n = _grid_n(cfg)
    formats = _formats(cfg)
    grid = make_trapezoid(n)
    cache: dict[str, ModeSet] = {}

    def modes_for(j: int) -> ModeSet:
        if "m" not in cache:
            cache["m"] = compute_modes(c, make_gauss_legendre(min(n, 200)), max(j, 3))
        return cache["m"]

    alpha_in = _waveform(cfg["input"], grid.nodes, modes_for)
    beta_in = _waveform(cfg["spin_input"], grid.nodes, modes_for)
    b = BoundaryData(grid, grid, alpha_in, beta_in)
    if cfg["solver"] == "greens":
        f = greens_solution(b, c)
    else:
        f = integrate_characteristics(b, c)
    out = _outdir(cfg)
    bal = f.summary()["balance"]
    print(f"kappa = {c.kappa:g}, n = {n}, solver = {cfg['solver']}")
    print(f"excitation in {bal['in_total']:.9g}, out {bal['out_total']:.9g}, relative defect {bal['defect']:.3g}")
    if "csv" in formats:
        f.to_csv(out / "field.csv")
    if "json" in formats:
        write_json(out / "field.json", f.summary())
    if "svg" in formats:
        series = [
            svg.Series(grid.nodes, np.abs(f.alpha_out) ** 2, "|alpha_out|^2 vs tau", "bold"),
            svg.Series(grid.nodes, np.abs(f.beta_out) ** 2, "|beta_out|^2 vs xi", "dashed"),
        ]
        (out / "field.svg").write_text(svg.line_plot(series, f"Output faces, kappa = {c.kappa:g}", "tau or xi"), encoding="utf-8")
    return EXIT_OK


def _q(cfg: dict) -> tuple[float, float]:
    parts = _float_list(cfg["q"], "q")
    if len(parts) != 2:
        raise UsageError("q needs two components qx,qy")
    return parts[0], parts[1]


def run_cycle(cfg: dict) -> int:
    cw = _coupling(cfg["kappa_write"], "kappa-write")
    cr = _coupling(cfg["kappa_read"], "kappa-read")
    n = _grid_n(cfg)
    n_modes = int(cfg["n_modes"] or n)
    j = int(cfg["mode"])
    geometry = _geometry(cfg, required=False)
    formats = _formats(cfg)
    grid = make_gauss_legendre(n)
    try:
        m_w = compute_modes(cw, grid, n_modes)
        m_r = m_w if cr == cw else compute_modes(cr, grid, n_modes)
        rep = cycle_report(CycleConfig(cw, cr, n_modes, geometry), m_w, m_r, j, _q(cfg))
        nb = noise_budget(j, m_w, m_r)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep["max_row_defect"] = nb.max_row_defect
    out = _outdir(cfg)
    for k in sorted(rep):
        v = rep[k]
        print(f"{k:>20}: {v:.9g}" if isinstance(v, float) else f"{k:>20}: {v}")
    if "json" in formats:
        write_json(out / "cycle.json", rep)
    if "csv" in formats:
        keys = sorted(rep)
        write_csv(out / "cycle.csv", keys, [[fmt(rep[k]) if isinstance(rep[k], float) else str(rep[k]) for k in keys]])
    return EXIT_OK


def _modes_worker(job):
    kappa, n = job
    return kappa, compute_modes(Coupling(kappa), make_gauss_legendre(n))


def worker_count() -> int:
    env = os.environ.get("HOLOVOLUME_THREADS")
    if env:
        try:
            k = int(env)
        except ValueError:
            raise UsageError("HOLOVOLUME_THREADS must be a positive integer") from None
        if k < 1:
            raise UsageError("HOLOVOLUME_THREADS must be a positive integer")
        return k
    return os.cpu_count() or 1


def sweep_table(kw: list[float], kr: list[float], n: int, n_report: int, workers: int = 1) -> list[tuple]:
    """Rows (kappa_write, kappa_read, mode, diagonal, total), sorted by key."""
    kappas = sorted(set(kw) | set(kr))
    jobs = [(k, n) for k in kappas]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            modes = dict(pool.map(_modes_worker, jobs))
    else:
        modes = dict(map(_modes_worker, jobs))
    rows = []
    for a in sorted(set(kw)):
        for b in sorted(set(kr)):
            for j in range(1, n_report + 1):
                e = mode_efficiency(j, modes[a], modes[b])
                rows.append((a, b, j, e.diagonal, e.total))
    return sorted(rows)


def run_sweep(cfg: dict) -> int:
    kw = _float_list(cfg["kappa_write"], "kappa-write")
    kr = _float_list(cfg["kappa_read"], "kappa-read")
    for k in kw + kr:
        _coupling(k, "kappa")
    n = _grid_n(cfg)
    n_report = int(cfg["mode"])
    if not 1 <= n_report <= n:
        raise UsageError(f"--mode must be in 1..{n}")
    formats = _formats(cfg)
    rows = sweep_table(kw, kr, n, n_report, worker_count())
    out = _outdir(cfg)
    header = ["kappa_write", "kappa_read", "mode", "diagonal_eff", "total_eff"]
    print("  ".join(f"{h:>12}" for h in header))
    for r in rows:
        print(f"{r[0]:>12g}  {r[1]:>12g}  {r[2]:>12d}  {r[3]:>12.6f}  {r[4]:>12.6f}")
    if "csv" in formats:
        write_csv(out / "sweep.csv", header, [[fmt(r[0]), fmt(r[1]), str(r[2]), fmt(r[3]), fmt(r[4])] for r in rows])
    if "json" in formats:
        write_json(out / "sweep.json", {"rows": [dict(zip(header, r)) for r in rows]})
    if "svg" in formats:
        xs, ys = sorted(set(kw)), sorted(set(kr))
        grid = np.full((len(xs), len(ys)), np.nan)
        for a, b, j, _, total in rows:
            if j == 1:
                grid[xs.index(a), ys.index(b)] = total
        text = svg.heatmap(xs, ys, grid, "Total efficiency, mode 1", "kappa_write", "kappa_read")
        (out / "sweep.svg").write_text(text, encoding="utf-8")
    return EXIT_OK


def run_capacity(cfg: dict) -> int:
    g = _geometry(cfg, required=True)
    formats = _formats(cfg)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", RuntimeWarning)
        rep = capacity_report(g)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    out = _outdir(cfg)
    for k in sorted(rep):
        v = rep[k]
        print(f"{k:>16}: {v:.9g}" if isinstance(v, float) else f"{k:>16}: {v}")
    keys = ["wavelength", "L", "S", "epsilon", "fresnel_number", "capacity_thin", "capacity_volume", "regime"]
    if "json" in formats:
        write_json(out / "capacity.json", rep)
    if "csv" in formats:
        write_csv(out / "capacity.csv", keys, [[rep[k] if isinstance(rep[k], str) else fmt(rep[k]) for k in keys]])
    return EXIT_OK


def run_verify(cfg: dict) -> int:
    scale = _float(cfg["tolerance_scale"], "tolerance-scale")
    if scale < 0:
        raise UsageError("tolerance-scale must be >= 0")
    only = None
    if cfg["checks"] is not None:
        try:
            only = {int(s) for s in str(cfg["checks"]).split(",") if s.strip()}
        except ValueError:
            raise UsageError("checks must be a comma list of integers") from None
    results = run_checks(scale, only)
    rep = report(results, scale)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        flag = " [flagged]" if r.flagged else ""
        print(f"[{status}] {r.id} {r.name}: value {r.value:.6g}, threshold {r.threshold:.6g}{flag}; {r.detail}")
    out = _outdir(cfg)
    write_json(out / "verify.json", rep)
    if not rep["all_passed"]:
        print(f"failed checks: {', '.join(rep['failed'])}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


COMMANDS = {
    "modes": run_modes,
    "dynamics": run_dynamics,
    "cycle": run_cycle,
    "sweep": run_sweep,
    "capacity": run_capacity,
    "verify": run_verify,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = resolve(args)
        return COMMANDS[cfg["command"]](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConsistencyError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numeric consistency failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
