"""Cyclic Jacobi eigensolver for dense real symmetric matrices.

Rotations are applied in round-robin (tournament) order: each round pairs
every index with exactly one other, so the n/2 rotations of a round touch
disjoint rows/columns and are applied together as array operations.
"""
from __future__ import annotations

import numpy as np


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(min(a, b), max(a, b)) for a, b in pairs if a < n and b < n]
        p = np.array([a for a, _ in pairs], dtype=np.intp)
        q = np.array([b for _, b in pairs], dtype=np.intp)
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def off_norm(a: np.ndarray) -> float:
    upper = np.triu(a, 1)
    return float(np.sqrt(2.0 * np.sum(upper * upper)))


def jacobi_eigh(a, tol: float = 1e-12, max_sweeps: int = 60, polish: int = 1):
    """Eigen-decomposition of a symmetric matrix.

    Returns ``(eigenvalues, eigenvectors, sweeps)``; eigenvectors are the
    columns of an orthogonal matrix, eigenvalues are unsorted (diagonal order).
    Iteration stops once the off-diagonal Frobenius norm is at most
    ``tol * ||a||_F``, followed by ``polish`` extra sweeps. Convergence is
    quadratic, so one extra sweep drives the off-diagonal part to rounding
    level, which the eigenvectors of tiny eigenvalues need.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError("jacobi_eigh needs a square matrix")
    if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, np.max(np.abs(a), initial=0.0))):
        raise ValueError("jacobi_eigh needs a symmetric matrix")
    a = 0.5 * (a + a.T)
    v = np.eye(n)
    if n < 2:
        return np.diag(a).copy(), v, 0
    scale = float(np.sqrt(np.sum(a * a)))
    if scale == 0.0:
        return np.zeros(n), v, 0
    rounds = _round_robin(n)
    sweeps = 0
    extra = polish
    while True:
        if off_norm(a) <= tol * scale:
            if extra == 0:
                break
            extra -= 1
        if sweeps >= max_sweeps:
            raise RuntimeError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0.0
            if not np.any(active):
                continue
            app = a[p, p]
            aqq = a[q, q]
            safe = np.where(active, apq, 1.0)
            # tiny off-diagonal entries overflow theta to inf, which gives t = 0
            with np.errstate(over="ignore"):
                theta = (aqq - app) / (2.0 * safe)
            sign = np.where(theta >= 0.0, 1.0, -1.0)
            t = np.where(active, sign / (np.abs(theta) + np.hypot(theta, 1.0)), 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            cols_p = a[:, p]
            cols_q = a[:, q]
            a[:, p] = cols_p * c - cols_q * s
            a[:, q] = cols_p * s + cols_q * c
            rows_p = a[p, :]
            rows_q = a[q, :]
            a[p, :] = c[:, None] * rows_p - s[:, None] * rows_q
            a[q, :] = s[:, None] * rows_p + c[:, None] * rows_q
            a[p, q] = 0.0
            a[q, p] = 0.0

            vp = v[:, p]
            vq = v[:, q]
            v[:, p] = vp * c - vq * s
            v[:, q] = vp * s + vq * c
        sweeps += 1
    return np.diag(a).copy(), v, sweeps
