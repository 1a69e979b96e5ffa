"""Small dense complex eigenvalue solver.

Householder reduction to upper Hessenberg form followed by the explicitly
shifted QR iteration (Wilkinson shifts, Givens rotations, deflation on
negligible subdiagonals). Eigenvalues only; intended for matrices of
dimension <= 16.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import ConvergenceError

MAX_DIM = 16
_EPS = np.finfo(float).eps


def hessenberg(m) -> list[list[complex]]:
    """Return an upper Hessenberg matrix (nested lists) unitarily similar to ``m``."""
    h = [[complex(x) for x in row] for row in np.asarray(m, dtype=complex)]
    n = len(h)
    for k in range(n - 2):
        x = [h[i][k] for i in range(k + 1, n)]
        norm_x = math.sqrt(sum(abs(z) ** 2 for z in x))
        if norm_x == 0.0 or all(z == 0 for z in x[1:]):
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = list(x)
        v[0] += phase * norm_x
        nv = math.sqrt(sum(abs(z) ** 2 for z in v))
        v = [z / nv for z in v]
        # H <- P H P with P = I - 2 v v^H acting on rows/cols k+1..n-1
        for j in range(n):
            dot = sum(v[i].conjugate() * h[k + 1 + i][j] for i in range(len(v)))
            if dot != 0:
                for i in range(len(v)):
                    h[k + 1 + i][j] -= 2.0 * v[i] * dot
        for i in range(n):
            row = h[i]
            dot = sum(row[k + 1 + j] * v[j] for j in range(len(v)))
            if dot != 0:
                for j in range(len(v)):
                    row[k + 1 + j] -= 2.0 * dot * v[j].conjugate()
        for i in range(k + 2, n):
            h[i][k] = 0j
    return h


def _wilkinson_shift(a: complex, b: complex, c: complex, d: complex) -> complex:
    # eigenvalue of [[a, b], [c, d]] closest to d
    half = 0.5 * (a - d)
    disc = cmath.sqrt(half * half + b * c)
    den = half + disc if abs(half + disc) >= abs(half - disc) else half - disc
    return d - b * c / den if den != 0 else d


def _qr_step(h: list[list[complex]], lo: int, hi: int, mu: complex) -> None:
    """One explicit shifted QR sweep on the active window h[lo:hi+1, lo:hi+1]."""
    for i in range(lo, hi + 1):
        h[i][i] -= mu
    rotations = []
    for k in range(lo, hi):
        x, y = h[k][k], h[k + 1][k]
        r = math.hypot(abs(x), abs(y))
        if r == 0.0:
            c, s = 1.0 + 0j, 0j
        else:
            c, s = x / r, y / r
        cc, sc = c.conjugate(), s.conjugate()
        top, bot = h[k], h[k + 1]
        for j in range(k, hi + 1):
            p, q = top[j], bot[j]
            top[j] = cc * p + sc * q
            bot[j] = -s * p + c * q
        bot[k] = 0j
        rotations.append((c, s))
    for k, (c, s) in zip(range(lo, hi), rotations):
        cc, sc = c.conjugate(), s.conjugate()
        for i in range(lo, min(k + 2, hi) + 1):
            row = h[i]
            p, q = row[k], row[k + 1]
            row[k] = p * c + q * s
            row[k + 1] = -p * sc + q * cc
    for i in range(lo, hi + 1):
        h[i][i] += mu


def eig_general(m, max_iter_per_eig: int = 60) -> list[complex]:
    """All eigenvalues (with multiplicity) of a square complex matrix.

    Raises :class:`ConvergenceError` if an eigenvalue fails to deflate within
    ``max_iter_per_eig`` sweeps.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"eig_general needs a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > MAX_DIM:
        raise ValueError(f"eig_general supports dim <= {MAX_DIM}, got {n}")
    if n == 0:
        return []
    h = hessenberg(a)
    scale = max(max(abs(z) for row in h for z in row), np.finfo(float).tiny)
    eigs: list[complex] = [0j] * n
    hi = n - 1
    its = 0
    while hi >= 0:
        if hi == 0:
            eigs[0] = h[0][0]
            break
        lo = hi
        while lo > 0:
            sub = abs(h[lo][lo - 1])
            if sub <= _EPS * (abs(h[lo][lo]) + abs(h[lo - 1][lo - 1])) or sub <= _EPS * _EPS * scale:
                h[lo][lo - 1] = 0j
                break
            lo -= 1
        if lo == hi:
            eigs[hi] = h[hi][hi]
            hi -= 1
            its = 0
            continue
        if its >= max_iter_per_eig:
            raise ConvergenceError(
                f"shifted QR did not converge for eigenvalue {hi} of {n}",
                abs(h[hi][hi - 1]),
            )
        its += 1
        if its % 11 == 0:
            # exceptional shift breaks cycles on symmetric-spectrum blocks
            mu = h[hi][hi] + 0.75 * abs(h[hi][hi - 1])
        else:
            mu = _wilkinson_shift(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        _qr_step(h, lo, hi, mu)
    return eigs
