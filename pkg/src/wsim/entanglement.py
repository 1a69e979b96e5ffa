"""Concurrence of general W states.

Two independent routes are kept side by side: the Wootters pipeline
(spin flip, R = rho * rho_tilde, eigenvalues, max formula) on an arbitrary
two-qubit density matrix, and the closed forms for W-state reductions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidRegisterError
from .linalg import eig_general
from .qstate import NORM_TOL, DensityMatrix, StateVector, partial_trace

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
_YY = np.kron(SIGMA_Y, SIGMA_Y)
_EPS = np.finfo(float).eps
# eigenvalues of R within this many ulps of ||R||_F are indistinguishable from 0
EIG_NOISE_ULPS = 64
NEGATIVE_EIG_TOL = 1e-10


@dataclass(frozen=True)
class WSpec:
    """Coefficients (c_1, ..., c_N) of sum_i c_i |0...1_i...0>."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).ravel()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)
        if c.size < 2:
            raise InvalidRegisterError(f"a W state needs N >= 2 qubits, got {c.size}")
        norm = float(np.sum(np.abs(c) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidRegisterError(f"W coefficients not normalized: sum |c_i|^2 = {norm!r}")

    @property
    def n(self) -> int:
        return self.coeffs.size

    @classmethod
    def uniform(cls, n: int) -> "WSpec":
        return cls(np.full(n, 1 / np.sqrt(n)))

    @classmethod
    def normalized(cls, coeffs) -> "WSpec":
        c = np.asarray(coeffs, dtype=complex)
        return cls(c / np.linalg.norm(c))

    def c(self, i: int) -> complex:
        """1-based coefficient access."""
        if not 1 <= i <= self.n:
            raise InvalidRegisterError(f"qubit {i} out of range 1..{self.n}")
        return complex(self.coeffs[i - 1])

    def state(self) -> StateVector:
        amps = np.zeros(2 ** self.n, dtype=complex)
        for i, ci in enumerate(self.coeffs, start=1):
            amps[1 << (self.n - i)] = ci
        return StateVector(self.n, amps)


def random_wspec(n: int, rng: np.random.Generator, real: bool = False, nonnegative: bool = False) -> WSpec:
    c = rng.normal(size=n)
    if nonnegative:
        c = np.abs(c)
    elif not real:
        c = c + 1j * rng.normal(size=n)
    return WSpec.normalized(c)


@dataclass(frozen=True)
class ConcurrenceReport:
    pair: tuple[int, int]
    closed_form: float
    wootters: float
    eigenvalues: tuple[float, float, float, float]


def _as_matrix(rho) -> np.ndarray:
    m = rho.entries if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if m.shape != (4, 4):
        raise InvalidRegisterError(f"two-qubit density matrix must be 4x4, got {m.shape}")
    return m


def spin_flip(rho) -> np.ndarray:
    m = _as_matrix(rho)
    if np.abs(m - m.conj().T).max() > NORM_TOL:
        raise InvalidRegisterError("spin_flip expects a Hermitian matrix")
    return _YY @ m.conj() @ _YY


def wootters_concurrence(rho) -> tuple[float, tuple[float, float, float, float]]:
    """Wootters concurrence and the sorted eigenvalues of R = rho * rho_tilde.

    Eigenvalues inside the floating-point noise floor of R (EIG_NOISE_ULPS
    ulps of its Frobenius norm) are set to zero before square roots, since a
    1e-17 residual would otherwise contribute ~3e-9 to the result.
    """
    m = _as_matrix(rho)
    r = m @ spin_flip(m)
    floor = EIG_NOISE_ULPS * _EPS * float(np.linalg.norm(r))
    lam = sorted((z.real for z in eig_general(r)), reverse=True)
    if lam[-1] < -NEGATIVE_EIG_TOL - floor:
        raise InvalidRegisterError(f"R has eigenvalue {lam[-1]!r} < 0; input is not a density matrix")
    lam = tuple(0.0 if x <= floor else x for x in lam)
    s = np.sqrt(lam)
    return float(max(0.0, s[0] - s[1] - s[2] - s[3])), lam


def _check_pair(w: WSpec, m: int, n: int) -> None:
    if m == n:
        raise InvalidRegisterError(f"pair needs two distinct qubits, got ({m}, {n})")
    for q in (m, n):
        if not 1 <= q <= w.n:
            raise InvalidRegisterError(f"qubit {q} out of range 1..{w.n}")


def w_reduced_density(w: WSpec, m: int, n: int) -> DensityMatrix:
    """Closed-form reduction of |W><W| onto qubits (m, n), basis |0_m0_n>,|0_m1_n>,|1_m0_n>,|1_m1_n>."""
    _check_pair(w, m, n)
    cm, cn = w.c(m), w.c(n)
    pm, pn = abs(cm) ** 2, abs(cn) ** 2
    rho = np.zeros((4, 4), dtype=complex)
    rho[0, 0] = 1 - pm - pn
    rho[1, 1] = pn
    rho[2, 2] = pm
    rho[1, 2] = cm.conjugate() * cn
    rho[2, 1] = cn.conjugate() * cm
    return DensityMatrix(rho)


def w_pair_concurrence(w: WSpec, m: int, n: int) -> float:
    _check_pair(w, m, n)
    return 2 * abs(w.c(m)) * abs(w.c(n))


def total_concurrence(w: WSpec) -> float:
    """Normalized total concurrence, summing over ordered pairs m != n."""
    p = np.abs(w.coeffs) ** 2
    p = p / p.sum()
    off_diagonal = 1.0 - float(np.sum(p * p))
    return float(np.sqrt(max(0.0, w.n / (w.n - 1) * off_diagonal)))


def mirror_pairs(n: int) -> list[tuple[int, int]]:
    """Mirror pairs (j, N+1-j); for odd N the middle qubit pairs with itself."""
    return [(j, n + 1 - j) for j in range(1, (n + 1) // 2 + 1)]


def has_mirror_self_pair(n: int) -> bool:
    return n % 2 == 1


def mirror_concurrence(w: WSpec) -> float:
    return float(sum(2 * abs(w.c(j)) * abs(w.c(k)) for j, k in mirror_pairs(w.n)))


def concurrence_report(w: WSpec, m: int, n: int) -> ConcurrenceReport:
    """Closed form next to Wootters on the brute-force partial trace of |W><W|."""
    _check_pair(w, m, n)
    value, lam = wootters_concurrence(partial_trace(w.state(), [m, n]))
    return ConcurrenceReport((m, n), w_pair_concurrence(w, m, n), value, lam)


def pairwise_matrix(w: WSpec) -> np.ndarray:
    c = np.abs(w.coeffs)
    out = 2 * np.outer(c, c)
    np.fill_diagonal(out, 0.0)
    return out
