"""Dense state-vector register.

Qubits are numbered from 1 and ordered big-endian: qubit 1 is the leftmost
(highest-order) bit of a basis label, so ``|b_1 b_2 ... b_N>`` sits at index
``sum_k b_k * 2**(N - k)``.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .errors import InvalidRegisterError, UnitarityError
from .linalg import eig_general

NORM_TOL = 1e-12
BRANCH_TOL = 1e-10
PRUNE_TOL = 1e-14
PSD_TOL = 1e-10


def max_qubits() -> int:
    """Register-size cap; override with the ``WSIM_MAX_QUBITS`` environment variable."""
    return int(os.environ.get("WSIM_MAX_QUBITS", "20"))


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class StateVector:
    num_qubits: int
    amps: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        amps = _frozen(np.ravel(self.amps))
        object.__setattr__(self, "amps", amps)
        if self.num_qubits < 1:
            raise InvalidRegisterError(f"register needs at least one qubit, got {self.num_qubits}")
        if self.num_qubits > max_qubits():
            raise InvalidRegisterError(f"{self.num_qubits} qubits exceeds cap {max_qubits()}")
        if amps.size != 2 ** self.num_qubits:
            raise InvalidRegisterError(
                f"expected {2 ** self.num_qubits} amplitudes for {self.num_qubits} qubits, got {amps.size}"
            )
        if self.normalized:
            norm = float(np.vdot(amps, amps).real)
            if abs(norm - 1.0) > NORM_TOL:
                raise InvalidRegisterError(f"state not normalized: sum |a|^2 = {norm!r}")

    @classmethod
    def from_amps(cls, amps, normalize: bool = False) -> "StateVector":
        amps = np.asarray(amps, dtype=complex).ravel()
        n = int(round(np.log2(amps.size))) if amps.size else 0
        if normalize:
            amps = amps / np.linalg.norm(amps)
        return cls(n, amps)

    @classmethod
    def basis(cls, bits: Union[str, Sequence[int]]) -> "StateVector":
        n = len(bits)
        amps = np.zeros(2 ** n, dtype=complex)
        amps[basis_index(bits)] = 1.0
        return cls(n, amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def tensor_view(self) -> np.ndarray:
        return self.amps.reshape((2,) * self.num_qubits)


@dataclass(frozen=True)
class DensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        rho = _frozen(self.entries)
        object.__setattr__(self, "entries", rho)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise InvalidRegisterError(f"density matrix must be square, got {rho.shape}")
        dim = rho.shape[0]
        if dim < 2 or dim & (dim - 1):
            raise InvalidRegisterError(f"dimension {dim} is not a power of two")
        if np.abs(rho - rho.conj().T).max() > NORM_TOL:
            raise InvalidRegisterError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > NORM_TOL:
            raise InvalidRegisterError(f"density matrix trace {np.trace(rho).real!r} != 1")
        if np.linalg.eigvalsh(rho).min() < -PSD_TOL:
            raise InvalidRegisterError("density matrix is not positive semidefinite")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def num_qubits(self) -> int:
        return self.dim.bit_length() - 1

    @classmethod
    def from_state(cls, state: StateVector) -> "DensityMatrix":
        return cls(np.outer(state.amps, state.amps.conj()))


@dataclass(frozen=True)
class MeasurementBranch:
    """One outcome of a computational-basis measurement.

    ``post_state`` lives on the unmeasured qubits unless the measurement was
    taken with ``keep_register=True``; it is ``None`` when nothing is left.
    """

    outcome: str
    probability: float
    post_state: Optional[StateVector]
    full_register: bool = False


def basis_index(bits: Union[str, Sequence[int]]) -> int:
    if len(bits) == 0:
        raise InvalidRegisterError("empty bit-string")
    idx = 0
    for b in bits:
        b = int(b)
        if b not in (0, 1):
            raise InvalidRegisterError(f"bit value {b!r} is not 0 or 1")
        idx = 2 * idx + b
    return idx


def _check_qubits(n: int, qubits: Sequence[int]) -> list[int]:
    qubits = [int(q) for q in qubits]
    if len(set(qubits)) != len(qubits):
        raise InvalidRegisterError(f"repeated qubit index in {qubits}")
    for q in qubits:
        if not 1 <= q <= n:
            raise InvalidRegisterError(f"qubit {q} out of range 1..{n}")
    return qubits


def unitarity_deviation(u: np.ndarray) -> float:
    u = np.asarray(u, dtype=complex)
    return float(np.abs(u.conj().T @ u - np.eye(u.shape[0])).max())


def apply_1q_gate(state: StateVector, gate, target: int) -> StateVector:
    g = np.asarray(gate, dtype=complex)
    if g.shape != (2, 2):
        raise InvalidRegisterError(f"single-qubit gate must be 2x2, got {g.shape}")
    dev = unitarity_deviation(g)
    if dev > NORM_TOL:
        raise UnitarityError(dev)
    (t,) = _check_qubits(state.num_qubits, [target])
    psi = np.moveaxis(state.tensor_view(), t - 1, 0)
    psi = np.tensordot(g, psi, axes=([1], [0]))
    psi = np.moveaxis(psi, 0, t - 1)
    return StateVector(state.num_qubits, psi.ravel(), state.normalized)


def apply_matrix(state: StateVector, u: np.ndarray, qubits: Sequence[int] | None = None) -> StateVector:
    """Apply a unitary acting on ``qubits`` (default: the whole register, in order)."""
    n = state.num_qubits
    qubits = list(range(1, n + 1)) if qubits is None else _check_qubits(n, qubits)
    k = len(qubits)
    u = np.asarray(u, dtype=complex)
    if u.shape != (2 ** k, 2 ** k):
        raise InvalidRegisterError(f"matrix shape {u.shape} does not act on {k} qubits")
    dev = unitarity_deviation(u)
    if dev > BRANCH_TOL:
        raise UnitarityError(dev)
    axes = [q - 1 for q in qubits]
    psi = np.moveaxis(state.tensor_view(), axes, range(k))
    shape = psi.shape
    psi = (u @ psi.reshape(2 ** k, -1)).reshape(shape)
    psi = np.moveaxis(psi, range(k), axes)
    return StateVector(n, psi.ravel(), state.normalized)


def apply_cnot(state: StateVector, control: int, target: int) -> StateVector:
    if control == target:
        raise InvalidRegisterError("CNOT control and target must differ")
    c, t = _check_qubits(state.num_qubits, [control, target])
    psi = np.array(state.tensor_view())
    sel = [slice(None)] * state.num_qubits
    sel[c - 1] = 1
    sub = psi[tuple(sel)]
    # target axis index shifts down by one once the control axis is removed
    axis = t - 1 if t < c else t - 2
    psi[tuple(sel)] = np.flip(sub, axis=axis)
    return StateVector(state.num_qubits, psi.ravel(), state.normalized)


def tensor(a: StateVector, b: StateVector) -> StateVector:
    n = a.num_qubits + b.num_qubits
    if n > max_qubits():
        raise InvalidRegisterError(f"{n} qubits exceeds cap {max_qubits()}")
    return StateVector(n, np.kron(a.amps, b.amps), a.normalized and b.normalized)


def partial_trace(rho_or_state: Union[DensityMatrix, StateVector], keep: Sequence[int]) -> DensityMatrix:
    """Reduced density matrix on ``keep``; output basis follows the order of ``keep``."""
    if len(keep) == 0:
        raise InvalidRegisterError("partial_trace needs a nonempty keep list")
    n = rho_or_state.num_qubits
    keep = _check_qubits(n, keep)
    rest = [q for q in range(1, n + 1) if q not in keep]
    dk = 2 ** len(keep)
    if isinstance(rho_or_state, StateVector):
        psi = np.transpose(rho_or_state.tensor_view(), [q - 1 for q in keep + rest]).reshape(dk, -1)
        rho = psi @ psi.conj().T
    else:
        t = rho_or_state.entries.reshape((2,) * (2 * n))
        perm = [q - 1 for q in keep + rest]
        t = np.transpose(t, perm + [p + n for p in perm]).reshape(dk, 2 ** (n - len(keep)), dk, -1)
        rho = np.einsum("ajbj->ab", t)
    return DensityMatrix(rho)


def measure_subset(state: StateVector, qubits: Sequence[int], keep_register: bool = False) -> list[MeasurementBranch]:
    """Enumerate every outcome of measuring ``qubits`` in the computational basis.

    Outcomes with probability below 1e-14 are pruned. Bit-strings are written in
    the order the qubits were given.
    """
    n = state.num_qubits
    qubits = _check_qubits(n, qubits)
    k = len(qubits)
    if k == 0:
        return [MeasurementBranch("", 1.0, state, keep_register)]
    rest = [q for q in range(1, n + 1) if q not in qubits]
    psi = np.transpose(state.tensor_view(), [q - 1 for q in qubits + rest]).reshape(2 ** k, -1)
    total = float(np.vdot(state.amps, state.amps).real)
    probs = np.einsum("ij,ij->i", psi, psi.conj()).real / total
    branches = []
    for outcome, p in enumerate(probs):
        if p <= PRUNE_TOL:
            continue
        label = format(outcome, f"0{k}b")
        if keep_register:
            full = np.zeros_like(psi)
            full[outcome] = psi[outcome]
            full = full.reshape((2,) * n)
            full = np.transpose(full, np.argsort([q - 1 for q in qubits + rest]))
            post = StateVector(n, full.ravel() / np.linalg.norm(full))
        elif rest:
            post = StateVector(len(rest), psi[outcome] / np.linalg.norm(psi[outcome]))
        else:
            post = None
        branches.append(MeasurementBranch(label, float(p), post, keep_register))
    return branches


def project_bra(state: StateVector, qubits: Sequence[int], bits: Union[str, Sequence[int]]):
    """Project ``qubits`` onto the computational bra ``<bits|``.

    Returns ``(probability, post_state)``; ``post_state`` is the renormalized
    residual on the remaining qubits, or ``None`` for a null projection or when
    no qubits remain.
    """
    n = state.num_qubits
    qubits = _check_qubits(n, qubits)
    if len(qubits) != len(bits):
        raise InvalidRegisterError(f"{len(qubits)} qubits but {len(bits)} bits")
    if not qubits:
        return 1.0, state
    rest = [q for q in range(1, n + 1) if q not in qubits]
    psi = np.transpose(state.tensor_view(), [q - 1 for q in qubits + rest]).reshape(2 ** len(qubits), -1)
    residual = psi[basis_index(bits)]
    total = float(np.vdot(state.amps, state.amps).real)
    p = float(np.vdot(residual, residual).real) / total
    if p <= PRUNE_TOL or not rest:
        return p, None
    return p, StateVector(len(rest), residual / np.linalg.norm(residual))


def fidelity(a: StateVector, b: StateVector) -> float:
    if a.amps.size != b.amps.size:
        raise InvalidRegisterError(f"dimension mismatch: {a.amps.size} vs {b.amps.size}")
    return float(min(1.0, abs(np.vdot(a.amps, b.amps)) ** 2))


__all__ = [
    "StateVector", "DensityMatrix", "MeasurementBranch", "basis_index", "apply_1q_gate",
    "apply_matrix", "apply_cnot", "tensor", "partial_trace", "measure_subset", "project_bra",
    "fidelity", "eig_general", "unitarity_deviation", "max_qubits",
]
