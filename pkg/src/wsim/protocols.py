"""State transfer and state preparation over a general W state.

Transfer register layout (qubits numbered from 1)::

    1          input qubit alpha|0> + beta|1>, held by Alice
    2          W qubit held by Alice (coefficient c_alice)
    3..N       middle W qubits, post-selected on |0...0>
    N+1        W qubit held by Bob (coefficient c_bob)

Every measurement is enumerated branch by branch; nothing is sampled unless
``sample_report`` is called explicitly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .entanglement import WSpec
from .errors import ConstructionError, DegenerateProtocolError, InvalidRegisterError
from .qstate import (
    BRANCH_TOL,
    NORM_TOL,
    StateVector,
    apply_1q_gate,
    apply_cnot,
    apply_matrix,
    fidelity,
    measure_subset,
    project_bra,
    tensor,
    unitarity_deviation,
)

HADAMARD = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
PAULI_X = np.array([[0, 1], [1, 0]])
PAULI_Z = np.array([[1, 0], [0, -1]])
SUCCESS_FIDELITY = 1 - 1e-9


@dataclass(frozen=True)
class BalancerSpec:
    """Balancing unitary on the (N-1)-qubit register left after Alice measures.

    ``anchor`` is the 1-based basis index whose amplitude is scaled by ``t``:
    2 (Bob excited, middle empty) when Bob's coefficient is the larger one,
    1 (vacuum) when Alice's is.
    """

    n: int
    m: int
    l: int
    t: complex
    anchor: int
    matrix: np.ndarray


@dataclass(frozen=True)
class Branch:
    outcome: str
    probability: float
    bob_state: Optional[StateVector]
    bob_fidelity: float
    heralded: bool = True


@dataclass
class ProtocolReport:
    branches: list[Branch]
    success_probability: float
    claimed_probability: float
    details: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    @property
    def total_probability(self) -> float:
        return float(sum(b.probability for b in self.branches))


@dataclass(frozen=True)
class RotatedBasis:
    alpha: float
    beta: float
    phi: StateVector
    psi: StateVector

    def change_matrix(self) -> np.ndarray:
        """Unitary taking computational amplitudes to (phi, psi) amplitudes."""
        return np.array([self.phi.amps.conj(), self.psi.amps.conj()])


# ---------------------------------------------------------------- transfer


def compute_t(c1: complex, cN: complex) -> complex:
    """Ratio of the smaller to the larger of two coefficients.

    Equals c_N/c_1 when |c_1|^2 > |c_N|^2 and c_1/c_N when |c_N|^2 > |c_1|^2.
    At equal magnitudes the ratio c_N/c_1 is a pure phase (1 for equal
    coefficients), which keeps the transferred state's relative phase exact.
    """
    c1, cN = complex(c1), complex(cN)
    if c1 == 0 and cN == 0:
        raise DegenerateProtocolError("both endpoint coefficients vanish; transfer is undefined")
    if abs(c1) ** 2 >= abs(cN) ** 2:
        return cN / c1
    return c1 / cN


def _balancer(c_alice: complex, c_bob: complex, n: int) -> BalancerSpec:
    if n < 3:
        raise InvalidRegisterError(f"balancer needs N >= 3, got {n}")
    m_dim = 2 ** (n - 1)
    l_idx = 2 ** (n - 2) + 1
    t = compute_t(c_bob, c_alice)
    s = np.sqrt(max(0.0, 1 - abs(t) ** 2))
    anchor = 2 if abs(c_bob) ** 2 >= abs(c_alice) ** 2 else 1
    u = np.zeros((m_dim, m_dim), dtype=complex)
    used_rows, used_cols = set(), set()

    def put(row, col, value):
        u[row - 1, col - 1] = value
        used_rows.add(row)
        used_cols.add(col)

    # rotation block: the anchor amplitude shrinks by t, the rest leaks into
    # basis state 3 (a middle qubit excited, discarded by post-selection)
    put(anchor, anchor, t)
    put(3, anchor, -s)
    put(anchor, m_dim, s)
    put(3, m_dim, np.conj(t))
    # permutation part, explicit off-diagonal entry first; a diagonal U[L,L] = 1
    # would then give column L two unit entries, so conflicting diagonals are skipped
    for row, col in [(m_dim, l_idx)] + [(k, k) for k in range(1, m_dim + 1)]:
        if row not in used_rows and col not in used_cols:
            put(row, col, 1.0)
    free_rows = sorted(set(range(1, m_dim + 1)) - used_rows)
    free_cols = sorted(set(range(1, m_dim + 1)) - used_cols)
    for row, col in zip(free_rows, free_cols):
        put(row, col, 1.0)
    dev = unitarity_deviation(u)
    if dev >= BRANCH_TOL:
        raise ConstructionError(f"balancer construction failed: ||U^dag U - I||_max = {dev:.3e}")
    u.flags.writeable = False
    return BalancerSpec(n, m_dim, l_idx, t, anchor, u)


def build_balancer(w: WSpec, alice: int = 1, bob: Optional[int] = None) -> BalancerSpec:
    bob = w.n if bob is None else bob
    if w.n < 3:
        raise InvalidRegisterError("the M x M balancer needs N >= 3; N = 2 goes through run_qst")
    return _balancer(w.c(alice), w.c(bob), w.n)


def _endpoint_order(w: WSpec, alice: int, bob: int) -> np.ndarray:
    if alice == bob:
        raise InvalidRegisterError("sender and receiver must be different qubits")
    middle = [k for k in range(1, w.n + 1) if k not in (alice, bob)]
    return np.array([w.c(alice)] + [w.c(k) for k in middle] + [w.c(bob)])


def run_qst(w: WSpec, input_state: StateVector, alice: int = 1, bob: Optional[int] = None) -> ProtocolReport:
    """Transfer ``input_state`` from Alice's W qubit to Bob's.

    Other endpoint pairs are handled by relabeling the coefficients so that
    ``alice`` comes first and ``bob`` last. For N = 2 a subsidiary qubit in
    |0> is inserted between the two holders, which is the same register as a
    three-qubit W state with a vanishing middle coefficient.
    """
    bob = w.n if bob is None else bob
    if input_state.num_qubits != 1:
        raise InvalidRegisterError("the transferred state must be a single qubit")
    coeffs = _endpoint_order(w, alice, bob)
    c_alice, c_bob = coeffs[0], coeffs[-1]
    if c_alice == 0 and c_bob == 0:
        raise DegenerateProtocolError("c_alice = c_bob = 0: no amplitude connects sender and receiver")
    if w.n == 2:
        coeffs = np.array([c_alice, 0.0, c_bob])
    n = coeffs.size
    balancer = _balancer(c_alice, c_bob, n)

    register = tensor(input_state, WSpec(coeffs).state())
    register = apply_cnot(register, 1, 2)
    register = apply_1q_gate(register, HADAMARD, 1)

    branches: list[Branch] = []
    pre_rates = {}
    middle = list(range(1, n - 1))  # within the (n-1)-qubit remainder
    for alice_branch in measure_subset(register, [1, 2]):
        x, y = int(alice_branch.outcome[0]), int(alice_branch.outcome[1])
        rest = alice_branch.post_state
        p_mid, _ = project_bra(rest, middle, "0" * len(middle))
        pre_rates[alice_branch.outcome] = alice_branch.probability * p_mid
        rest = apply_matrix(rest, balancer.matrix)
        for sub in measure_subset(rest, middle):
            p = alice_branch.probability * sub.probability
            heralded = set(sub.outcome) <= {"0"}
            bob_state = sub.post_state
            if heralded:
                # vacuum carries Alice's term, so the bit is flipped when y = 0
                if y == 0:
                    bob_state = apply_1q_gate(bob_state, PAULI_X, 1)
                if x == 1:
                    bob_state = apply_1q_gate(bob_state, PAULI_Z, 1)
            f = fidelity(bob_state, input_state)
            branches.append(Branch(alice_branch.outcome + "|" + sub.outcome, p, bob_state, f, heralded))

    success = sum(b.probability for b in branches if b.heralded and b.bob_fidelity > SUCCESS_FIDELITY)
    claimed = 2 * min(abs(c_alice) ** 2, abs(c_bob) ** 2)
    details = {
        "t": balancer.t,
        "anchor": balancer.anchor,
        "pre_balancer_rates": pre_rates,
        "subsidiary_qubit": w.n == 2,
        "endpoints": (alice, bob),
    }
    return ProtocolReport(branches, float(success), float(claimed), details)


def sample_report(report: ProtocolReport, trials: int, seed: int) -> dict:
    """Monte Carlo replay of a branch-enumerated report with a fixed seed."""
    rng = np.random.default_rng(seed)
    probs = np.array([b.probability for b in report.branches])
    picks = rng.choice(len(probs), size=trials, p=probs / probs.sum())
    ok = np.array([b.heralded and b.bob_fidelity > SUCCESS_FIDELITY for b in report.branches])
    hits = int(ok[picks].sum())
    return {"trials": trials, "seed": seed, "successes": hits, "rate": hits / trials}


# ---------------------------------------------------------------- preparation


def rotated_basis(alpha: float, beta: float) -> RotatedBasis:
    if isinstance(alpha, complex) or isinstance(beta, complex):
        raise InvalidRegisterError("rotated basis needs real alpha, beta")
    alpha, beta = float(alpha), float(beta)
    if abs(alpha ** 2 + beta ** 2 - 1) > NORM_TOL:
        raise InvalidRegisterError(f"alpha^2 + beta^2 = {alpha ** 2 + beta ** 2!r} != 1")
    phi = StateVector(1, [alpha, beta])
    psi = StateVector(1, [beta, -alpha])
    return RotatedBasis(alpha, beta, phi, psi)


_LABELS = ("phi", "psi")


def _rotate(state: StateVector, basis: RotatedBasis, qubits) -> StateVector:
    for q in qubits:
        state = apply_1q_gate(state, basis.change_matrix(), q)
    return state


def _unrotate(state: StateVector, basis: RotatedBasis) -> StateVector:
    return apply_1q_gate(state, basis.change_matrix().conj().T, 1)


def _pair_coefficients(rotated: StateVector, first: int, last: int) -> dict[str, complex]:
    """Amplitudes of the rotated pair (first, last) with every other qubit in |0>."""
    n = rotated.num_qubits
    view = rotated.tensor_view()
    out = {}
    for a in (0, 1):
        for b in (0, 1):
            idx = [0] * n
            idx[first - 1], idx[last - 1] = a, b
            out[f"{_LABELS[a]}_{_LABELS[b]}"] = complex(view[tuple(idx)])
    return out


def prepare_two_qubit(c1: complex, c2: complex, basis: RotatedBasis) -> ProtocolReport:
    """Preparation with c1|01> + c2|10>, qubit 1 measured in the rotated basis.

    Success means qubit 2 is left in the target |phi>, which under c1 = -c2
    happens on the psi outcome with probability |c1|^2.
    """
    state = StateVector(2, [0, c1, c2, 0])
    rotated = _rotate(state, basis, [1, 2])
    coeffs = _pair_coefficients(rotated, 1, 2)
    branches = []
    for outcome in measure_subset(rotated, [1]):
        bob = _unrotate(outcome.post_state, basis)
        label = _LABELS[int(outcome.outcome)]
        branches.append(Branch(label, outcome.probability, bob, fidelity(bob, basis.phi)))
    success = sum(b.probability for b in branches if b.bob_fidelity > SUCCESS_FIDELITY)
    warnings = []
    if abs(c1 + c2) > NORM_TOL:
        warnings.append("c1 != -c2: the phi-phi and psi-psi terms do not cancel")
    return ProtocolReport(
        branches, float(success), abs(c1) ** 2,
        {"coefficients": coeffs, "target": "phi"}, warnings,
    )


def prepare_w(w: WSpec, basis: RotatedBasis) -> ProtocolReport:
    """Preparation over a W state with qubits 1 and N rewritten in the rotated basis.

    The middle qubits are post-selected on |0...0> and qubit 1 is measured in
    {phi, psi}. A heralded branch succeeds when qubit N is left in the
    rotated-basis ket complementary to qubit 1's outcome.
    """
    if w.n < 3:
        raise InvalidRegisterError("prepare_w needs N >= 3; use prepare_two_qubit for N = 2")
    n = w.n
    rotated = _rotate(w.state(), basis, [1, n])
    coeffs = _pair_coefficients(rotated, 1, n)
    branches = []
    for outcome in measure_subset(rotated, list(range(1, n))):
        first, mid = outcome.outcome[0], outcome.outcome[1:]
        heralded = set(mid) <= {"0"}
        bob = _unrotate(outcome.post_state, basis)
        target = basis.psi if first == "0" else basis.phi
        label = f"{_LABELS[int(first)]}|{mid}"
        branches.append(Branch(label, outcome.probability, bob, fidelity(bob, target), heralded))
    success = sum(b.probability for b in branches if b.heralded and b.bob_fidelity > SUCCESS_FIDELITY)
    c1, cn = w.c(1), w.c(n)
    warnings = []
    if abs(c1 + cn) > NORM_TOL:
        warnings.append("c_1 != -c_N: the success condition for preparation does not hold")
    return ProtocolReport(
        branches, float(success), 2 * abs(c1) ** 2,
        {"coefficients": coeffs, "middle_zero_probability": abs(c1) ** 2 + abs(cn) ** 2},
        warnings,
    )
