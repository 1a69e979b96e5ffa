"""Single-photon beam-splitter chain and cavity capture.

Splitter k sends amplitude r_k into output mode k and transmits
t_k = sqrt(1 - r_k^2) downstream; mode N collects whatever survives all
N-1 splitters. Target phases are applied by ideal per-mode phase shifters
after the chain.

A designed chain also stores t_k computed from suffix weights, because
sqrt(1 - r_k^2) cancels catastrophically once r_k rounds to 1.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .entanglement import WSpec
from .errors import InfeasibleTargetError, InvalidRegisterError
from .protocols import ProtocolReport, run_qst
from .qstate import NORM_TOL, StateVector

@dataclass(frozen=True)
class BeamSplitterChain:
    reflectivities: tuple[float, ...]
    phases: tuple[float, ...] = field(default=())
    transmissions: tuple[float, ...] = field(default=())

    def __post_init__(self):
        r = tuple(float(x) for x in self.reflectivities)
        object.__setattr__(self, "reflectivities", r)
        if not all(0.0 <= x <= 1.0 for x in r):
            raise InvalidRegisterError(f"reflectivities must lie in [0, 1], got {r}")
        phases = tuple(float(p) for p in self.phases) or (0.0,) * (len(r) + 1)
        if len(phases) != len(r) + 1:
            raise InvalidRegisterError(f"need {len(r) + 1} phases for {len(r)} splitters, got {len(phases)}")
        object.__setattr__(self, "phases", phases)
        t = tuple(float(x) for x in self.transmissions)
        if not t:
            t = tuple(float(np.sqrt((1 - x) * (1 + x))) for x in r)
        if len(t) != len(r):
            raise InvalidRegisterError(f"need {len(r)} transmissions, got {len(t)}")
        if max((abs(a * a + b * b - 1) for a, b in zip(r, t)), default=0.0) > 1e-12:
            raise InvalidRegisterError("splitter is not lossless: r^2 + t^2 != 1")
        object.__setattr__(self, "transmissions", t)

    @property
    def n_modes(self) -> int:
        return len(self.reflectivities) + 1

    @property
    def transmissivities(self) -> tuple[float, ...]:
        return self.transmissions


@dataclass(frozen=True)
class ModeState:
    """One photon spread over N modes: amplitude a_i of |0...1_i...0>."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex).ravel()
        a.flags.writeable = False
        object.__setattr__(self, "amplitudes", a)
        if abs(float(np.sum(np.abs(a) ** 2)) - 1) > NORM_TOL:
            raise InvalidRegisterError("mode amplitudes are not normalized")


def design_chain(target: WSpec) -> BeamSplitterChain:
    """Reflectivities r_k = |c_k| / sqrt(sum_{j>=k} |c_j|^2) reproducing ``target``.

    Raises InfeasibleTargetError when the remaining weight has underflowed to
    zero while a mode still needs nonzero amplitude.
    """
    mags = np.abs(target.coeffs)
    # suffix sums are more accurate than 1 - prefix sums when the tail is small
    tails = np.cumsum((mags ** 2)[::-1])[::-1]
    refl, trans = [], []
    for k in range(target.n - 1):
        if tails[k] == 0.0:
            if np.any(mags[k:] > 0):
                j = k + int(np.argmax(mags[k:] > 0))
                raise InfeasibleTargetError(
                    f"earlier splitters exhaust the photon but mode {j + 1} still needs |c| = {mags[j]:.3e}"
                )
            refl.append(0.0)
            trans.append(1.0)
            continue
        refl.append(float(min(1.0, mags[k] / np.sqrt(tails[k]))))
        trans.append(float(np.sqrt(tails[k + 1] / tails[k])))
    return BeamSplitterChain(tuple(refl), tuple(float(p) for p in np.angle(target.coeffs)), tuple(trans))


def simulate_chain(chain: BeamSplitterChain) -> ModeState:
    amps = np.zeros(chain.n_modes, dtype=complex)
    surviving = 1.0
    for k, (r, t) in enumerate(zip(chain.reflectivities, chain.transmissivities)):
        amps[k] = r * surviving
        surviving *= t
    amps[-1] = surviving
    amps *= np.exp(1j * np.array(chain.phases))
    return ModeState(amps)


def cavity_register(mode) -> tuple[WSpec, tuple[int, ...]]:
    """Capture each output mode in its own cavity; cavity i is qubit i.

    Accepts a :class:`ModeState` or an occupation-basis :class:`StateVector`,
    which must lie entirely in the one-photon sector.
    """
    if isinstance(mode, ModeState):
        amps = mode.amplitudes
    elif isinstance(mode, StateVector):
        n = mode.num_qubits
        single = {1 << (n - i): i for i in range(1, n + 1)}
        stray = [k for k, a in enumerate(mode.amps) if k not in single and abs(a) > NORM_TOL]
        if stray:
            raise InvalidRegisterError(
                f"occupation state has weight outside the one-photon sector (basis index {stray[0]})"
            )
        amps = np.array([mode.amps[1 << (n - i)] for i in range(1, n + 1)])
    else:
        raise TypeError(f"cannot capture {type(mode).__name__}")
    if amps.size < 2:
        raise InvalidRegisterError("cavity register needs at least two modes")
    return WSpec(amps), tuple(range(1, amps.size + 1))


def transfer_through_cavities(chain: BeamSplitterChain, input_state: StateVector) -> ProtocolReport:
    """design -> photon -> cavities -> particle loaded next to cavity 1 -> transfer to cavity N."""
    w, index_map = cavity_register(simulate_chain(chain))
    return run_qst(w, input_state, alice=index_map[0], bob=index_map[-1])
