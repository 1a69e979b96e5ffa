"""General N-qubit W states: concurrence, transfer/preparation protocols, and
the single-photon beam-splitter source."""
from .entanglement import (
    ConcurrenceReport,
    WSpec,
    concurrence_report,
    mirror_concurrence,
    random_wspec,
    spin_flip,
    total_concurrence,
    w_pair_concurrence,
    w_reduced_density,
    wootters_concurrence,
)
from .errors import WSimError
from .linalg import eig_general
from .optics import BeamSplitterChain, ModeState, cavity_register, design_chain, simulate_chain
from .protocols import (
    BalancerSpec,
    ProtocolReport,
    RotatedBasis,
    build_balancer,
    compute_t,
    prepare_two_qubit,
    prepare_w,
    rotated_basis,
    run_qst,
)
from .qstate import DensityMatrix, MeasurementBranch, StateVector

__version__ = "0.1.0"
